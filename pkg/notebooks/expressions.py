"""
Maps on R^n from arithmetic expressions
========================================

Each component of F is an expression over x1..xn and y1..yn with
+ - * /, unary minus, min, max and abs.
"""

from opm_fixpoint import ExprMap, ExprSyntaxError, RealVectorSpace, is_mixed_monotone, iterate
from opm_fixpoint.expr import parse, to_source

e = parse("max(x1, x2) - y2/4", 2)
print(e)
print(to_source(e))

###############################################################################
# Syntax errors carry the byte offset of the problem.
try:
    parse("x1 + * y1", 1)
except ExprSyntaxError as exc:
    print("error at offset", exc.offset, ":", exc)

###############################################################################
# A two-dimensional map that is mixed monotone on the unit box.
box = RealVectorSpace(2, "LInf", ((0.0, 1.0), (0.0, 1.0)))
F = ExprMap.from_strings(["(x1 + 1 - y2)/4", "(min(x1, x2) + 1 - y1)/4"], 2)
print("mixed monotone on the grid:", is_mixed_monotone(F, box).holds)
trace = iterate(F, box, (0.0, 0.0), (1.0, 1.0))
print(trace.verdict, trace.iterations, trace.limit)
