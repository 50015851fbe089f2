"""
Coupled iteration for a linear map on the line
===============================================

F(x, y) = (x - 2y)/8 is nondecreasing in x and nonincreasing in y. From
(-1, 1) the iterates are x_n = -(3/8)^n and y_n = (3/8)^n.
"""

from opm_fixpoint import (
    ExprMap,
    RealVectorSpace,
    cauchy_bound_check,
    check_classical_condition,
    check_new_condition,
    iterate,
)

line = RealVectorSpace(1, "L1", ((-1.0, 1.0),))
F = ExprMap.from_strings(["(x1 - 2*y1)/8"], 1)

trace = iterate(F, line, (-1.0,), (1.0,), tol=1e-9)
print(trace.verdict, "after", trace.iterations, "steps; limit", trace.limit)
print("first betas:", [round(b, 4) for b in trace.betas[:5]])
print("betas nonincreasing:", trace.betas_nonincreasing)

###############################################################################
# The classical constant is 1/2 here, found on the sampling grid.
print("classical minimal k:", check_classical_condition(F, line).minimal_k)

###############################################################################
# The ratio condition is not implied: near the origin the displacements are
# tiny, so delta falls below what the images need.
rep = check_new_condition(F, line)
print("ratio condition holds:", rep.holds, "worst at", rep.worst_violation.args)

###############################################################################
# The geometric tail bound with beta_1 fails at n = 0 but its series form holds.
cb = cauchy_bound_check(trace, line)
print("tail bound violations:", len(cb.violations), "all at n = 0:", all(v[0] == 0 for v in cb.violations))
print("series bound violations:", len(cb.series_violations))
