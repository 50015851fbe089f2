"""
A two-point space where the classical constant fails
=====================================================

The map F(x, y) = x on {0, 1} with d(0, 1) = 2 has four coupled fixed
points. No constant k < 1 satisfies the classical contractive condition,
while the state-dependent ratio condition holds everywhere.
"""

from opm_fixpoint import (
    FiniteOrderedMetricSpace,
    TableMap,
    check_classical_condition,
    check_new_condition,
    delta,
    enumerate_cfp,
    iterate,
    separation_bound,
)

space = FiniteOrderedMetricSpace(["0", "1"], [[0, 2], [2, 0]], [("0", "0"), ("0", "1"), ("1", "1")])
F = TableMap.from_function(space, lambda x, y: x)

###############################################################################
# The classical condition needs k >= 2 because of the quadruple (1, 0, 0, 0):
# the images are 2 apart while the arguments are only 2 apart in total.
classical = check_classical_condition(F, space)
print("classical minimal k:", classical.minimal_k, "witness:", classical.worst_violation.args)

###############################################################################
# The ratio condition holds on all 9 comparable quadruples.
new = check_new_condition(F, space)
print("ratio condition holds:", new.holds, "over", new.quadruples_checked, "quadruples")
for v in "01":
    d = delta(F, space, "1", "0", "0", v)
    print(f"  delta(1, 0, 0, {v}) = {d:g}, right-hand side = {d * (2 + space.dist('0', v)):g}")

###############################################################################
# Every pair is a coupled fixed point, and distinct ones are far apart.
cfps = enumerate_cfp(F, space)
print("coupled fixed points:", list(cfps))
sep = separation_bound(cfps, space)
print("closest distinct pairs:", sep.pair, "at distance", sep.minimum)

###############################################################################
# Iteration from (0, 1) stops at once.
trace = iterate(F, space, "0", "1")
print(trace.to_text())
