"""
Searching random finite instances for counterexamples
======================================================

The stress runner draws random ordered metric spaces with mixed monotone
maps, keeps the ones meeting every hypothesis and checks existence,
convergence of the iteration and the 1/4 separation of distinct coupled
fixed points.
"""

from opm_fixpoint import RandomInstanceSpec, stress_theorem

###############################################################################
# On the default grid all distances are multiples of 1/4, so separation can
# never drop below 1/4.
s = stress_theorem(RandomInstanceSpec(n=3, seed=1, map_kind="monotone"), 300)
print(s.to_text())

###############################################################################
# With distances on a 1/16 grid, incomparable fixed points can sit closer
# than 1/4. Existence and convergence still hold.
fine = tuple(k / 16 for k in range(1, 33))
s = stress_theorem(RandomInstanceSpec(n=3, seed=1, map_kind="monotone", distance_grid=fine), 300)
print()
print(s.to_text())
if s.failures:
    rec = s.failures[0]
    print("first failure:", rec["details"]["separation"])
    print("space:", rec["space"])
    print("map:", rec["map"])
