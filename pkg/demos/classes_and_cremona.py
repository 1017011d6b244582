"""Exceptional classes of blow-ups and the Cremona action on them.

The classes are enumerated directly from the two Diophantine conditions, then
recovered a second time as the orbit of the exceptional divisors under point
permutations and quadratic transformations.  Both routes give the same sets.
"""
from fractions import Fraction

from sympack import lattice, projective
from sympack.lattice import HomologyClass, cremona_move

print("counts k=1..8:", lattice.class_counts())

for k in (5, 8):
    reps = lattice.sorted_representatives(lattice.enumerate_exceptional_classes(k))
    print(f"k={k} representatives:", ", ".join(str(c) for c in reps))

line = HomologyClass(3, 1, (1, 1, 0))
print(f"{line} under the move on points 0,1,2 becomes {cremona_move(line, (0, 1, 2))}")
print("orbit equals enumeration for k=6:",
      lattice.exceptional_orbit(6) == lattice.enumerate_exceptional_classes(6))

# Geometric side: six points on a conic are found by a single quadratic
# transformation, which maps them onto a configuration with three collinear points.
conic = projective.Configuration(tuple(projective.ProjPoint.of(t * t, t, 1) for t in range(6)))
res = projective.general_position_test(conic)
print("six points on a conic:", res.reason, res.witness)
print("with only the audit:", projective.cremona_audit([p.ints for p in conic.points], 1))

moved = projective.perturb_to_general_position(conic, Fraction(1, 100), seed=0)
print("after a small perturbation:", bool(projective.general_position_test(moved)))
