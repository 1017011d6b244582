"""Ball packings of the projective plane by k equal balls.

For each k the largest equal radius is limited either by the volume or by one
exceptional class of the k-fold blow-up.  Everything below is exact rational
arithmetic.
"""
from fractions import Fraction

from sympack import packer
from sympack.packer import PackingProblem, check_feasible

rows = packer.packing_table()
print(packer.format_table(rows, "md"))

# The supremum is never attained: push the radius up to lambda*^2 and watch
# the binding class switch from satisfied to violated.
row = rows[4]
for lam_sq in (row.lambda_sq * Fraction(99, 100), row.lambda_sq):
    res = check_feasible(PackingProblem.equal(5, lam_sq))
    print(f"k=5, lambda^2={lam_sq}: feasible={res.feasible}, ratio={res.ratio}, slack={res.slack}")

# Unequal radii are fine too.
res = check_feasible(PackingProblem.parse("1/2,1/5,1/5,1/10"))
print("unequal radii:", res.to_dict())
