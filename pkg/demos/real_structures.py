"""Compatible complex structures that anticommute with a real structure.

Start from an arbitrary metric and a linear anti-symplectic involution.  Average
the metric, take the polar factor, and check the result.  Then bring the
involution to complex conjugation by an exact symplectic change of basis.
"""
from fractions import Fraction

import numpy as np

from sympack import symplin
from sympack.acceptance import random_acs_triple, acs_residuals

rng = np.random.default_rng(0)
g, omega, phi = random_acs_triple(rng, 2)
J = symplin.equivariant_acs(g, omega, phi)
print("J^2 + I          ", np.abs(J.matrix @ J.matrix + np.eye(4)).max())
print("phi J + J phi    ", np.abs(phi @ J.matrix + J.matrix @ phi).max())
res = acs_residuals(g, omega, phi)
print("all residuals    ", {k: (v if isinstance(v, bool) else float(v)) for k, v in res.items()})

phi = np.array([[1, 2], [0, -1]], dtype=object)
psi = symplin.normalize_involution(phi)
print("Psi =", [[str(x) for x in row] for row in psi.matrix])
c = symplin.conjugation(1).astype(object)
print("Psi Phi == c Psi:", (psi.matrix.dot(phi) == c.dot(psi.matrix)).all())
print("exact entries:", all(isinstance(x, Fraction) for x in psi.matrix.flat))
