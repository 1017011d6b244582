"""Linear symplectic algebra on R^{2n}.

Coordinates are ordered (x_1..x_n, y_1..y_n) with z_j = x_j + i y_j.  A
bilinear form is stored as the matrix M with form(v, w) = v^T M w, so the
standard symplectic form is ``standard_omega(n)`` = [[0, I], [-I, 0]]
(omega0(e_j, f_j) = +1) and multiplication by i is ``standard_acs(n)``
= [[0, -I], [I, 0]].  Complex conjugation c_* is diag(I, -I).

Matrices with ``Fraction`` entries (numpy object arrays) are treated
exactly: invariants are checked with zero tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

import numpy as np

from . import _exact

DEFAULT_TOL = 1e-9

SYMPLECTIC_ROLES = ("symplectic", "metric")
MAP_ROLES = ("acs", "involution", "symplectomorphism", "general")


class InvariantError(ValueError):
    """A matrix does not satisfy the invariant its role or an operation requires."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# standard objects


def standard_omega(n: int) -> np.ndarray:
    z, i = np.zeros((n, n)), np.eye(n)
    return np.block([[z, i], [-i, z]])


def standard_acs(n: int) -> np.ndarray:
    z, i = np.zeros((n, n)), np.eye(n)
    return np.block([[z, -i], [i, z]])


def conjugation(n: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(n), -np.ones(n)])


def _is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def _as_array(m) -> np.ndarray:
    if isinstance(m, (BilinearForm, LinearMap)):
        return m.matrix
    a = np.asarray(m)
    if a.dtype == object:
        return np.array([[_exact.to_fraction(x) for x in row] for row in a], dtype=object)
    return a.astype(float)


def _exact_eye(n: int) -> np.ndarray:
    return np.array(_exact.identity(n), dtype=object)


def _eye_like(a: np.ndarray) -> np.ndarray:
    return _exact_eye(a.shape[0]) if _is_exact(a) else np.eye(a.shape[0])


def _max_abs(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(max(abs(x) for x in a.ravel())) if _is_exact(a) else float(np.abs(a).max())


def _close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if _is_exact(a) or _is_exact(b):
        return bool(np.all(a == b))
    return _max_abs(a - b) <= tol


def _check_square_even(a: np.ndarray):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvariantError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] % 2:
        raise InvariantError(f"dimension must be even, got {a.shape[0]}")


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """A symplectic form or a metric on R^{2n}, validated on construction."""

    matrix: np.ndarray
    role: str
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        a = _as_array(self.matrix)
        object.__setattr__(self, "matrix", a)
        _check_square_even(a)
        if self.role not in SYMPLECTIC_ROLES:
            raise ValueError(f"unknown form role {self.role!r}")
        if self.role == "symplectic":
            if not _close(a, -a.T, self.tol):
                raise InvariantError("symplectic form must be antisymmetric")
            det = _exact.det_int(_int_rows(a)) if _is_exact(a) else np.linalg.det(a)
            if abs(det) <= (0 if _is_exact(a) else self.tol):
                raise InvariantError("symplectic form is degenerate")
        else:
            if not _close(a, a.T, self.tol):
                raise InvariantError("metric must be symmetric")
            lo = np.linalg.eigvalsh(a.astype(float)).min()
            if lo <= self.tol:
                raise InvariantError(f"metric is not positive definite (min eigenvalue {lo:.3g})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, v, w):
        return np.asarray(v) @ self.matrix @ np.asarray(w)

    def pullback(self, m) -> np.ndarray:
        a = _as_array(m)
        return a.T @ self.matrix @ a


def _int_rows(a: np.ndarray):
    # Fraction matrix -> integer rows with the same determinant sign
    den = 1
    for x in a.ravel():
        den = den * x.denominator // gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in a]


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A linear endomorphism of R^{2n} tagged with the role it plays.

    ``omega`` is required for the symplectomorphism role and is the form the
    map must preserve.
    """

    matrix: np.ndarray
    role: str = "general"
    omega: Optional[np.ndarray] = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        a = _as_array(self.matrix)
        object.__setattr__(self, "matrix", a)
        _check_square_even(a)
        if self.role not in MAP_ROLES:
            raise ValueError(f"unknown map role {self.role!r}")
        eye = _eye_like(a)
        if self.role == "acs" and not _close(a @ a, -eye, self.tol):
            raise InvariantError("almost complex structure must square to -I")
        if self.role == "involution" and not _close(a @ a, eye, self.tol):
            raise InvariantError("involution must square to I")
        if self.role == "symplectomorphism":
            if self.omega is None:
                raise ValueError("symplectomorphism role needs the preserved form")
            w = _as_array(self.omega)
            object.__setattr__(self, "omega", w)
            if not _close(a.T @ w @ a, w, self.tol):
                raise InvariantError("map does not preserve its symplectic form")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def exact(self) -> bool:
        return _is_exact(self.matrix)

    def __matmul__(self, other):
        return self.matrix @ (other.matrix if isinstance(other, LinearMap) else other)


# ---------------------------------------------------------------------------
# taming and compatibility


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a linear check; truthy iff the check passed."""

    ok: bool
    margin: float
    witness: Optional[np.ndarray] = None
    residual: float = 0.0

    def __bool__(self):
        return self.ok


def check_tame(omega, j, tol: float = DEFAULT_TOL) -> CheckResult:
    """Decide whether omega(v, Jv) > 0 for all v != 0.

    The quadratic form v -> v^T (Omega J) v is positive definite exactly when
    the symmetric part of Omega J is, so the smallest eigenvalue of that
    symmetric part is the margin and its eigenvector the witness.
    """
    w = _as_array(omega).astype(float)
    jm = _as_array(j).astype(float)
    if w.shape != jm.shape:
        raise InvariantError(f"dimension mismatch {w.shape} vs {jm.shape}")
    s = w @ jm
    vals, vecs = np.linalg.eigh(0.5 * (s + s.T))
    ok = vals[0] > tol
    return CheckResult(bool(ok), float(vals[0]), None if ok else vecs[:, 0])


def check_compatible(omega, j, tol: float = DEFAULT_TOL) -> CheckResult:
    w = _as_array(omega).astype(float)
    jm = _as_array(j).astype(float)
    tame = check_tame(w, jm, tol)
    resid = _max_abs(jm.T @ w @ jm - w)
    return CheckResult(tame.ok and resid <= tol, tame.margin, tame.witness, resid)


# ---------------------------------------------------------------------------
# polar decomposition and compatible complex structures


def _metric_frame(g: Optional[np.ndarray], n: int):
    """Return (L, L^-1) with g = L L^T; identity when g is None."""
    if g is None:
        return np.eye(n), np.eye(n)
    L = np.linalg.cholesky(g)
    return L, np.linalg.inv(L)


def _polar_frame(a: np.ndarray, tol: float):
    """Polar factors of a in the Euclidean frame, from one SVD.

    Working with the singular values of a rather than the eigenvalues of
    a a^T keeps the condition number from being squared.
    """
    w, s, vt = np.linalg.svd(a)
    if s[-1] <= tol * max(1.0, s[0]):
        raise InvariantError("matrix is singular; polar decomposition undefined")
    return (w * s) @ w.T, w @ vt


def polar_decomposition(a, g=None, tol: float = DEFAULT_TOL) -> Tuple[LinearMap, LinearMap]:
    """Factor a = Q U with Q g-self-adjoint positive definite and U g-orthogonal.

    Q is the g-positive square root of a a^*, where ^* is the g-adjoint.  The
    computation happens in a g-orthonormal frame (g = L L^T, coordinates
    y = L^T x) where it reduces to an ordinary symmetric eigenproblem.
    """
    am = _as_array(a).astype(float)
    gm = None if g is None else _as_array(g).astype(float)
    n = am.shape[0]
    if gm is not None and gm.shape != am.shape:
        raise InvariantError("dimension mismatch between map and metric")
    L, Linv = _metric_frame(gm, n)
    at = L.T @ am @ Linv.T
    q, u = _polar_frame(at, tol)
    Q = Linv.T @ q @ L.T
    U = Linv.T @ u @ L.T
    return LinearMap(Q, "general"), LinearMap(U, "general")


def _validate_pair(g, omega, tol):
    if not isinstance(g, BilinearForm):
        g = BilinearForm(g, "metric", tol)
    if not isinstance(omega, BilinearForm):
        omega = BilinearForm(omega, "symplectic", tol)
    if g.role != "metric":
        raise InvariantError("first argument must be a metric")
    if omega.role != "symplectic":
        raise InvariantError("second argument must be a symplectic form")
    if g.dim != omega.dim:
        raise InvariantError(f"dimension mismatch {g.dim} vs {omega.dim}")
    return g, omega


def compatible_acs_from_metric(g, omega, tol: float = DEFAULT_TOL) -> LinearMap:
    """The omega-compatible complex structure J = Q^{-1} A canonically attached to g.

    A is defined by omega(v, w) = g(Av, w), i.e. A = -G^{-1} Omega, and Q is
    the g-positive square root of A^* A.
    """
    g, omega = _validate_pair(g, omega, tol)
    G = g.matrix.astype(float)
    W = omega.matrix.astype(float)
    # In a g-orthonormal frame A becomes a = -L^-1 W L^-T, antisymmetric, and
    # J is its orthogonal polar factor; same result as polar_decomposition(A, G)
    # without the round-off of forming G^-1 W first.
    L, Linv = _metric_frame(G, len(G))
    a = -Linv @ W @ Linv.T
    a = 0.5 * (a - a.T)
    _, u = _polar_frame(a, tol)
    u = 0.5 * (u - u.T)
    J = Linv.T @ u @ L.T
    return LinearMap(J, "acs", tol=max(tol, 1e-9))


def average_metric(g, phi) -> np.ndarray:
    G = _as_array(g).astype(float)
    P = _as_array(phi).astype(float)
    return 0.5 * (G + P.T @ G @ P)


def check_anti_symplectic(phi, omega, tol: float = DEFAULT_TOL) -> bool:
    P = _as_array(phi)
    W = _as_array(omega)
    return _close(P.T @ W @ P, -W, tol)


def equivariant_acs(g, omega, phi, tol: float = DEFAULT_TOL) -> LinearMap:
    """Compatible J anticommuting with the anti-symplectic involution phi.

    The metric is first replaced by its phi-average (g + phi^* g) / 2.
    """
    P = _as_array(phi).astype(float)
    W = _as_array(omega).astype(float)
    if P.shape != W.shape:
        raise InvariantError("dimension mismatch between phi and omega")
    if not _close(P @ P, np.eye(P.shape[0]), tol):
        raise InvariantError("phi is not an involution")
    if not check_anti_symplectic(P, W, tol):
        raise InvariantError("phi is not anti-symplectic for omega")
    G = average_metric(g, P)
    J = compatible_acs_from_metric(G, W, tol)
    resid = _max_abs(P @ J.matrix + J.matrix @ P)
    if resid > 1e3 * tol:
        raise InvariantError(f"equivariance lost numerically (residual {resid:.3g})")
    return J


def metric_from_acs(omega, j) -> np.ndarray:
    """g_J(v, w) = omega(v, Jw), symmetrized to remove round-off asymmetry."""
    m = _as_array(omega).astype(float) @ _as_array(j).astype(float)
    return 0.5 * (m + m.T)


# ---------------------------------------------------------------------------
# anti-symplectic involutions


def normalize_involution(phi, omega=None, tol: float = DEFAULT_TOL) -> LinearMap:
    """Linear symplectic Psi with Psi Phi = c_* Psi, for Phi fixing R^n.

    Psi keeps e_1..e_n and sends each (-1)-eigenvector v of Phi to
    (0, ..., 0, omega0(e_1, v), ..., omega0(e_n, v)).  Fraction input gives an
    exact Fraction output.
    """
    P = _as_array(phi)
    _check_square_even(P)
    dim = P.shape[0]
    n = dim // 2
    exact = _is_exact(P)
    W0 = np.array(_exact.fraction_matrix(standard_omega(n).astype(int)), dtype=object) if exact \
        else standard_omega(n)
    if omega is not None and not _close(_as_array(omega), W0, tol):
        raise InvariantError("normalization is defined relative to the standard form omega0")
    eye = _eye_like(P)
    if not _close(P @ P, eye, tol):
        raise InvariantError("phi is not an involution")
    if not _close(P.T @ W0 @ P, -W0, tol):
        raise InvariantError("phi is not anti-symplectic for omega0")
    if not _close(P[:, :n], eye[:, :n], tol):
        raise InvariantError("phi does not fix R^n = span(e_1..e_n) pointwise")

    if exact:
        kernel = _exact.nullspace((P + eye).tolist())
        if len(kernel) != n:
            raise InvariantError(f"(-1)-eigenspace has dimension {len(kernel)}, expected {n}")
        V = np.array(kernel, dtype=object).T
    else:
        vals, vecs = np.linalg.eig(P)
        idx = np.where(np.abs(vals + 1) <= 1e-6)[0]
        if len(idx) != n:
            raise InvariantError(f"(-1)-eigenspace has dimension {len(idx)}, expected {n}")
        # orthonormal basis of the kernel of P + I
        _, s, vt = np.linalg.svd(P + eye)
        V = vt[-n:].T
    # images: first n coordinates vanish, last n are omega0(e_i, v) = v_{n+i}
    images = np.zeros_like(V) if not exact else np.array(
        [[Fraction(0)] * n for _ in range(dim)], dtype=object)
    images[n:, :] = (W0[:n, :] @ V)
    basis = np.hstack([eye[:, :n], V])
    target = np.hstack([eye[:, :n], images])
    if exact:
        Psi = np.array(_exact.matmul(target.tolist(), _exact.inverse(basis.tolist())), dtype=object)
    else:
        Psi = target @ np.linalg.inv(basis)
    c = conjugation(n)
    if exact:
        c = np.array(_exact.fraction_matrix(c.astype(int)), dtype=object)
    result = LinearMap(Psi, "symplectomorphism", omega=W0, tol=1e-12 if not exact else tol)
    if not _close(Psi @ P, c @ Psi, 1e-12):
        raise InvariantError("normalization failed: Psi Phi != c Psi")
    return result


def symmetrize_form(omega, phi, j, tol: float = DEFAULT_TOL) -> BilinearForm:
    """(omega - phi^* omega) / 2 for an anti-holomorphic involution phi taming j."""
    W = _as_array(omega).astype(float)
    P = _as_array(phi).astype(float)
    J = _as_array(j).astype(float)
    if not (W.shape == P.shape == J.shape):
        raise InvariantError("dimension mismatch")
    if not _close(P @ P, np.eye(P.shape[0]), tol):
        raise InvariantError("phi is not an involution")
    if not _close(P @ J @ P, -J, tol):
        raise InvariantError("phi is not anti-holomorphic for j")
    tame = check_tame(W, J, 0.0)
    if not tame:
        raise InvariantError("omega does not tame j", witness=tame.witness)
    bar = 0.5 * (W - P.T @ W @ P)
    out = BilinearForm(bar, "symplectic", tol)
    post = check_tame(bar, J, 0.0)
    if not post:
        raise InvariantError("symmetrized form does not tame j", witness=post.witness)
    return out
