"""Local blow-up and blow-down models on C^n.

Points of C^n are complex arrays of shape (n,); tangent vectors are real
arrays of shape (2n,) in the (Re, Im) ordering used by :mod:`sympack.symplin`.

The standard form here is area-normalized, omega0 = (1/pi) sum dx_j ^ dy_j,
so the unit disk has area 1.  With that normalization the Fubini-Study form
sigma pulled back to C^n - 0 satisfies both

    H^* omega0 = omega0 + lambda^2 p^* sigma,     int_{CP^1} sigma = 1,

where H(z) = (1 + lambda^2/|z|^2)^{1/2} z.

Every map below is radial, f(z) = (a(|z|)/|z|) z, described by its radius
profile a(r) = |f(z)|.  Bundle-level forms (rho, tau_tilde) are evaluated
on C^n - 0 through the blow-down projection, which is a diffeomorphism off the
zero section.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .symplin import standard_omega, standard_acs, conjugation

AREA_SCALE = 1.0 / math.pi
FD_STEP = 1e-5
DEFAULT_SEED = 42

MAP_KINDS = ("H", "F", "G", "identity")


def std_form(n: int) -> np.ndarray:
    """Matrix of the area-normalized standard form on R^{2n}."""
    return AREA_SCALE * standard_omega(n)


def as_real(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag])


def as_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] // 2
    return x[..., :n] + 1j * x[..., n:]


# ---------------------------------------------------------------------------
# bump profiles


def _smooth_step(s: float) -> Tuple[float, float]:
    """C-infinity step 0 -> 1 on [0, 1] built from exp(-1/s); value and derivative."""
    if s <= 0:
        return 0.0, 0.0
    if s >= 1:
        return 1.0, 0.0
    # psi(s) / (psi(s) + psi(1 - s)) with psi(s) = exp(-1/s), written stably
    x = 1.0 / s - 1.0 / (1.0 - s)
    if x > 700:
        return 0.0, 0.0
    val = 1.0 / (1.0 + math.exp(x))
    dlog = 1.0 / s**2 + 1.0 / (1.0 - s) ** 2
    return val, val * (1 - val) * dlog


def _cubic_step(s: float) -> Tuple[float, float]:
    if s <= 0:
        return 0.0, 0.0
    if s >= 1:
        return 1.0, 0.0
    return s * s * (3 - 2 * s), 6 * s * (1 - s)


BUMP_PROFILES = {"smooth": _smooth_step, "cubic": _cubic_step}


@dataclass(frozen=True)
class Bump:
    """Non-increasing cutoff: 1 for t <= lo, 0 for t >= hi."""

    lo: float
    hi: float
    profile: str = "smooth"

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"bump knots must satisfy lo < hi, got {self.lo}, {self.hi}")
        if self.profile not in BUMP_PROFILES:
            raise ValueError(f"unknown bump profile {self.profile!r}")

    def value_and_slope(self, t: float) -> Tuple[float, float]:
        width = self.hi - self.lo
        s, ds = BUMP_PROFILES[self.profile]((self.hi - t) / width)
        return s, -ds / width

    def __call__(self, t: float) -> float:
        return self.value_and_slope(t)[0]


# ---------------------------------------------------------------------------
# radial maps


@dataclass(frozen=True)
class RadialMapSpec:
    """Parameters of one of the radial model maps H, F, G (or the identity).

    H: z -> h_lam(z) z.
    F: blow-up map; h_lam(z) z below delta, lam z above 1 + eps.
    G: blow-down map with nu = lam / delta; nu z inside the unit ball,
       h_nu(z) z above 1 + eps.

    ``validate=False`` skips the delta^2 < lam^2 eps / 2 constraint for F so
    that deliberately broken models can be built for testing.
    """

    kind: str
    lam: float = 0.0
    eps: Optional[float] = None
    delta: Optional[float] = None
    bump: str = "smooth"
    validate: bool = True

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.kind in ("F", "G"):
            if self.lam <= 0 or self.eps is None or self.eps <= 0:
                raise ValueError(f"{self.kind} needs lam > 0 and eps > 0")
            if self.kind == "F" and self.delta is None:
                object.__setattr__(self, "delta", self.lam * math.sqrt(self.eps) / 2)
            if self.delta is None or self.delta <= 0:
                raise ValueError(f"{self.kind} needs delta > 0")
        elif self.kind == "H" and self.lam < 0:
            raise ValueError("H needs lam >= 0")
        if self.kind == "F":
            if self.delta >= 1 + self.eps:
                raise ValueError("F needs delta < 1 + eps")
            if self.validate and not self.delta**2 < self.lam**2 * self.eps / 2:
                raise ValueError(
                    f"F needs delta^2 < lam^2 eps / 2 (delta={self.delta}, lam={self.lam}, eps={self.eps})")
        if self.bump not in BUMP_PROFILES:
            raise ValueError(f"unknown bump profile {self.bump!r}")

    @classmethod
    def H(cls, lam: float) -> "RadialMapSpec":
        return cls("H", lam)

    @classmethod
    def F(cls, lam: float, eps: float, delta: Optional[float] = None, **kw) -> "RadialMapSpec":
        return cls("F", lam, eps, delta, **kw)

    @classmethod
    def G(cls, lam: float, delta: float, eps: float, **kw) -> "RadialMapSpec":
        return cls("G", lam, eps, delta, **kw)

    @classmethod
    def identity(cls) -> "RadialMapSpec":
        return cls("identity")

    @property
    def nu(self) -> Optional[float]:
        return self.lam / self.delta if self.kind == "G" else None

    @property
    def knots(self) -> Tuple[float, ...]:
        """Branch radii where the profile switches formula."""
        if self.kind == "F":
            return (self.delta, 1 + self.eps)
        if self.kind == "G":
            return (1.0, 1 + self.eps)
        return ()

    @property
    def needs_nonzero(self) -> bool:
        return self.kind in ("H", "F") and self.lam > 0

    def _bump(self) -> Bump:
        lo = self.delta if self.kind == "F" else 1.0
        return Bump(lo, 1 + self.eps, self.bump)

    def profile(self, r: float) -> Tuple[float, float]:
        """Radius profile a(r) = |f(z)| at |z| = r and its derivative a'(r)."""
        lam = self.lam
        if self.kind == "identity" or (self.kind == "H" and lam == 0):
            return r, 1.0
        if self.kind == "H":
            a = math.sqrt(r * r + lam * lam)
            return a, r / a
        eps = self.eps
        if self.kind == "F":
            d = self.delta
            if r < d:
                a = math.sqrt(r * r + lam * lam)
                return a, r / a
            if r >= 1 + eps:
                return lam * r, lam
            inner, outer = math.sqrt(d * d + lam * lam), lam * (1 + eps)
        else:
            nu = self.nu
            if r <= 1:
                return nu * r, nu
            if r >= 1 + eps:
                a = math.sqrt(r * r + nu * nu)
                return a, r / a
            inner, outer = nu, math.sqrt((1 + eps) ** 2 + nu * nu)
        b, db = self._bump().value_and_slope(r)
        return b * inner + (1 - b) * outer, db * (inner - outer)


def _check_point(spec: RadialMapSpec, z: np.ndarray) -> float:
    if not np.all(np.isfinite(z)):
        raise ValueError("point has non-finite coordinates")
    r = float(np.linalg.norm(z))
    if r == 0 and spec.needs_nonzero:
        raise ValueError(f"map {spec.kind} is undefined at z = 0")
    return r


def eval_radial_map(spec: RadialMapSpec, z) -> np.ndarray:
    """f(z) = (a(|z|) / |z|) z."""
    z = np.asarray(z, dtype=complex)
    r = _check_point(spec, z)
    if r == 0:
        return np.zeros_like(z)
    a, _ = spec.profile(r)
    return (a / r) * z


def _real_map(spec: RadialMapSpec) -> Callable[[np.ndarray], np.ndarray]:
    def f(x):
        r = float(np.linalg.norm(x))
        if r == 0:
            return np.zeros_like(x)
        return (spec.profile(r)[0] / r) * x
    return f


def jacobian(spec: RadialMapSpec, z, mode: str = "exact", h: float = FD_STEP) -> np.ndarray:
    """Real 2n x 2n Jacobian of the map at z.

    Exact mode differentiates alpha(r) x with alpha = a / r:
    df = alpha I + (alpha'(r) / r) x x^T.  At a branch radius the one-sided
    formulas disagree, so exact mode falls back to central differences there.
    """
    z = np.asarray(z, dtype=complex)
    r = _check_point(spec, z)
    x = as_real(z)
    dim = x.size
    if mode == "exact" and r > 0 and not any(abs(r - k) < 1e-12 for k in spec.knots):
        a, da = spec.profile(r)
        alpha = a / r
        dalpha = (da * r - a) / (r * r)
        return alpha * np.eye(dim) + (dalpha / r) * np.outer(x, x)
    if mode not in ("exact", "fd"):
        raise ValueError(f"unknown jacobian mode {mode!r}")
    if r == 0 and spec.kind == "G":
        return spec.nu * np.eye(dim)
    f = _real_map(spec)
    cols = []
    for e in np.eye(dim):
        cols.append((f(x + h * e) - f(x - h * e)) / (2 * h))
    return np.array(cols).T


def pullback_matrix(spec: RadialMapSpec, z, mode: str = "exact", h: float = FD_STEP) -> np.ndarray:
    """Matrix of f^* omega0 at z."""
    D = jacobian(spec, z, mode, h)
    n = D.shape[0] // 2
    return D.T @ std_form(n) @ D


def pullback_eval(spec: RadialMapSpec, form: str, z, v, w, mode: str = "exact",
                  h: float = FD_STEP) -> float:
    """(f^* omega)(v, w) at z for omega = omega0."""
    if form not in ("omega0", "std"):
        raise ValueError(f"only the standard form can be pulled back, got {form!r}")
    return float(np.asarray(v) @ pullback_matrix(spec, z, mode, h) @ np.asarray(w))


# ---------------------------------------------------------------------------
# Fubini-Study


def fs_matrix(z) -> np.ndarray:
    """Matrix of p^* sigma at z, p: C^n - 0 -> CP^{n-1}.

    p^* sigma = (1/pi) (i/2) ddbar log|z|^2; on complex tangent vectors this is
    (1/pi) [ -Im<V, W> + Im(<V, z><z, W>) / |z|^2 ] / |z|^2 with <a, b> = sum a conj(b).
    """
    z = np.asarray(z, dtype=complex)
    s = float(np.vdot(z, z).real)
    if s == 0:
        raise ValueError("p^* sigma is undefined at z = 0")
    n = z.size
    # -Im<V, W> = v^T Omega0 w
    W0 = standard_omega(n)
    # <V, z> = u . v with u = real/imag parts of conj(z) acting on v
    # Re<V, z> = as_real(z) . v,  Im<V, z> = as_real(i z) . v
    a = as_real(z)
    b = as_real(1j * z)
    # Im(<V,z> conj(<W,z>)) = b_v a_w - a_v b_w
    outer = np.outer(b, a) - np.outer(a, b)
    return AREA_SCALE * (W0 + outer / s) / s


def fs_pullback(z, v, w) -> float:
    return float(np.asarray(v) @ fs_matrix(z) @ np.asarray(w))


def fs_area_cp1(n_radial: int = 200, n_angular: int = 200, radius: float = 100.0) -> float:
    """Quadrature of sigma over CP^1 in the affine chart [1 : w].

    Polar midpoint grid on |w| <= radius with the substitution r = t / (1 - t)
    to resolve the peak at the origin, plus the analytic tail beyond the
    radius (the density decays like r^-4).
    """
    t_max = radius / (1 + radius)
    dt = t_max / n_radial
    t = (np.arange(n_radial) + 0.5) * dt
    r = t / (1 - t)
    dr = dt / (1 - t) ** 2
    th = (np.arange(n_angular) + 0.5) * (2 * np.pi / n_angular)
    du = np.array([0, 1, 0, 0], dtype=float)   # d/d(Re w) in (x1, x2, y1, y2)
    dv = np.array([0, 0, 0, 1], dtype=float)   # d/d(Im w)
    total = 0.0
    for ri, dri in zip(r, dr):
        ring = 0.0
        for tj in th:
            z = np.array([1.0, ri * np.exp(1j * tj)])
            ring += du @ fs_matrix(z) @ dv
        total += ring * (2 * np.pi / n_angular) * ri * dri
    tail = 1.0 / (1.0 + radius**2)
    return total + tail


# ---------------------------------------------------------------------------
# forms on C^n - 0


@dataclass(frozen=True)
class LocalForm:
    """A closed 2-form on (a region of) C^n given by its matrix field.

    kind: 'pullback' (scale * f^* omega0), 'rho' (kappa^2 omega0 + lam^2 p^* sigma)
    or 'standard' (scale * omega0).
    """

    kind: str
    scale: float = 1.0
    spec: Optional[RadialMapSpec] = None
    kappa: float = 1.0
    lam: float = 0.0
    label: str = ""

    def matrix(self, z, mode: str = "exact", h: float = FD_STEP) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "pullback":
            return self.scale * pullback_matrix(self.spec, z, mode, h)
        if self.kind == "rho":
            return self.kappa**2 * std_form(z.size) + self.lam**2 * fs_matrix(z)
        if self.kind == "standard":
            return self.scale * std_form(z.size)
        raise ValueError(f"unknown form kind {self.kind!r}")

    def __call__(self, z, v, w, mode: str = "exact") -> float:
        return float(np.asarray(v) @ self.matrix(z, mode) @ np.asarray(w))

    @property
    def knots(self) -> Tuple[float, ...]:
        return self.spec.knots if self.spec is not None else ()

    @property
    def needs_nonzero(self) -> bool:
        return self.kind == "rho" or (self.spec is not None and self.spec.needs_nonzero)


def tau_tilde(eps: float, lam: float, delta: Optional[float] = None, bump: str = "smooth") -> LocalForm:
    """Blow-up model form F^* omega0 (presented on C^n - 0)."""
    spec = RadialMapSpec.F(lam, eps, delta, bump=bump)
    return LocalForm("pullback", 1.0, spec, label=f"tau_tilde(eps={eps}, lam={lam})")


def tau(eps: float, delta: float, lam: float, bump: str = "smooth") -> LocalForm:
    """Blow-down model form delta^2 G^* omega0 on C^n."""
    spec = RadialMapSpec.G(lam, delta, eps, bump=bump)
    return LocalForm("pullback", delta**2, spec, label=f"tau(eps={eps}, delta={delta}, lam={lam})")


def rho(kappa: float, lam: float) -> LocalForm:
    return LocalForm("rho", kappa=kappa, lam=lam, label=f"rho({kappa}, {lam})")


def scaled_standard(scale: float) -> LocalForm:
    return LocalForm("standard", scale, label=f"{scale} omega0")


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    check: str
    region: Tuple[float, float]
    samples: int
    max_residual: float
    witness: Optional[dict]
    passed: bool
    tol: float = 0.0
    form: str = ""

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "form": self.form,
            "region": list(self.region),
            "samples": self.samples,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "witness": self.witness,
            "pass": self.passed,
        }

    def __bool__(self):
        return bool(self.passed)


def _witness(z, v, w) -> dict:
    z = np.asarray(z, dtype=complex)
    return {"z": [[float(c.real), float(c.imag)] for c in z],
            "v": [float(x) for x in v], "w": [float(x) for x in w]}


def sample_points(n: int, region: Tuple[float, float], samples: int, rng: np.random.Generator,
                  avoid: Sequence[float] = (), margin: float = 1e-4, real: bool = False):
    """Points with log-uniform radius in region, isotropic direction; radii near
    the ``avoid`` values are rejected."""
    lo, hi = region
    if not (0 < lo < hi):
        raise ValueError(f"bad sampling region {region}")
    out = []
    while len(out) < samples:
        r = math.exp(rng.uniform(math.log(lo), math.log(hi)))
        if any(abs(r - k) < margin for k in avoid):
            continue
        if real:
            d = rng.normal(size=n) + 0j
        else:
            d = rng.normal(size=n) + 1j * rng.normal(size=n)
        out.append(r * d / np.linalg.norm(d))
    return out


def _unit(rng, dim):
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def verify_calculation_identity(lam: float, n: int = 2, samples: int = 100, seed: int = DEFAULT_SEED,
                                tol: float = 1e-6, mode: str = "fd", h: float = FD_STEP,
                                region: Tuple[float, float] = (0.25, 4.0)) -> Report:
    """Max over samples of |H^* omega0 - omega0 - lam^2 p^* sigma|(v, w)."""
    if lam <= 0 or n < 2:
        raise ValueError("need lam > 0 and n >= 2")
    rng = np.random.default_rng(seed)
    spec = RadialMapSpec.H(lam)
    W = std_form(n)
    worst, wit = -1.0, None
    for z in sample_points(n, region, samples, rng):
        v, w = _unit(rng, 2 * n), _unit(rng, 2 * n)
        lhs = v @ pullback_matrix(spec, z, mode, h) @ w - v @ W @ w
        res = abs(lhs - lam**2 * fs_pullback(z, v, w))
        if res > worst:
            worst, wit = res, _witness(z, v, w)
    return Report("calculation-identity", region, samples, worst, wit, worst <= tol, tol,
                  f"H(lam={lam}), n={n}, mode={mode}")


FORM_CHECKS = ("tame", "compatible", "anti-invariant", "lagrangian-real-locus", "matches")


def verify_form_properties(form: LocalForm, region: Tuple[float, float], checks: Iterable[str],
                           n: int = 2, samples: int = 100, seed: int = DEFAULT_SEED,
                           tol: float = 1e-8, mode: str = "exact",
                           reference: Optional[LocalForm] = None) -> Dict[str, Report]:
    """Sampled checks of the symmetry and positivity claims for a local form.

    tame: omega(v, iv) > 0 for the sampled v (residual = -min omega(v,iv)/|v|^2);
    compatible: tame and |omega(iv, iw) - omega(v, w)| <= tol;
    anti-invariant: |omega_{c z}(c v, c w) + omega_z(v, w)| <= tol;
    lagrangian-real-locus: |omega(v, w)| <= tol for real z and real v, w;
    matches: |omega(v, w) - reference(v, w)| <= tol.
    """
    checks = list(checks)
    for c in checks:
        if c not in FORM_CHECKS:
            raise ValueError(f"unknown check {c!r}")
    if "matches" in checks and reference is None:
        raise ValueError("'matches' needs a reference form")
    lo, hi = region
    if lo <= 0 and form.needs_nonzero:
        raise ValueError(f"region {region} reaches z = 0, outside the domain of {form.label}")
    J = standard_acs(n)
    C = conjugation(n)
    reports = {}
    for check in checks:
        rng = np.random.default_rng(seed)
        real = check == "lagrangian-real-locus"
        pts = sample_points(n, region, samples, rng, avoid=form.knots, real=real)
        worst, wit, ok = -math.inf, None, True
        for z in pts:
            M = form.matrix(z, mode)
            if real:
                v = np.r_[rng.normal(size=n), np.zeros(n)]
                w = np.r_[rng.normal(size=n), np.zeros(n)]
            else:
                v, w = _unit(rng, 2 * n), _unit(rng, 2 * n)
            if check == "tame":
                res = -(v @ M @ (J @ v))
                bad = res >= 0
            elif check == "compatible":
                pos = v @ M @ (J @ v)
                res = abs((J @ v) @ M @ (J @ w) - v @ M @ w)
                bad = pos <= 0 or res > tol
            elif check == "anti-invariant":
                Mc = form.matrix(np.conj(z), mode)
                res = abs((C @ v) @ Mc @ (C @ w) + v @ M @ w)
                bad = res > tol
            elif check == "lagrangian-real-locus":
                res = abs(v @ M @ w)
                bad = res > tol
            else:
                res = abs(v @ M @ w - v @ reference.matrix(z, mode) @ w)
                bad = res > tol
            if res > worst:
                worst, wit = float(res), _witness(z, v, w)
            ok = ok and not bad
        reports[check] = Report(check, region, samples, worst, wit, ok, tol, form.label)
    return reports


@dataclass
class MonotoneReport:
    ok: bool
    min_slack: float
    witness: Tuple[float, float]

    def __bool__(self):
        return self.ok


def check_monotone_radial(spec: RadialMapSpec, samples: int = 1000, seed: int = DEFAULT_SEED,
                          tol: float = 1e-12, r_max: Optional[float] = None) -> MonotoneReport:
    """Sampled monotonicity of |f| in |z|.

    Radii are drawn uniformly on (0, r_max] together with the branch radii,
    sorted, and consecutive pairs compared; by transitivity this covers every
    sampled pair.  The minimal slack |f(z2)| - |f(z1)| and its pair are
    returned.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    if r_max is None:
        r_max = 2.0 * max((1.0,) + spec.knots)
    radii = np.sort(np.r_[rng.uniform(0, r_max, size=samples), list(spec.knots), r_max])
    radii = radii[radii > 0]
    # evaluate on actual points along a random direction so the map itself is exercised
    d = rng.normal(size=2) + 1j * rng.normal(size=2)
    d /= np.linalg.norm(d)
    norms = np.array([np.linalg.norm(eval_radial_map(spec, r * d)) for r in radii])
    slack = np.diff(norms)
    if slack.size == 0:
        return MonotoneReport(True, math.inf, (float(radii[0]), float(radii[0])))
    i = int(np.argmin(slack))
    return MonotoneReport(bool(slack[i] >= -tol), float(slack[i]), (float(radii[i]), float(radii[i + 1])))


def verify_radial_kahler(spec: RadialMapSpec, samples: int = 100, seed: int = DEFAULT_SEED,
                         tol: float = 1e-7, n: int = 2, mode: str = "exact",
                         region: Optional[Tuple[float, float]] = None) -> Dict[str, Report]:
    """f^* omega0 tames i and is i-invariant at sampled points, for monotone f."""
    mono = check_monotone_radial(spec, seed=seed)
    if not mono:
        raise ValueError(f"map is not monotone radial (slack {mono.min_slack:.3g} at radii {mono.witness})")
    if region is None:
        ks = spec.knots or (1.0,)
        region = (0.25 * min(ks), 2.0 * max(ks))
    form = LocalForm("pullback", 1.0, spec, label=f"{spec.kind}^* omega0")
    return verify_form_properties(form, region, ("tame", "compatible"), n=n, samples=samples,
                                  seed=seed, tol=tol, mode=mode)


SUITE_FORMS = ("tau_tilde", "tau", "rho", "calculation")


def local_model_suite(which: str, lam: float = 1.0, eps: float = 0.25, delta: Optional[float] = None,
                      kappa: float = 1.0, n: int = 2, samples: int = 100, seed: int = DEFAULT_SEED,
                      tol: float = 1e-8, mode: str = "exact") -> List[Report]:
    """Run the standard battery of checks for one model form.

    tau_tilde: equals lam^2 omega0 beyond 1 + eps, equals rho(1, lam) inside
    delta, tame / compatible / anti-invariant throughout.
    tau: equals lam^2 omega0 on the unit ball, equals rho(delta, lam) beyond
    1 + eps, tame / compatible / anti-invariant throughout.
    rho: tame / compatible / anti-invariant / real locus Lagrangian.
    calculation: the pullback identity for H (finite differences by default).
    """
    if which not in SUITE_FORMS:
        raise ValueError(f"unknown form {which!r}; expected one of {SUITE_FORMS}")
    if which == "calculation":
        m = "fd" if mode == "exact" else mode
        return [verify_calculation_identity(lam, n, samples, seed, max(tol, 1e-6), m)]
    common = dict(n=n, samples=samples, seed=seed, tol=tol, mode=mode)
    sym = ("tame", "compatible", "anti-invariant")
    out: List[Report] = []

    def run(form, region, checks, reference=None, name=None):
        reps = verify_form_properties(form, region, checks, reference=reference, **common)
        for key, rep in reps.items():
            if name and key == "matches":
                rep.check = name
            out.append(rep)

    if which == "tau_tilde":
        form = tau_tilde(eps, lam, delta)
        d, outer = form.spec.delta, 1 + eps
        run(form, (outer, 3 * outer), ("matches",), scaled_standard(lam**2), "matches lam^2 omega0 beyond 1+eps")
        run(form, (d / 20, d), ("matches",), rho(1.0, lam), "matches rho(1, lam) inside delta")
        run(form, (d / 20, 3 * outer), sym)
    elif which == "tau":
        if delta is None:
            raise ValueError("tau needs delta")
        form = tau(eps, delta, lam)
        outer = 1 + eps
        run(form, (1e-3, 1.0), ("matches",), scaled_standard(lam**2), "matches lam^2 omega0 on B(1)")
        run(form, (outer, 3 * outer), ("matches",), rho(delta, lam), "matches rho(delta, lam) beyond 1+eps")
        run(form, (1e-3, 3 * outer), sym)
    else:
        run(rho(kappa, lam), (0.05, 20.0), sym + ("lagrangian-real-locus",))
    return out
