"""The acceptance gate: eight end-to-end checks with fixed tolerances and budgets.

Each check returns a Criterion; ``run_all`` collects them in order.  Used by
``sympack paper-check`` and by tests/test_acceptance.py.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import numpy as np

from . import lattice, localmodels, packer, projective, symplin

TABLE = [Fraction(1), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(4, 5),
         Fraction(24, 25), Fraction(63, 64), Fraction(288, 289)]
CLASS_COUNTS = [1, 3, 6, 10, 16, 27, 56, 240]
BINDING = {5: (2, (1,) * 5), 7: (3, (2,) + (1,) * 6), 8: (6, (3,) + (2,) * 7)}

CALC_TOL = 1e-6
FORM_TOL = 1e-8
ACS_TOL = 1e-9
GENPOS_RADIUS = Fraction(1, 100)


@dataclass
class Criterion:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = float("inf")

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.detail} ({self.seconds:.2f} s)"

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3), "budget_seconds": self.budget}


def _timed(name: str, budget: float, fn: Callable[[], tuple]) -> Criterion:
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if ok and dt > budget:
        ok, detail = False, f"{detail}; over the {budget:g} s budget"
    return Criterion(name, ok, detail, dt, budget)


# ---------------------------------------------------------------------------


def check_table() -> Criterion:
    def body():
        got = [r.p for r in packer.packing_table()]
        return got == TABLE, "p_k = " + ", ".join(str(x) for x in got)
    return _timed("packing table k=1..8", 5.0, body)


def check_class_counts() -> Criterion:
    def body():
        lattice.enumerate_exceptional_classes.cache_clear()
        counts = lattice.class_counts()
        orbit_ok = all(lattice.exceptional_orbit(k) == lattice.enumerate_exceptional_classes(k) for k in range(3, 9))
        sat_ok = all(not lattice.saturation_scan(k, lattice.SEARCH_BOUND + 1, 10) for k in range(1, 9))
        ok = counts == CLASS_COUNTS and orbit_ok and sat_ok
        return ok, f"counts {counts}, orbit == enumeration: {orbit_ok}, b=7..10 empty: {sat_ok}"
    return _timed("exceptional class counts", 30.0, body)


def argmin_classes(k: int):
    """Sorted representatives of every class attaining min b / sum m (sum m > 0)."""
    cands = [(Fraction(c.b, sum(c.m)), c.sorted()) for c in lattice.enumerate_exceptional_classes(k) if sum(c.m) > 0]
    best = min(r for r, _ in cands)
    return best, {c for r, c in cands if r == best}


def check_binding() -> Criterion:
    def body():
        parts, ok = [], True
        for k, (b, m) in BINDING.items():
            _, reps = argmin_classes(k)
            want = lattice.HomologyClass(k, b, m)
            row = packer.packing_row(k)
            good = reps == {want} and isinstance(row.binding, lattice.HomologyClass) and row.binding.sorted() == want
            ok = ok and good
            parts.append(f"k={k}: {', '.join(str(c) for c in sorted(reps))}")
        return ok, "; ".join(parts)
    return _timed("binding classes k=5,7,8", 5.0, body)


def check_calculation(samples: int = 100, seed: int = localmodels.DEFAULT_SEED) -> Criterion:
    def body():
        worst, ok = 0.0, True
        for n in (2, 3):
            for lam in (0.5, 1.0, 2.0):
                rep = localmodels.verify_calculation_identity(lam, n, samples, seed, CALC_TOL, "fd",
                                                              localmodels.FD_STEP)
                worst = max(worst, rep.max_residual)
                ok = ok and rep.passed
        return ok, f"max residual {worst:.2e} (tol {CALC_TOL:g}, FD step {localmodels.FD_STEP:g})"
    return _timed("pullback identity for H", 10.0, body)


FORM_CASES = [
    ("tau_tilde", dict(lam=1.0, eps=0.25)),
    ("tau_tilde", dict(lam=2.0, eps=0.1)),
    ("tau", dict(lam=1.0, delta=1.0, eps=0.25)),
    ("tau", dict(lam=2.0, delta=0.5, eps=0.1)),
]


def check_forms(samples: int = 100, seed: int = localmodels.DEFAULT_SEED) -> Criterion:
    def body():
        ok, failed, worst_anti = True, [], 0.0
        for n in (2, 3):
            for which, kw in FORM_CASES:
                for rep in localmodels.local_model_suite(which, n=n, samples=samples, seed=seed, tol=FORM_TOL, **kw):
                    if rep.check == "anti-invariant":
                        worst_anti = max(worst_anti, rep.max_residual)
                    if not rep.passed:
                        ok = False
                        failed.append(f"{which} n={n} {rep.check}")
        detail = f"{2 * len(FORM_CASES)} form cases, anti-invariance residual {worst_anti:.1e}"
        if failed:
            detail += "; failed: " + ", ".join(failed)
        return ok, detail
    return _timed("local model form properties", 20.0, body)


def random_acs_triple(rng: np.random.Generator, n: int):
    """(g, omega, phi) with omega = S^T omega0 S, phi = S^-1 c S and g symmetric positive definite.

    Gaussian perturbations are scaled by 1/sqrt(dim) so the operator norms,
    and hence the conditioning of S and g, stay bounded as the dimension grows.
    """
    dim = 2 * n
    S = np.eye(dim) + 0.3 * rng.normal(size=(dim, dim)) / np.sqrt(dim)
    W = S.T @ symplin.standard_omega(n) @ S
    P = np.linalg.solve(S, symplin.conjugation(n) @ S)
    B = rng.normal(size=(dim, dim)) / np.sqrt(dim)
    G = B @ B.T + 0.5 * np.eye(dim)
    return G, W, P


def acs_residuals(G, W, P) -> dict:
    J = symplin.equivariant_acs(G, W, P).matrix
    eye = np.eye(len(J))
    back = symplin.compatible_acs_from_metric(symplin.metric_from_acs(W, J), W).matrix
    return {
        "square": np.abs(J @ J + eye).max(),
        "compatible": np.abs(J.T @ W @ J - W).max(),
        "tame": bool(symplin.check_tame(W, J)),
        "equivariance": np.abs(P @ J + J @ P).max(),
        "round_trip": np.abs(back - J).max(),
    }


def check_acs(count: int = 200, seed: int = 2024) -> Criterion:
    def body():
        rng = np.random.default_rng(seed)
        worst = {"square": 0.0, "compatible": 0.0, "equivariance": 0.0, "round_trip": 0.0}
        tame = True
        for i in range(count):
            n = 1 + i % 4
            res = acs_residuals(*random_acs_triple(rng, n))
            tame = tame and res.pop("tame")
            for key, v in res.items():
                worst[key] = max(worst[key], v)
        ok = tame and all(v <= ACS_TOL for v in worst.values())
        return ok, f"{count} triples, " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", tame: {tame}"
    return _timed("compatible acs by polar decomposition", 30.0, body)


def random_rational_involution(rng: np.random.Generator, n: int) -> np.ndarray:
    """[[I, X], [0, -I]] with X rational symmetric; every anti-symplectic involution fixing R^n has this form."""
    X = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            X[i][j] = X[j][i] = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 10)))
    dim = 2 * n
    P = np.array([[Fraction(0)] * dim for _ in range(dim)], dtype=object)
    for i in range(n):
        P[i, i] = Fraction(1)
        P[n + i, n + i] = Fraction(-1)
        for j in range(n):
            P[i, n + j] = X[i][j]
    return P


def check_involutions(count: int = 100, seed: int = 7) -> Criterion:
    def body():
        rng = np.random.default_rng(seed)
        bad = 0
        for i in range(count):
            n = 1 + i % 4
            P = random_rational_involution(rng, n)
            Psi = symplin.normalize_involution(P).matrix
            W0 = np.array([[Fraction(int(x)) for x in r] for r in symplin.standard_omega(n)], dtype=object)
            C = np.array([[Fraction(int(x)) for x in r] for r in symplin.conjugation(n)], dtype=object)
            exact = all(isinstance(x, Fraction) for x in Psi.ravel())
            if not (exact and (Psi.T @ W0 @ Psi == W0).all() and (Psi @ P == C @ Psi).all()):
                bad += 1
        return bad == 0, f"{count - bad}/{count} exact normalizations"
    return _timed("involution normalization (exact)", 10.0, body)


def _rand_q(rng, lo=-30, hi=30, den=7) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))


def random_projectivity(rng) -> List[List[Fraction]]:
    while True:
        M = [[Fraction(int(rng.integers(-4, 5))) for _ in range(3)] for _ in range(3)]
        from ._exact import det3
        if det3(*M) != 0:
            return M


def _apply(M, p: projective.ProjPoint) -> projective.ProjPoint:
    return projective.ProjPoint(tuple(sum(M[i][j] * p.coords[j] for j in range(3)) for i in range(3)))


def degenerate_configuration(rng, k: int, kind: str) -> projective.Configuration:
    """k distinct rational points with a forced collinear triple or six on a conic."""
    M = random_projectivity(rng)
    pts: List[projective.ProjPoint] = []

    def add(p):
        q = _apply(M, p)
        if q not in pts:
            pts.append(q)
            return True
        return False

    if kind == "line":
        a, b = _rand_q(rng), _rand_q(rng)
        while len(pts) < 3:
            t = _rand_q(rng)
            add(projective.ProjPoint.of(t, a * t + b, 1))
    else:
        while len(pts) < 6:
            t = _rand_q(rng)
            add(projective.ProjPoint.of(t * t, t, 1))
    while len(pts) < k:
        add(projective.ProjPoint.of(_rand_q(rng), _rand_q(rng), 1))
    return projective.Configuration(tuple(pts))


def check_general_position(count: int = 50, seed: int = 11) -> Criterion:
    def body():
        rng = np.random.default_rng(seed)
        # exact detection
        detected = 0
        cases = 0
        for i in range(40):
            kind = "line" if i % 2 == 0 else "conic"
            k = int(rng.integers(3, 9)) if kind == "line" else int(rng.integers(6, 9))
            cfg = degenerate_configuration(rng, k, kind)
            res = projective.general_position_test(cfg, audit_depth=0)
            cases += 1
            # a conic case may also contain a collinear triple, which is found first
            detected += (not res.ok) and res.reason in (("collinear",) if kind == "line" else ("collinear", "conic"))
        # perturbation
        moved_ok, worst = 0, 0.0
        for i in range(count):
            k = 3 + i % 6
            kind = "conic" if k >= 6 and i % 2 else "line"
            cfg = degenerate_configuration(rng, k, kind)
            out = projective.perturb_to_general_position(cfg, GENPOS_RADIUS, seed=i)
            d = max(projective.projective_distance(p, q) for p, q in zip(cfg.points, out.points))
            worst = max(worst, d)
            if projective.general_position_test(out) and d < GENPOS_RADIUS:
                moved_ok += 1
        # quadratic transform is an involution off the coordinate triangle
        inv_ok = 0
        for _ in range(100):
            c = [_rand_q(rng) for _ in range(3)]
            c = [x if x != 0 else Fraction(1) for x in c]
            p = projective.ProjPoint(tuple(c))
            inv_ok += projective.quadratic_transform(projective.quadratic_transform(p)) == p
        ok = detected == cases and moved_ok == count and inv_ok == 100
        return ok, (f"detected {detected}/{cases}, perturbed {moved_ok}/{count} (max move {worst:.1e} < 1/100), "
                    f"involution {inv_ok}/100")
    return _timed("general position suite", 60.0, body)


CHECKS = [check_table, check_class_counts, check_binding, check_calculation, check_forms,
          check_acs, check_involutions, check_general_position]


def run_all() -> List[Criterion]:
    return [c() for c in CHECKS]
