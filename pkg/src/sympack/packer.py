"""Exact feasibility of real ball packings of (CP^2, RP^2) and the packing numbers p_k.

A problem is a list of squared radii lambda_q^2 (the ball capacities, with
the volume of CP^2 normalized so that the filled fraction is sum lambda_q^4).
It is feasible when

    sum lambda_q^4 < 1   and   sum m_q lambda_q^2 < b

for every exceptional class (b; m) with b > 0.  Everything is a Fraction;
irrational volume bounds are compared through their squares.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from ._exact import to_fraction
from .lattice import MAX_K, HomologyClass, enumerate_exceptional_classes, real_structure_action

Binding = Union[HomologyClass, str, None]


@dataclass(frozen=True)
class PackingProblem:
    k: int
    lambda_sq: Tuple[Fraction, ...]
    equal_radii: bool = False

    def __post_init__(self):
        lam = tuple(to_fraction(x) for x in self.lambda_sq)
        object.__setattr__(self, "lambda_sq", lam)
        if not 1 <= self.k <= MAX_K:
            raise ValueError(f"k must be in 1..{MAX_K}, got {self.k}")
        if len(lam) != self.k:
            raise ValueError(f"expected {self.k} squared radii, got {len(lam)}")
        if any(x < 0 for x in lam):
            raise ValueError("squared radii must be nonnegative")
        if self.equal_radii and len(set(lam)) > 1:
            raise ValueError("equal_radii set but the radii differ")

    @classmethod
    def equal(cls, k: int, lam_sq) -> "PackingProblem":
        return cls(k, (to_fraction(lam_sq),) * k, True)

    @classmethod
    def parse(cls, text: str) -> "PackingProblem":
        """From a comma separated list such as '2/5,2/5,2/5'."""
        vals = [to_fraction(s) for s in text.split(",") if s.strip()]
        return cls(len(vals), tuple(vals), len(set(vals)) == 1)


@dataclass
class PackingResult:
    feasible: bool
    ratio: Fraction
    binding: Binding
    certificate: str
    chern_margin: Fraction = Fraction(0)
    slack: Optional[Fraction] = None

    def to_dict(self) -> dict:
        if isinstance(self.binding, HomologyClass):
            binding = {"b": self.binding.b, "m": list(self.binding.m)}
        else:
            binding = self.binding
        return {"feasible": self.feasible, "ratio": str(self.ratio), "binding": binding,
                "certificate": self.certificate, "chern_margin": str(self.chern_margin),
                "slack": None if self.slack is None else str(self.slack)}


@lru_cache(maxsize=None)
def _constraint_classes(k: int) -> Tuple[HomologyClass, ...]:
    # E_i (b = 0) give -lambda_i^2 < 0, which says nothing about packings
    return tuple(sorted(c for c in enumerate_exceptional_classes(k) if c.b > 0))


def check_feasible(p: PackingProblem) -> PackingResult:
    """Decide feasibility exactly.

    ``binding`` is the most violated constraint when infeasible and the
    tightest class constraint otherwise; ties go to the smaller class in
    (b, m) order.  The volume constraint is reported as the string "volume".
    """
    lam = p.lambda_sq
    ratio = sum((x * x for x in lam), Fraction(0))
    chern = 3 - sum(lam, Fraction(0))
    worst: Optional[HomologyClass] = None
    worst_slack: Optional[Fraction] = None
    for c in _constraint_classes(p.k):
        s = c.b - sum((mq * x for mq, x in zip(c.m, lam)), Fraction(0))
        if worst_slack is None or s < worst_slack:
            worst, worst_slack = c, s
    if ratio >= 1:
        return PackingResult(False, ratio, "volume",
                             f"sum lambda^4 = {ratio} >= 1", chern, 1 - ratio)
    if worst is not None and worst_slack <= 0:
        lhs = worst.b - worst_slack
        return PackingResult(False, ratio, worst,
                             f"sum m*lambda^2 = {lhs} >= b = {worst.b} for {worst}", chern, worst_slack)
    if worst is None:
        cert = f"sum lambda^4 = {ratio} < 1; no class constraints"
    else:
        lhs = worst.b - worst_slack
        cert = f"sum lambda^4 = {ratio} < 1; tightest class {worst}: {lhs} < {worst.b}"
    return PackingResult(True, ratio, worst, cert, chern, worst_slack)


@dataclass
class SupRadius:
    """sup{t : lambda_q^2 = t w_q is feasible}.

    ``t`` is exact when a class constraint binds (or the volume bound happens
    to be rational); ``t_squared`` is always exact.
    """

    t: Optional[Fraction]
    t_squared: Fraction
    binding: Binding
    class_bound: Optional[Fraction]
    volume_bound_sq: Fraction
    tie: bool = False

    def as_float(self) -> float:
        return float(self.t) if self.t is not None else float(self.t_squared) ** 0.5


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    from math import isqrt
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sup_radius_profile(k: int, weights: Sequence) -> SupRadius:
    """Largest scaling t of the profile lambda_q^2 = t w_q that stays feasible (as a supremum)."""
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in 1..{MAX_K}, got {k}")
    w = [to_fraction(x) for x in weights]
    if len(w) != k:
        raise ValueError(f"expected {k} weights, got {len(w)}")
    if any(x <= 0 for x in w):
        raise ValueError("weights must be positive")
    best: Optional[Fraction] = None
    best_cls = None
    for c in _constraint_classes(k):
        den = sum((mq * x for mq, x in zip(c.m, w)), Fraction(0))
        if den <= 0:
            continue
        r = Fraction(c.b) / den
        if best is None or r < best:
            best, best_cls = r, c
    vol_sq = 1 / sum(x * x for x in w)
    if best is not None and best * best < vol_sq:
        return SupRadius(best, best * best, best_cls, best, vol_sq)
    if best is not None and best * best == vol_sq:
        return SupRadius(best, vol_sq, best_cls, best, vol_sq, tie=True)
    return SupRadius(_exact_sqrt(vol_sq), vol_sq, "volume", best, vol_sq)


def packing_number(k: int) -> Fraction:
    return packing_row(k).p


@dataclass
class PackingRow:
    k: int
    p: Fraction
    lambda_sq: Optional[Fraction]
    binding: Binding
    tie: bool

    def binding_label(self) -> str:
        if isinstance(self.binding, HomologyClass):
            s = str(self.binding.sorted())
            return s + " = volume" if self.tie else s
        return str(self.binding)

    def to_dict(self) -> dict:
        if isinstance(self.binding, HomologyClass):
            b = {"b": self.binding.b, "m": list(self.binding.sorted().m)}
        else:
            b = self.binding
        return {"k": self.k, "p": str(self.p),
                "lambda_sq": None if self.lambda_sq is None else str(self.lambda_sq),
                "binding": b, "volume_tie": self.tie}


def packing_row(k: int) -> PackingRow:
    """Equal-radius supremum of sum lambda^4: p_k = k (lambda*^2)^2."""
    s = sup_radius_profile(k, [1] * k)
    return PackingRow(k, k * s.t_squared, s.t, s.binding, s.tie)


def packing_table() -> List[PackingRow]:
    return [packing_row(k) for k in range(1, MAX_K + 1)]


def format_table(rows: Sequence[PackingRow], fmt: str = "md") -> str:
    header = ["k", "p_k", "lambda_sq", "binding"]
    body = [[str(r.k), str(r.p), "" if r.lambda_sq is None else str(r.lambda_sq), r.binding_label()] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(row) + " |" for row in body]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def real_structure_consistent(k: int, lambda_sq: Sequence) -> bool:
    """phi^* rho = -rho for rho = a - sum lambda_q^2 e_q, checked on every class.

    rho pairs with (b; m) as b - sum m_q lambda_q^2; the real structure acts
    on H_2 by real_structure_action, so rho(phi_* x) must equal -rho(x).
    """
    lam = [to_fraction(x) for x in lambda_sq]

    def rho(c: HomologyClass) -> Fraction:
        return c.b - sum((mq * x for mq, x in zip(c.m, lam)), Fraction(0))

    return all(rho(real_structure_action(c)) == -rho(c) for c in enumerate_exceptional_classes(k))
