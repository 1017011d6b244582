"""Integer homology of CP^2 blown up at k points.

A class b A - sum m_q E_q is stored as (k, b, m).  The exceptional divisor E_i
itself is b = 0, m_i = -1.  Intersection form diag(1, -1, ..., -1); first
Chern class c_1 = 3a - sum e_q, so chern(b; m) = 3b - sum m_q.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple

MAX_K = 8
SEARCH_BOUND = 6
SATURATION_BOUND = 10


@dataclass(frozen=True, order=True)
class HomologyClass:
    k: int
    b: int
    m: Tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        if len(m) != self.k:
            raise ValueError(f"m has length {len(m)}, expected k = {self.k}")

    @classmethod
    def E(cls, i: int, k: int) -> "HomologyClass":
        """Exceptional divisor over the i-th point (0-based)."""
        m = [0] * k
        m[i] = -1
        return cls(k, 0, tuple(m))

    @classmethod
    def line(cls, k: int) -> "HomologyClass":
        return cls(k, 1, (0,) * k)

    def pairing(self, other: "HomologyClass") -> int:
        if other.k != self.k:
            raise ValueError("classes live on different blow-ups")
        return self.b * other.b - sum(x * y for x, y in zip(self.m, other.m))

    def self_intersection(self) -> int:
        return self.pairing(self)

    def chern(self) -> int:
        return 3 * self.b - sum(self.m)

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.k, -self.b, tuple(-x for x in self.m))

    def sorted(self) -> "HomologyClass":
        """Representative with m sorted in descending order."""
        return HomologyClass(self.k, self.b, tuple(sorted(self.m, reverse=True)))

    def permutations(self) -> FrozenSet["HomologyClass"]:
        return frozenset(HomologyClass(self.k, self.b, p) for p in set(itertools.permutations(self.m)))

    def orbit_size(self) -> int:
        return len(set(itertools.permutations(self.m)))

    def to_dict(self) -> dict:
        return {"k": self.k, "b": self.b, "m": list(self.m)}

    @classmethod
    def from_dict(cls, d: dict) -> "HomologyClass":
        return cls(int(d["k"]), int(d["b"]), tuple(int(x) for x in d["m"]))

    def __str__(self):
        return f"({self.b}; {', '.join(str(x) for x in self.m)})"


def real_structure_action(cls: HomologyClass) -> HomologyClass:
    """phi_* on H_2 of a real blow-up of (CP^2, RP^2): minus the identity."""
    return -cls


# ---------------------------------------------------------------------------
# enumeration


def _check_k(k: int):
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in 1..{MAX_K}, got {k}")


def _sorted_solutions(k: int, b: int) -> Iterator[Tuple[int, ...]]:
    """Non-increasing m in [-(b+1), b+1]^k with sum m = 3b - 1 and sum m^2 = b^2 + 1.

    Exhaustive depth-first search; a branch is cut only when the remaining
    slots provably cannot reach the target sum and sum of squares.
    """
    target_sum = 3 * b - 1
    target_sq = b * b + 1
    bound = b + 1
    out: List[int] = []

    def rec(slot: int, cap: int, s: int, sq: int):
        left = k - slot
        rs, rq = target_sum - s, target_sq - sq
        if left == 0:
            if rs == 0 and rq == 0:
                yield tuple(out)
            return
        if rq < 0 or rs * rs > left * rq:
            # Cauchy-Schwarz: (sum of remaining)^2 <= left * (sum of squares remaining)
            return
        for x in range(cap, -bound - 1, -1):
            if x * x > rq:
                continue
            # remaining entries are <= x
            if rs > x * left:
                break
            out.append(x)
            yield from rec(slot + 1, x, s + x, sq + x * x)
            out.pop()

    yield from rec(0, bound, 0, 0)


def exceptional_classes_at(k: int, b: int) -> FrozenSet[HomologyClass]:
    """All exceptional classes with A-coefficient b, every permutation included."""
    out = set()
    for m in _sorted_solutions(k, b):
        out |= HomologyClass(k, b, m).permutations()
    return frozenset(out)


def saturation_scan(k: int, lo: int = SEARCH_BOUND + 1, hi: int = SATURATION_BOUND) -> FrozenSet[HomologyClass]:
    """Exceptional classes with lo <= b <= hi (expected empty for k <= 8)."""
    _check_k(k)
    found = set()
    for b in range(lo, hi + 1):
        found |= exceptional_classes_at(k, b)
    return frozenset(found)


@lru_cache(maxsize=None)
def enumerate_exceptional_classes(k: int, bound: int = SEARCH_BOUND,
                                  saturation: int = SATURATION_BOUND) -> FrozenSet[HomologyClass]:
    """Integer classes with E.E = -1 and c_1(E) = 1, searched over 0 <= b <= bound.

    A re-scan over bound < b <= saturation must find nothing; otherwise the
    bound was too small and a RuntimeError is raised.
    """
    _check_k(k)
    classes = set()
    for b in range(0, bound + 1):
        classes |= exceptional_classes_at(k, b)
    extra = saturation_scan(k, bound + 1, saturation)
    if extra:
        raise RuntimeError(f"saturation scan found classes beyond b = {bound}: {sorted(extra)[:3]}")
    return frozenset(classes)


def sorted_representatives(classes: Iterable[HomologyClass]) -> List[HomologyClass]:
    """One descending-m representative per permutation orbit, ordered by (b, m)."""
    return sorted({c.sorted() for c in classes}, key=lambda c: (c.b, tuple(-x for x in c.m)))


# ---------------------------------------------------------------------------
# Cremona moves


def cremona_move(cls: HomologyClass, slots: Sequence[int] = (0, 1, 2)) -> HomologyClass:
    """Action on H_2 of the quadratic transformation centered at three points.

    (b; m_i, m_j, m_l, ...) -> (2b - m_i - m_j - m_l; b - m_j - m_l, b - m_i - m_l, b - m_i - m_j, ...)
    """
    i, j, l = slots
    if len({i, j, l}) != 3:
        raise ValueError("a quadratic transformation needs three distinct centers")
    m = list(cls.m)
    b = cls.b
    mi, mj, ml = m[i], m[j], m[l]
    m[i], m[j], m[l] = b - mj - ml, b - mi - ml, b - mi - mj
    return HomologyClass(cls.k, 2 * b - mi - mj - ml, tuple(m))


def cremona_orbit(seeds: Iterable[HomologyClass], k: int, max_size: int = 100000) -> FrozenSet[HomologyClass]:
    """Closure of the seeds under permutations of the points and the move on slots (0, 1, 2).

    For k < 3 there is no move and the permutation closure of the seeds is returned.
    """
    seeds = list(seeds)
    reps = {s.sorted() for s in seeds}
    if k < 3:
        out = set()
        for s in seeds:
            out |= s.permutations()
        return frozenset(out)
    frontier = list(reps)
    while frontier:
        nxt = []
        for c in frontier:
            for slots in itertools.combinations(range(k), 3):
                r = cremona_move(c, slots).sorted()
                if r not in reps:
                    reps.add(r)
                    nxt.append(r)
        frontier = nxt
        if len(reps) > max_size:
            raise RuntimeError("orbit exceeded size limit; the Cremona group is infinite for k >= 9")
    out = set()
    for r in reps:
        out |= r.permutations()
    return frozenset(out)


def exceptional_orbit(k: int) -> FrozenSet[HomologyClass]:
    """Cremona orbit of {E_1, ..., E_k}."""
    return cremona_orbit([HomologyClass.E(i, k) for i in range(k)], k)


def class_counts() -> List[int]:
    return [len(enumerate_exceptional_classes(k)) for k in range(1, MAX_K + 1)]
