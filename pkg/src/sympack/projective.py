"""Exact point configurations in RP^2 and quadratic (Cremona) transformations.

All arithmetic is over the rationals; determinant tests run on primitive
integer representatives.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import _exact
from .lattice import HomologyClass, cremona_move

DEFAULT_AUDIT_DEPTH = 3

IntPoint = Tuple[int, int, int]


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class ProjPoint:
    """A point of RP^2 with rational homogeneous coordinates.

    Coordinates are normalized so the first nonzero entry is 1, which makes
    equality and hashing projective.
    """

    coords: Tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        c = tuple(_exact.to_fraction(x) for x in self.coords)
        if len(c) != 3:
            raise GeometryError(f"need 3 homogeneous coordinates, got {len(c)}")
        lead = next((x for x in c if x != 0), None)
        if lead is None:
            raise GeometryError("homogeneous coordinates cannot all vanish")
        object.__setattr__(self, "coords", tuple(x / lead for x in c))

    @classmethod
    def of(cls, *xs) -> "ProjPoint":
        return cls(tuple(xs))

    @classmethod
    def from_ints(cls, v: Sequence[int]) -> "ProjPoint":
        return cls(tuple(Fraction(x) for x in v))

    @property
    def ints(self) -> IntPoint:
        return _exact.primitive(self.coords)

    def to_strings(self) -> List[str]:
        return [str(x) for x in self.coords]

    def __str__(self):
        return "[" + ":".join(str(x) for x in self.coords) + "]"


@dataclass(frozen=True)
class Configuration:
    """1 to 8 pairwise distinct points of RP^2, in order."""

    points: Tuple[ProjPoint, ...]

    def __post_init__(self):
        pts = tuple(p if isinstance(p, ProjPoint) else ProjPoint(tuple(p)) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not 1 <= len(pts) <= 8:
            raise GeometryError(f"a configuration has 1..8 points, got {len(pts)}")
        if len(set(pts)) != len(pts):
            dup = next(p for p in pts if pts.count(p) > 1)
            raise GeometryError(f"duplicate point {dup}")

    @property
    def is_real(self) -> bool:
        # rational coordinates: always a configuration in RP^2
        return True

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def to_dict(self) -> dict:
        return {"points": [p.to_strings() for p in self.points]}

    @classmethod
    def from_dict(cls, d: dict) -> "Configuration":
        return cls(tuple(ProjPoint(tuple(p)) for p in d["points"]))


# ---------------------------------------------------------------------------
# quadratic transformations


def _std_quad(q: Sequence) -> tuple:
    x0, x1, x2 = q
    if sum(1 for x in q if x == 0) >= 2:
        raise GeometryError(f"quadratic transformation is undefined at {tuple(q)}")
    return (x1 * x2, x0 * x2, x0 * x1)


def quadratic_transform(p: ProjPoint) -> ProjPoint:
    """[x0 : x1 : x2] -> [x1 x2 : x0 x2 : x0 x1]."""
    return ProjPoint(_std_quad(p.coords))


def _center_matrix(centers: Sequence[ProjPoint]):
    if len(centers) != 3:
        raise GeometryError("need exactly three centers")
    cols = [[Fraction(x) for x in c.ints] for c in centers]
    C = [[cols[j][i] for j in range(3)] for i in range(3)]
    if _exact.det3(*[c.ints for c in centers]) == 0:
        raise GeometryError("centers are collinear")
    return C


def centered_quadratic_transform(p: ProjPoint, centers: Sequence[ProjPoint]) -> ProjPoint:
    """Quadratic transformation centered at three non-collinear points.

    Conjugates the standard one by the projective map C sending e_i to the
    i-th center and e_0 + e_1 + e_2 to the sum of their primitive integer
    representatives: p -> C f(C^-1 p).
    """
    C = _center_matrix(centers)
    Cinv = _exact.inverse(C)
    q = [sum(Cinv[i][j] * p.coords[j] for j in range(3)) for i in range(3)]
    fq = _std_quad(q)
    return ProjPoint(tuple(sum(C[i][j] * fq[j] for j in range(3)) for i in range(3)))


def _adj3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return ((e * i - f * h, c * h - b * i, b * f - c * e),
            (f * g - d * i, a * i - c * g, c * d - a * f),
            (d * h - e * g, b * g - a * h, a * e - b * d))


def _prim(v) -> IntPoint:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        raise GeometryError("zero vector")
    v = [x // g for x in v]
    for x in v:
        if x:
            if x < 0:
                v = [-y for y in v]
            break
    return tuple(v)


def _transform_ints(points: List[IntPoint], slots: Tuple[int, int, int]) -> List[IntPoint]:
    """Integer version of the centered transformation applied to a whole configuration.

    The centers stay in their slots: the line through two centers is
    contracted onto the third, which keeps its position.  Raises
    GeometryError if another point sits on a line through two centers.
    """
    cs = [points[s] for s in slots]
    C = tuple(tuple(cs[j][i] for j in range(3)) for i in range(3))
    adj = _adj3(C)  # proportional to C^-1
    out = list(points)
    for idx, p in enumerate(points):
        if idx in slots:
            continue
        q = [sum(adj[i][j] * p[j] for j in range(3)) for i in range(3)]
        fq = _std_quad(q)
        out[idx] = _prim([sum(C[i][j] * fq[j] for j in range(3)) for i in range(3)])
    return out


# ---------------------------------------------------------------------------
# general position


@dataclass
class GeneralPositionResult:
    ok: bool
    reason: Optional[str] = None
    witness: Tuple[int, ...] = ()
    passed_checks: List[str] = field(default_factory=list)
    word: Tuple[Tuple[int, int, int], ...] = ()

    def __bool__(self):
        return self.ok

    def certificate(self) -> dict:
        return {"general_position": self.ok, "reason": self.reason, "witness": list(self.witness),
                "passed_checks": list(self.passed_checks), "cremona_word": [list(t) for t in self.word]}


def _veronese2(p: IntPoint) -> List[int]:
    x, y, z = p
    return [x * x, y * y, z * z, x * y, x * z, y * z]


def _cubic_row(p: IntPoint) -> List[int]:
    x, y, z = p
    return [x**3, y**3, z**3, x * x * y, x * x * z, y * y * x, y * y * z, z * z * x, z * z * y, x * y * z]


def _cubic_gradient_rows(p: IntPoint) -> List[List[int]]:
    x, y, z = p
    dx = [3 * x * x, 0, 0, 2 * x * y, 2 * x * z, y * y, 0, z * z, 0, y * z]
    dy = [0, 3 * y * y, 0, x * x, 0, 2 * x * y, 2 * y * z, 0, z * z, x * z]
    dz = [0, 0, 3 * z * z, 0, x * x, 0, y * y, 2 * x * z, 2 * y * z, x * y]
    return [dx, dy, dz]


def find_collinear(points: Sequence[IntPoint]) -> Optional[Tuple[int, int, int]]:
    for t in itertools.combinations(range(len(points)), 3):
        if _exact.det3(*(points[i] for i in t)) == 0:
            return t
    return None


def find_conic_six(points: Sequence[IntPoint]) -> Optional[Tuple[int, ...]]:
    for s in itertools.combinations(range(len(points)), 6):
        if _exact.det_int([_veronese2(points[i]) for i in s]) == 0:
            return s
    return None


def find_nodal_cubic(points: Sequence[IntPoint]) -> Optional[Tuple[int, ...]]:
    """Index of a doubled point (listed first) admitting a cubic through the other seven."""
    if len(points) != 8:
        return None
    for d in range(8):
        rows = [_cubic_row(points[i]) for i in range(8) if i != d] + _cubic_gradient_rows(points[d])
        if _exact.det_int(rows) == 0:
            return (d,) + tuple(i for i in range(8) if i != d)
    return None


def audit_words(k: int, depth: int) -> List[Tuple[Tuple[Tuple[int, int, int], ...], Tuple[int, int, int]]]:
    """(word, triple) pairs whose collinearity tests certify pairwise distinct classes.

    Collinearity of the points in ``triple`` after applying the quadratic
    transformations of ``word`` (in order) means the original blow-up carries
    a curve in the class s_1 s_2 ... s_d (A - E_a - E_b - E_c).  Two pairs that
    certify the same class decide the same question, so one representative
    per class is kept, using the shortest word.  Words are in execution
    order (the first transformation applied is s_1).  Depth-0 pairs (plain
    collinearity) are excluded.
    """
    triples = list(itertools.combinations(range(k), 3))
    seen: Dict[HomologyClass, tuple] = {}
    frontier = []
    for t in triples:
        m = [0] * k
        for i in t:
            m[i] = 1
        c = HomologyClass(k, 1, tuple(m))
        seen[c] = ((), t)
        frontier.append(c)
    out = []
    for _ in range(depth):
        nxt = []
        for c in frontier:
            word, t = seen[c]
            for s in triples:
                if word and word[0] == s:
                    continue
                d = cremona_move(c, s)
                if d not in seen:
                    seen[d] = ((s,) + word, t)
                    nxt.append(d)
                    out.append(((s,) + word, t))
        frontier = nxt
    return out


def cremona_audit(points: Sequence[IntPoint], depth: int = DEFAULT_AUDIT_DEPTH,
                  exhaustive: bool = False) -> Optional[Tuple[tuple, Tuple[int, ...]]]:
    """Apply words of quadratic transformations centered at configuration points
    and look for three collinear (or coinciding) points.

    Returns (word, offending indices) or None.  ``exhaustive`` runs every word
    of length <= depth without the class-level deduplication; it exists as a
    cross-check.
    """
    k = len(points)
    if k < 3 or depth <= 0:
        return None
    cache: Dict[tuple, List[IntPoint]] = {(): list(points)}

    def run(word):
        if word in cache:
            return cache[word]
        prev = run(word[:-1])
        cur = _transform_ints(prev, word[-1])
        cache[word] = cur
        return cur

    if exhaustive:
        triples = list(itertools.combinations(range(k), 3))
        words = []
        layer = [()]
        for _ in range(depth):
            layer = [w + (t,) for w in layer for t in triples if not (w and w[-1] == t)]
            words.extend(layer)
        checks = [(w, None) for w in words]
    else:
        checks = audit_words(k, depth)

    for word, t in checks:
        try:
            pts = run(word)
        except GeometryError:
            return word, ()
        if len(set(pts)) != len(pts):
            i = next(i for i, p in enumerate(pts) if pts.count(p) > 1)
            return word, tuple(j for j, p in enumerate(pts) if p == pts[i])
        if t is None:
            bad = find_collinear(pts)
            if bad is not None:
                return word, bad
        elif _exact.det3(*(pts[i] for i in t)) == 0:
            return word, t
    return None


def general_position_test(cfg: Configuration, audit_depth: int = DEFAULT_AUDIT_DEPTH,
                          exhaustive_audit: bool = False) -> GeneralPositionResult:
    """Exact general-position test for up to 8 points.

    Fewer than 3 points always pass.  Otherwise: no three collinear, no six
    on a conic (k >= 6), no cubic through seven with a node at the eighth
    (k = 8, every choice of the doubled point), and a Cremona audit of the
    given depth.
    """
    if not isinstance(cfg, Configuration):
        cfg = Configuration(tuple(cfg))
    k = len(cfg)
    if k < 3:
        return GeneralPositionResult(True, passed_checks=["k<3"])
    pts = [p.ints for p in cfg.points]
    passed = []
    bad = find_collinear(pts)
    if bad is not None:
        return GeneralPositionResult(False, "collinear", bad, passed)
    passed.append("lines")
    if k >= 6:
        bad = find_conic_six(pts)
        if bad is not None:
            return GeneralPositionResult(False, "conic", bad, passed)
        passed.append("conics")
    if k == 8:
        bad = find_nodal_cubic(pts)
        if bad is not None:
            return GeneralPositionResult(False, "nodal-cubic", bad, passed)
        passed.append("nodal-cubics")
    if audit_depth > 0:
        hit = cremona_audit(pts, audit_depth, exhaustive_audit)
        if hit is not None:
            word, idx = hit
            return GeneralPositionResult(False, "cremona-collinear", idx, passed, word)
        passed.append(f"cremona-audit-depth-{audit_depth}")
    return GeneralPositionResult(True, None, (), passed)


# ---------------------------------------------------------------------------
# perturbation


class PerturbationError(RuntimeError):
    pass


def projective_distance(p: ProjPoint, q: ProjPoint) -> float:
    """Sine of the angle between representatives in R^3."""
    a = [float(x) for x in p.coords]
    b = [float(x) for x in q.coords]
    cx = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return math.sqrt(sum(x * x for x in cx)) / (na * nb)


def _jitter(p: ProjPoint, scale: Fraction, rng: random.Random, grain: int = 1000) -> ProjPoint:
    # the leading coordinate stays 1, so |p| >= 1 and the move is at most |offset| < 2 scale
    c = list(p.coords)
    lead = next(i for i, x in enumerate(c) if x != 0)
    for i in range(3):
        if i != lead:
            c[i] += scale * Fraction(rng.randint(-grain, grain), grain)
    return ProjPoint(tuple(c))


def perturb_to_general_position(cfg: Configuration, radius, seed: int = 0, max_rounds: int = 60,
                                shrink=Fraction(3, 4), audit_depth: int = DEFAULT_AUDIT_DEPTH) -> Configuration:
    """Move points by less than ``radius`` (projective distance) into general position.

    Points are taken in order and kept while the kept set stays in general
    position; each offending point is then replaced by rational jitters of
    it, shrinking geometrically between attempts, until the enlarged set is in
    general position again.
    """
    radius = _exact.to_fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if not isinstance(cfg, Configuration):
        cfg = Configuration(tuple(cfg))
    if general_position_test(cfg, audit_depth):
        return cfg
    rng = random.Random(seed)
    pts = list(cfg.points)
    kept: List[int] = []
    offending: List[int] = []
    for i, p in enumerate(pts):
        trial = [pts[j] for j in kept] + [p]
        if general_position_test(Configuration(tuple(trial)), audit_depth):
            kept.append(i)
        else:
            offending.append(i)
    base = min(radius / 4, Fraction(1, 4))
    for i in offending:
        scale = base
        for _ in range(max_rounds):
            cand = _jitter(pts[i], scale, rng)
            others = [pts[j] for j in kept]
            if cand not in others and cand not in [pts[j] for j in offending if j != i]:
                trial = Configuration(tuple(others + [cand]))
                if general_position_test(trial, audit_depth):
                    pts[i] = cand
                    kept.append(i)
                    break
            scale *= shrink
        else:
            raise PerturbationError(f"no general-position jitter found for point {i} in {max_rounds} rounds")
    out = Configuration(tuple(pts))
    if not general_position_test(out, audit_depth):
        raise PerturbationError("perturbed configuration failed the final test")
    return out
