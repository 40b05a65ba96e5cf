"""Exact rational convex geometry in the plane.

All routines work on :class:`~fractions.Fraction` coordinates and never round.
Polygons are stored counterclockwise starting from the lexicographically
lowest vertex, with collinear points removed, so equal sets compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import NamedTuple, Sequence, Union

from .errors import GeometryError, UnboundedError
from .linalg import IntMatrix2, Vec2Q, cross
from .rational import fmt_q

__all__ = [
    "HalfPlane",
    "Polygon",
    "Cone2",
    "Polyhedron2",
    "Mode",
    "RayExit",
    "hull",
    "polygon_from_halfplanes",
    "membership",
    "minkowski_sum_with_cone",
    "ray_exit",
    "weyl_orbit_hull",
]


class Mode(str, Enum):
    STRICT = "strict"
    CLOSED = "closed"


@dataclass(frozen=True)
class HalfPlane:
    """The set ``{(x, y) : a*x + b*y <= offset}``."""

    normal: tuple[Fraction, Fraction]
    offset: Fraction

    def __post_init__(self):
        a, b = (Fraction(c) for c in self.normal)
        if a == 0 and b == 0:
            raise GeometryError("half-plane normal must be nonzero")
        object.__setattr__(self, "normal", (a, b))
        object.__setattr__(self, "offset", Fraction(self.offset))

    @classmethod
    def geq(cls, a, b, c) -> HalfPlane:
        """``a*x + b*y >= c`` rewritten in ``<=`` form."""
        return cls((-Fraction(a), -Fraction(b)), -Fraction(c))

    def value(self, p) -> Fraction:
        return self.normal[0] * p[0] + self.normal[1] * p[1]

    def slack(self, p) -> Fraction:
        """Nonnegative exactly when ``p`` satisfies the inequality."""
        return self.offset - self.value(p)

    def contains(self, p, strict: bool = False) -> bool:
        s = self.slack(p)
        return s > 0 if strict else s >= 0

    def canonical(self) -> HalfPlane:
        """Same half-plane with a primitive integer normal."""
        a, b = self.normal
        scale = Fraction(1, 1) / _content(a, b)
        return HalfPlane((a * scale, b * scale), self.offset * scale)


def _content(a: Fraction, b: Fraction) -> Fraction:
    den = lcm(a.denominator, b.denominator)
    g = gcd(int(a * den), int(b * den))
    return Fraction(g, den)


@dataclass(frozen=True)
class Polygon:
    """Convex polygon given by its CCW vertex list (possibly empty or degenerate)."""

    vertices: tuple[Vec2Q, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(Vec2Q(*v) for v in self.vertices))

    @classmethod
    def from_points(cls, points) -> Polygon:
        return hull(points)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.vertices) >= 3

    def area(self) -> Fraction:
        vs = self.vertices
        return sum((cross(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))), Fraction(0)) / 2

    def halfplanes(self) -> list[HalfPlane]:
        """Supporting half-planes of the edges, one per edge, outward normals."""
        if not self.is_full_dimensional:
            raise GeometryError("half-plane form needs a full-dimensional polygon")
        out = []
        vs = self.vertices
        for i, v in enumerate(vs):
            w = vs[(i + 1) % len(vs)]
            d = w - v
            normal = (d.y, -d.x)
            out.append(HalfPlane(normal, normal[0] * v.x + normal[1] * v.y).canonical())
        return out

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def __str__(self) -> str:
        return ",".join(f"({fmt_q(v.x)},{fmt_q(v.y)})" for v in self.vertices)


@dataclass(frozen=True)
class Cone2:
    """Salient cone spanned by two primitive integer generators."""

    generators: tuple[Vec2Q, Vec2Q]

    def __post_init__(self):
        gens = tuple(Vec2Q(*g) for g in self.generators)
        if len(gens) != 2:
            raise GeometryError("a cone needs exactly two generators")
        for g in gens:
            if not g.is_integral() or g == (0, 0) or g.primitive() != g:
                raise GeometryError(f"{tuple(g)} is not a primitive integer vector")
        if cross(*gens) == 0:
            raise GeometryError("cone generators are linearly dependent")
        object.__setattr__(self, "generators", gens)

    def __neg__(self) -> Cone2:
        return Cone2(tuple(-g for g in self.generators))

    def coordinates(self, v) -> tuple[Fraction, Fraction]:
        g1, g2 = self.generators
        det = cross(g1, g2)
        return cross(v, g2) / det, cross(g1, v) / det

    def contains(self, v, strict: bool = False) -> bool:
        l1, l2 = self.coordinates(v)
        if strict:
            return l1 > 0 and l2 > 0
        return l1 >= 0 and l2 >= 0


@dataclass(frozen=True)
class Polyhedron2:
    """H-representation of a possibly unbounded convex set.

    ``recession`` is informational (``None`` when not a salient two-ray cone)
    and is checked against the half-planes on construction.
    """

    halfplanes: tuple[HalfPlane, ...]
    recession: Cone2 | None = None

    def __post_init__(self):
        object.__setattr__(self, "halfplanes", tuple(self.halfplanes))
        if self.recession is not None:
            for h in self.halfplanes:
                for r in self.recession.generators:
                    if h.value(r) > 0:
                        raise GeometryError(
                            f"recession ray {tuple(r)} leaves half-plane {h.normal}"
                        )


Body = Union[Polygon, Polyhedron2]


# -- construction ---------------------------------------------------------------


def hull(points: Sequence) -> Polygon:
    """Convex hull, CCW from the lexicographically lowest point.

    Interior and collinear points are dropped; a collinear input yields its two
    extreme points and a single distinct point yields itself.
    """
    pts = sorted(set(Vec2Q(*p) for p in points))
    if len(pts) <= 2:
        return Polygon(tuple(pts))

    def chain(seq):
        out: list[Vec2Q] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    ring = lower[:-1] + upper[:-1]
    if len(ring) == 2 and ring[0] == ring[1]:
        ring = ring[:1]
    return Polygon(tuple(ring))


def _fm_feasible(rows: list[tuple[Fraction, Fraction, Fraction]]) -> bool:
    """Fourier-Motzkin test for ``a*x + b*y <= c`` over all rows."""
    pos, neg, rest = [], [], []
    for a, b, c in rows:
        (pos if b > 0 else neg if b < 0 else rest).append((a, b, c))
    lines = [(a, c) for a, _, c in rest]
    for a1, b1, c1 in pos:
        for a2, b2, c2 in neg:
            # y <= (c1 - a1 x)/b1 and y >= (c2 - a2 x)/b2
            lines.append((a1 / b1 - a2 / b2, c1 / b1 - c2 / b2))
    lo, hi = None, None
    for a, c in lines:
        if a == 0:
            if c < 0:
                return False
        elif a > 0:
            hi = c / a if hi is None else min(hi, c / a)
        else:
            lo = c / a if lo is None else max(lo, c / a)
    return lo is None or hi is None or lo <= hi


def _line_intersection(h1: HalfPlane, h2: HalfPlane) -> Vec2Q | None:
    (a1, b1), (a2, b2) = h1.normal, h2.normal
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return Vec2Q((h1.offset * b2 - h2.offset * b1) / det, (a1 * h2.offset - a2 * h1.offset) / det)


def _recession_nontrivial(hps: Sequence[HalfPlane]) -> bool:
    if not hps:
        return True
    for h in hps:
        a, b = h.normal
        for d in ((b, -a), (-b, a)):
            if all(g.normal[0] * d[0] + g.normal[1] * d[1] <= 0 for g in hps):
                return True
    return False


def polygon_from_halfplanes(hps: Sequence[HalfPlane]) -> Polygon:
    """Vertex form of the intersection of half-planes.

    An empty intersection is returned as the empty polygon; a nonempty
    unbounded one raises :class:`UnboundedError`.
    """
    hps = list(hps)
    if not _fm_feasible([(h.normal[0], h.normal[1], h.offset) for h in hps]):
        return Polygon(())
    if _recession_nontrivial(hps):
        raise UnboundedError("half-plane intersection is unbounded")
    candidates = []
    for h1, h2 in combinations(hps, 2):
        p = _line_intersection(h1, h2)
        if p is not None and all(h.contains(p) for h in hps):
            candidates.append(p)
    return hull(candidates)


# -- predicates -------------------------------------------------------------------


def membership(body: Body, p, mode: Mode | str = Mode.CLOSED) -> bool:
    """Point membership; ``strict`` tests the relative interior."""
    strict = Mode(mode) is Mode.STRICT
    p = Vec2Q(*p)
    if isinstance(body, Polyhedron2):
        return all(h.contains(p, strict) for h in body.halfplanes)
    vs = body.vertices
    if not vs:
        return False
    if len(vs) == 1:
        return p == vs[0]
    if len(vs) == 2:
        a, b = vs
        if cross(b - a, p - a) != 0:
            return False
        t = (p - a).dot(b - a) / (b - a).dot(b - a)
        return 0 < t < 1 if strict else 0 <= t <= 1
    return all(h.contains(p, strict) for h in body.halfplanes())


# -- Minkowski sum and rays ------------------------------------------------------------


def minkowski_sum_with_cone(P: Polygon, C: Cone2) -> Polyhedron2:
    """H-representation of ``P + C`` for a full-dimensional polygon ``P``.

    The facets are the edges of ``P`` whose outward normal is nonpositive on
    both generators, plus one unbounded facet per generator, parallel to it
    and supporting ``P``.
    """
    if not P.is_full_dimensional:
        raise GeometryError("Minkowski sum with a cone needs a full-dimensional polygon")
    g1, g2 = C.generators
    facets: dict[tuple[Fraction, Fraction], HalfPlane] = {}

    def add(h: HalfPlane):
        h = h.canonical()
        old = facets.get(h.normal)
        if old is None or h.offset < old.offset:
            facets[h.normal] = h

    for h in P.halfplanes():
        if h.value(g1) <= 0 and h.value(g2) <= 0:
            add(h)
    for g, other in ((g1, g2), (g2, g1)):
        normal = (g.y, -g.x)
        if normal[0] * other[0] + normal[1] * other[1] > 0:
            normal = (-normal[0], -normal[1])
        offset = max(normal[0] * v.x + normal[1] * v.y for v in P.vertices)
        add(HalfPlane(normal, offset))
    ordered = sorted(facets.values(), key=lambda h: _angle_key(h.normal))
    return Polyhedron2(tuple(ordered), C)


def _angle_key(n) -> tuple[int, int, Fraction]:
    """Sort key by polar angle of ``n`` in [0, 2*pi) without floating point."""
    a, b = n
    half = 0 if b > 0 or (b == 0 and a > 0) else 1
    # within a half-turn the cotangent decreases with the angle
    if b == 0:
        return half, 0, Fraction(0)
    return half, 1, -a / b


class RayExit(NamedTuple):
    point: Vec2Q | None
    t: Fraction | None

    @property
    def unbounded(self) -> bool:
        return self.t is None


def ray_exit(body: Body, origin, through) -> RayExit:
    """Largest ``t`` with ``origin + t*(through - origin)`` in ``body``.

    ``origin`` must be strictly interior. When the direction is a recession
    direction the result is unbounded (``point`` and ``t`` are ``None``).
    """
    origin, through = Vec2Q(*origin), Vec2Q(*through)
    if origin == through:
        raise GeometryError("ray direction is zero")
    hps = body.halfplanes if isinstance(body, Polyhedron2) else body.halfplanes()
    if not all(h.contains(origin, strict=True) for h in hps):
        raise GeometryError(f"origin {tuple(origin)} is not strictly interior")
    d = through - origin
    best: Fraction | None = None
    for h in hps:
        rate = h.value(d)
        if rate > 0:
            t = h.slack(origin) / rate
            best = t if best is None else min(best, t)
    if best is None:
        return RayExit(None, None)
    return RayExit(origin + d.scale(best), best)


def weyl_orbit_hull(P: Polygon, G: Sequence[IntMatrix2]) -> Polygon:
    """Convex hull of the images of ``P`` under a finite matrix group."""
    return hull([g @ v for g in G for v in P.vertices])
