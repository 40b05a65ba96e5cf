"""Deterministic SVG line art of moment polytopes.

Everything is drawn inside a group whose transform flips the y axis, so the
``points`` attributes carry plain data coordinates (``"0,0 5,0 5,2 3.5,3.5"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Sequence

from .geometry import HalfPlane, Polygon, Polyhedron2, polygon_from_halfplanes
from .linalg import Vec2Q

PX_PER_UNIT = 40
MAX_PX = 800


def num(q) -> str:
    """Compact decimal for an SVG attribute; exact for halves and integers."""
    text = f"{float(q):.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _pts(vs: Sequence) -> str:
    return " ".join(f"{num(v[0])},{num(v[1])}" for v in vs)


@dataclass
class FigureSpec:
    polytope: Polygon
    apex: Vec2Q
    generators: tuple[Vec2Q, Vec2Q]
    barycenter: Vec2Q | None = None
    roots: Sequence[Vec2Q] = ()
    toric: Polygon | None = None
    minkowski: Polyhedron2 | None = None
    q: Vec2Q | None = None
    grid: bool = True
    title: str = ""
    viewport: tuple[int, int, int, int] = field(default=(0, 0, 0, 0))

    def __post_init__(self):
        if self.viewport == (0, 0, 0, 0):
            self.viewport = self.fit()
        x0, y0, x1, y1 = self.viewport
        for p in self.points():
            if not (x0 < p[0] < x1 and y0 < p[1] < y1):
                raise ValueError(f"viewport {self.viewport} misses point {tuple(p)}")

    def points(self) -> list[Vec2Q]:
        pts = list(self.polytope.vertices) + [self.apex, Vec2Q(0, 0)]
        pts += [Vec2Q(*r) for r in self.roots]
        if self.barycenter is not None:
            pts.append(self.barycenter)
        if self.toric is not None:
            pts += self.toric.vertices
        if self.q is not None:
            pts.append(self.q)
        return pts

    def fit(self) -> tuple[int, int, int, int]:
        pts = self.points()
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        return floor(min(xs)) - 1, floor(min(ys)) - 1, ceil(max(xs)) + 1, ceil(max(ys)) + 1


def _ray_end(origin: Vec2Q, d: Vec2Q, box: tuple[int, int, int, int]) -> Vec2Q:
    x0, y0, x1, y1 = box
    ts = []
    for comp, lo, hi, o in ((d.x, x0, x1, origin.x), (d.y, y0, y1, origin.y)):
        if comp > 0:
            ts.append((hi - o) / comp)
        elif comp < 0:
            ts.append((lo - o) / comp)
    return origin + d.scale(min(ts))


def render(spec: FigureSpec) -> str:
    x0, y0, x1, y1 = spec.viewport
    w, h = x1 - x0, y1 - y0
    scale = min(PX_PER_UNIT, Fraction(MAX_PX, max(w, h)))
    stroke = num(Fraction(3, 2) / scale)
    thin = num(Fraction(1, 2) / scale)
    dot = num(Fraction(4) / scale)
    dash = f"{num(Fraction(6) / scale)} {num(Fraction(4) / scale)}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{num(w * scale)}" height="{num(h * scale)}" '
        f'viewBox="{x0} {-y1} {w} {h}">',
    ]
    if spec.title:
        out.append(f"<title>{spec.title}</title>")
    out += [
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#444"/></marker>',
        "</defs>",
        '<g id="plot" transform="scale(1,-1)">',
    ]
    if spec.grid:
        out.append(f'<g id="lattice" fill="#999">')
        r = num(Fraction(3, 2) / scale)
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                out.append(f'<circle cx="{x}" cy="{y}" r="{r}"/>')
        out.append("</g>")
    out.append(
        f'<g id="axes" stroke="#bbb" stroke-width="{thin}">'
        f'<line x1="{x0}" y1="0" x2="{x1}" y2="0"/><line x1="0" y1="{y0}" x2="0" y2="{y1}"/></g>'
    )
    box = spec.viewport
    if spec.minkowski is not None:
        clip = [
            HalfPlane((1, 0), x1),
            HalfPlane((-1, 0), -x0),
            HalfPlane((0, 1), y1),
            HalfPlane((0, -1), -y0),
        ]
        region = polygon_from_halfplanes(list(spec.minkowski.halfplanes) + clip)
        out.append(
            f'<polygon id="minkowski-boundary" points="{_pts(region.vertices)}" fill="#4a90d9" '
            f'fill-opacity="0.12" stroke="#4a90d9" stroke-width="{thin}" stroke-dasharray="{dash}"/>'
        )
    if spec.toric is not None:
        out.append(
            f'<polygon id="toric-hull" points="{_pts(spec.toric.vertices)}" fill="none" '
            f'stroke="#777" stroke-width="{thin}"/>'
        )
    out.append(
        f'<polygon id="polytope" points="{_pts(spec.polytope.vertices)}" fill="#f2c14e" '
        f'fill-opacity="0.5" stroke="#222" stroke-width="{stroke}"/>'
    )
    out.append(f'<g id="roots" stroke="#444" stroke-width="{thin}">')
    for r in spec.roots:
        out.append(
            f'<line class="root" x1="0" y1="0" x2="{num(r[0])}" y2="{num(r[1])}" marker-end="url(#arrow)"/>'
        )
    out.append("</g>")
    out.append(f'<g id="cone" stroke="#c0392b" stroke-width="{thin}" stroke-dasharray="{dash}">')
    for g in spec.generators:
        end = _ray_end(spec.apex, g, box)
        out.append(
            f'<line class="cone-ray" x1="{num(spec.apex.x)}" y1="{num(spec.apex.y)}" '
            f'x2="{num(end.x)}" y2="{num(end.y)}"/>'
        )
    out.append("</g>")
    out.append(
        f'<circle id="two-rho" cx="{num(spec.apex.x)}" cy="{num(spec.apex.y)}" r="{dot}" fill="#c0392b"/>'
    )
    if spec.barycenter is not None:
        b = spec.barycenter
        out.append(f'<circle id="barycenter" cx="{num(b.x)}" cy="{num(b.y)}" r="{dot}" fill="#1a5276"/>')
    if spec.q is not None:
        out.append(
            f'<circle id="q-point" cx="{num(spec.q.x)}" cy="{num(spec.q.y)}" r="{dot}" fill="#27ae60"/>'
        )
        if spec.barycenter is not None:
            out.append(
                f'<line id="ricci-segment" x1="{num(spec.barycenter.x)}" y1="{num(spec.barycenter.y)}" '
                f'x2="{num(spec.q.x)}" y2="{num(spec.q.y)}" stroke="#27ae60" stroke-width="{thin}"/>'
            )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
