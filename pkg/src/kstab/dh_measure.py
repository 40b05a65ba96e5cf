"""Duistermaat-Heckman densities and exact polynomial integration over polygons.

Two integrators are provided and must agree exactly:

* :func:`integrate` fans the polygon from its first vertex, pulls every
  triangle back to the unit simplex and sums Dirichlet monomial integrals;
* :func:`integrate_green` integrates in ``y`` analytically and sums line
  integrals over the boundary edges.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Mapping

import gmpy2

from .errors import GeometryError
from .geometry import Polygon
from .linalg import Vec2Q
from .root_datum import SymmetricDatum

__all__ = [
    "LinearFormPower",
    "DHDensity",
    "BivarPoly",
    "dh_density",
    "expand",
    "simplex_monomial_integral",
    "integrate",
    "integrate_green",
    "moments",
    "barycenter",
]


@dataclass(frozen=True)
class LinearFormPower:
    """``(a*x + b*y) ** exponent`` with integer ``a``, ``b``."""

    form: tuple[int, int]
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        if self.exponent > 0 and self.form == (0, 0):
            raise ValueError("zero form with positive exponent")


@dataclass(frozen=True)
class DHDensity:
    """``constant * prod(factor)`` as a product of linear-form powers."""

    constant: Fraction
    factors: tuple[LinearFormPower, ...]

    def __post_init__(self):
        object.__setattr__(self, "constant", Fraction(self.constant))
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.constant <= 0:
            raise ValueError("density constant must be positive")

    def __call__(self, x, y) -> Fraction:
        value = self.constant
        for f in self.factors:
            value *= (f.form[0] * Fraction(x) + f.form[1] * Fraction(y)) ** f.exponent
        return value

    def exponents(self) -> dict[tuple[int, int], int]:
        return {f.form: f.exponent for f in self.factors}

    def scaled(self, c) -> DHDensity:
        return DHDensity(self.constant * Fraction(c), self.factors)


class BivarPoly:
    """Sparse bivariate polynomial ``{(i, j): coefficient of x**i y**j}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {
            (int(i), int(j)): Fraction(c) for (i, j), c in (terms or {}).items() if c != 0
        }

    @classmethod
    def constant(cls, c) -> BivarPoly:
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def linear_power(cls, a: int, b: int, e: int) -> BivarPoly:
        return cls({(e - k, k): comb(e, k) * a ** (e - k) * b**k for k in range(e + 1)})

    def __eq__(self, other) -> bool:
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"BivarPoly({dict(sorted(self.terms.items()))})"

    def __add__(self, other: BivarPoly) -> BivarPoly:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BivarPoly(out)

    def __mul__(self, other) -> BivarPoly:
        if not isinstance(other, BivarPoly):
            c = Fraction(other)
            return BivarPoly({k: v * c for k, v in self.terms.items()})
        out: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                out[i1 + i2, j1 + j2] += c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __call__(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return sum((c * x**i * y**j for (i, j), c in self.terms.items()), Fraction(0))

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def times_monomial(self, di: int, dj: int) -> BivarPoly:
        return BivarPoly({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def translate(self, x0, y0) -> BivarPoly:
        """The polynomial ``q(X, Y) = p(x0 + X, y0 + Y)``."""
        x0, y0 = Fraction(x0), Fraction(y0)
        if x0 == 0 and y0 == 0:
            return self
        out: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
        for (i, j), c in self.terms.items():
            xs = [comb(i, k) * x0 ** (i - k) for k in range(i + 1)]
            ys = [comb(j, k) * y0 ** (j - k) for k in range(j + 1)]
            for k, xk in enumerate(xs):
                if xk:
                    for l, yl in enumerate(ys):
                        if yl:
                            out[k, l] += c * xk * yl
        return BivarPoly(out)


def dh_density(d: SymmetricDatum) -> DHDensity:
    """Product over positive restricted roots of ``<root, p> ** mult``.

    Integer content of each root is folded into the constant, so the doubled
    roots ``2x`` and ``2y`` contribute a factor 4 and raise the ``x``/``y``
    exponents by one.
    """
    constant = Fraction(1)
    exps: dict[tuple[int, int], int] = {}
    for root in d.positive_roots:
        a, b = int(root.vec.x), int(root.vec.y)
        g = gcd(a, b)
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
            g = -g
        constant *= Fraction(g) ** root.mult
        exps[(a, b)] = exps.get((a, b), 0) + root.mult
    return DHDensity(constant, tuple(LinearFormPower(f, e) for f, e in exps.items()))


def expand(density: DHDensity) -> BivarPoly:
    poly = BivarPoly.constant(density.constant)
    for f in density.factors:
        poly = poly * BivarPoly.linear_power(f.form[0], f.form[1], f.exponent)
    return poly


# -- fan / simplex integrator -------------------------------------------------------------


_FACT: list[int] = [1]


def _fact(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


_WEIGHTS: dict[int, list] = {}


def _dirichlet_weights(n: int) -> list:
    """``[r! (n-r)! for r in 0..n]`` as gmpy2 integers, cached per degree."""
    row = _WEIGHTS.get(n)
    if row is None:
        row = [gmpy2.mpz(_fact(r) * _fact(n - r)) for r in range(n + 1)]
        _WEIGHTS[n] = row
    return row


def simplex_monomial_integral(i: int, j: int) -> Fraction:
    """Integral of ``u**i v**j`` over the unit triangle: ``i! j! / (i+j+2)!``."""
    if i < 0 or j < 0:
        raise ValueError("exponents must be nonnegative")
    return Fraction(_fact(i) * _fact(j), _fact(i + j + 2))


def _binomial_row(k: int, a: int, b: int) -> list[int]:
    """Coefficients of ``u**p v**(k-p)`` in ``(a*u + b*v) ** k``."""
    out = [0] * (k + 1)
    pow_b = [1] * (k + 1)
    for i in range(1, k + 1):
        pow_b[i] = pow_b[i - 1] * b
    c, pa = 1, 1
    for p in range(k + 1):
        out[p] = c * pa * pow_b[k - p]
        pa *= a
        c = c * (k - p) // (p + 1)
    return out


def _pack(seq: list[int], width: int) -> int:
    nbytes = width // 8
    return int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in seq), "little")


def _convolve_nonneg(a: list[int], b: list[int]) -> list[int]:
    """Integer convolution by Kronecker substitution (nonnegative inputs)."""
    n = len(a) + len(b) - 1
    if not any(a) or not any(b):
        return [0] * n
    bits = max(x.bit_length() for x in a) + max(x.bit_length() for x in b)
    bits += min(len(a), len(b)).bit_length() + 1
    width = (bits + 7) // 8 * 8
    nbytes = width // 8
    prod = int(gmpy2.mpz(_pack(a, width)) * gmpy2.mpz(_pack(b, width)))
    raw = prod.to_bytes(n * nbytes + 1, "little")
    return [int.from_bytes(raw[r * nbytes : (r + 1) * nbytes], "little") for r in range(n)]


def _convolve(a: list[int], b: list[int]) -> list[int]:
    a_pos, a_neg = [max(x, 0) for x in a], [max(-x, 0) for x in a]
    b_pos, b_neg = [max(x, 0) for x in b], [max(-x, 0) for x in b]
    out = _convolve_nonneg(a_pos, b_pos)
    for sign, (u, v) in ((1, (a_neg, b_neg)), (-1, (a_pos, b_neg)), (-1, (a_neg, b_pos))):
        if any(u) and any(v):
            for r, c in enumerate(_convolve_nonneg(u, v)):
                out[r] += sign * c
    return out


def _triangle_integral(poly: BivarPoly, e1: Vec2Q, e2: Vec2Q) -> Fraction:
    """Integral of ``poly`` over the triangle ``0, e1, e2`` (signed by orientation).

    With ``(x, y) = u*e1 + v*e2`` every monomial ``x**k y**l`` becomes a
    homogeneous polynomial in ``(u, v)`` whose coefficients are weighted by
    the Dirichlet integrals ``r! (n-r)! / (n+2)!``.
    """
    det = e1.cross(e2)
    if det == 0:
        return Fraction(0)
    den = lcm(e1.x.denominator, e1.y.denominator, e2.x.denominator, e2.y.denominator)
    a1, a2 = int(e1.x * den), int(e2.x * den)
    b1, b2 = int(e1.y * den), int(e2.y * den)
    total = Fraction(0)
    rows_x: dict[int, list[int]] = {}
    rows_y: dict[int, list[int]] = {}
    for (k, l), c in poly.terms.items():
        n = k + l
        if k not in rows_x:
            rows_x[k] = _binomial_row(k, a1, a2)
        if l not in rows_y:
            rows_y[l] = _binomial_row(l, b1, b2)
        gamma = _convolve(rows_x[k], rows_y[l])
        weights = _dirichlet_weights(n)
        weighted = sum((gmpy2.mpz(g) * weights[r] for r, g in enumerate(gamma) if g), gmpy2.mpz(0))
        total += c * Fraction(int(weighted), _fact(n + 2) * den**n)
    return total * det


def integrate(poly: BivarPoly, P: Polygon) -> Fraction:
    """Exact integral of ``poly`` over the convex polygon ``P``.

    The polygon is fanned from its first vertex; degenerate polygons give 0.
    """
    vs = P.vertices
    if len(vs) < 3:
        return Fraction(0)
    v0 = vs[0]
    shifted = poly.translate(v0.x, v0.y)
    total = Fraction(0)
    for k in range(1, len(vs) - 1):
        total += _triangle_integral(shifted, vs[k] - v0, vs[k + 1] - v0)
    return total


# -- Green's theorem integrator ------------------------------------------------------------


def _edge_term(i: int, j: int, p0: Vec2Q, p1: Vec2Q) -> Fraction:
    """``integral of x**i y**(j+1) / (j+1) dx`` along the segment ``p0 -> p1``."""
    dx = p1.x - p0.x
    if dx == 0:
        return Fraction(0)
    slope = (p1.y - p0.y) / dx
    icept = p0.y - slope * p0.x
    e = j + 1
    total = Fraction(0)
    # y = icept + slope*x, expand y**e binomially
    for q in range(e + 1):
        coeff = comb(e, q) * icept ** (e - q) * slope**q
        if coeff:
            deg = i + q + 1
            total += coeff * (p1.x**deg - p0.x**deg) / deg
    return total / e


def integrate_green(poly: BivarPoly, P: Polygon) -> Fraction:
    """Exact integral via Green's theorem: ``-sum over edges of F dx`` with ``dF/dy = poly``."""
    vs = P.vertices
    if len(vs) < 3:
        return Fraction(0)
    total = Fraction(0)
    for a, b in P.edges():
        for (i, j), c in poly.terms.items():
            total -= c * _edge_term(i, j, a, b)
    return total


# -- barycenter -------------------------------------------------------------------------------


def moments(poly: BivarPoly, P: Polygon, integrator=integrate) -> tuple[Fraction, Fraction, Fraction]:
    """``(mass, first x-moment, first y-moment)`` of ``poly`` over ``P``."""
    return (
        integrator(poly, P),
        integrator(poly.times_monomial(1, 0), P),
        integrator(poly.times_monomial(0, 1), P),
    )


def barycenter(density: DHDensity | BivarPoly, P: Polygon, integrator=integrate) -> Vec2Q:
    poly = expand(density) if isinstance(density, DHDensity) else density
    mass, mx, my = moments(poly, P, integrator)
    if mass == 0:
        raise GeometryError("polygon has zero mass under the density")
    return Vec2Q(mx / mass, my / mass)
