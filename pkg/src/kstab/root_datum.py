"""Combinatorial data of rank-2 symmetric spaces.

Everything lives in the basis ``(alpha_{1,m}, alpha_{2,m-1})`` of the weight
space; pairings with coroots are pre-evaluated into plain linear functionals
on ``(x, y)``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import DatumError
from .linalg import IntMatrix2, Vec2Q, cross
from .rational import fmt_q, parse_q

__all__ = [
    "RestrictedRoot",
    "DivisorFunctional",
    "SymmetricDatum",
    "aiii_datum",
    "aiii_blowup_datum",
    "restricted_weyl_group",
    "load_datum",
    "dump_datum",
]


@dataclass(frozen=True)
class RestrictedRoot:
    vec: Vec2Q
    mult: int

    def __post_init__(self):
        if not self.vec.is_integral():
            raise DatumError("root vector must be integral", "positive_roots.vec")
        if self.vec == (0, 0):
            raise DatumError("root vector must be nonzero", "positive_roots.vec")
        if not isinstance(self.mult, int) or self.mult < 1:
            raise DatumError("multiplicity must be a positive integer", "positive_roots.mult")


@dataclass(frozen=True)
class DivisorFunctional:
    """The functional ``p*x + q*y`` attached to a G-stable divisor."""

    name: str
    coeffs: tuple[Fraction, Fraction]

    def __post_init__(self):
        p, q = (Fraction(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", (p, q))
        if p == 0 and q == 0:
            raise DatumError("divisor functional must be nonzero", f"divisors[{self.name}]")

    def __call__(self, point) -> Fraction:
        return self.coeffs[0] * point[0] + self.coeffs[1] * point[1]


@dataclass(frozen=True)
class SymmetricDatum:
    name: str
    positive_roots: tuple[RestrictedRoot, ...]
    two_rho: Vec2Q
    cone_generators: tuple[Vec2Q, Vec2Q]
    chamber_normals: tuple[Vec2Q, ...]
    divisors: tuple[DivisorFunctional, ...]
    fano: bool = True

    def __post_init__(self):
        for field in ("positive_roots", "cone_generators", "chamber_normals", "divisors"):
            object.__setattr__(self, field, tuple(getattr(self, field)))
        object.__setattr__(self, "two_rho", Vec2Q(*self.two_rho))
        object.__setattr__(self, "cone_generators", tuple(Vec2Q(*g) for g in self.cone_generators))
        object.__setattr__(self, "chamber_normals", tuple(Vec2Q(*n) for n in self.chamber_normals))
        _check_invariants(self)

    def root_sum(self) -> Vec2Q:
        """Multiplicity-weighted sum of the positive roots (equals ``2 * two_rho``)."""
        total = Vec2Q(0, 0)
        for root in self.positive_roots:
            total = total + root.vec.scale(root.mult)
        return total

    def total_multiplicity(self) -> int:
        return sum(r.mult for r in self.positive_roots)

    def cone_coordinates(self, v) -> tuple[Fraction, Fraction]:
        """Coefficients ``(l1, l2)`` with ``v = l1*g1 + l2*g2``."""
        g1, g2 = self.cone_generators
        det = cross(g1, g2)
        return cross(v, g2) / det, cross(g1, v) / det

    def with_divisors(self, divisors, name: str | None = None, fano: bool | None = None):
        return SymmetricDatum(
            name=self.name if name is None else name,
            positive_roots=self.positive_roots,
            two_rho=self.two_rho,
            cone_generators=self.cone_generators,
            chamber_normals=self.chamber_normals,
            divisors=tuple(divisors),
            fano=self.fano if fano is None else fano,
        )


def _check_invariants(d: SymmetricDatum) -> None:
    if not d.positive_roots:
        raise DatumError("at least one positive root required", "positive_roots")
    if d.root_sum() != d.two_rho.scale(2):
        raise DatumError(
            f"half the weighted root sum is {d.root_sum().scale(Fraction(1, 2))}, "
            f"not {tuple(d.two_rho)}",
            "two_rho_half_root_sum",
        )
    if len(d.cone_generators) != 2:
        raise DatumError("exactly two cone generators required", "cone_generators")
    g1, g2 = d.cone_generators
    for g in (g1, g2):
        if not g.is_integral() or g == (0, 0) or g.primitive() != g:
            raise DatumError(f"{tuple(g)} is not a primitive integer vector", "cone_generators")
    if cross(g1, g2) == 0:
        raise DatumError("cone generators are linearly dependent", "cone_generators")
    for root in d.positive_roots:
        l1, l2 = d.cone_coordinates(root.vec)
        if l1 < 0 or l2 < 0:
            raise DatumError(f"root {tuple(root.vec)} lies outside the cone", "roots_in_cone")
    for g in (g1, g2):
        if not any(cross(r.vec, g) == 0 and r.vec.dot(g) > 0 for r in d.positive_roots):
            raise DatumError(f"no positive root along generator {tuple(g)}", "cone_spans_roots")
    for n in d.chamber_normals:
        if not n.is_integral() or n == (0, 0):
            raise DatumError("chamber normals must be nonzero integer functionals", "chamber_normals")
        if n.dot(d.two_rho) < 0:
            raise DatumError(f"two_rho violates chamber normal {tuple(n)}", "two_rho_in_chamber")


def aiii_datum(m: int) -> SymmetricDatum:
    """Datum of the wonderful compactification of type AIII(2, m).

    For ``m >= 5`` the restricted root system is of type BC2; for ``m = 4``
    the short roots ``alpha_{1,m}``, ``alpha_{2,m-1}`` are absent (type C2).
    """
    if not isinstance(m, int) or m < 4:
        raise DatumError(f"m must be an integer >= 4, got {m!r}", "m")
    roots = []
    if m >= 5:
        roots += [RestrictedRoot(Vec2Q(1, 0), 2 * (m - 4)), RestrictedRoot(Vec2Q(0, 1), 2 * (m - 4))]
    roots += [
        RestrictedRoot(Vec2Q(1, -1), 2),
        RestrictedRoot(Vec2Q(1, 1), 2),
        RestrictedRoot(Vec2Q(2, 0), 1),
        RestrictedRoot(Vec2Q(0, 2), 1),
    ]
    return SymmetricDatum(
        name=f"AIII(2,{m})",
        positive_roots=tuple(roots),
        two_rho=Vec2Q(m - 1, m - 3),
        cone_generators=(Vec2Q(1, -1), Vec2Q(0, 1)),
        chamber_normals=(Vec2Q(0, 1), Vec2Q(1, -1)),
        divisors=(
            DivisorFunctional("Y1", (Fraction(-1), Fraction(0))),
            DivisorFunctional("Y2", (Fraction(-1), Fraction(-1))),
        ),
        fano=True,
    )


def aiii_blowup_datum(m: int) -> SymmetricDatum:
    """Datum of the blow-up along the closed orbit: adds the exceptional divisor E.

    ``E`` is linearly equivalent to ``Y1 + Y2``, so its functional is the sum.
    At ``m = 4`` the blow-up is not Fano and the datum is flagged accordingly.
    """
    base = aiii_datum(m)
    exceptional = DivisorFunctional("E", (Fraction(-2), Fraction(-1)))
    return base.with_divisors(
        base.divisors + (exceptional,), name=f"Bl_Z AIII(2,{m})", fano=m >= 5
    )


_SWAP = IntMatrix2(0, 1, 1, 0)
_FLIP = IntMatrix2(1, 0, 0, -1)


def restricted_weyl_group(d: SymmetricDatum) -> list[IntMatrix2]:
    """The order-8 restricted Weyl group of a BC2/C2 datum.

    Generated by the reflections orthogonal to ``(1, -1)`` and ``(0, 1)``;
    returned sorted so the output is reproducible.
    """
    gens = {g.primitive() for g in d.cone_generators}
    if gens != {Vec2Q(1, -1), Vec2Q(0, 1)}:
        raise DatumError(
            f"unsupported cone generators {sorted(tuple(g) for g in gens)}; "
            "only the BC2/C2 chamber (1,-1), (0,1) is supported",
            "cone_generators",
        )
    group = {IntMatrix2.identity()}
    frontier = [IntMatrix2.identity()]
    while frontier:
        g = frontier.pop()
        for s in (_SWAP, _FLIP):
            h = s @ g
            if h not in group:
                group.add(h)
                frontier.append(h)
    return sorted(group, key=lambda g: (g.a, g.b, g.c, g.d))


# -- JSON ---------------------------------------------------------------------


def _int_pair(value: Any, where: str) -> tuple[int, int]:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise DatumError("expected a pair of integers", where)
    return value[0], value[1]


def _q_pair(value: Any, where: str) -> tuple[Fraction, Fraction]:
    if not isinstance(value, list) or len(value) != 2:
        raise DatumError("expected a pair of rational strings", where)
    try:
        return parse_q(value[0]), parse_q(value[1])
    except ValueError as exc:
        raise DatumError(str(exc), where) from None


def load_datum(doc: Mapping[str, Any]) -> SymmetricDatum:
    """Build a datum from its JSON document, validating schema and invariants.

    ``two_rho`` may be omitted, in which case it is half the weighted root sum.
    """
    if not isinstance(doc, Mapping):
        raise DatumError("document must be a JSON object", "$")
    required = ("name", "positive_roots", "cone_generators", "chamber_normals", "divisors", "fano")
    for key in required:
        if key not in doc:
            raise DatumError("missing required field", key)
    unknown = set(doc) - set(required) - {"two_rho"}
    if unknown:
        raise DatumError(f"unknown fields {sorted(unknown)}", "$")
    if not isinstance(doc["name"], str):
        raise DatumError("expected a string", "name")
    if not isinstance(doc["fano"], bool):
        raise DatumError("expected a boolean", "fano")

    raw_roots = doc["positive_roots"]
    if not isinstance(raw_roots, list) or not raw_roots:
        raise DatumError("expected a nonempty list", "positive_roots")
    roots = []
    for i, item in enumerate(raw_roots):
        where = f"positive_roots[{i}]"
        if not isinstance(item, Mapping) or set(item) != {"vec", "mult"}:
            raise DatumError("expected an object with keys 'vec' and 'mult'", where)
        mult = item["mult"]
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise DatumError("expected a positive integer", f"{where}.mult")
        vec = Vec2Q(*_int_pair(item["vec"], f"{where}.vec"))
        if vec == (0, 0):
            raise DatumError("root vector must be nonzero", f"{where}.vec")
        roots.append(RestrictedRoot(vec, mult))

    gens_raw = doc["cone_generators"]
    if not isinstance(gens_raw, list) or len(gens_raw) != 2:
        raise DatumError("expected exactly two generators", "cone_generators")
    gens = tuple(Vec2Q(*_int_pair(g, f"cone_generators[{i}]")) for i, g in enumerate(gens_raw))

    normals_raw = doc["chamber_normals"]
    if not isinstance(normals_raw, list):
        raise DatumError("expected a list", "chamber_normals")
    normals = tuple(Vec2Q(*_int_pair(n, f"chamber_normals[{i}]")) for i, n in enumerate(normals_raw))

    divs_raw = doc["divisors"]
    if not isinstance(divs_raw, list):
        raise DatumError("expected a list", "divisors")
    divisors = []
    for i, item in enumerate(divs_raw):
        where = f"divisors[{i}]"
        if not isinstance(item, Mapping) or set(item) != {"name", "coeffs"}:
            raise DatumError("expected an object with keys 'name' and 'coeffs'", where)
        if not isinstance(item["name"], str):
            raise DatumError("expected a string", f"{where}.name")
        coeffs = _q_pair(item["coeffs"], f"{where}.coeffs")
        if coeffs == (0, 0):
            raise DatumError("divisor functional must be nonzero", f"{where}.coeffs")
        divisors.append(DivisorFunctional(item["name"], coeffs))

    if "two_rho" in doc:
        two_rho = Vec2Q(*_q_pair(doc["two_rho"], "two_rho"))
    else:
        total = Vec2Q(0, 0)
        for r in roots:
            total = total + r.vec.scale(r.mult)
        two_rho = total.scale(Fraction(1, 2))

    return SymmetricDatum(
        name=doc["name"],
        positive_roots=tuple(roots),
        two_rho=two_rho,
        cone_generators=gens,
        chamber_normals=normals,
        divisors=tuple(divisors),
        fano=doc["fano"],
    )


def dump_datum(d: SymmetricDatum) -> dict[str, Any]:
    return {
        "name": d.name,
        "positive_roots": [
            {"vec": [int(r.vec.x), int(r.vec.y)], "mult": r.mult} for r in d.positive_roots
        ],
        "two_rho": [fmt_q(d.two_rho.x), fmt_q(d.two_rho.y)],
        "cone_generators": [[int(g.x), int(g.y)] for g in d.cone_generators],
        "chamber_normals": [[int(n.x), int(n.y)] for n in d.chamber_normals],
        "divisors": [
            {"name": e.name, "coeffs": [fmt_q(e.coeffs[0]), fmt_q(e.coeffs[1])]} for e in d.divisors
        ],
        "fano": d.fano,
    }
