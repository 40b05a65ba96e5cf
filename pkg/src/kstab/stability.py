"""Moment polytopes, K-stability verdicts, greatest Ricci lower bounds and sweeps."""

from __future__ import annotations

import enum
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .dh_measure import BivarPoly, dh_density, expand, integrate, moments
from .errors import BoundaryError, GeometryError, InapplicableError, UnboundedError
from .geometry import (
    Cone2,
    HalfPlane,
    Polygon,
    hull,
    minkowski_sum_with_cone,
    polygon_from_halfplanes,
    ray_exit,
    weyl_orbit_hull,
)
from .linalg import Vec2Q
from .root_datum import SymmetricDatum, aiii_blowup_datum, aiii_datum, restricted_weyl_group

__all__ = [
    "Family",
    "Outcome",
    "Verdict",
    "RicciResult",
    "SweepRecord",
    "CALABI_YAU_NOTE",
    "wonderful_polytope",
    "blowup_polytope",
    "family_datum",
    "family_polytope",
    "polytope_from_datum",
    "kstability_verdict",
    "greatest_ricci_lower_bound",
    "evaluate",
    "sweep",
]

CALABI_YAU_NOTE = (
    "the blow-up of X_4 along its closed orbit is not Fano but Calabi–Yau; "
    "the barycenter criterion does not apply"
)


class Family(str, enum.Enum):
    WONDERFUL = "wonderful"
    BLOWUP = "blowup"


class Outcome(str, enum.Enum):
    K_STABLE = "KStable"
    K_UNSTABLE = "KUnstable"
    BOUNDARY = "Boundary"
    INAPPLICABLE = "Inapplicable"


@dataclass(frozen=True)
class Verdict:
    """Outcome of the barycenter test.

    ``slacks`` are the coordinates of ``barycenter - two_rho`` in the cone
    generators; for AIII(2, m) they are ``x - (m-1)`` and ``x + y - (2m-4)``.
    """

    outcome: Outcome
    barycenter: Vec2Q | None = None
    slacks: tuple[Fraction, Fraction] | None = None
    mass: Fraction | None = None
    note: str = ""

    @classmethod
    def from_slacks(cls, barycenter: Vec2Q, slacks, mass=None) -> Verdict:
        lo = min(slacks)
        if lo > 0:
            outcome = Outcome.K_STABLE
        elif lo < 0:
            outcome = Outcome.K_UNSTABLE
        else:
            outcome = Outcome.BOUNDARY
        return cls(outcome, barycenter, tuple(slacks), mass)

    @classmethod
    def inapplicable(cls, note: str) -> Verdict:
        return cls(Outcome.INAPPLICABLE, note=note)


@dataclass(frozen=True)
class RicciResult:
    """Greatest Ricci lower bound with the points of the segment construction.

    ``A`` is ``two_rho``, ``C`` the barycenter, ``Q`` the exit point of the
    ray from ``C`` through ``A`` (``None`` when ``r == 1``).
    """

    r: Fraction
    A: Vec2Q
    C: Vec2Q
    Q: Vec2Q | None = None
    t_exit: Fraction | None = None
    methods_agree: bool = True
    exit_facets: int = 0


@dataclass
class SweepRecord:
    m: int
    family: Family
    polytope: Polygon | None
    mass: Fraction | None
    verdict: Verdict
    ricci: RicciResult | None = None
    duration: float = field(default=0.0, compare=False)

    @property
    def barycenter(self) -> Vec2Q | None:
        return self.verdict.barycenter


# -- polytopes ---------------------------------------------------------------------------


def _chamber(d: SymmetricDatum) -> list[HalfPlane]:
    return [HalfPlane.geq(n.x, n.y, 0) for n in d.chamber_normals]


def polytope_from_datum(d: SymmetricDatum) -> Polygon:
    """Chamber intersected with ``phi(p) >= phi(two_rho) - 1`` for every divisor ``phi``."""
    if not d.divisors:
        raise UnboundedError("datum has no divisors; the chamber alone is an unbounded cone")
    hps = _chamber(d)
    for div in d.divisors:
        p, q = div.coeffs
        hps.append(HalfPlane.geq(p, q, div(d.two_rho) - 1))
    P = polygon_from_halfplanes(hps)
    if not P.is_full_dimensional:
        raise GeometryError(f"polytope of {d.name} is empty or degenerate")
    return P


def wonderful_polytope(m: int) -> Polygon:
    """Moment polytope of the wonderful compactification X_m.

    Built from its four vertices and checked against the half-plane description.
    """
    if not isinstance(m, int) or m < 4:
        raise ValueError(f"m must be an integer >= 4, got {m!r}")
    h = Fraction(2 * m - 3, 2)
    P = hull([(0, 0), (m, 0), (m, m - 3), (h, h)])
    if P != polytope_from_datum(aiii_datum(m)):
        raise AssertionError(f"vertex and half-plane constructions disagree at m={m}")
    return P


def blowup_polytope(m: int) -> Polygon:
    """Moment polytope of the blow-up of X_m along the closed orbit (m >= 5)."""
    if not isinstance(m, int):
        raise ValueError(f"m must be an integer, got {m!r}")
    if m <= 4:
        raise InapplicableError(CALABI_YAU_NOTE)
    h = Fraction(2 * m - 3, 2)
    P = hull([(0, 0), (m, 0), (m, m - 4), (m - 1, m - 2), (h, h)])
    if P != polytope_from_datum(aiii_blowup_datum(m)):
        raise AssertionError(f"vertex and half-plane constructions disagree at m={m}")
    return P


def family_datum(family: Family | str, m: int) -> SymmetricDatum:
    family = Family(family)
    return aiii_datum(m) if family is Family.WONDERFUL else aiii_blowup_datum(m)


def family_polytope(family: Family | str, m: int) -> Polygon:
    family = Family(family)
    return wonderful_polytope(m) if family is Family.WONDERFUL else blowup_polytope(m)


# -- verdicts ---------------------------------------------------------------------------------


def _mass_and_barycenter(d: SymmetricDatum, P: Polygon) -> tuple[Fraction, Vec2Q]:
    poly: BivarPoly = expand(dh_density(d))
    mass, mx, my = moments(poly, P, integrate)
    if mass <= 0:
        raise GeometryError("polytope has zero mass under the Duistermaat-Heckman density")
    return mass, Vec2Q(mx / mass, my / mass)


def kstability_verdict(d: SymmetricDatum, P: Polygon) -> Verdict:
    """Barycenter test: K-stable iff the DH barycenter is strictly inside ``two_rho + cone``."""
    if not d.fano:
        return Verdict.inapplicable(f"{d.name} is not Fano")
    mass, bar = _mass_and_barycenter(d, P)
    slacks = d.cone_coordinates(bar - d.two_rho)
    verdict = Verdict.from_slacks(bar, slacks, mass)
    strict = Cone2(d.cone_generators).contains(bar - d.two_rho, strict=True)
    if strict != (verdict.outcome is Outcome.K_STABLE):
        raise AssertionError("slack signs disagree with strict cone membership")
    return verdict


def _ricci_by_supremum(body, A: Vec2Q, C: Vec2Q) -> Fraction:
    """Largest ``s`` with ``A + s/(1-s) * (A - C)`` still in the body, solved facet by facet."""
    direction = A - C
    best_u: Fraction | None = None
    for h in body.halfplanes:
        rate = h.value(direction)
        if rate > 0:
            u = h.slack(A) / rate
            best_u = u if best_u is None else min(best_u, u)
    if best_u is None:
        return Fraction(1)
    return best_u / (1 + best_u)


def greatest_ricci_lower_bound(
    d: SymmetricDatum, P: Polygon, verdict: Verdict | None = None
) -> RicciResult:
    """Greatest Ricci lower bound ``R = AQ / CQ`` computed two ways.

    Returns ``r = 1`` for K-stable input. Otherwise the ray from the barycenter
    through ``two_rho`` is intersected with the boundary of the toric polytope
    minus the cone, and the result is cross-checked against the supremum form.
    """
    if verdict is None:
        verdict = kstability_verdict(d, P)
    if verdict.outcome is Outcome.INAPPLICABLE:
        raise InapplicableError(verdict.note)
    if verdict.outcome is Outcome.BOUNDARY:
        raise BoundaryError("barycenter lies on the boundary of the translated cone")
    A, C = d.two_rho, verdict.barycenter
    if verdict.outcome is Outcome.K_STABLE:
        return RicciResult(Fraction(1), A, C)

    toric = weyl_orbit_hull(P, restricted_weyl_group(d))
    body = minkowski_sum_with_cone(toric, -Cone2(d.cone_generators))
    exit_ = ray_exit(body, C, A)
    r_sup = _ricci_by_supremum(body, A, C)
    if exit_.unbounded:
        return RicciResult(Fraction(1), A, C, methods_agree=r_sup == 1)
    t = exit_.t
    r_geo = (t - 1) / t
    hits = sum(1 for h in body.halfplanes if h.slack(exit_.point) == 0)
    return RicciResult(r_geo, A, C, exit_.point, t, r_geo == r_sup, hits)


# -- sweeps ------------------------------------------------------------------------------------


def _evaluate(args: tuple[str, int, bool]) -> SweepRecord:
    family, m, with_ricci = args
    family = Family(family)
    start = time.perf_counter()
    if family is Family.BLOWUP and m == 4:
        verdict = Verdict.inapplicable(CALABI_YAU_NOTE)
        return SweepRecord(m, family, None, None, verdict, None, time.perf_counter() - start)
    d = family_datum(family, m)
    P = family_polytope(family, m)
    verdict = kstability_verdict(d, P)
    ricci = greatest_ricci_lower_bound(d, P, verdict) if with_ricci else None
    return SweepRecord(m, family, P, verdict.mass, verdict, ricci, time.perf_counter() - start)


def evaluate(family: Family | str, m: int, with_ricci: bool = False) -> SweepRecord:
    """One family member: polytope, mass, barycenter, verdict and optionally R."""
    return _evaluate((Family(family).value, m, with_ricci))


def sweep(
    family: Family | str, m_from: int, m_to: int, jobs: int = 1, with_ricci: bool = False
) -> list[SweepRecord]:
    """Evaluate every ``m`` in ``[m_from, m_to]``; results come back ordered by ``m``.

    ``jobs > 1`` spreads the values of ``m`` over worker processes.
    """
    family = Family(family)
    if not (isinstance(m_from, int) and isinstance(m_to, int)) or not 4 <= m_from <= m_to:
        raise ValueError(f"invalid range {m_from}..{m_to}; need 4 <= from <= to")
    tasks = [(family.value, m, with_ricci) for m in range(m_from, m_to + 1)]
    if jobs <= 1 or len(tasks) == 1:
        return [_evaluate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate, tasks))
