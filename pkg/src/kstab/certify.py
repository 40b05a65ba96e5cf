"""Exact univariate polynomials, Sturm sequences and rational enclosures of ``e^r``.

The certificate builders at the bottom replay the closed-form inequality
claims behind the stability theorems for the AIII(2, m) family entirely over
the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, prod
from typing import Any, Iterable, Sequence

from .errors import IndeterminateError

__all__ = [
    "RatPoly",
    "RatInterval",
    "Claim",
    "Certificate",
    "sturm_sequence",
    "sturm_root_count",
    "positive_on",
    "cauchy_bound",
    "exp_enclosure",
    "lemma37_reduced",
    "lemma37_certificate",
    "lemma38_p",
    "lemma38_numerator",
    "lemma38_certificate",
    "prop42_parts",
    "prop42_tail_certificate",
    "PRINTED_N",
    "PRINTED_R_TILDE",
]


class RatPoly:
    """Polynomial with rational coefficients stored in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> RatPoly:
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> RatPoly:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> RatPoly:
        out = cls.const(lead)
        for r in roots:
            out = out * cls((-Fraction(r), 1))
        return out

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    @staticmethod
    def _lift(other) -> RatPoly:
        return other if isinstance(other, RatPoly) else RatPoly.const(other)

    def __add__(self, other) -> RatPoly:
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> RatPoly:
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> RatPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> RatPoly:
        return self._lift(other) - self

    def __mul__(self, other) -> RatPoly:
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RatPoly:
        if k < 0:
            raise ValueError("negative power")
        out, base = RatPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: RatPoly) -> tuple[RatPoly, RatPoly]:
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / other.lead
            quot[k - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return RatPoly(quot), RatPoly(rem[:dq] if dq > 0 else ())

    def __mod__(self, other: RatPoly) -> RatPoly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: RatPoly) -> RatPoly:
        return divmod(self, other)[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatPoly.const(other)
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self) -> RatPoly:
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def antiderivative(self) -> RatPoly:
        return RatPoly((0, *(c / (k + 1) for k, c in enumerate(self.coeffs))))

    def integral(self, a, b) -> Fraction:
        F = self.antiderivative()
        return F(b) - F(a)

    def compose(self, inner: RatPoly) -> RatPoly:
        acc = RatPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            body = "" if (mag == 1 and k) else str(mag)
            var = "" if k == 0 else ("m" if k == 1 else f"m^{k}")
            sep = "*" if body and var else ""
            terms.append(f"{sign} {body}{sep}{var}")
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: RatInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


# -- real roots -------------------------------------------------------------------------------


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _sign_changes(seq: Sequence[RatPoly], x) -> int:
    signs = [s for s in (q(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def sturm_root_count(p: RatPoly, a, b) -> int:
    """Number of distinct real roots of ``p`` in the open interval ``(a, b)``."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p(a) == 0 or p(b) == 0:
        raise ValueError("endpoint is a root; shift it by a small rational")
    seq = sturm_sequence(p)
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def cauchy_bound(p: RatPoly) -> Fraction:
    """Every real root of ``p`` lies strictly inside ``(-B, B)``."""
    if p.degree < 1:
        return Fraction(1)
    return 1 + max(abs(c / p.lead) for c in p.coeffs[:-1])


def positive_on(p: RatPoly, a, b=None) -> bool:
    """Whether ``p > 0`` on ``[a, b]``, or on ``[a, inf)`` when ``b`` is ``None``."""
    a = Fraction(a)
    if p(a) <= 0:
        return False
    if p.degree <= 0:
        return True
    if b is None:
        if p.lead <= 0:
            return False
        b = cauchy_bound(p)
        if b <= a:
            return True
    else:
        b = Fraction(b)
        if b < a:
            raise ValueError("empty interval")
        if b == a:
            return True
        if p(b) <= 0:
            return False
    return sturm_root_count(p, a, b) == 0


# -- exponential enclosures ----------------------------------------------------------------------


def _exp_nonneg(r: Fraction, width: Fraction) -> RatInterval:
    # Lagrange remainder: e^xi * r^N / N! with e^xi <= 3^ceil(r)
    growth = Fraction(3) ** ceil(r)
    partial, term = Fraction(0), Fraction(1)
    hi = None
    n = 0
    while True:
        partial += term
        n += 1
        term = term * r / n
        bound = partial + growth * term
        hi = bound if hi is None else min(hi, bound)
        if hi - partial <= width:
            return RatInterval(partial, hi)


def exp_enclosure(r, width) -> RatInterval:
    """Rational interval containing ``e^r`` with ``hi - lo <= width``.

    Shrinking ``width`` only ever shrinks the interval, so enclosures nest.
    """
    r, width = Fraction(r), Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if r == 0:
        return RatInterval(1, 1)
    # the remainder bound is loose, so aim well inside the requested width
    target = width / 4
    if r > 0:
        return _exp_nonneg(r, target)
    # 1/H..1/L is narrower than L..H because L >= 1
    inner = _exp_nonneg(-r, target)
    return RatInterval(1 / inner.hi, 1 / inner.lo)


# -- certificates --------------------------------------------------------------------------------


@dataclass
class Claim:
    name: str
    passed: bool
    witness: dict[str, Any] = field(default_factory=dict)


@dataclass
class Certificate:
    target: str
    claims: list[Claim] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.claims) and all(c.passed for c in self.claims)

    def __bool__(self) -> bool:
        return self.passed

    def add(self, name: str, passed: bool, **witness) -> Claim:
        claim = Claim(name, bool(passed), witness)
        self.claims.append(claim)
        return claim

    def claim(self, name: str) -> Claim:
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)


M = RatPoly.x()


def _lin(a, b) -> RatPoly:
    """``a*m + b``."""
    return RatPoly((b, a))


def _falling_six() -> RatPoly:
    """``(2m-1)(2m-2)...(2m-6)``."""
    return prod((_lin(2, -i) for i in range(1, 7)), start=RatPoly.const(1))


def lemma37_reduced() -> tuple[RatInterval, Certificate]:
    """Bounds ``3/4 < phi(m) <= 7/8`` on ``m >= 4`` with the checks that establish them."""
    cert = Certificate("lemma37")
    # phi(m) = (m-1)(4m-7)/(4m-8) - m + 3/2 put over the denominator 4m-8
    phi_num = _lin(1, -1) * _lin(4, -7) - _lin(1, Fraction(-3, 2)) * _lin(4, -8)
    phi_den = _lin(4, -8)
    # closed form 3/4 + 1/(4(m-2)) = (3m-5)/(4m-8)
    cert.add(
        "phi_closed_form",
        phi_num == _lin(3, -5),
        numerator=str(phi_num),
        denominator=str(phi_den),
    )

    def phi(m):
        return phi_num(m) / phi_den(m)

    phi4 = phi(4)
    cert.add("phi_at_4", phi4 == Fraction(7, 8), value=phi4)
    # phi - 3/4 = 1/(4(m-2)) and 7/8 - phi = (m-4)/(8(m-2))
    lower_num = phi_num * 4 - phi_den * 3
    upper_num = phi_den * 7 - phi_num * 8
    cert.add(
        "phi_above_3_4",
        lower_num == 4 and positive_on(phi_den, 4),
        numerator_of_phi_minus_3_4=str(lower_num * Fraction(1, 4)),
    )
    cert.add(
        "phi_at_most_7_8",
        upper_num == _lin(4, -16) and positive_on(phi_den, 4),
        numerator_of_7_8_minus_phi=str(upper_num * Fraction(1, 4)),
    )
    # the integral is affine and decreasing in c, so c = 7/8 is the worst case
    u = M
    c_worst = Fraction(7, 8)
    value = (u * u * (u - c_worst)).integral(0, Fraction(3, 2))
    formula = Fraction(3, 2) ** 3 * (Fraction(3, 8) - c_worst / 3)
    slope = -(u * u).integral(0, Fraction(3, 2))
    cert.add(
        "moment_integral_positive",
        value == formula == Fraction(9, 32) and slope < 0,
        value_at_7_8=value,
        slope_in_c=slope,
    )
    return RatInterval(Fraction(3, 4), Fraction(7, 8)), cert


def lemma37_certificate() -> Certificate:
    return lemma37_reduced()[1]


# printed integrand numerators, highest degree first
PRINTED_N = (-512, 9024, -62848, 233160, -507384, 656100, -471420, 145800)
PRINTED_R_TILDE = (-5888, 82112, -491008, 1637752, -3300288, 4031616, -2774016, 829440)


def _descending(cs: Sequence[int]) -> RatPoly:
    return RatPoly(reversed(cs))


def _integrand_coeffs() -> list[RatPoly]:
    """``c_k(m)`` with ``(m+t)^2 (m-t)^2 (2t-2m+7) = sum_k c_k(m) t^k``."""
    m2 = M * M
    two_m_7 = _lin(2, -7)
    return [
        -two_m_7 * m2 * m2,
        2 * m2 * m2,
        2 * two_m_7 * m2,
        -4 * m2,
        -two_m_7,
        RatPoly.const(2),
    ]


def _numerator_from_closed_form(shift: int) -> RatPoly:
    """Polynomial ``N`` with ``int_0^L t^(2m-7) (m+t)^2 (m-t)^2 (2t-2m+7) dt = L^(2m-6) N / prod``.

    Here ``L = m - shift`` and ``prod = (2m-1)...(2m-6)``. Each ``t^k`` term
    integrates to ``L^(2m-6+k)/(2m-6+k)``, so clearing denominators leaves the
    five other linear factors.
    """
    L = _lin(1, -shift)
    total = RatPoly()
    for k, ck in enumerate(_integrand_coeffs()):
        others = prod((_lin(2, -i) for i in range(1, 7) if i != 6 - k), start=RatPoly.const(1))
        total = total + ck * L**k * others
    return total


def lemma38_numerator() -> RatPoly:
    return _numerator_from_closed_form(3)


def lemma38_p() -> RatPoly:
    """``m(m-3) N(m) + 9/2 (2m-1)...(2m-6) (2m-3)^3`` from the printed coefficients."""
    N = _descending(PRINTED_N)
    return M * _lin(1, -3) * N + Fraction(9, 2) * _falling_six() * _lin(2, -3) ** 3


def lemma38_certificate() -> Certificate:
    cert = Certificate("lemma38")
    derived = lemma38_numerator()
    printed = _descending(PRINTED_N)
    cert.add("printed_numerator_matches_expansion", derived == printed, derived=str(derived))
    p = lemma38_p()
    cert.add("degree_9", p.degree == 9, degree=p.degree)
    p4 = p(4)
    dp = p.derivative()
    route_monotone = p4 > 0 and positive_on(dp, 4)
    cert.add("p4_positive_and_increasing", route_monotone, p_at_4=p4)
    bound = cauchy_bound(p)
    count = sturm_root_count(p, 4, bound) if bound > 4 else 0
    route_roots = p4 > 0 and p.lead > 0 and count == 0
    cert.add(
        "no_roots_beyond_4",
        route_roots,
        root_count=count,
        interval_hi=bound,
        leading_coefficient=p.lead,
    )
    return cert


def prop42_parts() -> tuple[RatPoly, RatPoly, RatPoly]:
    """``(P0, P1, P2)`` with ``R(m) = P0 + e^(5/2) P1 + e^(-2/19) P2``."""
    F = _falling_six()
    q_near = RatPoly((Fraction(5929, 960), Fraction(-1837, 240), Fraction(19, 8)))
    q_far = RatPoly((Fraction(-44201, 960), Fraction(11453, 240), Fraction(-99, 8)))
    P0 = _lin(1, -4) ** 2 * _descending(PRINTED_R_TILDE)
    P1 = F * (_lin(3, -4) * q_near + _lin(2, -3) ** 3 * Fraction(1, 6))
    P2 = F * _lin(3, -4) * q_far
    return P0, P1, P2


def _bound_poly(parts, encl, upper: bool) -> RatPoly:
    """Coefficientwise bound of ``P0 + e1 P1 + e2 P2`` valid for ``m > 0``."""
    P0, *rest = parts
    n = max(p.degree for p in parts) + 1
    out = []
    for k in range(n):
        c = P0.coeffs[k] if k < len(P0.coeffs) else Fraction(0)
        for P, iv in zip(rest, encl):
            a = P.coeffs[k] if k < len(P.coeffs) else Fraction(0)
            c += a * (iv.hi if (a > 0) == upper else iv.lo)
        out.append(c)
    return RatPoly(out)


def prop42_tail_certificate(m_lo: int = 42, horizon: int | None = None, width=Fraction(1, 10**6)) -> Certificate:
    """Certify a rational majorant of ``R(m)`` is negative on ``[m_lo, horizon]`` and beyond.

    Raises :class:`IndeterminateError` when the enclosures are too coarse to
    decide; a failing certificate means even the minorant is nonnegative
    somewhere, so the claim itself is false.
    """
    if m_lo < 42:
        raise ValueError("the tail certificate starts at m = 42 or later")
    width = Fraction(width)
    horizon = 10**6 if horizon is None else horizon
    if horizon < m_lo:
        raise ValueError("horizon must be at least m_lo")
    e1 = exp_enclosure(Fraction(5, 2), width)
    e2 = exp_enclosure(Fraction(-2, 19), width)
    parts = prop42_parts()
    major = _bound_poly(parts, (e1, e2), upper=True)
    minor = _bound_poly(parts, (e1, e2), upper=False)

    cert = Certificate("prop42tail")
    cert.add("enclosures", True, e_5_2=[e1.lo, e1.hi], e_m2_19=[e2.lo, e2.hi])
    at_lo = major(m_lo)
    cert.add("majorant_negative_at_m_lo", at_lo < 0, m_lo=m_lo, value=at_lo)
    cert.add(
        "majorant_negative_up_to_horizon",
        positive_on(-major, m_lo, horizon),
        horizon=horizon,
    )
    cert.add("leading_coefficient_negative", major.lead < 0, leading_coefficient=major.lead)
    cert.add("majorant_negative_on_tail", positive_on(-major, m_lo), degree=major.degree)
    d_major = _bound_poly([p.derivative() for p in parts], (e1, e2), upper=True)
    cert.add("majorant_of_derivative_negative", positive_on(-d_major, m_lo))

    if not cert.passed:
        if minor(m_lo) >= 0 or minor(horizon) >= 0 or minor.lead > 0:
            return cert
        raise IndeterminateError(
            f"exponential enclosures of width {width} are too wide to decide the sign; "
            "retry with a smaller width"
        )
    return cert
