"""Exact rational helpers shared by the library and the report layer."""

from __future__ import annotations

import re
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")

DECIMAL_DIGITS = 6


def parse_q(text: str) -> Fraction:
    """Parse a ``"p/q"`` or ``"p"`` string. Floats are rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational string: {text!r}")
    q = Fraction(text)
    return q


def fmt_q(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decimal_str(q: Fraction | int, digits: int = DECIMAL_DIGITS) -> str:
    """Render ``q`` with ``digits`` significant digits (round half even)."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(q.numerator) / Decimal(q.denominator)
    text = format(d, "f")
    return text
