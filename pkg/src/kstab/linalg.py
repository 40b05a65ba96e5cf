"""Two-dimensional exact vectors and integer matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple


class _Vec2QBase(NamedTuple):
    x: Fraction
    y: Fraction


class Vec2Q(_Vec2QBase):
    """A point of the plane with exact rational coordinates.

    Coordinates are always stored as reduced :class:`~fractions.Fraction`
    values, so ``Vec2Q(1, 2) == Vec2Q(Fraction(2, 2), 2)``.
    """

    __slots__ = ()

    def __new__(cls, x, y):
        return super().__new__(cls, Fraction(x), Fraction(y))

    def __add__(self, other):  # type: ignore[override]
        return Vec2Q(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2Q(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Vec2Q(-self.x, -self.y)

    def scale(self, c) -> Vec2Q:
        return Vec2Q(self.x * c, self.y * c)

    def dot(self, other) -> Fraction:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> Fraction:
        return self.x * other[1] - self.y * other[0]

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def primitive(self) -> Vec2Q:
        """Smallest positive rescaling with coprime integer entries."""
        if self.x == 0 and self.y == 0:
            raise ValueError("zero vector has no primitive form")
        den = self.x.denominator * self.y.denominator
        a, b = int(self.x * den), int(self.y * den)
        g = gcd(a, b)
        return Vec2Q(a // g, b // g)


def cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class IntMatrix2:
    """Integer 2x2 matrix ``[[a, b], [c, d]]`` with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> IntMatrix2:
        return cls(1, 0, 0, 1)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix2):
            return IntMatrix2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return Vec2Q(self.a * x + self.b * y, self.c * x + self.d * y)

    def inverse(self) -> IntMatrix2:
        k = self.det
        return IntMatrix2(self.d * k, -self.b * k, -self.c * k, self.a * k)
