"""2D North-East vector and angle helpers.

Conventions: ``n`` is north, ``e`` is east, bearings are measured from north
towards east (clockwise seen from above). ``cross_z(a, b)`` is positive when
``b`` lies clockwise of ``a``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DegenerateDirectionError, InvalidArgumentError

TWO_PI = 2.0 * math.pi


class Vec2NE(NamedTuple):
    n: float
    e: float

    def __add__(self, other: "Vec2NE") -> "Vec2NE":  # type: ignore[override]
        return Vec2NE(self.n + other.n, self.e + other.e)

    def __sub__(self, other: "Vec2NE") -> "Vec2NE":
        return Vec2NE(self.n - other.n, self.e - other.e)

    def __mul__(self, k: float) -> "Vec2NE":  # type: ignore[override]
        return Vec2NE(self.n * k, self.e * k)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2NE":
        return Vec2NE(-self.n, -self.e)

    @classmethod
    def from_bearing(cls, bearing: float, length: float = 1.0) -> "Vec2NE":
        return cls(length * math.cos(bearing), length * math.sin(bearing))


def wrap_pi(a: float) -> float:
    """Wrap an angle to (-pi, pi]; inputs congruent to pi map to +pi."""
    if not math.isfinite(a):
        raise InvalidArgumentError(f"cannot wrap non-finite angle {a!r}")
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r = math.pi
    return r


def constrain(x: float, lo: float, hi: float) -> float:
    if lo > hi:
        raise InvalidArgumentError(f"constrain bounds reversed: lo={lo} > hi={hi}")
    return min(max(x, lo), hi)


def dot(a: Vec2NE, b: Vec2NE) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross_z(a: Vec2NE, b: Vec2NE) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(v: Vec2NE) -> float:
    # sqrt of the sum rather than math.hypot: the compiled kernel reproduces it bit for bit
    return math.sqrt(v[0] * v[0] + v[1] * v[1])


def bearing_of(v: Vec2NE) -> float:
    """Bearing of ``v`` from north, in (-pi, pi]."""
    if v[0] == 0.0 and v[1] == 0.0:
        raise DegenerateDirectionError("bearing of a zero vector is undefined")
    b = math.atan2(v[1], v[0])
    return math.pi if b == -math.pi else b
