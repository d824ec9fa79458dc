from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil

from .errors import DomainError

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and exact strings ("3/7", "0.25") to a Fraction. Floats are refused."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact computations")
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, slots=True)
class RationalInterval:
    """Closed interval [lo, hi] with rational endpoints.

    Every operation returns an interval enclosing all pointwise results, so a
    chain of operations stays a certified enclosure of the exact value.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> RationalInterval:
        x = as_rational(x)
        return cls(x, x)

    @classmethod
    def hull(cls, *values) -> RationalInterval:
        lows = [v.lo if isinstance(v, RationalInterval) else as_rational(v) for v in values]
        highs = [v.hi if isinstance(v, RationalInterval) else as_rational(v) for v in values]
        return cls(min(lows), max(highs))

    # --- queries ---
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = as_rational(x)
        return self.lo <= x <= self.hi

    def overlaps(self, other: RationalInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_below(self, other: RationalInterval) -> bool:
        return self.hi < other.lo

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    # --- arithmetic ---
    @staticmethod
    def _lift(x) -> RationalInterval:
        return x if isinstance(x, RationalInterval) else RationalInterval.point(x)

    def __neg__(self) -> RationalInterval:
        return RationalInterval(-self.hi, -self.lo)

    def __add__(self, other) -> RationalInterval:
        o = self._lift(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other) -> RationalInterval:
        o = self._lift(other)
        return RationalInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other) -> RationalInterval:
        return self._lift(other) - self

    def __mul__(self, other) -> RationalInterval:
        o = self._lift(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> RationalInterval:
        if self.contains_zero():
            raise DomainError(f"division by an interval containing 0: [{self.lo}, {self.hi}]")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> RationalInterval:
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other) -> RationalInterval:
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int) -> RationalInterval:
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers are supported")
        if k == 0:
            return RationalInterval.point(1)
        lo, hi = self.lo**k, self.hi**k
        if k % 2 == 0 and self.contains_zero():
            return RationalInterval(Fraction(0), max(lo, hi))
        return RationalInterval(min(lo, hi), max(lo, hi))

    def __abs__(self) -> RationalInterval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(Fraction(0), max(-self.lo, self.hi))

    def frac_shift(self) -> tuple[int, RationalInterval]:
        """Split off floor(lo): returns (m, self - m) with the shifted lo in [0, 1)."""
        m = floor(self.lo)
        return m, self - m

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def dist_to_int(x: Fraction) -> Fraction:
    """||x||, distance from x to the nearest integer."""
    x = as_rational(x)
    r = x - floor(x)
    return min(r, 1 - r)


def nearest_int(x: Fraction) -> int:
    """Nearest integer, ties resolved downward."""
    return ceil(as_rational(x) - Fraction(1, 2))


def interval_dist_to_int(x: RationalInterval) -> RationalInterval:
    """Exact range of ||t|| for t in x.

    ||.|| is piecewise linear with zeros at integers and peaks at half-integers,
    so the extremes are attained at the endpoints unless an integer (minimum 0)
    or a half-integer (maximum 1/2) lies inside.
    """
    ends = (dist_to_int(x.lo), dist_to_int(x.hi))
    has_int = floor(x.hi) >= ceil(x.lo)
    has_half = floor(x.hi - Fraction(1, 2)) >= ceil(x.lo - Fraction(1, 2))
    lo = Fraction(0) if has_int else min(ends)
    hi = Fraction(1, 2) if has_half else max(ends)
    return RationalInterval(lo, hi)
