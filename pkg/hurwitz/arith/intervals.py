"""Closed real intervals with exact `Fraction` endpoints.

Comparisons are three-valued: ``True``/``False`` when certified, ``None`` when the
intervals overlap and the answer depends on where the enclosed value actually is.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import libmp

from hurwitz.exceptions import DivisionByZero, PrecisionExhausted

Number = Union[int, Fraction]
Tri = Union[bool, None]


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> Interval:
        x = Fraction(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x: Interval | Number) -> Interval:
        return x if isinstance(x, Interval) else cls.point(x)

    @classmethod
    def hull(cls, *xs: Interval | Number) -> Interval:
        ivs = [cls.coerce(x) for x in xs]
        return cls(min(i.lo for i in ivs), max(i.hi for i in ivs))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: Interval | Number) -> Interval:
        o = Interval.coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Interval | Number) -> Interval:
        return self + (-Interval.coerce(other))

    def __rsub__(self, other: Interval | Number) -> Interval:
        return Interval.coerce(other) - self

    def __mul__(self, other: Interval | Number) -> Interval:
        o = Interval.coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def inverse(self) -> Interval:
        if self.lo <= 0 <= self.hi:
            raise DivisionByZero(f"1 / {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: Interval | Number) -> Interval:
        return self * Interval.coerce(other).inverse()

    def __rtruediv__(self, other: Interval | Number) -> Interval:
        return Interval.coerce(other) * self.inverse()

    def square(self) -> Interval:
        lo, hi = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return Interval(Fraction(0), max(lo, hi))
        return Interval(min(lo, hi), max(lo, hi))

    def abs(self) -> Interval:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def sqrt(self, prec: int = 64) -> Interval:
        if self.hi < 0:
            raise ValueError(f"sqrt of negative interval {self}")
        return Interval(
            sqrt_lower(max(self.lo, Fraction(0)), prec), sqrt_upper(self.hi, prec)
        )

    # -- three-valued comparisons -----------------------------------------

    def lt(self, other: Interval | Number) -> Tri:
        o = Interval.coerce(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        return None

    def le(self, other: Interval | Number) -> Tri:
        o = Interval.coerce(other)
        if self.hi <= o.lo:
            return True
        if self.lo > o.hi:
            return False
        return None

    def gt(self, other: Interval | Number) -> Tri:
        return Interval.coerce(other).lt(self)

    def ge(self, other: Interval | Number) -> Tri:
        return Interval.coerce(other).le(self)

    def __str__(self) -> str:
        if self.is_point():
            return str(self.lo)
        return f"[{self.lo}, {self.hi}]"


def sqrt_lower(x: Number, prec: int = 64) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    scale = 1 << (2 * prec)
    return Fraction(math.isqrt(x.numerator * scale // x.denominator), 1 << prec)


def sqrt_upper(x: Number, prec: int = 64) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    scale = 1 << (2 * prec)
    n = -(-x.numerator * scale // x.denominator)
    r = math.isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << prec)


def sqrt_interval(x: Number, prec: int = 64) -> Interval:
    """Enclosure of sqrt(x); exact when x is the square of a rational."""
    x = Fraction(x)
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Interval.point(Fraction(rn, rd))
    return Interval(sqrt_lower(x, prec), sqrt_upper(x, prec))


@contextmanager
def iv_precision(prec: int):
    saved = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        yield
    finally:
        mpmath.iv.prec = saved


def _raw_to_fraction(raw: tuple) -> Fraction:
    if raw in (libmp.finf, libmp.fninf, libmp.fnan):
        raise PrecisionExhausted(0, f"non-finite value {libmp.to_str(raw, 10)}")
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def mpf_to_fraction(value) -> Fraction:
    """Exact value of an mpmath mpf or raw mpf tuple; never re-rounds."""
    raw = value if isinstance(value, tuple) else value._mpf_
    return _raw_to_fraction(raw)


def from_mpi(value) -> Interval:
    """Convert an `mpmath.iv` interval to an exact `Interval`, endpoints kept bit for bit."""
    lo_raw, hi_raw = value._mpi_
    return Interval(_raw_to_fraction(lo_raw), _raw_to_fraction(hi_raw))


def to_mpi(value: Interval | Number):
    value = Interval.coerce(value)
    lo = mpmath.iv.mpf(value.lo.numerator) / value.lo.denominator
    hi = mpmath.iv.mpf(value.hi.numerator) / value.hi.denominator
    return mpmath.iv.make_mpf((lo._mpi_[0], hi._mpi_[1]))


def log_interval(x: Interval | Number, prec: int = 64) -> Interval:
    """Enclosure of log(x) for x > 0, computed with mpmath interval arithmetic."""
    x = Interval.coerce(x)
    if x.lo <= 0:
        raise ValueError(f"log of non-positive interval {x}")
    with iv_precision(prec):
        return from_mpi(mpmath.iv.log(to_mpi(x)))


def pow_interval(
    x: Interval | Number, exponent: Interval | Number, prec: int = 64
) -> Interval:
    """Enclosure of x**exponent for x > 0."""
    x = Interval.coerce(x)
    if x.lo <= 0:
        raise ValueError(f"power of non-positive interval {x}")
    e = Interval.coerce(exponent)
    if e.is_point() and e.lo.denominator == 1:
        k = int(e.lo)
        if k >= 0:
            return Interval(x.lo**k, x.hi**k)
        return Interval(x.hi**k, x.lo**k)
    with iv_precision(prec):
        return from_mpi(mpmath.iv.exp(to_mpi(e) * mpmath.iv.log(to_mpi(x))))
