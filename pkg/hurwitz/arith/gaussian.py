"""Exact arithmetic in the Gaussian integers and the Gaussian rationals.

`GaussRat` keeps its value as a pair of `Fraction` components, which makes equality and
hashing structural. The Gaussian numerator/denominator pair is derived on demand and
normalised so the denominator is the unique unit multiple with ``re > 0`` and ``im >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from hurwitz.exceptions import DivisionByZero

IntLike = Union[int, "GaussInt"]
RatLike = Union[int, Fraction, "GaussInt", "GaussRat"]


@dataclass(frozen=True, slots=True)
class GaussInt:
    re: int = 0
    im: int = 0

    @classmethod
    def coerce(cls, value: IntLike) -> GaussInt:
        if isinstance(value, GaussInt):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        raise TypeError(f"Cannot treat {value!r} as a Gaussian integer")

    def __add__(self, other: IntLike) -> GaussInt:
        if isinstance(other, int):
            return GaussInt(self.re + other, self.im)
        if isinstance(other, GaussInt):
            return GaussInt(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> GaussInt:
        if isinstance(other, int):
            return GaussInt(self.re - other, self.im)
        if isinstance(other, GaussInt):
            return GaussInt(self.re - other.re, self.im - other.im)
        return NotImplemented

    def __rsub__(self, other: IntLike) -> GaussInt:
        return (-self) + other

    def __mul__(self, other: IntLike) -> GaussInt:
        if isinstance(other, int):
            return GaussInt(self.re * other, self.im * other)
        if isinstance(other, GaussInt):
            return GaussInt(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> GaussInt:
        return GaussInt(-self.re, -self.im)

    def __truediv__(self, other: RatLike) -> GaussRat:
        return GaussRat.from_parts(self) / other

    def __rtruediv__(self, other: RatLike) -> GaussRat:
        return GaussRat.from_parts(other) / self

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def conj(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_real(self) -> bool:
        return self.im == 0

    def sort_key(self) -> tuple[int, int, int]:
        """Total digit order: squared norm, then real part, then imaginary part."""
        return (self.norm(), self.re, self.im)

    def exact_div(self, other: GaussInt) -> GaussInt:
        n = other.norm()
        if n == 0:
            raise DivisionByZero(f"{self} / 0")
        t = self * other.conj()
        if t.re % n or t.im % n:
            raise ValueError(f"{other} does not divide {self}")
        return GaussInt(t.re // n, t.im // n)

    def __str__(self) -> str:
        return format_gauss(self.re, self.im)

    def __repr__(self) -> str:
        return f"GaussInt({self})"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, I, -ONE, -I)


def format_gauss(re: int | Fraction, im: int | Fraction) -> str:
    if im == 0:
        return str(re)
    if im == 1:
        im_part = "i"
    elif im == -1:
        im_part = "-i"
    else:
        im_part = f"{im}i"
    if re == 0:
        return im_part
    sign = "" if im_part.startswith("-") else "+"
    return f"{re}{sign}{im_part}"


def gauss_gcd(a: GaussInt, b: GaussInt) -> GaussInt:
    while b:
        q = nearest_quotient(a, b)
        a, b = b, a - q * b
    return a


def nearest_quotient(a: GaussInt, b: GaussInt) -> GaussInt:
    """Nearest Gaussian integer to a/b (half-integers round up)."""
    n = b.norm()
    if n == 0:
        raise DivisionByZero(f"{a} / 0")
    t = a * b.conj()
    return GaussInt(_round_half_up(t.re, n), _round_half_up(t.im, n))


def _round_half_up(a: int, n: int) -> int:
    # floor(a/n + 1/2) for n > 0
    return (2 * a + n) // (2 * n)


def canonical_unit(z: GaussInt) -> GaussInt:
    """The unit u such that u*z has re > 0 and im >= 0."""
    for u in UNITS:
        w = u * z
        if w.re > 0 and w.im >= 0:
            return u
    raise DivisionByZero("zero has no canonical unit multiple")


class GaussRat:
    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        if name in ("re", "im"):
            raise AttributeError("GaussRat is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def from_parts(cls, value: RatLike) -> GaussRat:
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, GaussInt):
            return cls(value.re, value.im)
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        raise TypeError(f"Cannot treat {value!r} as a Gaussian rational")

    @classmethod
    def ratio(cls, num: IntLike, den: IntLike) -> GaussRat:
        num = GaussInt.coerce(num)
        den = GaussInt.coerce(den)
        n = den.norm()
        if n == 0:
            raise DivisionByZero(f"{num} / 0")
        t = num * den.conj()
        return cls(Fraction(t.re, n), Fraction(t.im, n))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: RatLike) -> GaussRat:
        try:
            o = GaussRat.from_parts(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: RatLike) -> GaussRat:
        try:
            o = GaussRat.from_parts(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: RatLike) -> GaussRat:
        return GaussRat.from_parts(other) - self

    def __mul__(self, other: RatLike) -> GaussRat:
        try:
            o = GaussRat.from_parts(other)
        except TypeError:
            return NotImplemented
        return GaussRat(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __neg__(self) -> GaussRat:
        return GaussRat(-self.re, -self.im)

    def inverse(self) -> GaussRat:
        n = self.norm()
        if n == 0:
            raise DivisionByZero("1 / 0")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other: RatLike) -> GaussRat:
        try:
            o = GaussRat.from_parts(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: RatLike) -> GaussRat:
        return GaussRat.from_parts(other) / self

    def conj(self) -> GaussRat:
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    # -- structure ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (GaussRat, GaussInt, int, Fraction)):
            o = GaussRat.from_parts(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def is_integral(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def to_gauss_int(self) -> GaussInt:
        if not self.is_integral():
            raise ValueError(f"{self} is not a Gaussian integer")
        return GaussInt(int(self.re), int(self.im))

    @cached_property
    def _num_den(self) -> tuple[GaussInt, GaussInt]:
        lcm = math.lcm(self.re.denominator, self.im.denominator)
        a = GaussInt(int(self.re * lcm), int(self.im * lcm))
        den = GaussInt(lcm, 0)
        g = gauss_gcd(a, den) if a else den
        num, den = a.exact_div(g), den.exact_div(g)
        u = canonical_unit(den)
        return num * u, den * u

    @property
    def num(self) -> GaussInt:
        return self._num_den[0]

    @property
    def den(self) -> GaussInt:
        return self._num_den[1]

    def real_denominator(self) -> int:
        return math.lcm(self.re.denominator, self.im.denominator)

    def __str__(self) -> str:
        d = self.real_denominator()
        body = format_gauss(int(self.re * d), int(self.im * d))
        if d == 1:
            return body
        if self.re and self.im:
            body = f"({body})"
        return f"{body}/{d}"

    def __repr__(self) -> str:
        return f"GaussRat({self})"


def nearest_gauss_int_exact(z: RatLike) -> GaussInt:
    """[z] = floor(Re z + 1/2) + i floor(Im z + 1/2), so z - [z] lies in [-1/2,1/2)^2."""
    z = GaussRat.from_parts(z)
    return GaussInt(
        math.floor(z.re + Fraction(1, 2)), math.floor(z.im + Fraction(1, 2))
    )


HALF = Fraction(1, 2)


def in_fundamental_domain(z: RatLike) -> bool:
    z = GaussRat.from_parts(z)
    return -HALF <= z.re < HALF and -HALF <= z.im < HALF


def norm_sq(z: RatLike) -> Fraction:
    return GaussRat.from_parts(z).norm()
