"""Certified complex balls with dyadic centres.

Every operation returns a ball containing the exact image of its inputs. Centres are
rounded to `prec` significant bits and the rounding error is folded into the radius.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import mpmath

from hurwitz.arith.gaussian import HALF, GaussInt, GaussRat, nearest_gauss_int_exact
from hurwitz.arith.intervals import (
    Interval,
    Tri,
    from_mpi,
    iv_precision,
    sqrt_lower,
    sqrt_upper,
)
from hurwitz.exceptions import AmbiguousRounding, BallContainsZero, ParseError

BallLike = Union["ComplexBall", GaussRat, GaussInt, int, Fraction]


def _log2_floor(x: Fraction) -> int:
    x = abs(x)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    # correct the estimate so that 2**e <= x < 2**(e+1)
    if Fraction(2) ** e > x:
        e -= 1
    elif Fraction(2) ** (e + 1) <= x:
        e += 1
    return e


def _round_to(x: Fraction, shift: int) -> Fraction:
    """Nearest multiple of 2**-shift."""
    if shift >= 0:
        return Fraction(round(x * (1 << shift)), 1 << shift)
    return Fraction(round(x / (1 << -shift)) << -shift)


def _ceil_dyadic(r: Fraction, bits: int = 32) -> Fraction:
    if r <= 0:
        return Fraction(0)
    shift = bits - _log2_floor(r)
    if shift >= 0:
        return Fraction(-(-r.numerator * (1 << shift) // r.denominator), 1 << shift)
    return Fraction(-(-r.numerator // (r.denominator << -shift)) << -shift)


@dataclass(frozen=True, slots=True)
class ComplexBall:
    re: Fraction
    im: Fraction
    radius: Fraction
    prec: int = 64

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("ball radius must be non-negative")

    @classmethod
    def exact(cls, z: BallLike, prec: int = 64) -> ComplexBall:
        if isinstance(z, ComplexBall):
            return z
        z = GaussRat.from_parts(z)
        return cls(z.re, z.im, Fraction(0), prec)

    @classmethod
    def around(cls, center: GaussRat, radius: Fraction, prec: int = 64) -> ComplexBall:
        return cls(center.re, center.im, Fraction(radius), prec)._rounded()

    @property
    def center(self) -> GaussRat:
        return GaussRat(self.re, self.im)

    def _rounded(self) -> ComplexBall:
        magnitude = max(abs(self.re), abs(self.im))
        if magnitude == 0:
            return ComplexBall(self.re, self.im, _ceil_dyadic(self.radius), self.prec)
        shift = self.prec - _log2_floor(magnitude)
        re, im = _round_to(self.re, shift), _round_to(self.im, shift)
        error = Fraction(0)
        if re != self.re or im != self.im:
            error = Fraction(1, 1 << shift) if shift >= 0 else Fraction(1 << -shift)
        return ComplexBall(re, im, _ceil_dyadic(self.radius + error), self.prec)

    def abs_upper(self) -> Fraction:
        return sqrt_upper(self.re * self.re + self.im * self.im, self.prec) + self.radius

    def abs_lower(self) -> Fraction:
        return max(
            Fraction(0),
            sqrt_lower(self.re * self.re + self.im * self.im, self.prec) - self.radius,
        )

    def abs_interval(self) -> Interval:
        return Interval(self.abs_lower(), self.abs_upper())

    def re_interval(self) -> Interval:
        return Interval(self.re - self.radius, self.re + self.radius)

    def im_interval(self) -> Interval:
        return Interval(self.im - self.radius, self.im + self.radius)

    def contains(self, z: BallLike) -> bool:
        z = GaussRat.from_parts(z)
        d = (z - self.center).norm()
        return d <= self.radius * self.radius

    def contains_zero(self) -> bool:
        return self.re * self.re + self.im * self.im <= self.radius * self.radius

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other: BallLike) -> ComplexBall:
        if isinstance(other, ComplexBall):
            return other
        return ComplexBall.exact(other, self.prec)

    def __add__(self, other: BallLike) -> ComplexBall:
        o = self._coerce(other)
        return ComplexBall(
            self.re + o.re,
            self.im + o.im,
            self.radius + o.radius,
            max(self.prec, o.prec),
        )._rounded()

    __radd__ = __add__

    def __neg__(self) -> ComplexBall:
        return ComplexBall(-self.re, -self.im, self.radius, self.prec)

    def __sub__(self, other: BallLike) -> ComplexBall:
        return self + (-self._coerce(other))

    def __rsub__(self, other: BallLike) -> ComplexBall:
        return self._coerce(other) - self

    def __mul__(self, other: BallLike) -> ComplexBall:
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        a = sqrt_upper(self.re * self.re + self.im * self.im, prec)
        b = sqrt_upper(o.re * o.re + o.im * o.im, prec)
        radius = a * o.radius + b * self.radius + self.radius * o.radius
        return ComplexBall(re, im, radius, prec)._rounded()

    __rmul__ = __mul__

    def inverse(self) -> ComplexBall:
        n = self.re * self.re + self.im * self.im
        c_lower = sqrt_lower(n, self.prec)
        if c_lower <= self.radius:
            raise BallContainsZero(self)
        # |1/(c+e) - 1/c| <= r / (|c| (|c| - r))
        radius = self.radius / (c_lower * (c_lower - self.radius))
        return ComplexBall(self.re / n, -self.im / n, radius, self.prec)._rounded()

    def __truediv__(self, other: BallLike) -> ComplexBall:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: BallLike) -> ComplexBall:
        return self._coerce(other) * self.inverse()

    def conj(self) -> ComplexBall:
        return ComplexBall(self.re, -self.im, self.radius, self.prec)

    def norm_interval(self) -> Interval:
        return self.abs_interval().square()

    def with_prec(self, prec: int) -> ComplexBall:
        return ComplexBall(self.re, self.im, self.radius, prec)

    def __str__(self) -> str:
        return f"{GaussRat(self.re, self.im)} +/- {self.radius}"


def _round_component(iv: Interval, value: BallLike) -> int:
    lo = math.floor(iv.lo + HALF)
    hi = math.floor(iv.hi + HALF)
    if lo != hi:
        raise AmbiguousRounding(value)
    return lo


def nearest_gauss_int(z: BallLike) -> GaussInt:
    """Nearest Gaussian integer with half-integers rounding up.

    Exact for rationals; for balls the whole ball must round to one lattice point,
    otherwise `AmbiguousRounding` is raised.
    """
    if isinstance(z, ComplexBall):
        return GaussInt(
            _round_component(z.re_interval(), z), _round_component(z.im_interval(), z)
        )
    return nearest_gauss_int_exact(z)


def in_fundamental_domain_ball(z: ComplexBall) -> Tri:
    """Three-valued membership of a ball in [-1/2,1/2)^2."""
    re, im = z.re_interval(), z.im_interval()
    if re.lo >= -HALF and re.hi < HALF and im.lo >= -HALF and im.hi < HALF:
        return True
    if re.hi < -HALF or re.lo >= HALF or im.hi < -HALF or im.lo >= HALF:
        return False
    return None


BallSource = Callable[[int], ComplexBall]


def constant_source(z: BallLike) -> BallSource:
    def source(prec: int) -> ComplexBall:
        return ComplexBall.exact(z, prec)

    return source


_MP_CONSTANTS = {
    "pi": lambda: mpmath.iv.mpf(mpmath.iv.pi),
    "e": lambda: mpmath.iv.mpf(mpmath.iv.e),
    "phi": lambda: (1 + mpmath.iv.sqrt(5)) / 2,
}
_MP_FUNCTIONS = {
    "sqrt": mpmath.iv.sqrt,
    "exp": mpmath.iv.exp,
    "log": mpmath.iv.log,
    "cos": mpmath.iv.cos,
    "sin": mpmath.iv.sin,
}
_BINARY_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _iv_eval(node: ast.AST):
    """Evaluate a whitelisted expression tree with `mpmath.iv` at the current precision."""
    if isinstance(node, ast.Expression):
        return _iv_eval(node.body)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return mpmath.iv.mpf(node.value)
    if isinstance(node, ast.Constant) and type(node.value) is float:
        # enclose the decimal literal, not its binary float approximation
        return mpmath.iv.mpf(repr(node.value))
    if isinstance(node, ast.Name) and node.id in _MP_CONSTANTS:
        return _MP_CONSTANTS[node.id]()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _iv_eval(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY_OPS:
        return _BINARY_OPS[type(node.op)](_iv_eval(node.left), _iv_eval(node.right))
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _MP_FUNCTIONS
        and len(node.args) == 1
        and not node.keywords
    ):
        return _MP_FUNCTIONS[node.func.id](_iv_eval(node.args[0]))
    raise ValueError(f"unsupported syntax {ast.dump(node)}")


def mpmath_source(re_expr: str, im_expr: str = "0") -> BallSource:
    """A ball source evaluating real/imaginary expressions with `mpmath.iv`.

    Expressions may use numeric literals, + - * / **, the constants pi, e and phi, and
    the functions sqrt, exp, log, cos and sin. Anything else is a `ParseError`.
    """
    trees = {}
    for expr in (re_expr, im_expr):
        try:
            trees[expr] = ast.parse(expr.strip(), mode="eval")
        except SyntaxError as exc:
            raise ParseError(expr, str(exc))

    def evaluate(expr: str) -> Interval:
        try:
            value = mpmath.iv.mpf(_iv_eval(trees[expr]))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(expr, str(exc))
        return from_mpi(value)

    def source(prec: int) -> ComplexBall:
        with iv_precision(prec + 8):
            re = evaluate(re_expr)
            im = evaluate(im_expr)
        radius = sqrt_upper(re.width * re.width + im.width * im.width, prec) / 2
        return ComplexBall(re.mid, im.mid, radius, prec)._rounded()

    return source
