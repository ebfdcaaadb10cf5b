"""Generalized circles, Möbius maps and their exact push-forward.

A `GenCircle` is the constraint ``f(z) < 0`` (or ``<= 0``) with
``f(z) = A|z|^2 + Re(conj(B) z) + C``. As a Hermitian form ``f(z) = (z, 1)^* H (z, 1)``
with ``H = [[A, B/2], [conj(B)/2, C]]``, so the image of a constraint under ``M`` is the
form ``N^* H N`` where ``N`` is the adjugate of ``M``. The factor ``|den|^2`` picked up by
the substitution is positive away from the pole, which keeps the side of the constraint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from hurwitz.arith.gaussian import ONE, ZERO, GaussInt, GaussRat
from hurwitz.exceptions import DivisionByZero, PreconditionViolated
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import mat_mul, q_pair

HALF = Fraction(1, 2)
SQUARE_BOX = (-HALF, HALF, -HALF, HALF)


def _extreme_1d(
    a: Fraction, p: Fraction, lo: Fraction, hi: Fraction, maximize: bool
) -> tuple[Fraction, tuple[Fraction, ...] | None]:
    """Extreme value of a*x^2 + p*x on [lo, hi] and where it is attained.

    The location is None when the function is constant on the interval.
    """
    if a == 0 and p == 0:
        return Fraction(0), None
    sign = 1 if maximize else -1
    g = lambda x: a * x * x + p * x  # noqa: E731
    if a != 0 and (a < 0) == maximize:
        # the vertex is the extreme point when it is a maximum (resp. minimum)
        x = min(max(-p / (2 * a), lo), hi)
        return g(x), (x,)
    values = {lo: g(lo), hi: g(hi)}
    best = max(v * sign for v in values.values()) * sign
    return best, tuple(x for x, v in values.items() if v == best)


@dataclass(frozen=True, slots=True)
class GenCircle:
    a: Fraction
    b_re: Fraction
    b_im: Fraction
    c: Fraction
    strict: bool = False

    @classmethod
    def make(
        cls,
        a: int | Fraction,
        b: GaussRat | GaussInt | int,
        c: int | Fraction,
        strict: bool = False,
    ) -> GenCircle:
        b = GaussRat.from_parts(b)
        return cls(Fraction(a), b.re, b.im, Fraction(c), strict).normalized()

    def normalized(self) -> GenCircle:
        """Scale by a positive rational to coprime integer coefficients."""
        coeffs = (self.a, self.b_re, self.b_im, self.c)
        if not any(coeffs):
            return self
        lcm = math.lcm(*(x.denominator for x in coeffs))
        ints = [int(x * lcm) for x in coeffs]
        g = math.gcd(*ints)
        a, b_re, b_im, c = (Fraction(x, g) for x in ints)
        return GenCircle(a, b_re, b_im, c, self.strict)

    @property
    def b(self) -> GaussRat:
        return GaussRat(self.b_re, self.b_im)

    @property
    def is_line(self) -> bool:
        return self.a == 0

    def center(self) -> GaussRat:
        if self.is_line:
            raise PreconditionViolated("a line has no centre")
        return GaussRat(-self.b_re / (2 * self.a), -self.b_im / (2 * self.a))

    def radius_sq(self) -> Fraction:
        if self.is_line:
            raise PreconditionViolated("a line has no radius")
        return (self.b_re**2 + self.b_im**2) / (4 * self.a**2) - self.c / self.a

    def side(self) -> str:
        """The constraint in the words of its boundary circle or line."""
        if self.is_line:
            return "half-plane <" if self.strict else "half-plane <="
        if self.a > 0:
            return "interior <" if self.strict else "interior <="
        return "exterior >" if self.strict else "exterior >="

    def value(self, z: GaussRat | GaussInt | int) -> Fraction:
        z = GaussRat.from_parts(z)
        return self.a * z.norm() + self.b_re * z.re + self.b_im * z.im + self.c

    def holds(self, z: GaussRat | GaussInt | int) -> bool:
        v = self.value(z)
        return v < 0 if self.strict else v <= 0

    def box_max(self, box: tuple[Fraction, ...] = SQUARE_BOX) -> Fraction:
        x0, x1, y0, y1 = box
        mx, _ = _extreme_1d(self.a, self.b_re, x0, x1, True)
        my, _ = _extreme_1d(self.a, self.b_im, y0, y1, True)
        return mx + my + self.c

    def box_min(self, box: tuple[Fraction, ...] = SQUARE_BOX) -> Fraction:
        x0, x1, y0, y1 = box
        mx, _ = _extreme_1d(self.a, self.b_re, x0, x1, False)
        my, _ = _extreme_1d(self.a, self.b_im, y0, y1, False)
        return mx + my + self.c

    def _attained_only_on_open_edges(self, maximize: bool) -> bool:
        # the square is half-open: points with x = 1/2 or y = 1/2 do not belong to it
        _, xs = _extreme_1d(self.a, self.b_re, -HALF, HALF, maximize)
        _, ys = _extreme_1d(self.a, self.b_im, -HALF, HALF, maximize)
        x_open = xs is not None and all(x == HALF for x in xs)
        y_open = ys is not None and all(y == HALF for y in ys)
        return x_open or y_open

    def contains_square(self) -> bool:
        """Every point of [-1/2,1/2)^2 satisfies the constraint."""
        top = self.box_max()
        if top != 0:
            return top < 0
        return not self.strict or self._attained_only_on_open_edges(maximize=True)

    def excludes_square(self) -> bool:
        """No point of [-1/2,1/2)^2 satisfies the constraint."""
        bottom = self.box_min()
        if bottom != 0:
            return bottom > 0
        return self.strict or self._attained_only_on_open_edges(maximize=False)

    def hermitian(self) -> tuple[tuple[GaussRat, GaussRat], tuple[GaussRat, GaussRat]]:
        half_b = GaussRat(self.b_re / 2, self.b_im / 2)
        return (
            (GaussRat(self.a), half_b),
            (half_b.conj(), GaussRat(self.c)),
        )

    def key(self) -> tuple:
        return (self.a, self.b_re, self.b_im, self.c, self.strict)

    def __str__(self) -> str:
        op = "<" if self.strict else "<="
        return f"{self.a}|z|^2 + Re(({self.b})^* z) + {self.c} {op} 0"


# The four edges of the fundamental square as constraints.
SQUARE_EDGES = (
    GenCircle.make(0, -1, -HALF),  # x >= -1/2
    GenCircle.make(0, 1, -HALF, strict=True),  # x < 1/2
    GenCircle.make(0, GaussInt(0, -1), -HALF),  # y >= -1/2
    GenCircle.make(0, GaussInt(0, 1), -HALF, strict=True),  # y < 1/2
)


@dataclass(frozen=True, slots=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d)."""

    a: GaussInt
    b: GaussInt
    c: GaussInt
    d: GaussInt

    @classmethod
    def identity(cls) -> MobiusMap:
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def shift_invert(cls, digit: GaussInt) -> MobiusMap:
        """sigma_b(w) = 1/w - b, the Gauss map on the cylinder of b."""
        return cls(-digit, ONE, ONE, ZERO)

    @classmethod
    def invert_shift(cls, digit: GaussInt) -> MobiusMap:
        """w -> 1/(w + b), the inverse branch of sigma_b."""
        return cls(ZERO, ONE, ONE, digit)

    @classmethod
    def of_word(cls, seq: DigitSeq) -> MobiusMap:
        """T_u: z -> (p(u^-) z + p(u)) / (q(u^-) z + q(u))."""
        p, q, p_prev, q_prev = q_pair(seq)
        return cls(p_prev, p, q_prev, q)

    @property
    def det(self) -> GaussInt:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: MobiusMap) -> MobiusMap:
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def pole(self) -> GaussRat | None:
        if not self.c:
            return None
        return GaussRat.ratio(-self.d, self.c)

    def __call__(self, z: GaussRat | GaussInt | int) -> GaussRat:
        z = GaussRat.from_parts(z)
        den = z * self.c + self.d
        if not den:
            raise DivisionByZero(f"{z} is the pole of the map")
        return (z * self.a + self.b) / den

    def push(self, circle: GenCircle) -> GenCircle:
        """The constraint satisfied by M(z) exactly when z satisfies `circle`."""
        if not self.det:
            raise PreconditionViolated("Möbius map is not invertible")
        adj = (
            (GaussRat.from_parts(self.d), GaussRat.from_parts(-self.b)),
            (GaussRat.from_parts(-self.c), GaussRat.from_parts(self.a)),
        )
        adj_star = ((adj[0][0].conj(), adj[1][0].conj()), (adj[0][1].conj(), adj[1][1].conj()))
        h = mat_mul(mat_mul(adj_star, circle.hermitian()), adj)
        return GenCircle(
            h[0][0].re, 2 * h[0][1].re, 2 * h[0][1].im, h[1][1].re, circle.strict
        ).normalized()

    def disk_image(self, center: GaussRat, radius_sq: Fraction) -> tuple[GaussRat, Fraction]:
        """Centre and squared radius of the image of the disk B(center, r)."""
        beta = center * self.a + self.b
        delta = center * self.c + self.d
        den = delta.norm() - self.c.norm() * radius_sq
        if den <= 0:
            raise PreconditionViolated("the disk contains the pole of the map")
        pole_term = GaussRat.from_parts(self.a * self.c.conj()) * radius_sq
        image_center = (beta * delta.conj() - pole_term) / den
        return image_center, radius_sq * self.det.norm() / (den * den)
