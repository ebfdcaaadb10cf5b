"""HCF expansion and the Gauss map ``T(z) = 1/z - [1/z]``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from loguru import logger

from hurwitz import config
from hurwitz.arith.balls import (
    BallSource,
    ComplexBall,
    in_fundamental_domain_ball,
    nearest_gauss_int,
)
from hurwitz.arith.gaussian import GaussInt, GaussRat, in_fundamental_domain
from hurwitz.exceptions import (
    AmbiguousRounding,
    BallContainsZero,
    DivisionByZero,
    OutsideFundamentalDomain,
)
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import QPairTrace, qpair_of

Point = Union[GaussRat, ComplexBall]


@dataclass(frozen=True)
class Expansion:
    source: Point
    digits: DigitSeq
    terminated: bool
    tails: tuple[Point, ...] = field(repr=False)
    precision: int | None = None

    def __len__(self) -> int:
        return len(self.digits)

    @property
    def trace(self) -> QPairTrace:
        return qpair_of(self.digits)

    def convergents(self) -> list[tuple[GaussInt, GaussInt, GaussRat]]:
        trace = self.trace
        return [
            (trace.p[n], trace.q[n], trace.convergent(n))
            for n in range(1, len(self.digits) + 1)
        ]


def _is_zero(z: Point) -> bool:
    if isinstance(z, ComplexBall):
        return z.re == 0 and z.im == 0 and z.radius == 0
    return not z


def gauss_map(z: Point) -> Point:
    if _is_zero(z):
        raise DivisionByZero("T(0) is undefined")
    if isinstance(z, ComplexBall):
        w = z.inverse()
        return w - nearest_gauss_int(w)
    w = GaussRat.from_parts(z).inverse()
    return w - nearest_gauss_int(w)


def hcf_expand(z: Point | GaussInt | int, max_depth: int | None = None) -> Expansion:
    """Digits ``a_n = [1/T^{n-1}(z)]`` until ``T^m(z) = 0`` or `max_depth` digits.

    Rational input always terminates, so `max_depth` may be omitted for it. For balls,
    digits are emitted only while every rounding is certified; an uncertified step
    raises `AmbiguousRounding` with the partial expansion attached.
    """
    if isinstance(z, ComplexBall):
        inside = in_fundamental_domain_ball(z)
        if inside is False:
            raise OutsideFundamentalDomain(z)
        if inside is None:
            raise AmbiguousRounding(z)
        precision = z.prec
    else:
        z = GaussRat.from_parts(z)
        if not in_fundamental_domain(z):
            raise OutsideFundamentalDomain(z)
        precision = None
    if isinstance(z, ComplexBall) and max_depth is None:
        raise ValueError("max_depth is required for ball input")

    digits: list[GaussInt] = []
    tails: list[Point] = [z]
    current = z
    while not _is_zero(current) and (max_depth is None or len(digits) < max_depth):
        try:
            w = 1 / current
            a = nearest_gauss_int(w)
        except (AmbiguousRounding, BallContainsZero):
            partial = Expansion(z, DigitSeq(tuple(digits)), False, tuple(tails), precision)
            raise AmbiguousRounding(current, partial)
        digits.append(a)
        current = w - a
        tails.append(current)
    return Expansion(
        source=z,
        digits=DigitSeq(tuple(digits)),
        terminated=_is_zero(current),
        tails=tuple(tails),
        precision=precision,
    )


def expand_source(
    source: BallSource,
    max_depth: int,
    start_bits: int | None = None,
    cap_bits: int | None = None,
) -> Expansion:
    """Expand a point given as a ball source, doubling precision on ambiguous rounding."""
    prec = start_bits or config.PRECISION_START_BITS
    cap = cap_bits or config.PRECISION_CAP_BITS
    while True:
        try:
            return hcf_expand(source(prec), max_depth)
        except AmbiguousRounding as exc:
            if prec * 2 > cap:
                logger.warning(f"Precision cap {cap} reached after {_partial_len(exc)} digits")
                raise
            logger.debug(f"Rounding ambiguous at {prec} bits, retrying at {prec * 2}")
            prec *= 2


def _partial_len(exc: AmbiguousRounding) -> int:
    return len(exc.partial.digits) if exc.partial is not None else 0


def tail_at(expansion: Expansion, n: int) -> Point:
    """T^n(z) for 0 <= n <= len(expansion)."""
    if not 0 <= n < len(expansion.tails):
        raise IndexError(f"tail {n} not computed, expansion has {len(expansion)} digits")
    return expansion.tails[n]
