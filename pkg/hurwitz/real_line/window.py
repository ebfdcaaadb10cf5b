"""The (t, a, b) blocks that pin |z - p/q| |q|^2 inside a window (zeta, xi)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from hurwitz.arith.gaussian import GaussRat
from hurwitz.arith.intervals import Interval, sqrt_interval
from hurwitz.exceptions import BudgetExceeded, PreconditionViolated
from hurwitz.geometry.circles import MobiusMap
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import evaluate, q_pair
from hurwitz.real_line.admissible import full_real, tail_bound
from hurwitz.real_line.decompose import BoundedExpansion, bounded_sum_decompose
from hurwitz.real_line.reversal import reverse_fix

A_BOUND = 30
B_BOUND = 29
MAX_ROUNDS = 6
# y in the closed square lies in |y|^2 <= 1/2
SQUARE_RADIUS_SQ = Fraction(1, 2)


@dataclass(frozen=True, kw_only=True)
class AtbTriple:
    zeta: Fraction
    xi: Fraction
    t: int
    a: DigitSeq
    b: DigitSeq
    alpha: DigitSeq
    beta: DigitSeq
    # enclosure of |t + z' + [0; a^t w^t]| over every continuation
    modulus: Interval

    @property
    def word(self) -> DigitSeq:
        return self.a.append(self.t) + self.b

    def t_in_range(self) -> bool:
        return 3 <= self.t < 1 / self.zeta + 1

    def is_full(self) -> bool:
        return full_real(self.word)

    def digits_bounded(self) -> bool:
        return all(abs(d) <= A_BOUND for d in self.a.as_ints()) and all(
            abs(d) <= B_BOUND for d in self.b.as_ints()
        )

    def window_certified(self) -> bool:
        return 1 / self.xi < self.modulus.lo and self.modulus.hi < 1 / self.zeta

    def checks(self) -> dict[str, bool]:
        return {
            "t_range": self.t_in_range(),
            "full": self.is_full(),
            "digit_bound": self.digits_bounded(),
            "window": self.window_certified(),
        }

    def to_document(self) -> dict:
        return {
            "zeta": str(self.zeta),
            "xi": str(self.xi),
            "t": self.t,
            "a": list(self.a.as_ints()),
            "b": list(self.b.as_ints()),
            "modulus": [str(self.modulus.lo), str(self.modulus.hi)],
            "checks": self.checks(),
        }


def _closing_digit(seq: DigitSeq) -> int:
    return 3 if seq.as_ints()[-1] > 0 else -3


def _disk(seq: DigitSeq, radius_sq: Fraction) -> tuple[GaussRat, Interval]:
    """Image of the disk |y|^2 <= radius_sq under y -> [0; u_1, ..., u_n + y]."""
    center, image_sq = MobiusMap.of_word(seq).disk_image(GaussRat(0), radius_sq)
    return center, sqrt_interval(image_sq)


def _modulus(t: int, alpha: DigitSeq, b: DigitSeq) -> Interval:
    """Enclosure of |t + [0; alpha s] + z'| for |s| < 1/2 and z' in C(b)."""
    # [0; a'_m w^t] with |a'_m| = 3 stays below 1/2
    tail_sq = tail_bound(DigitSeq.of([3])) ** 2
    c1, r1 = _disk(alpha, tail_sq)
    c2, r2 = _disk(b, SQUARE_RADIUS_SQ)
    center = c1 + c2 + t
    distance = sqrt_interval(center.norm())
    radius = r1 + r2
    return Interval(max(distance.lo - radius.hi, Fraction(0)), distance.hi + radius.hi)


def _assemble(zeta: Fraction, xi: Fraction, expansion: BoundedExpansion) -> AtbTriple:
    alpha, beta = expansion.alpha, expansion.beta
    b = beta.append(_closing_digit(beta))
    reversed_alpha = alpha.append(_closing_digit(alpha)).reversed()
    a = reverse_fix(reversed_alpha)
    return AtbTriple(
        zeta=zeta,
        xi=xi,
        t=expansion.t,
        a=a,
        b=b,
        alpha=alpha,
        beta=beta,
        modulus=_modulus(expansion.t, alpha, b),
    )


def build_atb(zeta: Fraction, xi: Fraction, budget: int | None = None) -> AtbTriple:
    """t, a, b with 3 <= t < 1/zeta + 1, a t b full, bounded digits, and the window

    zeta < |z - p(wa)/q(wa)| |q(wa)|^2 < xi for every full w and z in C(w a t b).
    """
    zeta, xi = Fraction(zeta), Fraction(xi)
    if not 0 < zeta < xi < Fraction(1, 3):
        raise PreconditionViolated(f"need 0 < zeta < xi < 1/3, got {zeta}, {xi}")
    target = (1 / zeta + 1 / xi) / 2
    precision = (1 / zeta - 1 / xi) / 4
    for _ in range(MAX_ROUNDS):
        expansion = bounded_sum_decompose(
            target, bound=B_BOUND, precision=precision, budget=budget, allow_zero=False
        )
        triple = _assemble(zeta, xi, expansion)
        if triple.window_certified():
            logger.info(f"Window block for ({zeta}, {xi}): t={triple.t} a={triple.a} b={triple.b}")
            return triple
        logger.debug(f"Window {triple.modulus} not inside ({1 / xi}, {1 / zeta}), refining")
        precision /= 16
    raise BudgetExceeded(MAX_ROUNDS)


def atb_window_holds(triple: AtbTriple, w: DigitSeq) -> bool:
    """Check the window for one full w through |t + z' + [0; a^t w^t]| with z' in C(b)."""
    s = evaluate(triple.a.reversed() + w.reversed())
    c2, r2 = _disk(triple.b, SQUARE_RADIUS_SQ)
    distance = sqrt_interval((c2 + s + triple.t).norm())
    low, high = distance.lo - r2.hi, distance.hi + r2.hi
    return 1 / triple.xi < low and high < 1 / triple.zeta


def atb_point_ratio(triple: AtbTriple, w: DigitSeq) -> Fraction:
    """|z - p(wa)/q(wa)|^2 |q(wa)|^4 at the rational point z = [0; w a t b] of C(w a t b)."""
    z = evaluate(w + triple.word)
    p, q, _, _ = q_pair(w + triple.a)
    return (z - GaussRat.ratio(p, q)).norm() * q.norm() ** 2
