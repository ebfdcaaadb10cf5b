"""Writing a real number as t + alpha + beta with bounded real HCF digits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from hurwitz import config
from hurwitz.arith.intervals import Interval, Number
from hurwitz.exceptions import SearchExhausted
from hurwitz.hcf.digits import EMPTY, DigitSeq
from hurwitz.hcf.expansion import hcf_expand
from hurwitz.real_line.cylinders import HALF, real_cylinder

DEFAULT_BOUND = 29
DEFAULT_PRECISION = Fraction(1, 2**40)
# digits up to 5 in absolute value always suffice once the summands may be negative
FALLBACK_BOUND = 5


@dataclass(frozen=True)
class _Part:
    word: DigitSeq = EMPTY
    zero: bool = False
    positive: bool = False

    @property
    def interval(self) -> Interval:
        if self.zero:
            return Interval.point(0)
        if not self.word:
            return Interval(Fraction(0), HALF) if self.positive else Interval(-HALF, HALF)
        return real_cylinder(self.word)

    @property
    def final(self) -> bool:
        return self.zero

    @property
    def settled(self) -> bool:
        return self.zero or bool(self.word)


@dataclass(frozen=True, kw_only=True)
class BoundedExpansion:
    x: Interval
    t: int
    alpha: DigitSeq
    beta: DigitSeq
    alpha_interval: Interval
    beta_interval: Interval
    bound: int
    shifted: bool = False
    # False when alpha and beta are only prefixes whose cylinders cover the intervals
    words_exact: bool = True
    visited: int = 0

    @property
    def sum_interval(self) -> Interval:
        return self.alpha_interval + self.beta_interval + self.t

    def digits_within_bound(self) -> bool:
        return all(abs(b) <= self.bound for b in (*self.alpha.as_ints(), *self.beta.as_ints()))

    def alpha_in_range(self) -> bool:
        """alpha lies in [0, 1/2): its interval sits in [0, 1/2] and inside [-1/2, 1/2)."""
        interval = self.alpha_interval
        return interval.lo >= 0 and interval.hi <= HALF and interval.lo < HALF

    def words_cover(self) -> bool:
        for seq, interval in ((self.alpha, self.alpha_interval), (self.beta, self.beta_interval)):
            if seq:
                cylinder = real_cylinder(seq)
                if not (cylinder.lo <= interval.lo and interval.hi <= cylinder.hi):
                    return False
        return True

    def contains_target(self) -> bool:
        total = self.sum_interval
        return total.lo <= self.x.lo and self.x.hi <= total.hi

    def checks(self) -> dict[str, bool]:
        return {
            "digit_bound": self.digits_within_bound(),
            "alpha_range": self.alpha_in_range(),
            "contains": self.contains_target(),
            "words_cover": self.words_cover(),
        }

    def to_document(self) -> dict:
        total = self.sum_interval
        return {
            "x": [str(self.x.lo), str(self.x.hi)],
            "t": self.t,
            "alpha": list(self.alpha.as_ints()),
            "beta": list(self.beta.as_ints()),
            "alpha_interval": [str(self.alpha_interval.lo), str(self.alpha_interval.hi)],
            "beta_interval": [str(self.beta_interval.lo), str(self.beta_interval.hi)],
            "sum_interval": [str(total.lo), str(total.hi)],
            "width": str(total.width),
            "bound": self.bound,
            "shifted": self.shifted,
            "words_exact": self.words_exact,
            "checks": self.checks(),
        }


def _refinements(part: _Part, bound: int, allow_zero: bool) -> list[_Part]:
    if part.zero:
        return []
    children = []
    if allow_zero and not part.word:
        children.append(_Part(zero=True))
    digits = part.word.as_ints()
    last = digits[-1] if digits else None
    for d in range(-bound, bound + 1):
        if abs(d) < 2 or (part.positive and not digits and d < 0):
            continue
        if last is not None and abs(last) < 3 and last * d < 0:
            continue
        children.append(_Part(word=part.word.append(d), positive=part.positive))
    return children


def _meets(total: Interval, target: Interval) -> bool:
    return total.lo <= target.hi and target.lo <= total.hi


def _inside(total: Interval, target: Interval) -> bool:
    return total.lo <= target.lo and target.hi <= total.hi


def _offsets(target: Interval) -> list[int]:
    """Integers t with target - t meeting [-1/2, 1)."""
    return list(range(math.floor(target.lo - 1) + 1, math.floor(target.hi + HALF) + 1))


def _search(
    target: Interval,
    bound: int,
    precision: Fraction,
    budget: int,
    allow_zero: bool,
    positive_alpha: bool,
) -> tuple[int, _Part, _Part, int] | None:
    visited = 0
    for t in _offsets(target):
        shifted = Interval(target.lo - t, target.hi - t)
        stack = [(_Part(positive=positive_alpha), _Part())]
        while stack:
            alpha, beta = stack.pop()
            visited += 1
            if visited > budget:
                logger.debug(f"Decomposition of {target} hit its budget of {budget} nodes")
                return None
            a, b = alpha.interval, beta.interval
            total = a + b
            if not _meets(total, shifted):
                continue
            if total.width <= precision and alpha.settled and beta.settled:
                if _inside(total, shifted):
                    return t, alpha, beta, visited
                # subsets of this sum cannot contain the target either
                continue
            refine_alpha = not alpha.final and (beta.final or a.width >= b.width)
            if not refine_alpha and beta.final:
                continue
            fixed = b if refine_alpha else a
            options = _refinements(alpha if refine_alpha else beta, bound, allow_zero)
            goal = shifted.mid - fixed.mid
            # an exact zero summand first, then by distance of the midpoint to the goal
            options.sort(key=lambda part: (not part.zero, abs(goal - part.interval.mid)))
            for part in reversed(options):
                stack.append((part, beta) if refine_alpha else (alpha, part))
    return None


def _shift_prefix(interval: Interval, bound: int) -> tuple[DigitSeq, bool]:
    """Longest prefix of the expansion of the midpoint whose cylinder covers `interval`.

    The flag is set when the prefix is the whole terminating expansion of a point interval.
    """
    expansion = hcf_expand(interval.mid, max_depth=64)
    prefix = EMPTY
    for b in expansion.digits:
        candidate = prefix.append(b)
        if abs(b.re) > bound:
            break
        cylinder = real_cylinder(candidate)
        if not (cylinder.lo <= interval.lo and interval.hi <= cylinder.hi):
            break
        prefix = candidate
    exact = expansion.terminated and interval.width == 0 and prefix == expansion.digits
    return prefix, exact


def shift_repair(expansion: BoundedExpansion, bound: int = DEFAULT_BOUND) -> BoundedExpansion:
    """(t, alpha, beta) -> (t - 1, alpha + 1/2, beta + 1/2) for two negative summands."""
    alpha = expansion.alpha_interval + HALF
    beta = expansion.beta_interval + HALF
    alpha_word, alpha_exact = _shift_prefix(alpha, bound)
    beta_word, beta_exact = _shift_prefix(beta, bound)
    if not (alpha_exact and beta_exact):
        logger.debug(f"Shifted summands of {expansion.x} keep prefix words only")
    return BoundedExpansion(
        x=expansion.x,
        t=expansion.t - 1,
        alpha=alpha_word,
        beta=beta_word,
        alpha_interval=alpha,
        beta_interval=beta,
        bound=bound,
        shifted=True,
        words_exact=alpha_exact and beta_exact,
        visited=expansion.visited,
    )


def _result(target: Interval, found: tuple[int, _Part, _Part, int], bound: int) -> BoundedExpansion:
    t, alpha, beta, visited = found
    return BoundedExpansion(
        x=target,
        t=t,
        alpha=alpha.word,
        beta=beta.word,
        alpha_interval=alpha.interval,
        beta_interval=beta.interval,
        bound=bound,
        visited=visited,
    )


def bounded_sum_decompose(
    x: Interval | Number,
    bound: int = DEFAULT_BOUND,
    precision: Fraction = DEFAULT_PRECISION,
    budget: int | None = None,
    allow_zero: bool = True,
) -> BoundedExpansion:
    """t + alpha + beta enclosing x, with alpha in [0, 1/2) and all digits bounded."""
    target = Interval.coerce(x)
    budget = budget or config.DEFAULT_BUDGET
    found = _search(target, bound, precision, budget // 2, allow_zero, positive_alpha=True)
    if found is not None:
        return _result(target, found, bound)

    logger.warning(f"Direct decomposition of {target} stalled, trying the shifted form")
    found = _search(
        target, FALLBACK_BOUND, precision, budget // 2, allow_zero, positive_alpha=False
    )
    if found is None:
        logger.error(f"Decomposition anomaly: no bounded sum found for {target}")
        raise SearchExhausted(target, budget)
    expansion = _result(target, found, FALLBACK_BOUND)
    if expansion.alpha_in_range():
        return expansion
    if expansion.beta_interval.lo >= 0:
        return BoundedExpansion(
            x=target,
            t=expansion.t,
            alpha=expansion.beta,
            beta=expansion.alpha,
            alpha_interval=expansion.beta_interval,
            beta_interval=expansion.alpha_interval,
            bound=bound,
            visited=expansion.visited,
        )
    return shift_repair(expansion, bound)
