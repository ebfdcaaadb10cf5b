"""Rewriting reversed real words into admissible ones with the same values."""
from __future__ import annotations

from dataclasses import dataclass

from loguru import logger

from hurwitz.exceptions import PreconditionViolated
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import digit_matrix, evaluate, mat_mul, mat_neg, word_matrix
from hurwitz.real_line.admissible import admissible_real


def offending_indices(digits: tuple[int, ...]) -> list[int]:
    """Indices j with |u_j| = 2 and u_j u_{j+1} < 0."""
    return [
        j
        for j in range(len(digits) - 1)
        if abs(digits[j]) == 2 and digits[j] * digits[j + 1] < 0
    ]


def two_two_identity_holds(x: int, y: int) -> bool:
    """M(x) M(2) M(y) = -M(x+1) M(-2) M(y+1), and the mirrored form with -2."""
    def product(*entries: int):
        result = digit_matrix(entries[0])
        for a in entries[1:]:
            result = mat_mul(result, digit_matrix(a))
        return result

    plus = product(x, 2, y) == mat_neg(product(x + 1, -2, y + 1))
    minus = product(x, -2, y) == mat_neg(product(x - 1, 2, y - 1))
    return plus and minus


@dataclass(frozen=True, kw_only=True)
class Reversal:
    word: DigitSeq
    # each rewrite flips the sign of the reversed word's matrix
    rewrites: int


def reverse_fix_traced(u: DigitSeq) -> Reversal:
    """Admissible v with [0; u^t w] = [0; v^t w] for every w, and the number of rewrites.

    Each round rewrites the first offending pair (x, 2, y) into (x+1 | -2, y+1),
    emits the head, and continues on the tail. A rewrite can create a new offending
    pair in the tail, so one pair of u may cost several rounds.
    """
    digits = u.as_ints()
    if len(digits) < 2 or digits[0] * digits[1] <= 0:
        raise PreconditionViolated(f"{u} needs length >= 2 and u_1 u_2 > 0")
    if not admissible_real(u.reversed()):
        raise PreconditionViolated(f"the reverse of {u} is not admissible")
    head: list[int] = []
    current = list(digits)
    rewrites = 0
    while offending := offending_indices(tuple(current)):
        m = offending[0]
        sign = 1 if current[m] == 2 else -1
        head.extend(current[: m - 1])
        head.append(current[m - 1] + sign)
        current = [-2 * sign, current[m + 1] + sign, *current[m + 2 :]]
        rewrites += 1
        logger.debug(f"Rewrote the pair at {m} of {u}, tail now {current}")
    return Reversal(word=DigitSeq.of(head + current), rewrites=rewrites)


def reverse_fix(u: DigitSeq) -> DigitSeq:
    return reverse_fix_traced(u).word


@dataclass(frozen=True, kw_only=True)
class ReversalCheck:
    admissible: bool
    inflation: bool
    last_sign: bool
    matrix: bool
    evaluations: bool

    @property
    def holds(self) -> bool:
        return all((self.admissible, self.inflation, self.last_sign, self.matrix, self.evaluations))


def reversal_contracts(
    u: DigitSeq, v: DigitSeq, continuations: list[DigitSeq], rewrites: int
) -> ReversalCheck:
    """Check v against u; `rewrites` is the round count reported by `reverse_fix_traced`."""
    us, vs = u.as_ints(), v.as_ints()
    expected = word_matrix(v.reversed())
    if rewrites % 2:
        expected = mat_neg(expected)
    return ReversalCheck(
        admissible=admissible_real(v),
        inflation=len(us) == len(vs) and all(abs(b) <= abs(a) + 1 for a, b in zip(us, vs)),
        last_sign=us[-1] * vs[-1] > 0,
        matrix=word_matrix(u.reversed()) == expected,
        evaluations=all(
            evaluate(u.reversed() + w) == evaluate(v.reversed() + w) for w in continuations
        ),
    )
