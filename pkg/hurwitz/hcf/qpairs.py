"""Q-pair continuants of digit words.

The matrix product of the ``[[a, 1], [1, 0]]`` over a word ``u`` of length n equals
``[[q_n, q_{n-1}], [p_n, p_{n-1}]]`` with seeds ``p_0 = 0, q_0 = 1`` and
``p_{-1} = 1, q_{-1} = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from hurwitz.arith.gaussian import ONE, ZERO, GaussInt, GaussRat
from hurwitz.exceptions import DegenerateFraction
from hurwitz.hcf.digits import DigitSeq

Matrix = tuple[tuple[GaussInt, GaussInt], tuple[GaussInt, GaussInt]]


@dataclass(frozen=True, slots=True)
class QPairTrace:
    seq: DigitSeq
    p: tuple[GaussInt, ...]
    q: tuple[GaussInt, ...]

    @property
    def p_last(self) -> GaussInt:
        return self.p[-1]

    @property
    def q_last(self) -> GaussInt:
        return self.q[-1]

    @property
    def p_prev(self) -> GaussInt:
        """p(u^-); equals p_{-1} = 1 for the empty word."""
        return self.p[-2] if len(self.p) > 1 else ONE

    @property
    def q_prev(self) -> GaussInt:
        return self.q[-2] if len(self.q) > 1 else ZERO

    def matrix(self) -> Matrix:
        return ((self.q_last, self.q_prev), (self.p_last, self.p_prev))

    def convergent(self, n: int) -> GaussRat:
        if not self.q[n]:
            raise DegenerateFraction(self.seq, n)
        return GaussRat.ratio(self.p[n], self.q[n])

    def determinant(self, n: int) -> GaussInt:
        """q_n p_{n-1} - q_{n-1} p_n, which is (-1)^n for every n >= 1."""
        return self.q[n] * self.p[n - 1] - self.q[n - 1] * self.p[n]


def qpair_of(seq: DigitSeq) -> QPairTrace:
    p_prev, q_prev = ONE, ZERO
    p_cur, q_cur = ZERO, ONE
    ps, qs = [p_cur], [q_cur]
    for a in seq:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        ps.append(p_cur)
        qs.append(q_cur)
    return QPairTrace(seq, tuple(ps), tuple(qs))


@lru_cache(maxsize=65536)
def q_pair(seq: DigitSeq) -> tuple[GaussInt, GaussInt, GaussInt, GaussInt]:
    """(p(u), q(u), p(u^-), q(u^-)) without keeping the whole trace."""
    trace = qpair_of(seq)
    return trace.p_last, trace.q_last, trace.p_prev, trace.q_prev


def digit_matrix(a: GaussInt | int) -> Matrix:
    a = GaussInt.coerce(a)
    return ((a, ONE), (ONE, ZERO))


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def mat_neg(x: Matrix) -> Matrix:
    return ((-x[0][0], -x[0][1]), (-x[1][0], -x[1][1]))


def word_matrix(seq: DigitSeq) -> Matrix:
    m: Matrix = ((ONE, ZERO), (ZERO, ONE))
    for a in seq:
        m = mat_mul(m, digit_matrix(a))
    return m


def evaluate(seq: DigitSeq) -> GaussRat:
    """[0; a_1, ..., a_m] as a nested fraction, evaluated from the innermost level."""
    x = GaussRat(0)
    for index in range(len(seq), 0, -1):
        den = GaussRat.from_parts(seq[index - 1]) + x
        if not den:
            raise DegenerateFraction(seq, index)
        x = den.inverse()
    return x


def mirror_check(seq: DigitSeq) -> bool:
    """q_{n-1}/q_n == [0; a_n, ..., a_1]."""
    if not seq:
        return True
    trace = qpair_of(seq)
    if not trace.q_last:
        raise DegenerateFraction(seq, len(seq))
    return GaussRat.ratio(trace.q_prev, trace.q_last) == evaluate(seq.reversed())
