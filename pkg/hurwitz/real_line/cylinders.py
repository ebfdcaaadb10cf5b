"""Real cylinders as closed rational intervals."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from hurwitz.arith.intervals import Interval
from hurwitz.exceptions import NotAdmissible
from hurwitz.geometry.prototypes import prototype_set
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import q_pair
from hurwitz.real_line.admissible import admissible_real

HALF = Fraction(1, 2)
BASE = Interval(-HALF, HALF)


def prototype_interval(seq: DigitSeq) -> Interval:
    """Closure of the real prototype set, which only depends on the last digit."""
    if not seq:
        return BASE
    last = seq.as_ints()[-1]
    if last == 2:
        # [-1/2,1/2) minus the closed ball B(-1, 1)
        return Interval(Fraction(0), HALF)
    if last == -2:
        return Interval(-HALF, Fraction(0))
    return BASE


@lru_cache(maxsize=1 << 16)
def real_cylinder(seq: DigitSeq) -> Interval:
    """Closure of C(u) on the real line, the image of the prototype interval under T_u."""
    if not admissible_real(seq):
        raise NotAdmissible(seq)
    proto = prototype_interval(seq)
    p, q, p_prev, q_prev = (g.re for g in q_pair(seq))
    ends = [Fraction(p + y * p_prev) / (q + y * q_prev) for y in (proto.lo, proto.hi)]
    return Interval(min(ends), max(ends))


def last_digit_claim_holds(seq: DigitSeq) -> bool:
    """For admissible real u the prototype set equals that of its last digit."""
    if not seq or not admissible_real(seq):
        return False
    return prototype_set(seq) == prototype_set(seq[-1:])
