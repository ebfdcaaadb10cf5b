"""Admissibility and fullness of real digit words, decided by sign patterns."""
from __future__ import annotations

from fractions import Fraction

from hurwitz.exceptions import PreconditionViolated
from hurwitz.hcf.digits import DigitSeq


def admissible_real(seq: DigitSeq) -> bool:
    """Every digit but the last has modulus >= 3 or the sign of its successor."""
    digits = seq.as_ints()
    return all(abs(a) >= 3 or a * b > 0 for a, b in zip(digits, digits[1:]))


def full_real(seq: DigitSeq) -> bool:
    """Sufficient condition: admissible and the last digit has modulus >= 3.

    A False answer only means the criterion does not apply.
    """
    if not seq:
        return True
    return admissible_real(seq) and abs(seq.as_ints()[-1]) >= 3


def tail_bound(seq: DigitSeq) -> Fraction:
    """Strict upper bound 1/(|w_1| - 1) on |[0; w]| for every admissible w starting with w_1."""
    if not seq:
        raise PreconditionViolated("tail bound needs a nonempty word")
    first = seq[0]
    if first.is_real():
        return Fraction(1, abs(first.re) - 1)
    # |[0; w]| < 1/(|w_1| - 1) with |w_1| irrational: use floor(|w_1|) - 1 >= 1 when |w_1|^2 >= 5
    modulus_floor = 1
    while (modulus_floor + 1) ** 2 <= first.norm():
        modulus_floor += 1
    if modulus_floor < 2:
        raise PreconditionViolated(f"no tail bound below 1/(|{first}| - 1) is available")
    return Fraction(1, modulus_floor - 1)
