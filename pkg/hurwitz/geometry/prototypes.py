"""Prototype sets of cylinders and the admissible / regular / full classification."""
from __future__ import annotations

import enum
from functools import lru_cache

from loguru import logger

from hurwitz.arith.gaussian import GaussInt
from hurwitz.geometry.circles import MobiusMap
from hurwitz.geometry.regions import Region
from hurwitz.hcf.digits import DigitSeq, check_digit
from hurwitz.real_line.admissible import admissible_real, full_real

FULL_DIGIT_NORM = 8
PROTOTYPE_CACHE_SIZE = 1 << 16


class FullStatus(str, enum.Enum):
    FULL = "Full"
    NOT_FULL = "NotFull"
    UNKNOWN = "Unknown"


class Verdict(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@lru_cache(maxsize=1024)
def level1_cylinder_region(b: GaussInt) -> Region:
    """C(b) = {z in the square : [1/z] = b}, the image of b + square under inversion."""
    check_digit(b)
    return Region.square().push(MobiusMap.invert_shift(b))


@lru_cache(maxsize=PROTOTYPE_CACHE_SIZE)
def _extend(region: Region, b: GaussInt) -> Region:
    # equal prototype sets give equal prototype sets after any common suffix
    return region.intersect(level1_cylinder_region(b)).push(MobiusMap.shift_invert(b))


def prototype_set(seq: DigitSeq) -> Region:
    region = Region.square()
    for b in seq:
        region = _extend(region, b)
        if region.empty:
            break
    return region


def fast_full(seq: DigitSeq) -> bool:
    """Sufficient conditions for fullness that need no region computation."""
    if not seq:
        return True
    if len(seq) == 1 and seq[0].norm() >= FULL_DIGIT_NORM:
        return True
    return seq.is_real() and full_real(seq)


def is_full(seq: DigitSeq) -> FullStatus:
    """Full when the prototype set is the whole square.

    Each constraint is compared with the half-open square exactly, so the region engine
    always decides; UNKNOWN is kept for callers that merge verdicts.
    """
    if fast_full(seq):
        return FullStatus.FULL
    region = prototype_set(seq)
    return FullStatus.FULL if region.is_square else FullStatus.NOT_FULL


def is_admissible(seq: DigitSeq) -> Verdict:
    if len(seq) <= 1:
        return Verdict.YES
    if seq.is_real():
        return Verdict.YES if admissible_real(seq) else Verdict.NO
    region = prototype_set(seq)
    if region.empty:
        return Verdict.NO
    if region.find_witness() is not None:
        return Verdict.YES
    logger.debug(f"No rational witness found for the prototype set of {seq}")
    return Verdict.UNKNOWN


def is_regular(seq: DigitSeq) -> Verdict:
    """Regular when the prototype set has nonempty interior."""
    if len(seq) <= 1:
        return Verdict.YES
    region = prototype_set(seq)
    if region.empty:
        return Verdict.NO
    if region.find_witness() is not None:
        return Verdict.YES
    return Verdict.UNKNOWN
