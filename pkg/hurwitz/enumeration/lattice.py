"""Lattice point counts in disks and annuli, and the digit alphabets I_M."""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterator

from hurwitz.arith.gaussian import GaussInt
from hurwitz.exceptions import PreconditionViolated
from hurwitz.hcf.digits import is_digit


def _row_bound(rem: Fraction, strict: bool) -> int:
    """Largest y >= 0 with y^2 <= rem (or y^2 < rem), -1 if there is none."""
    if strict:
        if rem <= 0:
            return -1
        return math.isqrt(math.ceil(rem) - 1)
    if rem < 0:
        return -1
    return math.isqrt(math.floor(rem))


def lattice_count(r_sq: int | Fraction, strict: bool = False) -> int:
    """Number of Gaussian integers z with |z|^2 <= r_sq (or < r_sq when strict)."""
    r_sq = Fraction(r_sq)
    if r_sq < 0:
        raise PreconditionViolated("squared radius must be non-negative")
    bound = math.isqrt(math.floor(r_sq))
    total = 0
    for x in range(-bound, bound + 1):
        y = _row_bound(r_sq - x * x, strict)
        if y >= 0:
            total += 2 * y + 1
    return total


def gauss_circle_count(r_sq: int | Fraction) -> int:
    """N(R): lattice points in the closed disk |z|^2 <= R^2."""
    return lattice_count(r_sq)


def annulus_count(lo_sq: Fraction, hi_sq: Fraction) -> int:
    """Lattice points with lo_sq < |z|^2 < hi_sq."""
    if hi_sq <= lo_sq:
        return 0
    return lattice_count(hi_sq, strict=True) - lattice_count(lo_sq)


def annulus_points(lo_sq: Fraction, hi_sq: Fraction) -> Iterator[GaussInt]:
    """Lattice points with lo_sq < |z|^2 < hi_sq in the total digit order."""
    if hi_sq <= lo_sq:
        return iter(())
    bound = math.isqrt(math.floor(hi_sq))
    points = [
        GaussInt(x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if lo_sq < x * x + y * y < hi_sq
    ]
    return iter(sorted(points, key=GaussInt.sort_key))


def sample_annulus(
    lo_sq: Fraction, hi_sq: Fraction, size: int, rng: random.Random
) -> list[GaussInt]:
    """`size` distinct uniform lattice points of the annulus by rejection from its box."""
    available = annulus_count(lo_sq, hi_sq)
    if size > available:
        raise PreconditionViolated(f"cannot draw {size} of {available} annulus points")
    bound = math.isqrt(math.floor(hi_sq))
    chosen: set[GaussInt] = set()
    while len(chosen) < size:
        x, y = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if lo_sq < x * x + y * y < hi_sq:
            chosen.add(GaussInt(x, y))
    return sorted(chosen, key=GaussInt.sort_key)


def alphabet(m: int) -> tuple[GaussInt, ...]:
    """I_M: the digits of modulus at most M, in the total digit order."""
    if m < 2:
        raise PreconditionViolated(f"alphabet bound must be at least 2, got {m}")
    digits = [
        GaussInt(x, y)
        for x in range(-m, m + 1)
        for y in range(-m, m + 1)
        if x * x + y * y <= m * m and is_digit(GaussInt(x, y))
    ]
    return tuple(sorted(digits, key=GaussInt.sort_key))
