"""Padding a full word with digits 3 and 4 until |q(u v w)| lands in [(1 - delta) N, N]."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from hurwitz import config
from hurwitz.exceptions import PreconditionViolated, WindowUnreachable
from hurwitz.geometry.prototypes import FullStatus, is_full
from hurwitz.hcf.digits import EMPTY, DigitSeq
from hurwitz.hcf.qpairs import q_pair
from hurwitz.real_line.admissible import admissible_real

PADDING_DIGITS = (3, 4)


@dataclass(frozen=True, kw_only=True)
class Padding:
    v: DigitSeq
    q_norm: int
    ratio: float  # N / |q(u)|
    visited: int


def _window(n: Fraction, delta: Fraction) -> tuple[Fraction, Fraction]:
    return ((1 - delta) * n) ** 2, n**2


def pad_to_window(
    u: DigitSeq,
    n: Fraction | int,
    delta: Fraction,
    w: DigitSeq = EMPTY,
    budget: int | None = None,
) -> Padding:
    """First v in {3,4}* (depth-first, 3 before 4) with |q(u v w)|^2 in the window."""
    n, delta = Fraction(n), Fraction(delta)
    if not 0 < delta < 1:
        raise PreconditionViolated(f"delta must lie in (0, 1), got {delta}")
    if is_full(u) is not FullStatus.FULL:
        raise PreconditionViolated(f"{u} is not full")
    if not admissible_real(w):
        raise PreconditionViolated(f"{w} is not admissible")
    low, high = _window(n, delta)
    _, q_u, _, _ = q_pair(u)
    _, q_w, _, _ = q_pair(w)
    ratio = float(n) / q_u.norm() ** 0.5
    budget = budget or config.DEFAULT_BUDGET
    visited = 0
    stack = [EMPTY]
    while stack:
        v = stack.pop()
        visited += 1
        if visited > budget:
            break
        _, q, _, _ = q_pair(u + v + w)
        norm = q.norm()
        _, q_uv, _, _ = q_pair(u + v)
        if low <= norm <= high:
            logger.debug(f"Padded {u} with {v} after {visited} nodes, |q|^2 = {norm}")
            return Padding(v=v, q_norm=norm, ratio=ratio, visited=visited)
        if q_uv.norm() * q_w.norm() > 25 * high:
            # |q(u v d w)| > |q(u v d) q(w)| / 5 > |q(u v) q(w)| / 5 > N for every extension
            continue
        stack.extend(v.append(d) for d in reversed(PADDING_DIGITS))
    raise WindowUnreachable(n, ratio)
