"""Families Gamma_M(Q) of full words whose continuant norm first crosses Q."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from loguru import logger

from hurwitz import config
from hurwitz.arith.gaussian import GaussInt
from hurwitz.concurrency import fan_out
from hurwitz.enumeration.lattice import alphabet
from hurwitz.exceptions import BudgetExceeded, PreconditionViolated
from hurwitz.geometry.prototypes import FullStatus, is_full, prototype_set
from hurwitz.hcf.digits import EMPTY, DigitSeq
from hurwitz.hcf.qpairs import q_pair
from hurwitz.utils.files import atomic_write_text

# words travel between processes as tuples of (re, im) pairs
Packed = tuple[tuple[int, int], ...]


def _pack(seq: DigitSeq) -> Packed:
    return tuple((b.re, b.im) for b in seq)


def _unpack(packed: Packed) -> DigitSeq:
    return DigitSeq(tuple(GaussInt(re, im) for re, im in packed))


@dataclass(frozen=True, kw_only=True)
class FullFamily:
    m: int
    q: Fraction
    members: tuple[DigitSeq, ...]
    prefix: DigitSeq = EMPTY
    policy_log: int = 0  # crossings with undecided fullness, left out
    visited: int = 0
    complete: bool = True
    diagnostics: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def dump(self) -> str:
        header = (
            f"# M={self.m} Q={self.q} prefix={self.prefix} count={len(self.members)} "
            f"policy_log={self.policy_log} complete={self.complete}"
        )
        return "\n".join([header, *(str(u) for u in self.members)]) + "\n"

    def write(self, path: str | Path) -> Path:
        return atomic_write_text(path, self.dump())


@dataclass(frozen=True)
class _Partial:
    members: tuple[Packed, ...]
    unknown: int
    visited: int
    exceeded: bool


def is_crossing(seq: DigitSeq, q_sq: Fraction) -> bool:
    """|q(u^-)|^2 < Q^2 <= |q(u)|^2."""
    _, q, _, q_prev = q_pair(seq)
    return bool(seq) and q_prev.norm() < q_sq <= q.norm()


def _explore(task: tuple[Packed, Packed, Fraction, int]) -> _Partial:
    packed_root, packed_digits, q_sq, budget = task
    digits = [GaussInt(re, im) for re, im in packed_digits]
    members: list[Packed] = []
    unknown = visited = 0
    stack = [_unpack(packed_root)]
    while stack:
        u = stack.pop()
        visited += 1
        if visited > budget:
            return _Partial(tuple(members), unknown, visited, True)
        _, q, _, q_prev = q_pair(u)
        norm = q.norm()
        if u and norm <= q_prev.norm():
            # continuant norms grow strictly along admissible words
            continue
        if norm >= q_sq:
            status = is_full(u)
            if status is FullStatus.FULL:
                members.append(_pack(u))
            elif status is FullStatus.UNKNOWN:
                unknown += 1
            continue
        if u and prototype_set(u).empty:
            continue
        stack.extend(u.append(b) for b in reversed(digits))
    return _Partial(tuple(members), unknown, visited, False)


def _check_threshold(m: int, q: Fraction) -> Fraction:
    if m < 2:
        raise PreconditionViolated(f"M must be at least 2, got {m}")
    q = Fraction(q)
    if q <= 1:
        raise PreconditionViolated(f"Q must exceed 1, got {q}")
    return q * q


def _search(
    prefix: DigitSeq, m: int, q: Fraction, budget: int | None, workers: int | None
) -> FullFamily:
    q_sq = _check_threshold(m, q)
    budget = budget or config.DEFAULT_BUDGET
    digits = alphabet(m)
    packed_digits = tuple((b.re, b.im) for b in digits)
    roots = [prefix.append(b) for b in digits]
    partials = fan_out(
        _explore,
        [(_pack(root), packed_digits, q_sq, budget) for root in roots],
        workers,
    )
    visited = 1 + sum(p.visited for p in partials)
    members = tuple(_unpack(packed) for p in partials for packed in p.members)
    family = FullFamily(
        m=m,
        q=Fraction(q),
        prefix=prefix,
        members=members,
        policy_log=sum(p.unknown for p in partials),
        visited=visited,
        complete=not any(p.exceeded for p in partials) and visited <= budget,
    )
    if not family.complete:
        raise BudgetExceeded(budget, partial=family)
    logger.info(
        f"Gamma_{m}({q}) below [{prefix}]: {len(members)} members, {visited} nodes visited"
    )
    return family


def enumerate_full(
    m: int, q: Fraction | int, budget: int | None = None, workers: int | None = None
) -> FullFamily:
    """Gamma_M(Q) in depth-first order, split over the first digit."""
    return _search(EMPTY, m, Fraction(q), budget, workers)


def cq_bound_log10(m: int, w: DigitSeq, total: int) -> float:
    """log10 of (M+1)^{24M} |q(w)|^{-4+2/M} #Gamma_M(Q)."""
    _, q, _, _ = q_pair(w)
    return (
        24 * m * math.log10(m + 1)
        + (-2 + 1 / m) * math.log10(q.norm())
        + math.log10(max(total, 1))
    )


def enumerate_relative(
    w: DigitSeq,
    m: int,
    q: Fraction | int,
    budget: int | None = None,
    workers: int | None = None,
    total: int | None = None,
) -> FullFamily:
    """Suffixes b with wb in Gamma_M(Q); members are the suffixes."""
    q = Fraction(q)
    q_sq = _check_threshold(m, q)
    if any(b.norm() > m * m for b in w):
        raise PreconditionViolated(f"{w} is not a word over I_{m}")
    _, q_w, _, _ = q_pair(w)
    if w and q_w.norm() >= q_sq:
        members = (EMPTY,) if is_crossing(w, q_sq) and is_full(w) is FullStatus.FULL else ()
        family = FullFamily(m=m, q=q, prefix=w, members=members, visited=1)
    else:
        found = _search(w, m, q, budget, workers)
        family = replace(found, members=tuple(u[len(w) :] for u in found.members))
    if total is not None:
        bound = cq_bound_log10(m, w, total)
        ratio = math.log10(max(len(family), 1)) - bound
        family.diagnostics.update(cq_bound_log10=bound, ratio_log10=ratio)
    return family


def oracle_full(m: int, q: Fraction | int) -> tuple[DigitSeq, ...]:
    """Gamma_M(Q) by breadth-first generation without region pruning, then filtered.

    Only growth of the continuant norm limits the search, so the result is independent
    of the depth-first search and its fast paths.
    """
    q_sq = _check_threshold(m, Fraction(q))
    digits = alphabet(m)
    found = []
    level = [EMPTY]
    while level:
        following = []
        for u in level:
            _, q_u, _, _ = q_pair(u)
            for b in digits:
                child = u.append(b)
                _, q_child, _, _ = q_pair(child)
                if q_child.norm() <= q_u.norm():
                    continue
                if q_child.norm() >= q_sq:
                    if prototype_set(child).is_square:
                        found.append(child)
                else:
                    following.append(child)
        level = following
    return tuple(sorted(found, key=DigitSeq.sort_key))
