"""Cantor subsets of Exact(psi) for rates with limsup x^2 psi(x) = tau in (0, 1/32].

Members of level k read a u v a_k t_k b_k: a member a of the previous level, a word u
of Gamma_M(Q_k), a {3,4}-padding v that brings |q(a u v a_k)| into
[(1 - 1/(9k)) n_k, n_k], and the level block (t_k, a_k, b_k) that pins the
convergent of a u v a_k inside the window.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from loguru import logger

from hurwitz import config
from hurwitz.arith.gaussian import GaussRat
from hurwitz.concurrency import fan_out
from hurwitz.constructions.schedules import ScheduleTau
from hurwitz.constructions.small_o import thin
from hurwitz.constructions.tree import (
    Assertion,
    CantorMeasure,
    ConvergentAudit,
    LambdaFamily,
    Node,
    NodeKind,
    SampledPoint,
    Status,
    audit,
    exactness_audit,
    measure_build,
    sample_point,
)
from hurwitz.enumeration.families import Packed, _pack, _unpack, enumerate_full
from hurwitz.exceptions import PreconditionViolated, WindowUnreachable
from hurwitz.geometry.cylinders import distance_enclosure
from hurwitz.geometry.prototypes import FullStatus, is_full
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import q_pair
from hurwitz.real_line.padding import pad_to_window


def _padding_task(task: tuple[Packed, int, Fraction, Packed, int | None]) -> tuple:
    packed, n, delta, packed_w, budget = task
    try:
        padding = pad_to_window(_unpack(packed), n, delta, _unpack(packed_w), budget)
    except WindowUnreachable as exc:
        return None, exc.ratio
    return _pack(padding.v), padding.visited


def _window_holds(member: DigitSeq, marked: int, rate, k: int) -> bool:
    p, q, _, _ = q_pair(member[:marked])
    psi = rate.at_norm(q.norm())
    distance = distance_enclosure(member, GaussRat.ratio(p, q))
    return distance.gt(psi * Fraction(k - 1, k)) is True and distance.lt(psi) is True


def build_lambda_tau(
    schedule: ScheduleTau,
    depth: int | None = None,
    budget: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> LambdaFamily:
    depth = depth or schedule.depth
    if depth > schedule.depth:
        raise PreconditionViolated(f"schedule covers depth {schedule.depth}, asked for {depth}")
    seed = config.DEFAULT_SEED if seed is None else seed
    rng = random.Random(seed)
    family = LambdaFamily(construction="tau", schedule=schedule)
    family.add(Node(word=DigitSeq(), k=1, kind=NodeKind.ROOT))
    digit_cap = 2 / schedule.tau

    for k in range(2, depth + 1):
        triple = schedule.triples[k]
        n_k = schedule.n_at(k)
        gamma = enumerate_full(schedule.m, schedule.q_at(k), budget, workers)
        family.gamma_sizes[k] = len(gamma)
        words = thin(gamma.members, schedule.family_cap, rng)
        parents = family.members(k - 1)
        pairs = [(p, u) for p in parents for u in words]
        delta = Fraction(1, 9 * k)
        results = fan_out(
            _padding_task,
            [
                (_pack(family.nodes[p].word + u), n_k, delta, _pack(triple.a), budget)
                for p, u in pairs
            ],
            workers,
        )
        members = []
        for (p, u), (packed_v, detail) in zip(pairs, results):
            prefix = family.nodes[p].word + u
            if packed_v is None:
                raise WindowUnreachable(n_k, detail)
            v = _unpack(packed_v)
            marked = prefix + v + triple.a
            members.append(
                family.add(
                    Node(
                        word=marked.append(triple.t) + triple.b,
                        k=k,
                        kind=NodeKind.LAMBDA,
                        parent=p,
                        marked=len(marked),
                        gamma=u,
                        padding=v,
                    )
                )
            )
        logger.info(
            f"Lambda_{k}: {len(members)} words, block t={triple.t} a={triple.a} b={triple.b}"
        )

        log_n = math.log(n_k)
        d_tau = float(schedule.d_tau)
        nodes = [family.nodes[i] for i in members]
        family.assertions.extend(
            [
                audit("members_full", k, (is_full(node.word) is FullStatus.FULL for node in nodes)),
                audit(
                    "window_at_marked_convergent",
                    k,
                    (_window_holds(node.word, node.marked, schedule.rate, k) for node in nodes),
                    detail="(1-1/k) psi < |z - p/q| < psi on C(a)",
                ),
                audit(
                    "digits_within_two_over_tau",
                    k,
                    (all(b.norm() <= digit_cap**2 for b in node.word) for node in nodes),
                    detail=f"|b| <= {digit_cap}",
                ),
                audit(
                    "padded_continuant_window",
                    k,
                    (
                        ((1 - delta) * n_k) ** 2
                        <= q_pair(node.word[: node.marked])[1].norm()
                        <= n_k**2
                        for node in nodes
                    ),
                    detail="|q(a u v a_k)| in [(1-1/(9k)) n, n]",
                ),
                audit(
                    "continuant_cap",
                    k,
                    (
                        0.5 * math.log(q_pair(node.word)[1].norm()) <= (1 + 1 / k) * log_n
                        for node in nodes
                    ),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="|q(a)| <= n^(1+1/k)",
                ),
                audit(
                    "branching_count",
                    k,
                    [len(members) == len(parents) * len(words)],
                    detail=f"#Lambda_k = {len(parents)} * {len(words)}",
                ),
                audit(
                    "count_lower_bound",
                    k,
                    [math.log(len(members)) >= 2 * d_tau * (1 - 1 / k) * log_n],
                    on_failure=Status.OUT_OF_RANGE,
                    detail="#Lambda_k >= n^(2 d_tau (1-1/k))",
                ),
            ]
        )
    return family


def measure_build_tau(family: LambdaFamily) -> CantorMeasure:
    """Uniform measure; every member of level k carries (#Lambda_k)^-1."""
    if family.construction != "tau":
        raise PreconditionViolated(f"expected a tau family, got {family.construction}")
    return measure_build(family)


def mass_identities(measure: CantorMeasure) -> list[Assertion]:
    family = measure.family
    assertions = [audit("mass_conserved", 1, [measure.conserves_mass()])]
    for k in range(2, family.depth + 1):
        members = family.members(k)
        parents = family.members(k - 1)
        branching = len(members) // len(parents)
        assertions.append(
            audit(
                "uniform_mass",
                k,
                (measure.masses[i] * len(members) == 1 for i in members),
                detail="mu(C(a)) #Lambda_k = 1",
            )
        )
        assertions.append(
            audit(
                "parent_mass",
                k,
                (measure.masses[p] == Fraction(branching, len(members)) for p in parents),
                detail="mu(C(a)) = #Gamma (#Lambda_k)^-1",
            )
        )
    return assertions


def sample_point_tau(family: LambdaFamily, selector: str | int = "first") -> SampledPoint:
    if not family.nodes:
        raise PreconditionViolated("the family is empty")
    return sample_point(family, selector)


def exactness_report(family: LambdaFamily, point: SampledPoint) -> list[ConvergentAudit]:
    """Unmarked convergents are followed by a digit of modulus at most 1/tau - 2."""
    schedule: ScheduleTau = family.schedule
    return exactness_audit(point, schedule.rate, schedule.m_bound, 1 + schedule.tau / 5)
