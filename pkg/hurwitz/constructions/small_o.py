"""Cantor subsets of Exact(psi) for rates with x^2 psi(x) -> 0.

Level k appends a word u of Gamma_M(Q_k) to every member of the previous primed
family, then a digit b from the certified annulus of the result. The convergent
just before b is then pinned in the window (1 - 1/k) psi <= |z - p/q| < psi.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from loguru import logger

from hurwitz import config
from hurwitz.approx.rates import ApproxRate
from hurwitz.arith.gaussian import GaussInt
from hurwitz.arith.intervals import Interval
from hurwitz.concurrency import fan_out
from hurwitz.constructions.schedules import ScheduleOx2
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
)
from hurwitz.enumeration.annulus import DigitAnnulus, digit_annulus, six_bound_holds, window_holds
from hurwitz.enumeration.families import Packed, _pack, _unpack, enumerate_full
from hurwitz.exceptions import AnnulusUnavailable, PreconditionViolated, RateTooLarge
from hurwitz.geometry.prototypes import FullStatus, is_full
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import q_pair


def _annulus_task(task: tuple[Packed, int, ApproxRate, int | None, str]) -> tuple:
    packed, k, rate, cap, seed = task
    try:
        annulus = digit_annulus(_unpack(packed), k, rate, cap=cap, rng=random.Random(seed))
    except RateTooLarge as exc:
        return None, (exc.rho.lo, exc.rho.hi)
    return (
        tuple((b.re, b.im) for b in annulus.certified),
        (annulus.rho.lo, annulus.rho.hi),
        annulus.j1,
        annulus.j2,
        annulus.j1_count,
        annulus.j2_count,
        annulus.sampled,
    )


def _rebuild(word: DigitSeq, k: int, rate: ApproxRate, result: tuple) -> DigitAnnulus:
    certified, rho, j1, j2, j1_count, j2_count, sampled = result
    return DigitAnnulus(
        u=word,
        k=k,
        rate=rate,
        rho=Interval(*rho),
        j1=j1,
        j2=j2,
        j1_count=j1_count,
        j2_count=j2_count,
        certified=tuple(GaussInt(re, im) for re, im in certified),
        sampled=sampled,
    )


def thin(members: tuple[DigitSeq, ...], cap: int | None, rng: random.Random) -> list[DigitSeq]:
    """Keep a seeded sample of at most `cap` members, in their original order."""
    if cap is None or len(members) <= cap:
        return list(members)
    keep = sorted(rng.sample(range(len(members)), cap))
    return [members[i] for i in keep]


def _log_abs_q(word: DigitSeq) -> float:
    _, q, _, _ = q_pair(word)
    return 0.5 * math.log(q.norm())


def build_lambda(
    schedule: ScheduleOx2,
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
    rate = schedule.rate
    lam, eps = schedule.lam, float(schedule.epsilon)
    family = LambdaFamily(construction="small-o", schedule=schedule)
    family.add(Node(word=DigitSeq(), k=1, kind=NodeKind.ROOT))

    for k in range(2, depth + 1):
        log_n = math.log(schedule.n_at(k))
        gamma = enumerate_full(schedule.m, schedule.q_at(k), budget, workers)
        family.gamma_sizes[k] = len(gamma)
        words = thin(gamma.members, schedule.family_cap, rng)
        parents = [family.root] if k == 2 else family.level(k - 1, NodeKind.LAMBDA_PRIME)
        members = [
            family.add(
                Node(word=family.nodes[p].word + u, k=k, kind=NodeKind.LAMBDA, parent=p, gamma=u)
            )
            for p in parents
            for u in words
        ]
        logger.info(f"Lambda_{k}: {len(members)} words from {len(parents)} parents")

        tasks = [
            (_pack(family.nodes[i].word), k, rate, schedule.family_cap, f"{seed}:{k}:{i}")
            for i in members
        ]
        results = fan_out(_annulus_task, tasks, workers)
        annuli: dict[int, DigitAnnulus] = {}
        for i, result in zip(members, results):
            word = family.nodes[i].word
            if result[0] is None:
                raise AnnulusUnavailable(word, Interval(*result[1]))
            annuli[i] = _rebuild(word, k, rate, result)

        primes = []
        for i in members:
            a = family.nodes[i]
            for b in annuli[i].certified:
                primes.append(
                    family.add(
                        Node(
                            word=a.word.append(b),
                            k=k,
                            kind=NodeKind.LAMBDA_PRIME,
                            parent=i,
                            marked=len(a.word),
                            digit=b,
                        )
                    )
                )
        logger.info(f"Lambda'_{k}: {len(primes)} words")

        n_k = schedule.n_at(k)
        family.assertions.extend(
            [
                audit(
                    "members_full",
                    k,
                    (is_full(family.nodes[i].word) is FullStatus.FULL for i in members + primes),
                ),
                audit(
                    "window_at_marked_convergent",
                    k,
                    (window_holds(annuli[i], b) for i in members for b in annuli[i].certified),
                    detail="(1-1/k) psi <= |z - p/q| < psi on C(ab)",
                ),
                audit(
                    "continuant_range",
                    k,
                    (
                        (1 - eps / 3) * log_n
                        <= _log_abs_q(family.nodes[i].word)
                        <= log_n - math.log(3)
                        for i in members
                    ),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="n^(1-eps/3) <= |q(a)| <= n/3",
                ),
                audit(
                    "primed_continuant_range",
                    k,
                    (
                        (lam - 1 - lam * eps) * log_n
                        <= _log_abs_q(family.nodes[i].word)
                        <= (lam - 1 + eps) * log_n
                        for i in primes
                    ),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="n^(lam-1-lam eps) <= |q(ab)| <= n^(lam-1+eps)",
                ),
                audit(
                    "separation",
                    k,
                    (
                        9 * q_pair(annuli[i].u)[1].norm() <= n_k**2
                        and all(six_bound_holds(annuli[i], b) for b in annuli[i].certified)
                        for i in members
                    ),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="dist(C(a1 b1), C(a2 b2)) >= n^-2",
                ),
                audit(
                    "annulus_count_window",
                    k,
                    (
                        math.log(max(annuli[i].j1_count, 1))
                        >= (2 * lam - 4 - 2 * lam * eps) * log_n
                        and math.log(max(annuli[i].j2_count, 1)) <= (2 * lam - 4 + 2 * eps) * log_n
                        for i in members
                    ),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="n^(2lam-4-2lam eps) <= #I(a;k) <= n^(2lam-4+2eps)",
                ),
                audit(
                    "annulus_count_bounds",
                    k,
                    (annuli[i].counts_within_bounds() for i in members),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="rho^2/k < #J1 and #J2 < 3 pi rho^2",
                ),
                audit(
                    "cylinder_diameter",
                    k,
                    (_log_abs_q(family.nodes[i].word) >= (1 - eps / 2) * log_n for i in members),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="|C(a)| <= 2 n^(-2+eps)",
                ),
                audit(
                    "primed_cylinder_diameter",
                    k,
                    (
                        _log_abs_q(family.nodes[i].word) >= (lam - 1 - lam * eps) * log_n
                        for i in primes
                    ),
                    on_failure=Status.OUT_OF_RANGE,
                    detail="|C(ab)| <= 2 n^(-2lam+2+2lam eps)",
                ),
            ]
        )
    return family


def mass_bounds(measure: CantorMeasure) -> list[Assertion]:
    """Level masses against n^(-4+2eps) for Lambda_k and n^(-2lam+3lam eps) for Lambda'_k."""
    family = measure.family
    schedule: ScheduleOx2 = family.schedule
    lam, eps = schedule.lam, float(schedule.epsilon)
    assertions = [audit("mass_conserved", 1, [measure.conserves_mass()])]
    for k in range(2, family.depth + 1):
        log_n = math.log(schedule.n_at(k))
        assertions.append(
            audit(
                "mass_of_members",
                k,
                (
                    math.log(measure.masses[i]) <= (-4 + 2 * eps) * log_n
                    for i in family.level(k, NodeKind.LAMBDA)
                ),
                on_failure=Status.OUT_OF_RANGE,
                detail="mu(C(a)) <= n^(-4+2eps)",
            )
        )
        assertions.append(
            audit(
                "mass_of_primed_members",
                k,
                (
                    math.log(measure.masses[i]) <= (-2 * lam + 3 * lam * eps) * log_n
                    for i in family.level(k, NodeKind.LAMBDA_PRIME)
                ),
                on_failure=Status.OUT_OF_RANGE,
                detail="mu(C(ab)) <= n^(-2lam+3lam eps)",
            )
        )
    return assertions


def exactness_report(family: LambdaFamily, point: SampledPoint) -> list[ConvergentAudit]:
    """Unmarked convergents are followed by a digit of I_M, so they stay above psi."""
    schedule: ScheduleOx2 = family.schedule
    return exactness_audit(point, schedule.rate, schedule.m, Fraction(1))
