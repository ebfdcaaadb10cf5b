"""Named invariant suites run at acceptance scale from `hurwitz verify`.

Each suite is split into shards of tuples so the shards can run in worker processes;
a shard returns how many cases it checked and a failure count per check name.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from loguru import logger

from hurwitz import config
from hurwitz.approx.quality import legendre_bounds, legendre_test, legendre_threshold
from hurwitz.approx.rates import parse_rate
from hurwitz.arith.gaussian import GaussInt, GaussRat, nearest_gauss_int_exact
from hurwitz.concurrency import fan_out
from hurwitz.enumeration.annulus import (
    continuant_sandwich_holds,
    digit_annulus,
    six_bound_holds,
    window_holds,
)
from hurwitz.enumeration.families import enumerate_full, enumerate_relative, oracle_full
from hurwitz.exceptions import HurwitzError, SearchExhausted, UnknownSuite
from hurwitz.geometry.prototypes import FullStatus, is_full
from hurwitz.hcf.digits import EMPTY, DigitSeq
from hurwitz.hcf.expansion import hcf_expand
from hurwitz.hcf.identities import check_prefix
from hurwitz.hcf.qpairs import evaluate, mirror_check
from hurwitz.real_line.admissible import admissible_real
from hurwitz.real_line.decompose import bounded_sum_decompose
from hurwitz.real_line.reversal import offending_indices, reversal_contracts, reverse_fix_traced
from hurwitz.real_line.window import atb_window_holds, build_atb

Shard = tuple[int, Counter]

QPAIR_DENOMINATOR = 1000
LEGENDRE_QMAX = 40
SUM_DENOMINATOR = 10**6
SUM_WIDTH = Fraction(1, 2**40)
REV_MAX_LENGTH = 8
REV_DIGIT_BOUND = 6
ANNULUS_CAP = 30
ANNULUS_RATES = ("1/100*x^-2", "x^-3")
ORACLE_M = 3
ORACLE_THRESHOLDS = (5, 10, 20)
ATB_TAU = Fraction(1, 32)
ATB_LEVELS = (2, 3, 4)
# shards are fixed in size so the cases drawn do not depend on the worker count
SHARD_SIZE = 1000


@dataclass(frozen=True, kw_only=True)
class SuiteReport:
    suite: str
    seed: int
    size: int
    checked: int
    failures: dict[str, int]
    options: dict[str, Any] = field(default_factory=dict)

    @property
    def total_failures(self) -> int:
        return sum(self.failures.values())

    @property
    def passed(self) -> bool:
        return self.total_failures == 0

    def to_document(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "size": self.size,
            "checked": self.checked,
            "failures": dict(sorted(self.failures.items())),
            "total_failures": self.total_failures,
            "passed": self.passed,
            "options": {key: str(value) for key, value in self.options.items()},
        }


def _fundamental_rational(rng: random.Random, max_den: int) -> GaussRat:
    den = rng.randint(1, max_den)
    lo, hi = -(den // 2), (den - 1) // 2
    return GaussRat(Fraction(rng.randint(lo, hi), den), Fraction(rng.randint(lo, hi), den))


def _real_word(rng: random.Random, min_len: int, max_len: int) -> DigitSeq:
    digits = [d for d in range(-REV_DIGIT_BOUND, REV_DIGIT_BOUND + 1) if abs(d) >= 2]
    return DigitSeq.of([rng.choice(digits) for _ in range(rng.randint(min_len, max_len))])


def _full_word(rng: random.Random, min_len: int, max_len: int, bound: int = 6) -> DigitSeq:
    """Random word over digits with |b|^2 >= 8, each of which keeps the prototype full."""
    digits = [
        GaussInt(re, im)
        for re in range(-bound, bound + 1)
        for im in range(-bound, bound + 1)
        if re * re + im * im >= 8
    ]
    return DigitSeq.of([rng.choice(digits) for _ in range(rng.randint(min_len, max_len))])


def _qpair_shard(rng: random.Random, count: int, options: dict) -> Shard:
    failures: Counter = Counter()
    for _ in range(count):
        z = _fundamental_rational(rng, options.get("max_den", QPAIR_DENOMINATOR))
        expansion = hcf_expand(z)
        if evaluate(expansion.digits) != z:
            failures["evaluation"] += 1
        if not mirror_check(expansion.digits):
            failures["mirror"] += 1
        for name, holds in check_prefix(z, expansion).items():
            failures[name] += not holds
    return count, failures


def _legendre_shard(rng: random.Random, count: int, options: dict) -> Shard:
    qmax_sq = int(options.get("qmax", LEGENDRE_QMAX)) ** 2
    side = int(options.get("qmax", LEGENDRE_QMAX))
    failures: Counter = Counter()
    failures["threshold"] += legendre_threshold() != (Fraction(1, 2), Fraction(1, 4))
    checked = 0
    for _ in range(count):
        z = _fundamental_rational(rng, QPAIR_DENOMINATOR)
        expansion = hcf_expand(z)
        for re in range(-side, side + 1):
            for im in range(-side, side + 1):
                q = GaussInt(re, im)
                if not q or q.norm() > qmax_sq:
                    continue
                p = nearest_gauss_int_exact(z * q)
                result = legendre_test(expansion, p, q)
                checked += 1
                failures["counterexample"] += not result.sound
                bounds = legendre_bounds(z, expansion, p, q)
                if bounds is not None:
                    failures["quadratic_bound"] += not bounds.quadratic_bound
                    failures["half_t_bound"] += not bounds.half_t_bound
    return checked, failures


def _rev_shard(rng: random.Random, count: int, options: dict) -> Shard:
    failures: Counter = Counter()
    checked = attempts = 0
    while checked < count and attempts < 200 * count:
        attempts += 1
        u = _real_word(rng, 2, REV_MAX_LENGTH)
        ints = u.as_ints()
        if ints[0] * ints[1] <= 0 or not admissible_real(u.reversed()):
            continue
        checked += 1
        continuations = [EMPTY, *(_real_word(rng, 1, 3) for _ in range(4))]
        try:
            reversal = reverse_fix_traced(u)
        except HurwitzError as exc:
            logger.warning(f"reverse_fix({u}) raised {exc}")
            failures["reverse_fix"] += 1
            continue
        v = reversal.word
        check = reversal_contracts(u, v, continuations, reversal.rewrites)
        for name in ("admissible", "inflation", "last_sign", "matrix", "evaluations"):
            failures[name] += not getattr(check, name)
        failures["offending_pairs"] += bool(offending_indices(v.as_ints()))
    return checked, failures


def _sum_shard(rng: random.Random, count: int, options: dict) -> Shard:
    failures: Counter = Counter()
    for _ in range(count):
        x = Fraction(rng.randrange(SUM_DENOMINATOR), SUM_DENOMINATOR)
        try:
            result = bounded_sum_decompose(x)
        except SearchExhausted:
            failures["search_exhausted"] += 1
            continue
        for name, holds in result.checks().items():
            failures[name] += not holds
        failures["width"] += result.sum_interval.width > SUM_WIDTH
    return count, failures


def _annulus_shard(rng: random.Random, count: int, options: dict) -> Shard:
    failures: Counter = Counter()
    checked = 0
    for i in range(count):
        rate = parse_rate(ANNULUS_RATES[i % len(ANNULUS_RATES)])
        # x^-3 has rho = |q(u)|, which needs two digits to clear 6
        u = _full_word(rng, 2 if i % len(ANNULUS_RATES) else 1, 2)
        k = rng.choice((2, 3, 4))
        try:
            annulus = digit_annulus(u, k, rate, cap=ANNULUS_CAP, rng=rng)
        except HurwitzError as exc:
            logger.debug(f"No annulus below [{u}] for {rate}: {exc}")
            continue
        checked += 1
        failures["nested_counts"] += annulus.j1_count > annulus.j2_count
        for b in annulus.certified:
            failures["window"] += not window_holds(annulus, b)
            failures["six_bound"] += not six_bound_holds(annulus, b)
            failures["sandwich"] += not continuant_sandwich_holds(annulus, b)
            failures["full"] += is_full(u.append(b)) is not FullStatus.FULL
    return checked, failures


def _oracle_shard(rng: random.Random, count: int, options: dict) -> Shard:
    q = options["threshold"]
    failures: Counter = Counter()
    members = oracle_full(ORACLE_M, q)
    family = enumerate_full(ORACLE_M, q, workers=1)
    failures["gamma"] += family.members != members
    long = [u for u in members if len(u) > 1]
    for _ in range(count if long else 0):
        u = rng.choice(long)
        w = u[: rng.randint(1, len(u) - 1)]
        expected = {v[len(w) :] for v in members if v[: len(w)] == w and len(v) > len(w)}
        relative = enumerate_relative(w, ORACLE_M, q, workers=1)
        failures["relative"] += set(relative.members) != expected
    return 1 + (count if long else 0), failures


def _atb_shard(rng: random.Random, count: int, options: dict) -> Shard:
    k = options["k"]
    zeta = (1 - Fraction(1, 2 * k)) * ATB_TAU
    xi = (1 - Fraction(1, 3 * k)) * ATB_TAU
    failures: Counter = Counter()
    triple = build_atb(zeta, xi)
    for name, holds in triple.checks().items():
        failures[name] += not holds
    for _ in range(count):
        failures["continuation_window"] += not atb_window_holds(triple, _full_word(rng, 0, 4))
    return 1 + count, failures


SUITES: dict[str, Callable[[random.Random, int, dict], Shard]] = {
    "qpair": _qpair_shard,
    "legendre": _legendre_shard,
    "rev": _rev_shard,
    "sum": _sum_shard,
    "annulus": _annulus_shard,
    "enumeration-oracle": _oracle_shard,
    "atb": _atb_shard,
}


def _run_shard(task: tuple[str, int, int, int, dict]) -> tuple[int, dict[str, int]]:
    name, seed, index, count, options = task
    rng = random.Random(f"{name}:{seed}:{index}")
    checked, failures = SUITES[name](rng, count, options)
    return checked, dict(failures)


def _split(size: int) -> list[int]:
    full, rest = divmod(size, SHARD_SIZE)
    return [SHARD_SIZE] * full + ([rest] if rest or not full else [])


def _tasks(name: str, seed: int, size: int, options: dict) -> list[tuple]:
    if name == "enumeration-oracle":
        thresholds = options.get("thresholds", ORACLE_THRESHOLDS)
        return [(name, seed, i, size, {"threshold": q}) for i, q in enumerate(thresholds)]
    if name == "atb":
        levels = options.get("levels", ATB_LEVELS)
        return [(name, seed, i, size, {"k": k}) for i, k in enumerate(levels)]
    return [(name, seed, i, n, options) for i, n in enumerate(_split(size))]


def run_suite(
    name: str,
    seed: int | None = None,
    size: int = 100,
    workers: int | None = None,
    **options: Any,
) -> SuiteReport:
    """Run one suite and merge the failure counts of its shards."""
    if name not in SUITES:
        raise UnknownSuite(name)
    seed = config.DEFAULT_SEED if seed is None else seed
    workers = workers or config.WORKERS
    tasks = _tasks(name, seed, size, options)
    results = fan_out(_run_shard, tasks, workers)
    failures: Counter = Counter()
    checked = 0
    for shard_checked, shard_failures in results:
        checked += shard_checked
        failures.update(shard_failures)
    report = SuiteReport(
        suite=name,
        seed=seed,
        size=size,
        checked=checked,
        failures={key: value for key, value in failures.items() if value},
        options=options,
    )
    if report.passed:
        logger.info(f"Suite {name}: {checked} cases, no failures")
    else:
        logger.error(
            f"Suite {name}: {report.total_failures} failures over {checked} cases {report.failures}"
        )
    return report

