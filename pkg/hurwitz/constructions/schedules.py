"""Level scales n_k, thresholds Q_k and the conditions they must meet.

Strict schedules compute the smallest admissible scales and give up past
`config.MAX_BITS`; desk schedules take the scales from the caller and only report which
conditions hold.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import mpmath
from loguru import logger

from hurwitz import config
from hurwitz.approx.rates import ApproxRate, PowerLogRate, classify_rate
from hurwitz.constructions.schemas import schedule_overrides_schema, validate_document
from hurwitz.exceptions import (
    Infeasible,
    MissingInput,
    ParseError,
    PreconditionViolated,
    RateNotSmallO,
    TauOutOfRange,
)
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import q_pair
from hurwitz.real_line.window import AtbTriple, build_atb

DESK_M = 3
TAU_MAX = Fraction(1, 32)
LOG2 = math.log(2)


class ScheduleMode(str, enum.Enum):
    STRICT = "strict"
    DESK = "desk"


@dataclass(frozen=True, kw_only=True)
class Condition:
    k: int
    name: str
    holds: bool
    detail: str = ""

    def to_document(self) -> dict:
        return {"k": self.k, "name": self.name, "holds": self.holds, "detail": self.detail}


def load_overrides(path: str | Path) -> dict[str, Any]:
    """Read a schedule override file and normalize its numbers."""
    path = Path(path)
    if not path.exists():
        raise MissingInput(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), str(exc))
    return normalize_overrides(raw)


def normalize_overrides(raw: dict[str, Any] | None) -> dict[str, Any]:
    if not raw:
        return {}
    document = validate_document(schedule_overrides_schema, raw)
    overrides = dict(document)
    if "epsilon" in overrides:
        overrides["epsilon"] = Fraction(str(overrides["epsilon"]))
    if overrides.get("c1") is not None:
        overrides["c1"] = Fraction(str(overrides["c1"]))
    if "n" in overrides:
        overrides["n"] = [int(n) for n in overrides["n"]]
    if "q" in overrides:
        overrides["q"] = [Fraction(str(q)) for q in overrides["q"]]
    return overrides


def _log_psi(rate: ApproxRate, log_x: float) -> float:
    if isinstance(rate, PowerLogRate):
        value = math.log(rate.c) - float(rate.lam) * log_x
        if rate.beta:
            value -= float(rate.beta) * math.log(1 + max(log_x, 0.0))
        return value
    x = Fraction(math.exp(min(log_x, 700.0)))
    return math.log(rate(x).lo)


def _ceil_exp(log_value: float) -> int:
    with mpmath.workprec(max(64, int(log_value / LOG2) + 64)):
        return int(mpmath.ceil(mpmath.exp(mpmath.mpf(log_value))))


def _threshold(n: int, exponent: Fraction) -> Fraction:
    """n^exponent rounded up to 1/64."""
    if n == 1:
        return Fraction(1)
    with mpmath.workprec(n.bit_length() + 64):
        power = mpmath.power(n, mpmath.mpf(exponent.numerator) / exponent.denominator)
        return Fraction(int(mpmath.ceil(power * 64)), 64)


def _check_levels(n: list[int]) -> None:
    if not n or n[0] != 1:
        raise PreconditionViolated("scales must start with n_1 = 1")
    if any(a >= b for a, b in zip(n, n[1:])):
        raise PreconditionViolated(f"scales must increase, got {n}")


def _report(conditions: list[Condition], mode: ScheduleMode) -> None:
    for condition in conditions:
        if condition.holds:
            logger.debug(f"k={condition.k} {condition.name} holds {condition.detail}")
        elif mode is ScheduleMode.DESK:
            logger.warning(
                f"k={condition.k} {condition.name} fails at desk scale {condition.detail}"
            )


@dataclass(frozen=True, kw_only=True)
class ScheduleOx2:
    rate: ApproxRate
    epsilon: Fraction
    m: int
    n: tuple[int, ...]
    q: tuple[Fraction, ...]  # q[0] is unused
    mode: ScheduleMode
    c1: Fraction | None = None
    family_cap: int | None = None
    conditions: tuple[Condition, ...] = ()
    deviations: tuple[str, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.n)

    @property
    def lam(self) -> float:
        return float(classify_rate(self.rate).lower_order)

    def n_at(self, k: int) -> int:
        return self.n[k - 1]

    def q_at(self, k: int) -> Fraction:
        return self.q[k - 1]

    def expected_exponents(self) -> dict[str, float]:
        lam, eps = self.lam, float(self.epsilon)
        return {"a": 2 - 2 * eps, "b": lam / (lam - 1) - 6 * eps, "c": 4 / lam - 6 * lam * eps}

    def regime(self, r: Fraction | float) -> tuple[int | None, str]:
        """The level k with n_{k+1}^-2 <= r < n_k^-2 and the sub-range (a), (b) or (c)."""
        log_r = math.log(r)
        lam, eps = self.lam, float(self.epsilon)
        for k in range(2, self.depth):
            log_n, log_next = math.log(self.n_at(k)), math.log(self.n_at(k + 1))
            if not -2 * log_next <= log_r < -2 * log_n:
                continue
            if log_r < (-2 + eps) * log_next:
                return k, "a"
            if log_r < (-2 * lam + 2 - 2 * eps) * log_n:
                return k, "b"
            return k, "c"
        return None, "outside"

    def to_document(self) -> dict:
        return {
            "construction": "small-o",
            "rate": str(self.rate),
            "epsilon": str(self.epsilon),
            "m": self.m,
            "n": [str(n) for n in self.n],
            "q": [str(q) for q in self.q],
            "mode": self.mode.value,
            "c1": None if self.c1 is None else str(self.c1),
            "family_cap": self.family_cap,
            "conditions": [c.to_document() for c in self.conditions],
            "deviations": list(self.deviations),
        }


def _ox2_conditions(
    rate: ApproxRate, lam: float, eps: float, m: int, k: int, n: int, n_prev: int
) -> list[Condition]:
    log_n, log_prev = math.log(n), math.log(n_prev)
    exponent = _log_psi(rate, log_n) / log_n
    below = _log_psi(rate, (1 - eps / 3) * log_n)
    growth = math.log(9 * (m + 1)) + lam * log_prev
    floor = max(5 * m / (1 - eps / 4) * math.log(m + 1), math.log(k) / (lam * eps))
    return [
        Condition(
            k=k,
            name="psi_at_scale",
            holds=-lam - eps / 4 <= exponent <= -lam + eps / 4,
            detail=f"log psi(n)/log n = {exponent:.6g}",
        ),
        Condition(
            k=k,
            name="psi_below_scale",
            holds=below <= (-lam + lam * eps / 2) * log_n,
            detail=f"log psi(n^(1-eps/3)) = {below:.6g}",
        ),
        Condition(
            k=k,
            name="scale_growth",
            holds=eps / 6 * log_n >= growth and growth > math.log(100),
            detail=f"(eps/6) log n = {eps / 6 * log_n:.6g} vs {growth:.6g}",
        ),
        Condition(
            k=k,
            name="scale_floor",
            holds=log_n >= floor,
            detail=f"log n = {log_n:.6g} vs {floor:.6g}",
        ),
    ]


def _strict_scale(rate: ApproxRate, lam: float, eps: float, m: int, k: int, n_prev: int) -> int:
    growth = 6 / eps * (math.log(9 * (m + 1)) + lam * math.log(n_prev))
    floor = max(5 * m / (1 - eps / 4) * math.log(m + 1), math.log(k) / (lam * eps))
    log_n = max(growth, floor)
    name = "scale_growth" if growth >= floor else "scale_floor"
    if log_n / LOG2 > config.MAX_BITS:
        raise Infeasible(f"{name} at k={k}", math.ceil(log_n / LOG2))
    n = _ceil_exp(log_n)
    while not all(c.holds for c in _ox2_conditions(rate, lam, eps, m, k, n, n_prev)):
        n *= 2
        if n.bit_length() > config.MAX_BITS:
            raise Infeasible(f"psi_at_scale at k={k}", n.bit_length())
    return n


def schedule_build(
    rate: ApproxRate,
    epsilon: Fraction | str,
    depth: int,
    mode: ScheduleMode | str = ScheduleMode.DESK,
    overrides: dict[str, Any] | None = None,
) -> ScheduleOx2:
    overrides = normalize_overrides(overrides)
    mode = ScheduleMode(overrides.get("mode", mode))
    epsilon = Fraction(str(overrides.get("epsilon", epsilon)))
    if not 0 < epsilon < 1:
        raise PreconditionViolated(f"epsilon must lie in (0, 1), got {epsilon}")
    rate_class = classify_rate(rate)
    if not rate_class.small_o_x2:
        raise RateNotSmallO(rate)
    if math.isinf(rate_class.lower_order):
        raise PreconditionViolated(f"{rate} has infinite lower order")
    lam, eps = float(rate_class.lower_order), float(epsilon)
    c1 = overrides.get("c1", config.C1)
    strict_m = math.ceil(max(12 * c1, 2 / epsilon)) if c1 is not None else None
    deviations = []

    if mode is ScheduleMode.STRICT:
        if strict_m is None:
            raise PreconditionViolated("strict schedules need the counting constant c1")
        m = strict_m
        n = [1]
        for k in range(2, depth + 1):
            n.append(_strict_scale(rate, lam, eps, m, k, n[-1]))
            logger.info(f"Strict scale n_{k} has {n[-1].bit_length()} bits")
    else:
        if "n" not in overrides:
            raise PreconditionViolated("desk schedules need the scales n")
        n = list(overrides["n"])[:depth]
        if len(n) < depth:
            raise PreconditionViolated(f"{len(n)} scales given for depth {depth}")
        m = overrides.get("m", DESK_M)
        if m != strict_m:
            deviations.append(f"M = {m} instead of {strict_m or 'max(12 c1, 2/eps)'}")
    _check_levels(n)

    q = [Fraction(1)] + [_threshold(nk, 1 - epsilon / 4) for nk in n[1:]]
    if "q" in overrides and mode is ScheduleMode.DESK:
        given = overrides["q"]
        for k in range(2, depth + 1):
            if k - 2 < len(given):
                deviations.append(f"Q_{k} = {given[k - 2]} instead of n_{k}^(1-eps/4) = {q[k - 1]}")
                q[k - 1] = given[k - 2]
    family_cap = overrides.get("family_cap", config.FAMILY_CAP)
    if family_cap is not None:
        deviations.append(f"families thinned to {family_cap} children")

    conditions = []
    for k in range(2, depth + 1):
        conditions.extend(_ox2_conditions(rate, lam, eps, m, k, n[k - 1], n[k - 2]))
    _report(conditions, mode)
    for deviation in deviations:
        logger.warning(f"Desk deviation: {deviation}")
    return ScheduleOx2(
        rate=rate,
        epsilon=epsilon,
        m=m,
        n=tuple(n),
        q=tuple(q),
        mode=mode,
        c1=c1,
        family_cap=family_cap,
        conditions=tuple(conditions),
        deviations=tuple(deviations),
    )


@dataclass(frozen=True, kw_only=True)
class ScheduleTau:
    rate: ApproxRate
    tau: Fraction
    m: int  # alphabet bound used for Gamma_M(Q_k)
    n: tuple[int, ...]
    q: tuple[Fraction, ...]
    triples: dict[int, AtbTriple] = field(default_factory=dict)
    mode: ScheduleMode
    c1: Fraction | None = None
    family_cap: int | None = None
    conditions: tuple[Condition, ...] = ()
    deviations: tuple[str, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.n)

    @property
    def m_bound(self) -> Fraction:
        """1/tau - 2, the digit bound of the bounded-digit regime."""
        return 1 / self.tau - 2

    @property
    def d_tau(self) -> Fraction:
        return 2 - self.tau / (1 - 2 * self.tau)

    def n_at(self, k: int) -> int:
        return self.n[k - 1]

    def q_at(self, k: int) -> Fraction:
        return self.q[k - 1]

    def window(self, k: int) -> tuple[Fraction, Fraction]:
        return (1 - Fraction(1, 2 * k)) * self.tau, (1 - Fraction(1, 3 * k)) * self.tau

    def expected_exponents(self) -> dict[str, float]:
        return {"liminf": float(self.d_tau)}

    def regime(self, r: Fraction | float) -> tuple[int | None, str]:
        """The level k with n_{k+1}^(-2(1+1/(k+1))) <= r < n_k^(-2(1+1/k))."""
        log_r = math.log(r)
        for k in range(1, self.depth):
            upper = -2 * (1 + 1 / k) * math.log(self.n_at(k)) if self.n_at(k) > 1 else 0.0
            lower = -2 * (1 + 1 / (k + 1)) * math.log(self.n_at(k + 1))
            if lower <= log_r < upper:
                return k, "liminf"
        return None, "outside"

    def to_document(self) -> dict:
        return {
            "construction": "tau",
            "rate": str(self.rate),
            "tau": str(self.tau),
            "m": self.m,
            "m_bound": str(self.m_bound),
            "d_tau": str(self.d_tau),
            "n": [str(n) for n in self.n],
            "q": [str(q) for q in self.q],
            "mode": self.mode.value,
            "c1": None if self.c1 is None else str(self.c1),
            "family_cap": self.family_cap,
            "triples": {str(k): triple.to_document() for k, triple in self.triples.items()},
            "conditions": [c.to_document() for c in self.conditions],
            "deviations": list(self.deviations),
        }


def rate_tau(rate: ApproxRate) -> Fraction:
    tau = classify_rate(rate).tau
    if isinstance(tau, float):
        if math.isinf(tau) or math.isnan(tau):
            raise TauOutOfRange(tau, "tau must be finite")
        tau = Fraction(tau).limit_denominator(10**6)
    if tau <= 0:
        raise TauOutOfRange(tau, "tau must be positive")
    if tau > TAU_MAX:
        raise TauOutOfRange(tau, f"tau must not exceed {TAU_MAX}")
    return tau


def _rate_window_holds(rate: ApproxRate, tau: Fraction, k: int, n: int) -> bool:
    """(1 - 1/(3k)) tau < x^2 psi(x) < (1 + 1/(2k)) tau on [(1 - 1/(9k)) n, n]."""
    low_x = (1 - Fraction(1, 9 * k)) * n
    lower = rate(n).lo * low_x**2
    upper = rate(low_x).hi * n**2
    return lower > (1 - Fraction(1, 3 * k)) * tau and upper < (1 + Fraction(1, 2 * k)) * tau


def _tau_conditions(
    rate: ApproxRate, tau: Fraction, m: int, k: int, n: int, n_prev: int, triple: AtbTriple
) -> list[Condition]:
    log_n, log_prev = math.log(n), math.log(n_prev)
    _, q_tb, _, _ = q_pair(DigitSeq.of([triple.t]) + triple.b)
    growth = math.log(3 * (m + 1)) + (1 + 1 / (k - 1)) * log_prev
    block = math.log(3) + 0.5 * math.log(q_tb.norm())
    threshold = 5 * m * math.log(m + 1)
    return [
        Condition(
            k=k,
            name="rate_window",
            holds=_rate_window_holds(rate, tau, k, n),
            detail=f"x^2 psi(x) on [(1-1/{9 * k}) n_{k}, n_{k}]",
        ),
        Condition(
            k=k,
            name="scale_growth",
            holds=log_n / k >= max(growth, block),
            detail=f"log n/k = {log_n / k:.6g} vs {max(growth, block):.6g}",
        ),
        Condition(
            k=k,
            name="gamma_threshold",
            holds=(1 - 1 / k) * log_n >= threshold,
            detail=f"log Q = {(1 - 1 / k) * log_n:.6g} vs {threshold:.6g}",
        ),
    ]


def _block_conditions(tau: Fraction, k: int, triple: AtbTriple) -> list[Condition]:
    bound = 1 / tau - 2
    digits = (*triple.a.as_ints(), *triple.b.as_ints())
    return [
        Condition(k=k, name="block_t", holds=triple.t < 2 / tau, detail=f"t = {triple.t}"),
        Condition(
            k=k,
            name="block_digits",
            holds=all(abs(d) <= bound for d in digits),
            detail=f"max digit {max(abs(d) for d in digits)}",
        ),
        Condition(k=k, name="block_full", holds=triple.is_full()),
        Condition(k=k, name="block_window", holds=triple.window_certified()),
    ]


def _strict_tau_scale(rate, tau, m, k, n_prev, triple) -> int:
    _, q_tb, _, _ = q_pair(DigitSeq.of([triple.t]) + triple.b)
    growth = k * (math.log(3 * (m + 1)) + (1 + 1 / (k - 1)) * math.log(n_prev))
    block = k * (math.log(3) + 0.5 * math.log(q_tb.norm()))
    threshold = k / (k - 1) * 5 * m * math.log(m + 1)
    log_n = max(growth, block, threshold)
    if log_n / LOG2 > config.MAX_BITS:
        raise Infeasible(f"scale_growth at k={k}", math.ceil(log_n / LOG2))
    n = _ceil_exp(log_n)
    while not _rate_window_holds(rate, tau, k, n):
        n *= 2
        if n.bit_length() > config.MAX_BITS:
            raise Infeasible(f"rate_window at k={k}", n.bit_length())
    return n


def schedule_build_tau(
    rate: ApproxRate,
    depth: int,
    mode: ScheduleMode | str = ScheduleMode.DESK,
    overrides: dict[str, Any] | None = None,
    budget: int | None = None,
) -> ScheduleTau:
    overrides = normalize_overrides(overrides)
    mode = ScheduleMode(overrides.get("mode", mode))
    tau = rate_tau(rate)
    c1 = overrides.get("c1", config.C1)
    deviations = []
    conditions = []
    if c1 is not None:
        bound = 1 / (12 * c1 + 2)
        conditions.append(
            Condition(k=1, name="tau_c1", holds=tau <= bound, detail=f"1/(12 c1 + 2) = {bound}")
        )
        if tau > bound and mode is ScheduleMode.STRICT:
            raise TauOutOfRange(tau, f"above 1/(12 c1 + 2) = {bound}")
    strict_m = math.floor(1 / tau - 2)

    triples = {}
    for k in range(2, depth + 1):
        zeta, xi = (1 - Fraction(1, 2 * k)) * tau, (1 - Fraction(1, 3 * k)) * tau
        triples[k] = build_atb(zeta, xi, budget)
        conditions.extend(_block_conditions(tau, k, triples[k]))

    if mode is ScheduleMode.STRICT:
        m = strict_m
        n = [1]
        for k in range(2, depth + 1):
            n.append(_strict_tau_scale(rate, tau, m, k, n[-1], triples[k]))
            logger.info(f"Strict scale n_{k} has {n[-1].bit_length()} bits")
    else:
        if "n" not in overrides:
            raise PreconditionViolated("desk schedules need the scales n")
        n = list(overrides["n"])[:depth]
        if len(n) < depth:
            raise PreconditionViolated(f"{len(n)} scales given for depth {depth}")
        m = overrides.get("m", DESK_M)
        if m != strict_m:
            deviations.append(f"M = {m} instead of 1/tau - 2 = {strict_m}")
    _check_levels(n)

    q = [Fraction(1)] + [_threshold(nk, 1 - Fraction(1, k)) for k, nk in enumerate(n[1:], start=2)]
    if "q" in overrides and mode is ScheduleMode.DESK:
        given = overrides["q"]
        for k in range(2, depth + 1):
            if k - 2 < len(given):
                deviations.append(f"Q_{k} = {given[k - 2]} instead of n_{k}^(1-1/{k}) = {q[k - 1]}")
                q[k - 1] = given[k - 2]
    family_cap = overrides.get("family_cap", config.FAMILY_CAP)
    if family_cap is not None:
        deviations.append(f"Gamma_M(Q_k) thinned to {family_cap} members")

    for k in range(2, depth + 1):
        conditions.extend(_tau_conditions(rate, tau, m, k, n[k - 1], n[k - 2], triples[k]))
    _report(conditions, mode)
    for deviation in deviations:
        logger.warning(f"Desk deviation: {deviation}")
    return ScheduleTau(
        rate=rate,
        tau=tau,
        m=m,
        n=tuple(n),
        q=tuple(q),
        triples=triples,
        mode=mode,
        c1=c1,
        family_cap=family_cap,
        conditions=tuple(conditions),
        deviations=tuple(deviations),
    )


def schedule_from_document(document: dict, rate: ApproxRate) -> ScheduleOx2 | ScheduleTau:
    """Rebuild the scale data of a schedule from its manifest entry, without its blocks."""
    common = {
        "rate": rate,
        "m": document["m"],
        "n": tuple(int(n) for n in document["n"]),
        "q": tuple(Fraction(q) for q in document["q"]),
        "mode": ScheduleMode(document["mode"]),
        "c1": None if document.get("c1") is None else Fraction(document["c1"]),
        "family_cap": document.get("family_cap"),
        "deviations": tuple(document.get("deviations", ())),
    }
    if document.get("construction") == "tau":
        return ScheduleTau(tau=Fraction(document["tau"]), **common)
    return ScheduleOx2(epsilon=Fraction(document["epsilon"]), **common)
