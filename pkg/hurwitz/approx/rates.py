"""Rate functions psi and their invariants.

Two families are supported: the analytic power-log family
``psi(x) = c * x^-lam * (1 + log max(x, 1))^-beta`` and step tables read from a CSV
file. Evaluation always returns an `Interval`; it is a point interval whenever the value
is rational and computable exactly.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from hurwitz import config
from hurwitz.arith.intervals import (
    Interval,
    log_interval,
    pow_interval,
    sqrt_interval,
)
from hurwitz.exceptions import MissingInput, ParseError

Extended = Union[Fraction, float]
INFINITY = math.inf

_NUMBER = r"[0-9]+(?:[./][0-9]+)?"
_RATE_RE = re.compile(
    rf"""^\s*
    (?:(?P<c>{_NUMBER})\s*\*\s*)?
    x\s*\^\s*-\s*(?P<lam>{_NUMBER})
    (?:\s*\*\s*log\s*\^\s*-\s*(?P<beta>{_NUMBER}))?
    \s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True, kw_only=True)
class RateClass:
    lower_order: Extended
    tau: Extended
    small_o_x2: bool
    approximate: bool = False


@dataclass(frozen=True, kw_only=True)
class PowerLogRate:
    c: Fraction = Fraction(1)
    lam: Fraction
    beta: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.c <= 0 or self.lam < 0 or self.beta < 0:
            raise ParseError(str(self), "need c > 0, lam >= 0 and beta >= 0")

    @property
    def is_exact(self) -> bool:
        return self.beta == 0 and self.lam.denominator == 1

    def _at_point(self, x: Fraction, prec: int) -> Interval:
        if x <= 0:
            raise ValueError(f"psi is defined on (0, inf), got {x}")
        if self.is_exact:
            return Interval.point(self.c * x ** -int(self.lam))
        value = pow_interval(x, -self.lam, prec) * self.c
        if self.beta:
            log_factor = log_interval(max(x, Fraction(1)), prec) + 1
            value = value * pow_interval(log_factor, -self.beta, prec)
        return value

    def __call__(self, x: Interval | int | Fraction, prec: int | None = None) -> Interval:
        prec = prec or config.PRECISION_START_BITS
        x = Interval.coerce(x)
        if x.is_point():
            return self._at_point(x.lo, prec)
        # non-increasing, so the image of [lo, hi] is [psi(hi), psi(lo)]
        return Interval(self._at_point(x.hi, prec).lo, self._at_point(x.lo, prec).hi)

    def at_norm(self, n: int | Fraction, prec: int | None = None) -> Interval:
        """psi(|q|) given the squared norm n = |q|^2."""
        n = Fraction(n)
        if self.beta == 0 and (self.lam / 2).denominator == 1:
            return Interval.point(self.c * n ** -int(self.lam / 2))
        return self(sqrt_interval(n, prec or config.PRECISION_START_BITS), prec)

    def x2_psi(self, x: Interval | int | Fraction, prec: int | None = None) -> Interval:
        x = Interval.coerce(x)
        return x.square() * self(x, prec)

    def classify(self) -> RateClass:
        if self.lam > 2 or (self.lam == 2 and self.beta > 0):
            tau: Extended = Fraction(0)
        elif self.lam == 2:
            tau = self.c
        else:
            tau = INFINITY
        return RateClass(lower_order=self.lam, tau=tau, small_o_x2=tau == 0)

    def __str__(self) -> str:
        text = f"{self.c}*x^-{self.lam}"
        if self.beta:
            text += f"*log^-{self.beta}"
        return text


@dataclass(frozen=True, kw_only=True)
class TableRate:
    """Right-continuous step function through (x, psi) pairs with increasing x."""

    points: tuple[tuple[Fraction, Fraction], ...]
    source: str = ""

    def __post_init__(self) -> None:
        if not self.points:
            raise ParseError(self.source, "empty rate table")
        xs = [x for x, _ in self.points]
        values = [v for _, v in self.points]
        if any(x <= 0 for x in xs) or any(v <= 0 for v in values):
            raise ParseError(self.source, "table entries must be positive")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ParseError(self.source, "x column must be strictly increasing")
        if any(a < b for a, b in zip(values, values[1:])):
            raise ParseError(self.source, "psi column must be non-increasing")

    @classmethod
    def from_csv(cls, path: str | Path) -> TableRate:
        path = Path(path)
        if not path.exists():
            raise MissingInput(path)
        points = []
        with path.open(newline="") as f:
            for row in csv.reader(f):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    points.append((Fraction(row[0].strip()), Fraction(row[1].strip())))
                except (ValueError, IndexError):
                    if points:
                        raise ParseError(",".join(row), f"bad row in {path}")
                    # header line
        return cls(points=tuple(points), source=str(path))

    def _step(self, x: Fraction) -> Fraction:
        value = self.points[0][1]
        for xi, vi in self.points:
            if xi > x:
                break
            value = vi
        return value

    def __call__(self, x: Interval | int | Fraction, prec: int | None = None) -> Interval:
        x = Interval.coerce(x)
        return Interval(self._step(x.hi), self._step(x.lo))

    def at_norm(self, n: int | Fraction, prec: int | None = None) -> Interval:
        n = Fraction(n)
        value = self.points[0][1]
        for xi, vi in self.points:
            if xi * xi > n:
                break
            value = vi
        return Interval.point(value)

    def x2_psi(self, x: Interval | int | Fraction, prec: int | None = None) -> Interval:
        x = Interval.coerce(x)
        return x.square() * self(x, prec)

    @property
    def is_exact(self) -> bool:
        return True

    def classify(self) -> RateClass:
        """Numeric estimates over the upper half of the grid, always flagged approximate."""
        tail = [(x, v) for x, v in self.points[len(self.points) // 2 :] if x > 1]
        if not tail:
            return RateClass(
                lower_order=Fraction(0), tau=INFINITY, small_o_x2=False, approximate=True
            )
        orders = [-math.log(v) / math.log(x) for x, v in tail]
        lower_order = min(orders)
        tau = max(float(x * x * v) for x, v in tail)
        return RateClass(
            lower_order=lower_order,
            tau=tau,
            small_o_x2=lower_order > 2,
            approximate=True,
        )

    def __str__(self) -> str:
        return f"table:{self.source}"


ApproxRate = Union[PowerLogRate, TableRate]


def parse_rate(token: str) -> ApproxRate:
    """Parse "c*x^-L", "c*x^-L*log^-B" (c optional) or "table:path.csv"."""
    token = token.strip()
    if token.startswith("table:"):
        return TableRate.from_csv(token[len("table:") :])
    m = _RATE_RE.match(token)
    if not m:
        raise ParseError(token, 'expected "c*x^-L", "c*x^-L*log^-B" or "table:path.csv"')
    try:
        return PowerLogRate(
            c=Fraction(m.group("c") or 1),
            lam=Fraction(m.group("lam")),
            beta=Fraction(m.group("beta") or 0),
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(token, str(exc))


def classify_rate(rate: ApproxRate) -> RateClass:
    return rate.classify()
