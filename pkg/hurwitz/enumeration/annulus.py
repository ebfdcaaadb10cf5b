"""Digit annuli J1 within I(u;k) within J2 around a full word u."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from hurwitz import config
from hurwitz.approx.rates import ApproxRate
from hurwitz.arith.gaussian import GaussInt
from hurwitz.arith.intervals import Interval, sqrt_interval
from hurwitz.enumeration.lattice import annulus_count, annulus_points, sample_annulus
from hurwitz.exceptions import PreconditionViolated, RateTooLarge
from hurwitz.geometry.prototypes import FullStatus, is_full
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import q_pair

RHO_MIN = 6


@dataclass(frozen=True, kw_only=True)
class DigitAnnulus:
    u: DigitSeq
    k: int
    rate: ApproxRate
    rho: Interval
    j1: tuple[Fraction, Fraction]  # open bounds on |b|^2
    j2: tuple[Fraction, Fraction]
    j1_count: int
    j2_count: int
    certified: tuple[GaussInt, ...]
    sampled: bool

    @property
    def count_bounds(self) -> tuple[Fraction, Fraction]:
        """rho^2/k and 3 pi rho^2, the bounds on #I(u;k) once rho exceeds rho_k."""
        return self.rho.lo**2 / self.k, 3 * Fraction(math.pi) * self.rho.hi**2

    @property
    def asymptotic_count(self) -> float:
        return math.pi * (2 * self.k - 1) * float(self.rho.mid) ** 2 / (self.k - 1) ** 2

    def counts_within_bounds(self) -> bool:
        lower, upper = self.count_bounds
        return lower < self.j1_count and self.j2_count < upper

    def summary(self) -> dict:
        lower, upper = self.count_bounds
        return {
            "u": str(self.u),
            "k": self.k,
            "rate": str(self.rate),
            "rho": [str(self.rho.lo), str(self.rho.hi)],
            "j1_count": self.j1_count,
            "j2_count": self.j2_count,
            "certified": len(self.certified),
            "sampled": self.sampled,
            "count_bounds": [float(lower), float(upper)],
            "asymptotic_count": self.asymptotic_count,
            "above_rho_k": self.rho.lo > config.RHO_K,
        }


def annulus_rho(u: DigitSeq, rate: ApproxRate) -> Interval:
    """rho = (|q(u)|^2 psi(|q(u)|))^-1."""
    _, q, _, _ = q_pair(u)
    return (rate.at_norm(q.norm()) * q.norm()).inverse()


def digit_annulus(
    u: DigitSeq,
    k: int,
    rate: ApproxRate,
    cap: int | None = None,
    rng: random.Random | None = None,
) -> DigitAnnulus:
    """The digits b whose cylinders C(ub) are certified in the window of u.

    J1 is materialized when it has at most `cap` points and sampled uniformly otherwise.
    """
    if k < 2:
        raise PreconditionViolated("k must be at least 2")
    if is_full(u) is not FullStatus.FULL:
        raise PreconditionViolated(f"{u} is not full")
    rho = annulus_rho(u, rate)
    if rho.gt(RHO_MIN) is not True:
        raise RateTooLarge(rho)
    stretch = Fraction(k, k - 1)
    j1 = ((rho.hi + 2) ** 2, (stretch * rho.lo - 2) ** 2)
    j2 = ((rho.lo - 2) ** 2, (stretch * rho.hi + 2) ** 2)
    j1_count = annulus_count(*j1)
    cap = cap if cap is not None else config.FAMILY_CAP
    if cap is not None and j1_count > cap:
        logger.warning(f"Sampling {cap} of the {j1_count} digits of J1 below [{u}]")
        certified = tuple(sample_annulus(*j1, cap, rng or random.Random(config.DEFAULT_SEED)))
        sampled = True
    else:
        certified = tuple(annulus_points(*j1))
        sampled = False
    return DigitAnnulus(
        u=u,
        k=k,
        rate=rate,
        rho=rho,
        j1=j1,
        j2=j2,
        j1_count=j1_count,
        j2_count=annulus_count(*j2),
        certified=certified,
        sampled=sampled,
    )


def window_holds(annulus: DigitAnnulus, b: GaussInt, prec: int | None = None) -> bool:
    """Certify (1-1/k) psi <= |z - p/q| < psi on C(ub) through the bracket

    |q|^-2 (|b|+2)^-1 < |z - p/q| < |q|^-2 (|b|-2)^-1.
    """
    prec = prec or config.PRECISION_START_BITS
    _, q, _, _ = q_pair(annulus.u)
    modulus = sqrt_interval(b.norm(), prec)
    if modulus.lo <= 2:
        return False
    psi = annulus.rate.at_norm(q.norm(), prec)
    lower = ((modulus + 2) * q.norm()).inverse()
    upper = ((modulus - 2) * q.norm()).inverse()
    factor = Fraction(annulus.k - 1, annulus.k)
    return lower.ge(psi * factor) is True and upper.le(psi) is True


def six_bound_holds(annulus: DigitAnnulus, b: GaussInt) -> bool:
    """|z - p/q| < 1/(6|q|^2) on C(ub), from |b| - 2 > 6."""
    return b.norm() > 64


def continuant_sandwich_holds(annulus: DigitAnnulus, b: GaussInt) -> bool:
    """rho |q(u)|/2 < |q(ub)| < 3 rho |q(u)|, compared on squares."""
    _, q, _, _ = q_pair(annulus.u)
    _, q_ub, _, _ = q_pair(annulus.u.append(b))
    n, n_ub = q.norm(), q_ub.norm()
    return annulus.rho.hi**2 * n / 4 < n_ub < 9 * annulus.rho.lo**2 * n
