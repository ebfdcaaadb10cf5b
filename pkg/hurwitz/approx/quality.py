"""Approximation quality of Gaussian rationals: good/best approximations, the
quantitative Legendre criterion and the exact-order classification of convergents."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from hurwitz.approx.rates import ApproxRate
from hurwitz.arith.balls import ComplexBall
from hurwitz.arith.gaussian import GaussInt, GaussRat, nearest_gauss_int_exact
from hurwitz.arith.intervals import Interval
from hurwitz.exceptions import PrecisionExhausted, PreconditionViolated
from hurwitz.hcf.expansion import Expansion

Point = Union[GaussRat, ComplexBall]

LEGENDRE_CONSTANT = 4


class Claim(str, enum.Enum):
    MUST_BE_CONVERGENT = "MUST_BE_CONVERGENT"
    NO_CLAIM = "NO_CLAIM"


class Regime(str, enum.Enum):
    WINDOW = "WINDOW"  # (1 - 1/k) psi <= |z - p/q| < psi
    ABOVE = "ABOVE"  # |z - p/q| >= psi
    BELOW_WINDOW = "BELOW_WINDOW"  # |z - p/q| < (1 - 1/k) psi
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True, kw_only=True)
class LegendreResult:
    claim: Claim
    is_convergent: bool
    error_sq: Interval

    @property
    def sound(self) -> bool:
        return self.claim is Claim.NO_CLAIM or self.is_convergent


@dataclass(frozen=True, kw_only=True)
class LegendreBounds:
    n: int
    t_sq: Fraction
    quadratic_bound: bool | None  # |z - p/q| >= (1 - t - t^2)/|q|^2
    half_t_bound: bool | None  # |z - p/q| >= t/(2|q|^2)


@dataclass(frozen=True, kw_only=True)
class OrderEntry:
    n: int
    p: GaussInt
    q: GaussInt
    regime: Regime
    error_sq: Interval
    psi: Interval


def error_norm(z: Point, p: GaussInt, q: GaussInt) -> Interval:
    """|q z - p|^2, exact for rationals and an enclosure for balls."""
    if isinstance(z, ComplexBall):
        return (z * q - p).norm_interval()
    return Interval.point((GaussRat.from_parts(z) * q - p).norm())


def distance_norm(z: Point, w: GaussRat) -> Interval:
    """|z - w|^2."""
    if isinstance(z, ComplexBall):
        return (z - w).norm_interval()
    return Interval.point((GaussRat.from_parts(z) - w).norm())


def _lattice_disk(radius_sq: int) -> Iterator[GaussInt]:
    """Nonzero lattice points of norm <= radius_sq up to units (re > 0, im >= 0)."""
    bound = math.isqrt(radius_sq)
    for re in range(1, bound + 1):
        im_bound = math.isqrt(radius_sq - re * re)
        for im in range(0, im_bound + 1):
            yield GaussInt(re, im)


def _nearest_candidates(w: Point) -> list[GaussInt]:
    if isinstance(w, ComplexBall):
        re, im = w.re_interval(), w.im_interval()
        res = range(math.floor(re.lo), math.floor(re.hi) + 2)
        ims = range(math.floor(im.lo), math.floor(im.hi) + 2)
        return [GaussInt(a, b) for a in res for b in ims]
    return [nearest_gauss_int_exact(w)]


def _min_error(z: Point, q: GaussInt) -> Interval:
    w = z * q
    errors = [error_norm(z, p, q) for p in _nearest_candidates(w)]
    return Interval(min(e.lo for e in errors), min(e.hi for e in errors))


def _beats(z: Point, q: GaussInt, target: Interval, strict_denominator: bool) -> bool:
    """True when some p'/q' with |q'| within range strictly improves on `target`."""
    radius_sq = q.norm() - 1 if strict_denominator else q.norm()
    for q_prime in _lattice_disk(radius_sq):
        best = _min_error(z, q_prime)
        if strict_denominator:
            # best approximation: any |q'z - p'| <= |qz - p| is a witness
            decided = best.le(target)
        else:
            decided = best.lt(target)
        if decided is None:
            raise PrecisionExhausted(
                z.prec if isinstance(z, ComplexBall) else 0, "approximation quality"
            )
        if decided:
            return True
    return False


def is_good_approximation(z: Point, p: GaussInt, q: GaussInt) -> bool:
    """For all p', q' with 0 < |q'| <= |q|: |q'z - p'| >= |qz - p|."""
    if not q:
        raise PreconditionViolated("q must be nonzero")
    return not _beats(z, q, error_norm(z, p, q), strict_denominator=False)


def is_best_approximation(z: Point, p: GaussInt, q: GaussInt) -> bool:
    """For all p', q' with 0 < |q'| < |q|: |q'z - p'| > |qz - p|."""
    if not q:
        raise PreconditionViolated("q must be nonzero")
    return not _beats(z, q, error_norm(z, p, q), strict_denominator=True)


def legendre_threshold() -> tuple[Fraction, Fraction]:
    """The minimum over t in (0,1) of max(1 - t - t^2, t/2) and where it is attained.

    The first branch decreases and the second increases, so the minimum sits at the
    crossing 2t^2 + 3t - 2 = 0.
    """
    a, b, c = 2, 3, -2
    disc = b * b - 4 * a * c
    root = math.isqrt(disc)
    if root * root != disc:
        raise ValueError("crossing point is irrational")
    t = Fraction(-b + root, 2 * a)
    value = 1 - t - t * t
    if value != t / 2:
        raise ValueError("branches do not cross at the computed point")
    return t, value


def legendre_test(expansion: Expansion, p: GaussInt, q: GaussInt) -> LegendreResult:
    """Certify whether |z - p/q| < 1/(4|q|^2) and, if so, whether p/q is a convergent."""
    if not q:
        raise PreconditionViolated("q must be nonzero")
    trace = expansion.trace
    if not expansion.terminated and q.norm() >= trace.q_last.norm():
        raise PreconditionViolated(
            f"|q|^2 = {q.norm()} is not below the last computed denominator"
        )
    target = GaussRat.ratio(p, q)
    error_sq = distance_norm(expansion.source, target)
    is_convergent = any(
        trace.convergent(n) == target for n in range(1, len(trace.q))
    )
    if not p:
        return LegendreResult(
            claim=Claim.NO_CLAIM, is_convergent=is_convergent, error_sq=error_sq
        )
    scaled = error_sq * (LEGENDRE_CONSTANT**2 * q.norm() ** 2)
    inside = scaled.lt(1)
    if inside is None:
        raise PrecisionExhausted(expansion.precision or 0, "Legendre window")
    claim = Claim.MUST_BE_CONVERGENT if inside else Claim.NO_CLAIM
    return LegendreResult(claim=claim, is_convergent=is_convergent, error_sq=error_sq)


def _sqrt_sum_ge(d_sq: Fraction, t_sq: Fraction, r: Fraction) -> bool:
    """sqrt(d_sq) + sqrt(t_sq) >= r, decided exactly."""
    if r <= 0:
        return True
    # sqrt(d_sq) >= r - t
    if t_sq >= r * r:
        return True
    s = r * r + t_sq - d_sq  # need 2 r t >= s
    if s <= 0:
        return True
    return 4 * r * r * t_sq >= s * s


def legendre_bounds(
    z: GaussRat, expansion: Expansion, p: GaussInt, q: GaussInt
) -> LegendreBounds | None:
    """The two lower bounds used for the Legendre criterion.

    Applies when |q_{n-1}| <= |q| < |q_n| and p/q differs from p_{n-1}/q_{n-1};
    returns None otherwise. With t = |q|/|q_n| and d = |z - p/q||q|^2 both bounds are
    decided exactly on squares.
    """
    trace = expansion.trace
    nq = q.norm()
    target = GaussRat.ratio(p, q)
    for n in range(1, len(trace.q)):
        if trace.q[n - 1].norm() <= nq < trace.q[n].norm():
            break
    else:
        return None
    if trace.convergent(n - 1) == target:
        return None
    t_sq = Fraction(nq, trace.q[n].norm())
    d_sq = (GaussRat.from_parts(z) - target).norm() * nq * nq
    return LegendreBounds(
        n=n,
        t_sq=t_sq,
        quadratic_bound=_sqrt_sum_ge(d_sq, t_sq, 1 - t_sq),
        half_t_bound=4 * d_sq >= t_sq,
    )


def exact_order_report(
    expansion: Expansion, rate: ApproxRate, window_k: int
) -> list[OrderEntry]:
    """Classify each convergent against the window [(1 - 1/k) psi(|q|), psi(|q|))."""
    if window_k < 2:
        raise PreconditionViolated("window_k must be at least 2")
    factor = Fraction(window_k - 1, window_k)
    trace = expansion.trace
    entries = []
    for n in range(1, len(trace.q)):
        p, q = trace.p[n], trace.q[n]
        error_sq = distance_norm(expansion.source, GaussRat.ratio(p, q))
        psi = rate.at_norm(q.norm())
        psi_sq = psi.square()
        above = error_sq.ge(psi_sq)
        below = error_sq.lt(psi_sq * (factor * factor))
        if above is True:
            regime = Regime.ABOVE
        elif below is True:
            regime = Regime.BELOW_WINDOW
        elif above is False and below is False:
            regime = Regime.WINDOW
        else:
            regime = Regime.UNDECIDED
        entries.append(
            OrderEntry(n=n, p=p, q=q, regime=regime, error_sq=error_sq, psi=psi)
        )
    return entries
