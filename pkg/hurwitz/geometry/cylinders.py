"""Cylinders C(u) = T_u(prototype set of u): regions, certified size bounds, separation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from loguru import logger

from hurwitz.approx.quality import distance_norm
from hurwitz.arith.balls import ComplexBall
from hurwitz.arith.gaussian import GaussInt, GaussRat
from hurwitz.arith.intervals import Interval, sqrt_interval
from hurwitz.exceptions import (
    MembershipUndecided,
    NotAdmissible,
    PreconditionViolated,
)
from hurwitz.geometry.circles import HALF, MobiusMap
from hurwitz.geometry.prototypes import (
    FullStatus,
    Verdict,
    is_admissible,
    is_full,
    prototype_set,
)
from hurwitz.geometry.regions import Box, Region
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.qpairs import q_pair

DIAMETER_GRIDS = (8, 16, 32)
MEMBER_GRID = 32
AREA_MIN_DEPTH = 3
AREA_MAX_DEPTH = 5
# relative padding that dominates float64 rounding of the rescaled pairwise maxima
FLOAT_PADDING = Fraction(1, 2**40)
SEPARATION_FACTOR = 9  # (3 |q|^2)^2

Point = Union[GaussRat, ComplexBall]


@dataclass(frozen=True, kw_only=True)
class CylinderMetrics:
    seq: DigitSeq
    q_norm: int
    diameter_lower: Fraction
    diameter_upper: Fraction
    area_inner: Fraction
    area_outer: Fraction
    grid: int

    @property
    def diameter_bound(self) -> Fraction:
        return Fraction(2, self.q_norm)

    @property
    def within_bound(self) -> bool:
        return self.diameter_upper <= self.diameter_bound

    @property
    def c0(self) -> Fraction:
        """Measured lower constant: diameter lower bound times |q|^2."""
        return self.diameter_lower * self.q_norm


@dataclass(frozen=True, kw_only=True)
class SeparationCheck:
    holds: bool
    margin: Interval  # 9 |q|^4 |z - p/q|^2, above 1 when separated

    @property
    def excess(self) -> Interval:
        return self.margin - 1


@dataclass(frozen=True, kw_only=True)
class DiameterCheck:
    digit: GaussInt
    diameter_upper: Fraction
    bound: Fraction  # 2 / (|b| - 1)^2, rounded down

    @property
    def holds(self) -> bool:
        return self.diameter_upper <= self.bound


def cylinder_region(seq: DigitSeq) -> Region:
    return prototype_set(seq).push(MobiusMap.of_word(seq))


def _cells(n: int) -> list[Box]:
    step = Fraction(1, n)
    return [
        (-HALF + i * step, -HALF + (i + 1) * step, -HALF + j * step, -HALF + (j + 1) * step)
        for i in range(n)
        for j in range(n)
    ]


def _pairwise_max(points: np.ndarray, radii: np.ndarray) -> float:
    if len(points) == 0:
        return 0.0
    distances = np.abs(points[:, None] - points[None, :])
    return float(np.max(distances + radii[:, None] + radii[None, :]))


def _scale_exponent(x: Fraction) -> int:
    return x.numerator.bit_length() - x.denominator.bit_length() if x else 0


def _disk_spread(centers: list[GaussRat], radii_sq: list[Fraction]) -> tuple[float, int]:
    """max |c_i - c_j| + r_i + r_j as (mantissa, e) with value = mantissa * 2^e.

    Offsets from the first centre are formed exactly and rescaled by a power of two
    before the float conversion. Every |offset| and every 2 r_i is at most the maximum,
    so the float rounding error is relative to the returned value whatever |q| is.
    """
    if not centers:
        return 0.0, 0
    origin = centers[0]
    offsets = [c - origin for c in centers]
    spread = max(max(abs(d.re), abs(d.im)) for d in offsets)
    e = _scale_exponent(spread) if spread else _scale_exponent(max(radii_sq)) // 2
    scale = Fraction(2) ** -e
    points = np.array([complex(float(d.re * scale), float(d.im * scale)) for d in offsets])
    radii = np.sqrt(np.array([float(r * scale * scale) for r in radii_sq]))
    return _pairwise_max(points, radii), e


def _diameter_upper(region: Region, mobius: MobiusMap, n: int) -> Fraction:
    """Cover the prototype set by the disks around n x n cells and bound their images."""
    centers, radii_sq = [], []
    half_diag_sq = 2 * Fraction(1, 2 * n) ** 2
    for box in _cells(n):
        if region.classify_box(box, closure=True) is False:
            continue
        x0, x1, y0, y1 = box
        center, radius_sq = mobius.disk_image(GaussRat((x0 + x1) / 2, (y0 + y1) / 2), half_diag_sq)
        centers.append(center)
        radii_sq.append(radius_sq)
    value, e = _disk_spread(centers, radii_sq)
    return Fraction(value) * Fraction(2) ** e * (1 + FLOAT_PADDING)


def _diameter_lower(region: Region, mobius: MobiusMap) -> Fraction:
    step = Fraction(1, MEMBER_GRID)
    members = []
    for i in range(MEMBER_GRID):
        for j in range(MEMBER_GRID):
            w = GaussRat(-HALF + i * step, -HALF + j * step)
            if region.contains(w):
                members.append(w)
    witness = region.find_witness()
    if witness is not None:
        members.append(witness)
    images = [mobius(z) for z in members]
    value, e = _disk_spread(images, [Fraction(0)] * len(images))
    return Fraction(value) * Fraction(2) ** e * (1 - FLOAT_PADDING)


def _jacobian_bounds(mobius: MobiusMap, box: Box) -> tuple[Fraction, Fraction]:
    """Bounds of |T'(w)|^2 = |det|^2 / |c w + d|^4 over the box."""
    c, d = mobius.c, mobius.d
    det_sq = Fraction(mobius.det.norm() ** 2)
    if not c:
        value = det_sq / Fraction(d.norm()) ** 2
        return value, value
    x0, x1, y0, y1 = box
    pole = GaussRat.ratio(-d, c)
    near = GaussRat(min(max(pole.re, x0), x1), min(max(pole.im, y0), y1))
    far = GaussRat(
        x0 if abs(x0 - pole.re) > abs(x1 - pole.re) else x1,
        y0 if abs(y0 - pole.im) > abs(y1 - pole.im) else y1,
    )
    d_min = (near - pole).norm() * c.norm()
    d_max = (far - pole).norm() * c.norm()
    if not d_min:
        raise PreconditionViolated("the pole of the map lies in the cylinder cell")
    return det_sq / d_max**2, det_sq / d_min**2


def _area_bounds(region: Region, mobius: MobiusMap) -> tuple[Fraction, Fraction]:
    inner = outer = Fraction(0)
    stack: list[tuple[Box, int]] = [((-HALF, HALF, -HALF, HALF), 0)]
    while stack:
        box, depth = stack.pop()
        status = region.classify_box(box, closure=True)
        if status is False:
            continue
        if depth < AREA_MIN_DEPTH or (status is None and depth < AREA_MAX_DEPTH):
            x0, x1, y0, y1 = box
            xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
            quarters = ((x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1))
            stack.extend((bx, depth + 1) for bx in quarters)
            continue
        x0, x1, y0, y1 = box
        cell_area = (x1 - x0) * (y1 - y0)
        low, high = _jacobian_bounds(mobius, box)
        if status:
            inner += cell_area * low
        outer += cell_area * high
    return inner, outer


def cylinder_metrics(seq: DigitSeq) -> CylinderMetrics:
    if is_admissible(seq) is not Verdict.YES:
        raise NotAdmissible(seq)
    region = prototype_set(seq)
    mobius = MobiusMap.of_word(seq)
    _, q, _, _ = q_pair(seq)
    bound = Fraction(2, q.norm())
    for grid in DIAMETER_GRIDS:
        upper = _diameter_upper(region, mobius, grid)
        if upper <= bound:
            break
    else:
        logger.warning(f"Diameter of C({seq}) not certified below 2/|q|^2 = {bound}")
    inner, outer = _area_bounds(region, mobius)
    return CylinderMetrics(
        seq=seq,
        q_norm=q.norm(),
        diameter_lower=_diameter_lower(region, mobius),
        diameter_upper=upper,
        area_inner=inner,
        area_outer=outer,
        grid=grid,
    )


def _outside_cylinder(seq: DigitSeq, z: Point) -> bool:
    region = cylinder_region(seq)
    if not isinstance(z, ComplexBall):
        return not region.contains(GaussRat.from_parts(z))
    re, im = z.re_interval(), z.im_interval()
    box = (max(re.lo, -HALF), min(re.hi, HALF), max(im.lo, -HALF), min(im.hi, HALF))
    if box[0] > box[1] or box[2] > box[3]:
        return True
    status = region.classify_box(box)
    if status is None:
        raise MembershipUndecided(z, seq)
    return not status


def full_cylinder_separation_check(seq: DigitSeq, z: Point) -> SeparationCheck:
    """Points outside a full cylinder stay 1/(3|q|^2) away from p/q."""
    if is_full(seq) is not FullStatus.FULL:
        raise PreconditionViolated(f"{seq} is not full")
    if not _outside_cylinder(seq, z):
        raise PreconditionViolated(f"{z} lies in C({seq})")
    p, q, _, _ = q_pair(seq)
    margin = distance_norm(z, GaussRat.ratio(p, q)) * (SEPARATION_FACTOR * q.norm() ** 2)
    holds = margin.gt(1)
    if holds is None:
        raise MembershipUndecided(z, seq)
    return SeparationCheck(holds=holds, margin=margin)


def level1_diameter_check(b: GaussInt | int) -> DiameterCheck:
    """diam C(b) <= 2 / (|b| - 1)^2 for a single digit b with |b| >= 2."""
    b = GaussInt.coerce(b)
    if b.norm() < 4:
        raise PreconditionViolated(f"need |b| >= 2, got {b}")
    seq = DigitSeq.of([b])
    region = prototype_set(seq)
    mobius = MobiusMap.of_word(seq)
    modulus = sqrt_interval(b.norm())
    bound = 2 / (modulus.hi - 1) ** 2
    for grid in DIAMETER_GRIDS:
        upper = _diameter_upper(region, mobius, grid)
        if upper <= bound:
            break
    return DiameterCheck(digit=b, diameter_upper=upper, bound=bound)


def bounding_disk(seq: DigitSeq) -> tuple[GaussRat, Interval]:
    """A disk holding C(seq): the image of |y|^2 <= 1/2 under T_seq, as (center, radius)."""
    center, radius_sq = MobiusMap.of_word(seq).disk_image(GaussRat(0), HALF)
    return center, sqrt_interval(radius_sq)


def distance_enclosure(seq: DigitSeq, target: GaussRat) -> Interval:
    """Enclosure of |z - target| over z in C(seq)."""
    center, radius = bounding_disk(seq)
    distance = sqrt_interval((center - target).norm())
    return Interval(max(distance.lo - radius.hi, Fraction(0)), distance.hi + radius.hi)
