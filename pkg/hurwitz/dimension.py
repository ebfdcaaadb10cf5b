"""Box-counting and local-mass diagnostics for constructed families.

Nothing here is asserted: slopes and exponents are reported next to the dimensions the
constructions aim at, which are only reached in the limit of schedules far beyond
desk scale.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np
from loguru import logger

from hurwitz import config
from hurwitz.approx.rates import ApproxRate, classify_rate, parse_rate
from hurwitz.arith.gaussian import GaussRat
from hurwitz.constructions.schedules import ScheduleOx2, ScheduleTau, schedule_from_document
from hurwitz.constructions.tree import (
    CantorMeasure,
    LambdaFamily,
    Node,
    ProbeSample,
    load_family_dump,
    local_dimension_estimates,
    measure_build,
    resolution,
    sample_point,
)
from hurwitz.exceptions import DegenerateScales, MissingInput, PreconditionViolated
from hurwitz.utils.files import atomic_write_text, write_json

# lower left corner of the fundamental square
ORIGIN = (-0.5, -0.5)


@dataclass(frozen=True, kw_only=True)
class CoverSnapshot:
    level: int
    items: tuple[tuple[GaussRat, Fraction], ...]

    def __len__(self) -> int:
        return len(self.items)


def cover_from_nodes(nodes: list[Node], level: int | None = None) -> CoverSnapshot:
    """Balls (p/q, 2/|q|^2) of the deepest nodes, or of the members of one level."""
    level = level if level is not None else max(node.k for node in nodes)
    parents = {node.parent for node in nodes}
    chosen = [
        node
        for i, node in enumerate(nodes)
        if node.k == level and node.word and i not in parents
    ] or [node for node in nodes if node.k == level and node.word]
    items: dict[GaussRat, Fraction] = {}
    for node in chosen:
        center, radius = node.ball()
        items[center] = max(radius, items.get(center, Fraction(0)))
    return CoverSnapshot(level=level, items=tuple(items.items()))


def _check_scales(scales: Iterable[Fraction | int | str]) -> list[Fraction]:
    scales = [Fraction(s) for s in scales]
    for s in scales:
        if s <= 0 or s > 1 or s.numerator != 1 or s.denominator & (s.denominator - 1):
            raise PreconditionViolated(f"scale {s} is not a dyadic 2^-j")
    return scales


def box_count(cover: CoverSnapshot, scales: Iterable[Fraction | int | str]) -> list[int]:
    """Occupied cells of the dyadic grid of side s anchored at -1/2 - i/2, per scale."""
    scales = _check_scales(scales)
    if not cover.items:
        return [0 for _ in scales]
    centers = np.array([[float(c.re), float(c.im)] for c, _ in cover.items])
    radii = np.array([float(r) for _, r in cover.items])
    counts = []
    for s in scales:
        side = float(s)
        cells = s.denominator
        lo = np.floor((centers - radii[:, None] - ORIGIN) / side)
        hi = np.floor((centers + radii[:, None] - ORIGIN) / side)
        lo = np.clip(lo, 0, cells - 1).astype(int)
        hi = np.clip(hi, 0, cells - 1).astype(int)
        occupied = set()
        for (x0, y0), (x1, y1) in zip(lo, hi):
            occupied.update((x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1))
        counts.append(len(occupied))
    return counts


def reference_values(rate: ApproxRate) -> dict[str, str]:
    """Dimensions predicted from the rate class, as exact strings where possible."""
    rate_class = classify_rate(rate)
    values = {"packing": "2"}
    lam, tau = rate_class.lower_order, rate_class.tau
    if rate_class.small_o_x2:
        if isinstance(lam, float):
            hausdorff = min(4 / lam, 2)
        else:
            hausdorff = min(Fraction(4) / lam, Fraction(2))
        values["hausdorff"] = str(hausdorff)
    if isinstance(tau, Fraction) and 0 < tau < Fraction(1, 2):
        values["d_tau"] = str(2 - tau / (1 - 2 * tau))
    return values


@dataclass(frozen=True, kw_only=True)
class DimensionReport:
    scales: tuple[Fraction, ...]
    counts: tuple[int, ...]
    slope: float
    raw_slope: float
    residual: float
    references: dict[str, str] = field(default_factory=dict)
    provenance: str = ""

    def to_document(self) -> dict:
        return {
            "scales": [str(s) for s in self.scales],
            "counts": list(self.counts),
            "slope": self.slope,
            "raw_slope": self.raw_slope,
            "residual": self.residual,
            "references": self.references,
            "provenance": self.provenance,
        }

    def to_csv(self) -> str:
        rows = ["scale,count", *(f"{s},{n}" for s, n in zip(self.scales, self.counts))]
        return "\n".join(rows) + "\n"


def fit_dimension(
    scales: Iterable[Fraction | int | str],
    counts: Iterable[int],
    references: dict[str, str] | None = None,
    provenance: str = "",
) -> DimensionReport:
    """Least-squares slope of log N(s) against -log s, clipped to [0, 2]."""
    pairs = sorted(zip((Fraction(s) for s in scales), counts), reverse=True)
    if len(pairs) < 3:
        raise DegenerateScales(f"need at least 3 scales, got {len(pairs)}")
    if len({s for s, _ in pairs}) != len(pairs):
        raise DegenerateScales("scales repeat")
    if pairs[0][0] / pairs[-1][0] < 10:
        raise DegenerateScales("scales span less than a decade")
    if any(n <= 0 for _, n in pairs):
        raise DegenerateScales("empty boxes at some scale")
    x = np.array([-math.log(s) for s, _ in pairs])
    y = np.array([math.log(n) for _, n in pairs])
    design = np.vstack([x, np.ones_like(x)]).T
    (raw_slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.sum((design @ np.array([raw_slope, intercept]) - y) ** 2))
    report = DimensionReport(
        scales=tuple(s for s, _ in pairs),
        counts=tuple(n for _, n in pairs),
        slope=float(np.clip(raw_slope, 0.0, 2.0)),
        raw_slope=float(raw_slope),
        residual=residual,
        references=references or {},
        provenance=provenance,
    )
    logger.info(
        f"Box-counting slope {report.slope:.4f} (residual {residual:.3g}) vs {report.references}"
    )
    return report


@dataclass(frozen=True, kw_only=True)
class SweepReport:
    samples: tuple[tuple[ProbeSample, ...], ...]
    liminf: float | None
    limsup: float | None
    by_regime: dict[str, tuple[float, float]]
    expected: dict[str, float]

    def to_document(self) -> dict:
        return {
            "points": [[s.to_document() for s in point] for point in self.samples],
            "liminf": self.liminf,
            "limsup": self.limsup,
            "by_regime": {k: list(v) for k, v in self.by_regime.items()},
            "expected": self.expected,
        }


def local_exponent_sweep(
    measure: CantorMeasure,
    points: Iterable[GaussRat],
    radii: Iterable[Fraction | int],
    schedule: ScheduleOx2 | ScheduleTau | None = None,
) -> SweepReport:
    radii = [Fraction(r) for r in radii]
    schedule = schedule if schedule is not None else measure.family.schedule
    samples = tuple(
        tuple(local_dimension_estimates(measure, z, radii, schedule)) for z in points
    )
    flat = [s for point in samples for s in point if s.radius < 1]
    lows = [s.exponent[0] for s in flat if math.isfinite(s.exponent[0])]
    highs = [s.exponent[1] for s in flat if math.isfinite(s.exponent[1])]
    by_regime: dict[str, tuple[float, float]] = {}
    for s in flat:
        lo, hi = by_regime.get(s.regime, (math.inf, -math.inf))
        by_regime[s.regime] = (min(lo, s.exponent[0]), max(hi, s.exponent[1]))
    return SweepReport(
        samples=samples,
        liminf=min(lows) if lows else None,
        limsup=max(highs) if highs else None,
        by_regime=by_regime,
        expected=schedule.expected_exponents() if schedule is not None else {},
    )


def family_from_nodes(nodes: list[Node], construction: str, schedule=None) -> LambdaFamily:
    family = LambdaFamily(construction=construction, schedule=schedule)
    for node in nodes:
        family.add(node)
    return family


def load_run(run_dir: str | Path) -> tuple[LambdaFamily, dict]:
    run_dir = Path(run_dir)
    families = run_dir / config.FAMILIES_NAME
    manifest_path = run_dir / config.MANIFEST_NAME
    for path in (families, manifest_path):
        if not path.exists():
            raise MissingInput(path)
    manifest = json.loads(manifest_path.read_text())
    rate = parse_rate(manifest["rate"])
    schedule = schedule_from_document(manifest["schedule"], rate)
    family = family_from_nodes(load_family_dump(families), manifest["kind"], schedule)
    return family, manifest


def default_scales(cover: CoverSnapshot, count: int = 8) -> list[Fraction]:
    """Dyadic scales from 1/2 down to the smallest ball radius, at most `count` of them."""
    smallest = min((r for _, r in cover.items), default=Fraction(1, 2))
    finest = max(1, min(40, math.floor(-math.log2(smallest))))
    levels = sorted({max(1, round(1 + i * (finest - 1) / (count - 1))) for i in range(count)})
    return [Fraction(1, 2**j) for j in levels]


def dimension_run(
    run_dir: str | Path,
    scales: Iterable[Fraction | int | str] | None = None,
    points: int = 3,
    seed: int | None = None,
) -> tuple[DimensionReport, SweepReport]:
    """Box counts and local exponents for a construction run; writes CSV and JSON next to it."""
    run_dir = Path(run_dir)
    family, manifest = load_run(run_dir)
    cover = cover_from_nodes(family.nodes)
    scales = list(scales) if scales is not None else default_scales(cover)
    counts = box_count(cover, scales)
    report = fit_dimension(
        scales,
        counts,
        references=manifest.get("references", reference_values(family.schedule.rate)),
        provenance=f"{manifest['kind']} run, depth {manifest['depth']}, seed {manifest['seed']}",
    )
    measure = measure_build(family)
    seed = manifest["seed"] if seed is None else seed
    centers = [sample_point(family, seed + i).center for i in range(points)]
    floor = resolution(family)
    radii = [Fraction(1, 2**j) for j in range(1, 64) if Fraction(1, 2**j) >= floor]
    sweep = local_exponent_sweep(measure, centers, radii, family.schedule)
    atomic_write_text(run_dir / config.DIMENSION_CSV_NAME, report.to_csv())
    write_json(
        run_dir / config.DIMENSION_JSON_NAME,
        {"box_counting": report.to_document(), "local_exponents": sweep.to_document()},
    )
    return report, sweep
