import json
from fractions import Fraction

import pytest

from hurwitz.approx.rates import parse_rate
from hurwitz.arith.gaussian import GaussRat
from hurwitz.constructions import build_lambda, measure_build, sample_point, schedule_build
from hurwitz.constructions.manifest import build_manifest, write_run
from hurwitz.constructions.tree import local_dimension_estimates
from hurwitz.dimension import (
    CoverSnapshot,
    box_count,
    cover_from_nodes,
    default_scales,
    dimension_run,
    fit_dimension,
    load_run,
    local_exponent_sweep,
    reference_values,
)
from hurwitz.exceptions import DegenerateScales, MissingInput, PreconditionViolated
from tests.factories import SmallOOverridesFactory

DYADIC = [Fraction(1, 2**j) for j in range(1, 7)]
TINY = Fraction(1, 10**6)


@pytest.fixture(scope="module")
def family():
    schedule = schedule_build(parse_rate("x^-4"), "1/5", 2, overrides=SmallOOverridesFactory())
    return build_lambda(schedule, seed=3)


@pytest.fixture
def written_run(family, run_dir):
    measure = measure_build(family)
    write_run(run_dir, family, build_manifest(family, measure, seed=3))
    return run_dir


def grid_cover(side: int) -> CoverSnapshot:
    """Tiny balls at the centers of the cells of a side x side grid on the square."""
    coords = [Fraction(2 * i + 1, 2 * side) - Fraction(1, 2) for i in range(side)]
    items = tuple((GaussRat(x, y), TINY) for x in coords for y in coords)
    return CoverSnapshot(level=1, items=items)


def test_single_ball_has_slope_zero():
    cover = CoverSnapshot(level=1, items=((GaussRat(Fraction(1, 10), Fraction(1, 10)), TINY),))
    scales = [Fraction(1, 2**j) for j in range(1, 11)]
    counts = box_count(cover, scales)
    assert counts == [1] * 10
    report = fit_dimension(scales, counts)
    assert abs(report.slope) < 1e-9


def test_full_grid_has_slope_two():
    counts = box_count(grid_cover(64), DYADIC)
    assert counts == [4**j for j in range(1, 7)]
    report = fit_dimension(DYADIC, counts)
    assert report.slope == pytest.approx(2.0)
    assert report.residual == pytest.approx(0.0, abs=1e-9)


def test_fit_ignores_scale_order():
    counts = box_count(grid_cover(16), DYADIC)
    forward = fit_dimension(DYADIC, counts)
    backward = fit_dimension(DYADIC[::-1], counts[::-1])
    assert forward.slope == pytest.approx(backward.slope)
    assert forward.scales == backward.scales


@pytest.mark.parametrize(
    "scales,counts",
    [
        ([Fraction(1, 2), Fraction(1, 64)], [1, 4]),
        ([Fraction(1, 2), Fraction(1, 2), Fraction(1, 64)], [1, 1, 4]),
        ([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)], [1, 2, 4]),
        ([Fraction(1, 2), Fraction(1, 8), Fraction(1, 64)], [1, 0, 4]),
    ],
)
def test_fit_rejects_degenerate_scales(scales, counts):
    with pytest.raises(DegenerateScales):
        fit_dimension(scales, counts)


def test_box_count_needs_dyadic_scales():
    with pytest.raises(PreconditionViolated):
        box_count(grid_cover(2), ["1/3"])


def test_family_box_counts_are_consistent(family):
    cover = cover_from_nodes(family.nodes)
    assert cover.level == 2
    assert 0 < len(cover) <= 9
    scales = [Fraction(1, 2**j) for j in range(1, 13)]
    counts = box_count(cover, scales)
    for coarse, fine in zip(counts, counts[1:]):
        assert coarse <= fine
    for s, n in zip(scales, counts):
        assert n <= s.denominator**2


def test_default_scales_are_dyadic(family):
    scales = default_scales(cover_from_nodes(family.nodes))
    assert scales[0] == Fraction(1, 2)
    assert all(s.numerator == 1 and s.denominator & (s.denominator - 1) == 0 for s in scales)
    assert scales == sorted(scales, reverse=True)


@pytest.mark.parametrize(
    "rate,expected",
    [
        ("x^-4", {"packing": "2", "hausdorff": "1"}),
        ("x^-3", {"packing": "2", "hausdorff": "4/3"}),
        ("1/32*x^-2", {"packing": "2", "d_tau": "59/30"}),
        ("x^-1", {"packing": "2"}),
    ],
)
def test_reference_values(make_rate, rate, expected):
    assert reference_values(make_rate(rate)) == expected


def test_single_point_sweep_matches_estimates(family):
    measure = measure_build(family)
    point = sample_point(family)
    radii = [Fraction(1, 10), Fraction(1, 1000)]
    sweep = local_exponent_sweep(measure, [point.center], radii)
    assert list(sweep.samples[0]) == local_dimension_estimates(measure, point.center, radii)
    assert sweep.liminf <= sweep.limsup
    assert set(sweep.expected) == {"a", "b", "c"}


def test_load_run(written_run, family):
    loaded, manifest = load_run(written_run)
    assert [n.word for n in loaded.nodes] == [n.word for n in family.nodes]
    assert loaded.schedule.n == family.schedule.n
    assert manifest["kind"] == "small-o"


def test_dimension_run_writes_reports(written_run):
    report, sweep = dimension_run(written_run, points=2)
    assert 0.0 <= report.slope <= 2.0
    assert report.references == {"hausdorff": "1", "packing": "2"}
    assert len(sweep.samples) == 2
    document = json.loads((written_run / "dimension.json").read_text())
    assert document["box_counting"]["counts"] == list(report.counts)
    assert (written_run / "dimension.csv").read_text().startswith("scale,count\n")


def test_dimension_run_needs_a_run(run_dir):
    with pytest.raises(MissingInput):
        dimension_run(run_dir)
