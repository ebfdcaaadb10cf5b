import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hurwitz.arith.balls import ComplexBall
from hurwitz.arith.gaussian import ONE, ZERO, GaussInt, GaussRat
from hurwitz.arith.intervals import sqrt_lower
from hurwitz.enumeration import enumerate_full
from hurwitz.exceptions import NotAdmissible, PreconditionViolated
from hurwitz.geometry import (
    FullStatus,
    GenCircle,
    MobiusMap,
    Region,
    Verdict,
    cylinder_metrics,
    cylinder_region,
    bounding_disk,
    distance_enclosure,
    full_cylinder_separation_check,
    is_admissible,
    is_full,
    is_regular,
    level1_cylinder_region,
    level1_diameter_check,
    prototype_set,
)
from hurwitz.geometry.cylinders import _cells, _diameter_upper
from hurwitz.geometry.templates import region_document, render_region_svg
from hurwitz.hcf import DigitSeq, hcf_expand, q_pair
from hurwitz.real_line.admissible import admissible_real
from tests.strategies import digit_words, fundamental_rationals

INVERSION = MobiusMap(ZERO, ONE, ONE, ZERO)


def word(*digits) -> DigitSeq:
    return DigitSeq.of(digits)


@pytest.mark.parametrize(
    "line, center",
    [
        # Re w = 1/2
        (GenCircle.make(0, 1, Fraction(-1, 2)), GaussRat(1)),
        # Im w = 1/2
        (GenCircle.make(0, GaussInt(0, 1), Fraction(-1, 2)), GaussRat(0, -1)),
    ],
)
def test_inversion_maps_edge_lines_to_unit_circles(line, center):
    image = INVERSION.push(line)
    assert not image.is_line
    assert image.center() == center
    assert image.radius_sq() == 1


def test_identity_push_keeps_constraint():
    circle = GenCircle.make(3, GaussInt(1, -2), -1, strict=True)
    assert MobiusMap.identity().push(circle) == circle


def test_square_edges_use_half_open_convention():
    square = Region.square()
    assert square.contains(GaussRat(Fraction(-1, 2), Fraction(-1, 2)))
    assert not square.contains(GaussRat(Fraction(1, 2), 0))
    assert not square.contains(GaussRat(0, Fraction(1, 2)))


@settings(max_examples=80, deadline=None)
@given(
    digit_words(bound=5, max_size=3),
    st.integers(-4, 4),
    st.integers(-4, 4),
    st.integers(-4, 4),
    st.integers(-4, 4),
    st.booleans(),
    fundamental_rationals(60),
)
def test_push_preserves_constraint_sign(seq, a, b_re, b_im, c, strict, z):
    assume(a or b_re or b_im)
    mobius = MobiusMap.of_word(seq)
    assume(mobius.pole() != z)
    circle = GenCircle.make(a, GaussInt(b_re, b_im), c, strict)
    image = mobius.push(circle)
    before, after = circle.value(z), image.value(mobius(z))
    assert (before > 0) == (after > 0)
    assert (before == 0) == (after == 0)
    assert image.strict is circle.strict


def test_level1_region_of_two():
    region = level1_cylinder_region(GaussInt(2))
    circles = {(c.center(), c.radius_sq()) for c in region.constraints if not c.is_line}
    assert (GaussRat(Fraction(1, 3)), Fraction(1, 9)) in circles
    assert (GaussRat(Fraction(1, 5)), Fraction(1, 25)) in circles
    # 1/z = 9/4 rounds to 2, 1/z = 5/2 rounds to 3
    assert region.contains(GaussRat(Fraction(4, 9)))
    assert not region.contains(GaussRat(Fraction(2, 5)))


@pytest.mark.parametrize(
    "digit, center, side",
    [
        # closed ball B(-1, 1) removed
        (2, GaussRat(-1), "exterior >"),
        # open ball B(1, 1) removed
        (-2, GaussRat(1), "exterior >="),
    ],
)
def test_prototype_sets_of_two(digit, center, side):
    region = prototype_set(word(digit))
    assert len(region.constraints) == 1
    (constraint,) = region.constraints
    assert constraint.center() == center
    assert constraint.radius_sq() == 1
    assert constraint.side() == side


def test_fullness_matches_digit_norm_exhaustively():
    for re in range(-6, 7):
        for im in range(-6, 7):
            b = GaussInt(re, im)
            if b.norm() <= 1:
                continue
            assert prototype_set(word(b)).is_square is (b.norm() >= 8), b


@pytest.mark.parametrize(
    "seq, status",
    [
        (word(3), FullStatus.FULL),
        (word(2), FullStatus.NOT_FULL),
        (word(GaussInt(2, 2)), FullStatus.FULL),
        (word(GaussInt(2, 1)), FullStatus.NOT_FULL),
        (word(3, 3, 3), FullStatus.FULL),
        (word(GaussInt(3, 1), 4, GaussInt(0, -3)), FullStatus.FULL),
    ],
)
def test_is_full(seq, status):
    assert is_full(seq) is status


def test_concatenation_of_full_words_stays_full():
    assert prototype_set(word(3, 3, 3)).is_square
    assert prototype_set(word(GaussInt(2, 2), -3, GaussInt(0, 4))).is_square


@pytest.mark.parametrize(
    "seq, verdict",
    [
        (word(2, -2), Verdict.NO),
        (word(2, 2), Verdict.YES),
        (word(3, -2), Verdict.YES),
        (word(2, -3), Verdict.NO),
        (word(GaussInt(1, 1)), Verdict.YES),
        (word(2), Verdict.YES),
        (DigitSeq(), Verdict.YES),
    ],
)
def test_is_admissible(seq, verdict):
    assert is_admissible(seq) is verdict


def test_region_engine_agrees_with_real_sign_pattern():
    digits = [b for b in range(-5, 6) if abs(b) >= 2]
    for a in digits:
        for b in digits:
            seq = word(a, b)
            assert prototype_set(seq).empty is (not admissible_real(seq)), seq


def test_equal_prototypes_stay_equal_after_common_suffix():
    assert prototype_set(word(3)) == prototype_set(word(4))
    assert prototype_set(word(3, 2)) == prototype_set(word(4, 2))
    assert prototype_set(word(3, GaussInt(2, 1), -2)) == prototype_set(
        word(GaussInt(5, 5), GaussInt(2, 1), -2)
    )


def test_is_regular():
    assert is_regular(word(2, 2)) is Verdict.YES
    assert is_regular(word(2, -2)) is Verdict.NO


def test_cylinder_metrics_of_three():
    metrics = cylinder_metrics(word(3))
    assert metrics.q_norm == 9
    assert metrics.within_bound
    assert 0 < metrics.diameter_lower <= metrics.diameter_upper <= Fraction(2, 9)
    assert metrics.c0 > 0
    assert 0 < metrics.area_inner <= metrics.area_outer
    assert metrics.area_outer <= Fraction(math.pi) / 81


def test_cylinder_metrics_of_empty_word():
    metrics = cylinder_metrics(DigitSeq())
    assert metrics.diameter_lower ** 2 <= 2
    assert metrics.diameter_upper ** 2 >= 2
    assert metrics.diameter_upper - Fraction(math.sqrt(2)) < Fraction(1, 10**6)
    assert metrics.area_inner == metrics.area_outer == 1


def test_diameter_cover_is_tight_for_long_words():
    # |q|^2 exceeds 10^12, well below float resolution at the cylinder's position
    seq = DigitSeq.of([3] * 12)
    region, mobius = prototype_set(seq), MobiusMap.of_word(seq)
    upper = _diameter_upper(region, mobius, 4)

    half_diag_sq = 2 * Fraction(1, 8) ** 2
    disks = [
        mobius.disk_image(GaussRat((x0 + x1) / 2, (y0 + y1) / 2), half_diag_sq)
        for x0, x1, y0, y1 in _cells(4)
        if region.classify_box((x0, x1, y0, y1), closure=True) is not False
    ]
    radii = [sqrt_lower(r_sq, 128) for _, r_sq in disks]
    exact = max(
        sqrt_lower((ci - cj).norm(), 128) + radii[i] + radii[j]
        for i, (ci, _) in enumerate(disks)
        for j, (cj, _) in enumerate(disks)
        if i <= j
    )
    assert exact <= upper <= exact * (1 + Fraction(1, 2**30))


def test_cylinder_metrics_over_full_family():
    family = enumerate_full(3, 5)
    sweep = [w for w in family.members if q_pair(w)[1].norm() <= 2500]
    assert sweep
    for w in sweep:
        assert is_regular(w) is Verdict.YES
        metrics = cylinder_metrics(w)
        assert 0 < metrics.diameter_lower <= metrics.diameter_upper
        assert metrics.within_bound, w
        assert metrics.diameter_upper <= Fraction(2, metrics.q_norm)
        assert metrics.c0 > 0


def test_cylinder_metrics_rejects_inadmissible_words():
    with pytest.raises(NotAdmissible):
        cylinder_metrics(word(2, -2))


@settings(max_examples=40, deadline=None)
@given(fundamental_rationals(200))
def test_points_lie_in_cylinders_of_their_prefixes(z):
    digits = hcf_expand(z).digits
    for n in range(1, min(len(digits), 4) + 1):
        assert cylinder_region(digits[:n]).contains(z)


def test_separation_outside_full_cylinder():
    result = full_cylinder_separation_check(word(3), GaussRat(Fraction(-1, 4)))
    assert result.holds
    # 9 * 81 * (7/12)^2
    assert result.margin.lo == Fraction(35721, 144)
    assert result.excess == result.margin - 1
    far = full_cylinder_separation_check(word(4), GaussRat(Fraction(-9, 20), Fraction(9, 20)))
    assert far.holds
    ball = ComplexBall.around(GaussRat(Fraction(-1, 4)), Fraction(1, 1000))
    assert full_cylinder_separation_check(word(3), ball).holds


@pytest.mark.parametrize(
    "seq, z",
    [
        # not full
        (word(2), GaussRat(Fraction(-1, 4))),
        # 1/z = 3 lies in C(3)
        (word(3), GaussRat(Fraction(1, 3))),
    ],
)
def test_separation_preconditions(seq, z):
    with pytest.raises(PreconditionViolated):
        full_cylinder_separation_check(seq, z)


def test_region_outputs():
    region = prototype_set(word(2))
    document = region_document(region, title="F_2")
    assert document["base"] == "[-1/2,1/2)^2"
    assert document["constraints"] == [{"A": "-1", "B": "-2", "C": "0", "side": "exterior >"}]
    svg = render_region_svg(region, title="F_2")
    assert svg.startswith("<svg")
    assert "<circle" in svg
    assert "<title>F_2</title>" in svg


@pytest.mark.parametrize("b", [3, -2, GaussInt(2, 2), 5, GaussInt(4, -3), GaussInt(0, 7)])
def test_level1_diameter_bound(b):
    check = level1_diameter_check(b)
    assert check.holds
    assert check.diameter_upper > 0


def test_level1_diameter_needs_a_digit():
    with pytest.raises(PreconditionViolated):
        level1_diameter_check(GaussInt(1, 1))


@settings(max_examples=40, deadline=None)
@given(fundamental_rationals(300))
def test_bounding_disks_hold_their_points(z):
    digits = hcf_expand(z).digits
    for n in range(1, min(len(digits), 4) + 1):
        prefix = digits[:n]
        center, radius = bounding_disk(prefix)
        assert (z - center).norm() <= radius.hi**2
        p, q, _, _ = q_pair(prefix)
        enclosure = distance_enclosure(prefix, GaussRat.ratio(p, q))
        distance_sq = (z - GaussRat.ratio(p, q)).norm()
        assert enclosure.lo**2 <= distance_sq <= enclosure.hi**2
