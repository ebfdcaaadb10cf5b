from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hurwitz.arith.gaussian import GaussRat
from hurwitz.arith.intervals import Interval, from_mpi, iv_precision
from hurwitz.exceptions import NotAdmissible, PreconditionViolated, WindowUnreachable
from hurwitz.geometry import FullStatus, is_full
from hurwitz.geometry.prototypes import prototype_set
from hurwitz.hcf import DigitSeq, evaluate, hcf_expand
from hurwitz.real_line.admissible import admissible_real, full_real, tail_bound
from hurwitz.real_line.cylinders import last_digit_claim_holds, real_cylinder
from hurwitz.real_line.decompose import BoundedExpansion, bounded_sum_decompose, shift_repair
from hurwitz.real_line.padding import pad_to_window
from hurwitz.real_line.reversal import (
    offending_indices,
    reversal_contracts,
    reverse_fix,
    reverse_fix_traced,
    two_two_identity_holds,
)
from hurwitz.real_line.window import atb_point_ratio, atb_window_holds, build_atb
from tests.strategies import real_digits


def word(*digits) -> DigitSeq:
    return DigitSeq.of(digits)


@pytest.mark.parametrize(
    "seq, admissible",
    [
        ((2, -2), False),
        ((2, 2), True),
        # 2 followed by a negative digit
        ((2, 2, -3), False),
        ((3, -2, -2), True),
        ((-3, 2, 2), True),
        ((), True),
    ],
)
def test_admissible_real(seq, admissible):
    assert admissible_real(word(*seq)) is admissible


@pytest.mark.parametrize(
    "seq, full",
    [
        ((2, 2, 3), True),
        # last digit 2, criterion does not apply
        ((3, 2), False),
        ((2, -2, 3), False),
    ],
)
def test_full_real(seq, full):
    assert full_real(word(*seq)) is full


def test_full_real_agrees_with_region_engine():
    digits = [d for d in range(-4, 5) if abs(d) >= 2]
    for a in digits:
        for b in digits:
            for c in (-3, 3, 4):
                seq = word(a, b, c)
                if full_real(seq):
                    assert prototype_set(seq).is_square, seq


@pytest.mark.parametrize("seq", [word(3, 2), word(2, 2, 5), word(3, -2, -2), word(4, 3, -2)])
def test_prototype_depends_on_last_digit(seq):
    assert last_digit_claim_holds(seq)


@pytest.mark.parametrize(
    "seq, bound",
    [
        (word(3, 5, -2), Fraction(1, 2)),
        (word(2), Fraction(1)),
        (word(-7, 2), Fraction(1, 6)),
    ],
)
def test_tail_bound(seq, bound):
    assert tail_bound(seq) == bound
    assert abs(evaluate(seq).re) < bound


@settings(max_examples=100, deadline=None)
@given(st.lists(real_digits(6), min_size=1, max_size=6).map(lambda ds: DigitSeq(tuple(ds))))
def test_tail_bound_holds_for_real_words(seq):
    bound = tail_bound(seq)
    assert evaluate(seq).norm() < bound**2


def test_tail_bound_needs_a_word():
    with pytest.raises(PreconditionViolated):
        tail_bound(DigitSeq())


@pytest.mark.parametrize(
    "seq, interval",
    [
        (word(3), Interval(Fraction(2, 7), Fraction(2, 5))),
        # prototype (0, 1/2) after a final 2
        (word(2), Interval(Fraction(2, 5), Fraction(1, 2))),
        (word(-2), Interval(Fraction(-1, 2), Fraction(-2, 5))),
    ],
)
def test_real_cylinder(seq, interval):
    assert real_cylinder(seq) == interval


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(49, 100), max_denominator=500))
def test_real_points_lie_in_their_cylinders(x):
    digits = hcf_expand(GaussRat(x)).digits
    for n in range(1, min(len(digits), 5) + 1):
        assert real_cylinder(digits[:n]).contains(x)


def test_real_cylinder_rejects_inadmissible_words():
    with pytest.raises(NotAdmissible):
        real_cylinder(word(2, -2))


def test_reverse_fix_example():
    u = word(2, 2, -3)
    v = reverse_fix(u)
    assert v == word(3, -2, -2)
    assert evaluate(u.reversed()) == evaluate(v.reversed()) == GaussRat(Fraction(-5, 13))
    check = reversal_contracts(u, v, [DigitSeq(), word(3), word(-4, 2)], rewrites=1)
    assert check.holds


def test_reverse_fix_keeps_admissible_words():
    u = word(3, 3, -4)
    assert reverse_fix(u) == u


def test_reverse_fix_mirrored_case():
    u = word(-2, -2, 3)
    v = reverse_fix(u)
    assert v == word(-3, 2, 2)
    assert reversal_contracts(u, v, [DigitSeq(), word(5)], rewrites=1).holds


def test_reverse_fix_cascading_rewrites():
    # the first rewrite leaves a new offending pair in the tail
    u = word(-2, -2, 3, -3)
    reversal = reverse_fix_traced(u)
    assert reversal.word == word(-3, 3, -2, -2)
    assert reversal.rewrites == 2
    assert len(offending_indices(u.as_ints())) == 1
    check = reversal_contracts(u, reversal.word, [DigitSeq(), word(4)], reversal.rewrites)
    assert check.holds
    wrong_parity = reversal_contracts(u, reversal.word, [DigitSeq()], rewrites=1)
    assert not wrong_parity.matrix


@pytest.mark.parametrize(
    "u",
    [
        # u_1 u_2 < 0
        word(2, -3, 3),
        # too short
        word(3),
        # reverse (-2, 2, 3, 3) is not admissible
        word(3, 3, 2, -2),
    ],
)
def test_reverse_fix_preconditions(u):
    with pytest.raises(PreconditionViolated):
        reverse_fix(u)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(real_digits(6), min_size=2, max_size=8).map(lambda ds: DigitSeq(tuple(ds))),
    st.lists(real_digits(6), max_size=3).map(lambda ds: DigitSeq(tuple(ds))),
)
def test_reverse_fix_contracts(u, w):
    ints = u.as_ints()
    assume(ints[0] * ints[1] > 0 and admissible_real(u.reversed()))
    reversal = reverse_fix_traced(u)
    v = reversal.word
    assert reversal_contracts(u, v, [DigitSeq(), w], reversal.rewrites).holds
    assert len(offending_indices(v.as_ints())) == 0


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_two_two_identity(x, y):
    assert two_two_identity_holds(x, y)


def _assert_decomposition(result: BoundedExpansion, precision=Fraction(1, 2**40)):
    assert result.digits_within_bound()
    assert result.alpha_in_range()
    assert result.contains_target()
    assert result.sum_interval.width <= precision
    assert admissible_real(result.alpha) and admissible_real(result.beta)


def test_decompose_zero():
    result = bounded_sum_decompose(0)
    assert (result.t, result.alpha, result.beta) == (0, DigitSeq(), DigitSeq())
    assert result.sum_interval == Interval.point(0)


@pytest.mark.parametrize(
    "x",
    [Fraction(7, 10), Fraction(-13, 7), Fraction(100, 3), Fraction(1, 2), Fraction(-5, 11)],
)
def test_decompose_rationals(x):
    result = bounded_sum_decompose(x)
    _assert_decomposition(result)
    assert result.checks() == {
        "digit_bound": True,
        "alpha_range": True,
        "contains": True,
        "words_cover": True,
    }


def test_decompose_known_witness_passes_checks():
    # 7/10 = 0 + [0; 3, 3] + [0; 3, -2]
    witness = BoundedExpansion(
        x=Interval.point(Fraction(7, 10)),
        t=0,
        alpha=word(3, 3),
        beta=word(3, -2),
        alpha_interval=Interval.point(evaluate(word(3, 3)).re),
        beta_interval=Interval.point(evaluate(word(3, -2)).re),
        bound=29,
    )
    assert witness.alpha_interval.lo == Fraction(3, 10)
    assert witness.beta_interval.lo == Fraction(2, 5)
    assert all(witness.checks().values())


def test_decompose_pi_ball():
    with iv_precision(96):
        x = from_mpi(mpmath.iv.pi)
    result = bounded_sum_decompose(x)
    _assert_decomposition(result)
    assert result.t == 3
    document = result.to_document()
    assert document["checks"]["contains"]


def test_shift_repair_moves_negative_summands():
    negative = BoundedExpansion(
        x=Interval.point(Fraction(-4, 5)),
        t=0,
        alpha=word(-3),
        beta=word(-3),
        alpha_interval=Interval(Fraction(-2, 5), Fraction(-2, 5)),
        beta_interval=Interval(Fraction(-2, 5), Fraction(-2, 5)),
        bound=29,
    )
    repaired = shift_repair(negative)
    assert repaired.t == -1
    assert repaired.shifted
    assert repaired.alpha_interval == Interval.point(Fraction(1, 10))
    assert repaired.alpha == word(10)
    assert repaired.contains_target()
    assert repaired.alpha_in_range()
    assert repaired.words_exact
    assert repaired.words_cover()


def test_shift_repair_flags_prefix_words():
    width = Fraction(1, 1000)
    negative = BoundedExpansion(
        x=Interval(Fraction(-4, 5), Fraction(-4, 5) + width),
        t=0,
        alpha=word(-3),
        beta=word(-3),
        alpha_interval=Interval(Fraction(-2, 5), Fraction(-2, 5) + width),
        beta_interval=Interval.point(Fraction(-2, 5)),
        bound=29,
    )
    repaired = shift_repair(negative)
    # 1/10 + 1/2000 expands as 10, -20, ... and only the first cylinder covers the interval
    assert repaired.alpha == word(10)
    assert repaired.alpha_interval == Interval(Fraction(1, 10), Fraction(1, 10) + width)
    assert not repaired.words_exact
    assert repaired.words_cover()
    document = repaired.to_document()
    assert document["words_exact"] is False
    assert document["checks"]["words_cover"]
    assert document["checks"]["contains"]


TAU = Fraction(1, 32)


@pytest.fixture(scope="module")
def atb():
    return build_atb(Fraction(3, 4) * TAU, Fraction(5, 6) * TAU)


def test_build_atb_contracts(atb):
    assert 3 <= atb.t < Fraction(3 * 128 + 3, 3 * 3)  # 1/zeta + 1 = 131/3
    assert atb.a.as_ints()[-1] > 0
    assert atb.checks() == {"t_range": True, "full": True, "digit_bound": True, "window": True}
    assert is_full(atb.word) is FullStatus.FULL


@pytest.mark.parametrize("w", [DigitSeq(), word(3), word(5, -3), word(4, 2, 3)])
def test_build_atb_window_on_continuations(atb, w):
    assert is_full(w) is FullStatus.FULL
    assert atb_window_holds(atb, w)
    ratio = atb_point_ratio(atb, w)
    assert atb.zeta**2 < ratio < atb.xi**2


def test_build_atb_rejects_wide_window():
    with pytest.raises(PreconditionViolated):
        build_atb(Fraction(1, 10), Fraction(1, 3))


def test_pad_to_window():
    padding = pad_to_window(word(3), 1000, Fraction(1, 4))
    assert padding.v == word(3, 4, 4, 4)
    assert padding.q_norm == 771**2
    assert 750**2 <= padding.q_norm <= 1000**2
    again = pad_to_window(word(3), 1000, Fraction(1, 4))
    assert again.v == padding.v


def test_pad_to_window_with_suffix():
    w = word(2, 2)
    padding = pad_to_window(word(3), 5000, Fraction(1, 5), w)
    assert 4000**2 <= padding.q_norm <= 5000**2
    assert set(padding.v.as_ints()) <= {3, 4}


@pytest.mark.parametrize(
    "n, w",
    [
        # |q(u w)| = 16 already exceeds N
        (10, word(5)),
        # the padded values jump from 55 to 109
        (100, DigitSeq()),
    ],
)
def test_pad_to_window_unreachable(n, w):
    with pytest.raises(WindowUnreachable):
        pad_to_window(word(3), n, Fraction(1, 4), w)
