from fractions import Fraction

import pytest
from hypothesis import given, settings

from hurwitz.arith.balls import ComplexBall, mpmath_source
from hurwitz.arith.gaussian import GaussInt, GaussRat
from hurwitz.exceptions import (
    AmbiguousRounding,
    DegenerateFraction,
    DivisionByZero,
    OutsideFundamentalDomain,
    PreconditionViolated,
)
from hurwitz.hcf import (
    DigitSeq,
    evaluate,
    expand_source,
    gauss_map,
    hcf_expand,
    mirror_check,
    qpair_of,
    tail_at,
)
from hurwitz.hcf.identities import (
    bracket_holds,
    check_prefix,
    concat_bounds_hold,
    ge_phi_multiple,
    phi_power,
)
from tests.strategies import fundamental_rationals

FIVE_TWELFTHS = GaussRat(Fraction(5, 12))
TWO_MINUS_I_OVER_5 = GaussRat(Fraction(2, 5), Fraction(-1, 5))


@pytest.mark.parametrize(
    "z, digits",
    [
        (GaussRat(0), ""),
        (FIVE_TWELFTHS, "2,3,-2"),
        (TWO_MINUS_I_OVER_5, "2+i"),
    ],
)
def test_hcf_expand(z, digits):
    expansion = hcf_expand(z)
    assert expansion.digits == DigitSeq.parse(digits)
    assert expansion.terminated
    assert evaluate(expansion.digits) == z


def test_hcf_expand_rejects_points_outside_square():
    with pytest.raises(OutsideFundamentalDomain):
        hcf_expand(GaussRat(Fraction(1, 2)))


def test_qpair_of_five_twelfths():
    trace = qpair_of(DigitSeq.parse("2,3,-2"))
    assert trace.p == (GaussInt(0), GaussInt(1), GaussInt(3), GaussInt(-5))
    assert trace.q == (GaussInt(1), GaussInt(2), GaussInt(7), GaussInt(-12))
    assert trace.determinant(3) == GaussInt(-1)
    assert trace.convergent(3) == FIVE_TWELFTHS


def test_qpair_of_empty_word():
    trace = qpair_of(DigitSeq())
    assert (trace.p_last, trace.q_last) == (GaussInt(0), GaussInt(1))
    assert (trace.p_prev, trace.q_prev) == (GaussInt(1), GaussInt(0))


def test_digit_alphabet():
    with pytest.raises(PreconditionViolated):
        DigitSeq.of([2, GaussInt(0, 1)])
    word = DigitSeq.parse("2,3,-2")
    assert word.parent == DigitSeq.parse("2,3")
    assert word.reversed() == DigitSeq.parse("-2,3,2")
    assert str(word + DigitSeq.parse("4")) == "2,3,-2,4"


@pytest.mark.parametrize(
    "digits, value",
    [
        ("2+i", TWO_MINUS_I_OVER_5),
        ("2,3,-2", FIVE_TWELFTHS),
        ("3,-2,-2", GaussRat(Fraction(5, 13))),
        ("-2,-2,3", GaussRat(Fraction(-5, 13))),
    ],
)
def test_evaluate(digits, value):
    assert evaluate(DigitSeq.parse(digits)) == value


def test_evaluate_degenerate():
    # (1+i)(-1+i) = -2, so the middle level evaluates to 1-i and cancels the first digit
    with pytest.raises(DegenerateFraction) as exc_info:
        evaluate(DigitSeq.parse("-1+i,1+i,-1+i"))
    assert exc_info.value.index == 1


def test_mirror_check():
    assert mirror_check(DigitSeq.parse("2,3,-2"))
    assert mirror_check(DigitSeq.parse("5"))
    trace = qpair_of(DigitSeq.parse("2,3,-2"))
    assert GaussRat.ratio(trace.q[2], trace.q[3]) == evaluate(DigitSeq.parse("-2,3,2"))


def test_gauss_map_and_tails():
    assert gauss_map(FIVE_TWELFTHS) == GaussRat(Fraction(2, 5))
    assert gauss_map(TWO_MINUS_I_OVER_5) == GaussRat(0)
    expansion = hcf_expand(FIVE_TWELFTHS)
    assert tail_at(expansion, 3) == GaussRat(0)
    assert tail_at(expansion, 2) == GaussRat(Fraction(-1, 2))
    with pytest.raises(DivisionByZero):
        gauss_map(GaussRat(0))


def test_expand_ball_source():
    expansion = expand_source(mpmath_source("sqrt(2)-1"), max_depth=10)
    assert expansion.digits == DigitSeq.of([2] * 10)
    assert not expansion.terminated
    assert expansion.precision >= 64
    assert isinstance(tail_at(expansion, 10), ComplexBall)


def test_expand_ball_reports_partial_expansion():
    # 1/(2/5) = 5/2 sits on a rounding boundary, so a blurred 5/12 stops after one digit
    ball = ComplexBall(Fraction(5, 12), Fraction(0), Fraction(1, 10**9))
    with pytest.raises(AmbiguousRounding) as exc_info:
        hcf_expand(ball, max_depth=5)
    assert exc_info.value.partial.digits == DigitSeq.parse("2")


def test_phi_power():
    # phi^4 = 3 phi + 2
    assert phi_power(4) == (3, 2)
    assert ge_phi_multiple(7, 3, 2, 1)
    assert not ge_phi_multiple(6, 3, 2, 1)


def test_bracket_and_concat_on_known_word():
    trace = qpair_of(DigitSeq.parse("2,3,-2"))
    assert bracket_holds(trace)
    assert concat_bounds_hold(DigitSeq.parse("2"), DigitSeq.parse("3,-2"))


@settings(max_examples=300, deadline=None)
@given(fundamental_rationals(1000))
def test_qpair_identities_on_expansions(z):
    expansion = hcf_expand(z)
    assert evaluate(expansion.digits) == z
    assert mirror_check(expansion.digits)
    results = check_prefix(z, expansion)
    assert all(results.values()), results


def test_expand_ball_source_escalates_precision():
    expansion = expand_source(mpmath_source("sqrt(2)-1"), max_depth=40, start_bits=32)
    assert expansion.digits == DigitSeq.of([2] * 40)
    assert expansion.precision > 32
