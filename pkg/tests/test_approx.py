import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.approx import (
    Claim,
    PowerLogRate,
    Regime,
    TableRate,
    classify_rate,
    exact_order_report,
    is_best_approximation,
    is_good_approximation,
    legendre_bounds,
    legendre_test,
    legendre_threshold,
    parse_rate,
)
from hurwitz.arith.balls import mpmath_source
from hurwitz.arith.gaussian import GaussInt, GaussRat, nearest_gauss_int_exact
from hurwitz.arith.intervals import Interval
from hurwitz.exceptions import MissingInput, ParseError
from hurwitz.hcf import expand_source, hcf_expand
from tests.strategies import fundamental_rationals

FIVE_TWELFTHS = GaussRat(Fraction(5, 12))


@pytest.mark.parametrize(
    "token, lower_order, tau, small_o",
    [
        ("x^-3", 3, 0, True),
        ("1/32*x^-2", 2, Fraction(1, 32), False),
        ("x^-2*log^-1", 2, 0, True),
        ("2*x^-1", 1, math.inf, False),
    ],
)
def test_classify_rate(token, lower_order, tau, small_o):
    rate_class = classify_rate(parse_rate(token))
    assert rate_class.lower_order == lower_order
    assert rate_class.tau == tau
    assert rate_class.small_o_x2 is small_o
    assert not rate_class.approximate


@pytest.mark.parametrize("token", ["x^2", "0*x^-2", "c*x^-2", "x^-2*log^2", "1/0*x^-2"])
def test_parse_rate_rejects(token):
    with pytest.raises(ParseError):
        parse_rate(token)


def test_rate_evaluation():
    rate = parse_rate("1/32*x^-2")
    assert rate(10) == Interval.point(Fraction(1, 3200))
    assert rate.at_norm(100) == Interval.point(Fraction(1, 3200))
    assert rate.x2_psi(10) == Interval.point(Fraction(1, 32))
    # sqrt(2)^-3 is irrational, so only an enclosure is available; its square is 1/8
    odd = parse_rate("x^-3")
    value = odd.at_norm(2)
    assert 0 < value.width < Fraction(1, 2**50)
    assert value.lo**2 <= Fraction(1, 8) <= value.hi**2


@settings(deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 10), max_value=100),
    st.fractions(min_value=0, max_value=50),
)
def test_rate_is_non_increasing(x, step):
    rate = PowerLogRate(c=Fraction(3), lam=Fraction(5, 2), beta=Fraction(1))
    lower, upper = rate(x + step), rate(x)
    assert lower.lo <= upper.hi


def test_table_rate(tmp_path):
    path = tmp_path / "psi.csv"
    path.write_text("x,psi\n1,1/2\n10,1/200\n100,1/20000\n")
    rate = parse_rate(f"table:{path}")
    assert isinstance(rate, TableRate)
    assert rate(5) == Interval.point(Fraction(1, 2))
    assert rate(10) == Interval.point(Fraction(1, 200))
    # |q|^2 = 99 sits below x = 10
    assert rate.at_norm(99) == Interval.point(Fraction(1, 2))
    assert rate.at_norm(100) == Interval.point(Fraction(1, 200))
    assert classify_rate(rate).approximate


def test_table_rate_rejects_increasing_values(tmp_path):
    path = tmp_path / "psi.csv"
    path.write_text("1,1/2\n10,1\n")
    with pytest.raises(ParseError):
        TableRate.from_csv(path)
    with pytest.raises(MissingInput):
        TableRate.from_csv(tmp_path / "missing.csv")


@pytest.mark.parametrize(
    "p, q, expected",
    [
        # first convergent of 5/12
        (GaussInt(1), GaussInt(2), True),
        # 1/2 beats 0/2 at the same denominator
        (GaussInt(0), GaussInt(2), False),
        (GaussInt(-5), GaussInt(-12), True),
    ],
)
def test_good_approximation(p, q, expected):
    assert is_good_approximation(FIVE_TWELFTHS, p, q) is expected


@pytest.mark.parametrize(
    "p, q, expected",
    [
        (GaussInt(-5), GaussInt(-12), True),
        # no denominator of norm below 1
        (GaussInt(0), GaussInt(1), True),
        # 1/2 beats 1/3 with a smaller denominator
        (GaussInt(1), GaussInt(3), False),
    ],
)
def test_best_approximation(p, q, expected):
    assert is_best_approximation(FIVE_TWELFTHS, p, q) is expected


@settings(max_examples=60, deadline=None)
@given(fundamental_rationals(300))
def test_every_convergent_is_good(z):
    for p, q, _ in hcf_expand(z).convergents():
        assert is_good_approximation(z, p, q)


def test_legendre_threshold():
    assert legendre_threshold() == (Fraction(1, 2), Fraction(1, 4))


@settings(max_examples=40, deadline=None)
@given(fundamental_rationals(500))
def test_legendre_soundness(z):
    expansion = hcf_expand(z)
    last = expansion.trace.q_last.norm()
    bound = min(60, last - 1)
    for re in range(-8, 9):
        for im in range(-8, 9):
            q = GaussInt(re, im)
            if not q or q.norm() > bound:
                continue
            p = nearest_gauss_int_exact(z * q)
            result = legendre_test(expansion, p, q)
            assert result.sound
            if not p:
                assert result.claim is Claim.NO_CLAIM
            bounds = legendre_bounds(z, expansion, p, q)
            if bounds is not None:
                assert bounds.quadratic_bound and bounds.half_t_bound


def test_legendre_flags_convergents_of_irrational():
    expansion = expand_source(mpmath_source("sqrt(2)-1", "sqrt(3)-2"), max_depth=8)
    for n in range(1, 7):
        p, q = expansion.trace.p[n], expansion.trace.q[n]
        result = legendre_test(expansion, p, q)
        assert result.is_convergent
        assert result.sound


def test_legendre_far_point_makes_no_claim():
    expansion = hcf_expand(FIVE_TWELFTHS)
    result = legendre_test(expansion, GaussInt(1), GaussInt(3))
    assert result.claim is Claim.NO_CLAIM


def test_exact_order_report():
    expansion = hcf_expand(FIVE_TWELFTHS)
    report = exact_order_report(expansion, parse_rate("x^-2"), window_k=2)
    assert [entry.regime for entry in report] == [
        # 1/12 < psi(2)/2 = 1/8
        Regime.BELOW_WINDOW,
        # 1/98 <= 1/84 < 1/49
        Regime.WINDOW,
        Regime.BELOW_WINDOW,
    ]
    far = exact_order_report(expansion, parse_rate("1/1000*x^-2"), window_k=2)
    assert far[0].regime is Regime.ABOVE
    assert exact_order_report(hcf_expand(GaussRat(0)), parse_rate("x^-2"), 2) == []


def test_exact_order_report_bounded_digits_above_small_o_rate():
    expansion = expand_source(mpmath_source("sqrt(2)-1"), max_depth=10)
    report = exact_order_report(expansion, parse_rate("x^-4"), window_k=3)
    assert all(entry.regime is Regime.ABOVE for entry in report)
