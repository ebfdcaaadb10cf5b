from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hurwitz.arith.balls import ComplexBall, mpmath_source, nearest_gauss_int
from hurwitz.arith.gaussian import (
    GaussInt,
    GaussRat,
    canonical_unit,
    in_fundamental_domain,
    norm_sq,
)
from hurwitz.arith.intervals import Interval, log_interval, pow_interval, sqrt_interval
from hurwitz.arith.tokens import parse_digits, parse_gauss_int, parse_gauss_rat
from hurwitz.exceptions import (
    AmbiguousRounding,
    BallContainsZero,
    DivisionByZero,
    ParseError,
)
from tests.strategies import fundamental_rationals, gauss_ints


@pytest.mark.parametrize(
    "z, expected",
    [
        (GaussRat(0), GaussInt(0, 0)),
        # half-open convention: 1/2 rounds up so that 1/2 - 1 = -1/2 is in the square
        (GaussRat(Fraction(1, 2)), GaussInt(1, 0)),
        # (3+2i)/(1+i) = 5/2 - i/2
        (GaussRat.ratio(GaussInt(3, 2), GaussInt(1, 1)), GaussInt(3, 0)),
        (GaussRat(Fraction(-1, 2), Fraction(-1, 2)), GaussInt(0, 0)),
    ],
)
def test_nearest_gauss_int(z, expected):
    assert nearest_gauss_int(z) == expected
    assert in_fundamental_domain(z - nearest_gauss_int(z))


@pytest.mark.parametrize(
    "z, expected",
    [
        (GaussRat(0), True),
        (GaussRat(Fraction(-1, 2), Fraction(-1, 2)), True),
        (GaussRat(Fraction(1, 2)), False),
        (GaussRat(Fraction(2, 5), Fraction(-1, 5)), True),
        (GaussRat(0, Fraction(1, 2)), False),
    ],
)
def test_in_fundamental_domain(z, expected):
    assert in_fundamental_domain(z) is expected


def test_field_ops():
    assert norm_sq(GaussInt(1, 2)) == 5
    assert GaussRat.from_parts(GaussInt(2, 1)).inverse() == GaussRat(
        Fraction(2, 5), Fraction(-1, 5)
    )
    with pytest.raises(DivisionByZero):
        GaussRat(0).inverse()
    with pytest.raises(ZeroDivisionError):
        GaussInt(1, 1) / GaussInt(0, 0)


@given(
    st.integers(-10**6, 10**6),
    st.integers(-10**6, 10**6),
    st.integers(-1000, 1000),
    st.integers(-1000, 1000),
)
def test_nearest_gauss_int_lands_in_square(a, b, c, d):
    if c == 0 and d == 0:
        return
    z = GaussRat.ratio(GaussInt(a, b), GaussInt(c, d))
    assert in_fundamental_domain(z - nearest_gauss_int(z))


@given(gauss_ints(100), gauss_ints(100).filter(bool))
def test_canonical_form_is_structural(num, den):
    z = GaussRat.ratio(num, den)
    w = GaussRat.ratio(num * GaussInt(0, 1), den * GaussInt(0, 1))
    assert z == w
    assert hash(z) == hash(w)
    assert (z.num, z.den) == (w.num, w.den)
    assert z.den.re > 0 and z.den.im >= 0
    assert GaussRat.ratio(z.num, z.den) == z
    # normalising twice is the same as normalising once
    again = GaussRat.ratio(z.num, z.den)
    assert (again.num, again.den) == (z.num, z.den)


def test_canonical_unit_is_unique():
    # 1+i and 1-i differ by the unit -i; only one has re > 0 and im >= 0
    a, b = GaussInt(1, 1), GaussInt(1, -1)
    assert a * canonical_unit(a) == b * canonical_unit(b) == GaussInt(1, 1)


def test_gauss_rat_str():
    assert str(GaussRat.ratio(GaussInt(2, -1), GaussInt(5, 0))) == "(2-i)/5"
    assert str(GaussRat(Fraction(5, 12))) == "5/12"
    assert str(GaussRat(3, -1)) == "3-i"


@given(
    fundamental_rationals(200),
    fundamental_rationals(200),
    st.sampled_from(["add", "sub", "mul", "div"]),
)
def test_ball_enclosure(c1, c2, op):
    r1, r2 = Fraction(1, 1000), Fraction(1, 3000)
    b1 = ComplexBall.around(c1 + GaussInt(1, 0), r1)
    b2 = ComplexBall.around(c2 + GaussInt(2, 1), r2)
    z1 = c1 + GaussInt(1, 0) + GaussRat(r1 / 2, r1 / 3)
    z2 = c2 + GaussInt(2, 1) - GaussRat(r2 / 3, r2 / 2)
    result = {
        "add": (b1 + b2, z1 + z2),
        "sub": (b1 - b2, z1 - z2),
        "mul": (b1 * b2, z1 * z2),
        "div": (b1 / b2, z1 / z2),
    }[op]
    ball, exact = result
    assert ball.contains(exact)


def test_ball_inverse_of_ball_around_zero():
    with pytest.raises(BallContainsZero):
        ComplexBall(Fraction(1, 100), Fraction(0), Fraction(1, 50)).inverse()


def test_ball_division_radius_monotone():
    narrow = ComplexBall(Fraction(3), Fraction(1), Fraction(1, 1000))
    wide = ComplexBall(Fraction(3), Fraction(1), Fraction(1, 100))
    assert (1 / wide).radius >= (1 / narrow).radius


def test_ball_rounding_straddles_boundary():
    ball = ComplexBall(Fraction(1, 2), Fraction(0), Fraction(1, 10**6))
    with pytest.raises(AmbiguousRounding):
        nearest_gauss_int(ball)


def test_mpmath_source_encloses_value():
    ball = mpmath_source("sqrt(2)-1")(128)
    re = ball.re_interval()
    # sqrt(2) - 1 is irrational, so a sound enclosure has positive width
    assert 0 < ball.radius < Fraction(1, 2**120)
    assert (re.lo + 1) ** 2 <= 2 <= (re.hi + 1) ** 2
    assert ball.im_interval().contains(0)


@pytest.mark.parametrize("expr", ["1/3", "0.1", "-phi + 2", "pi/4", "2**(1/2)"])
def test_mpmath_source_accepts_whitelisted_expressions(expr):
    ball = mpmath_source(expr)(96)
    assert ball.radius < Fraction(1, 2**80)


@pytest.mark.parametrize("expr", ["__import__('os')", "x", "sqrt(2, 3)", "lambda: 1", "[1]"])
def test_mpmath_source_rejects_other_syntax(expr):
    with pytest.raises(ParseError):
        mpmath_source(expr)(64)


def test_interval_helpers():
    assert sqrt_interval(Fraction(9, 4)) == Interval.point(Fraction(3, 2))
    root2 = sqrt_interval(2)
    assert root2.lo * root2.lo <= 2 <= root2.hi * root2.hi
    assert Interval(Fraction(1), Fraction(2)).lt(3) is True
    assert Interval(Fraction(1), Fraction(2)).lt(Fraction(3, 2)) is None
    # ln 10 = 2.302585092994045684...
    log10 = log_interval(10)
    assert Fraction(2302585092994045, 10**15) < log10.lo < log10.hi
    assert log10.hi < Fraction(2302585092994046, 10**15)


@pytest.mark.parametrize("n", [2, 3, 10, 97, 399])
def test_log_and_pow_enclosures_tighten_with_precision(n):
    coarse, fine = log_interval(n, 64), log_interval(n, 256)
    assert coarse.lo <= fine.lo < fine.hi <= coarse.hi
    assert fine.width < Fraction(1, 2**240)
    power = pow_interval(n, Fraction(-3, 2), 128)
    # (n^(-3/2))^2 = 1/n^3 exactly
    assert power.lo**2 <= Fraction(1, n**3) <= power.hi**2
    assert 0 < power.width < Fraction(1, 2**100)


@pytest.mark.parametrize(
    "token, expected",
    [
        ("3", GaussInt(3, 0)),
        ("-2+3i", GaussInt(-2, 3)),
        ("4-i", GaussInt(4, -1)),
        ("-5i", GaussInt(0, -5)),
        ("i", GaussInt(0, 1)),
        ("(1+i)", GaussInt(1, 1)),
    ],
)
def test_parse_gauss_int(token, expected):
    assert parse_gauss_int(token) == expected


def test_parse_tokens():
    assert parse_gauss_rat("5/12") == GaussRat(Fraction(5, 12))
    assert parse_gauss_rat("2-i/5") == GaussRat(Fraction(2, 5), Fraction(-1, 5))
    assert parse_digits("2,3,-2") == (GaussInt(2), GaussInt(3), GaussInt(-2))
    assert parse_digits("") == ()
    with pytest.raises(ParseError):
        parse_gauss_int("2+")
    with pytest.raises(DivisionByZero):
        parse_gauss_rat("1/0")
