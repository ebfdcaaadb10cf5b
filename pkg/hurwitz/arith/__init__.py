from hurwitz.arith.balls import (
    BallSource,
    ComplexBall,
    constant_source,
    in_fundamental_domain_ball,
    mpmath_source,
    nearest_gauss_int,
)
from hurwitz.arith.gaussian import (
    HALF,
    I,
    ONE,
    UNITS,
    ZERO,
    GaussInt,
    GaussRat,
    gauss_gcd,
    in_fundamental_domain,
    norm_sq,
)
from hurwitz.arith.intervals import Interval, sqrt_interval
from hurwitz.arith.tokens import (
    format_digits,
    parse_digits,
    parse_gauss_int,
    parse_gauss_rat,
)
