from hurwitz.approx.quality import (
    Claim,
    Regime,
    exact_order_report,
    is_best_approximation,
    is_good_approximation,
    legendre_bounds,
    legendre_test,
    legendre_threshold,
)
from hurwitz.approx.rates import (
    ApproxRate,
    PowerLogRate,
    RateClass,
    TableRate,
    classify_rate,
    parse_rate,
)
