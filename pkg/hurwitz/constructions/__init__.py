from hurwitz.constructions.schedules import (
    ScheduleMode,
    ScheduleOx2,
    ScheduleTau,
    load_overrides,
    schedule_build,
    schedule_build_tau,
)
from hurwitz.constructions.small_o import build_lambda
from hurwitz.constructions.tau import build_lambda_tau, measure_build_tau, sample_point_tau
from hurwitz.constructions.tree import (
    CantorMeasure,
    LambdaFamily,
    NodeKind,
    Status,
    local_dimension_estimates,
    measure_build,
    measure_of,
    sample_point,
)
