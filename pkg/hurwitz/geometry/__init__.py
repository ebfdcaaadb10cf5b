from hurwitz.geometry.circles import GenCircle, MobiusMap
from hurwitz.geometry.cylinders import (
    CylinderMetrics,
    bounding_disk,
    cylinder_metrics,
    cylinder_region,
    distance_enclosure,
    full_cylinder_separation_check,
    level1_diameter_check,
)
from hurwitz.geometry.prototypes import (
    FullStatus,
    Verdict,
    is_admissible,
    is_full,
    is_regular,
    level1_cylinder_region,
    prototype_set,
)
from hurwitz.geometry.regions import Region
