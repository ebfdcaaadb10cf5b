from hurwitz.enumeration.annulus import DigitAnnulus, digit_annulus, window_holds
from hurwitz.enumeration.families import (
    FullFamily,
    enumerate_full,
    enumerate_relative,
    is_crossing,
    oracle_full,
)
from hurwitz.enumeration.lattice import alphabet, annulus_count, gauss_circle_count
