import random
from fractions import Fraction

import pytest

from hurwitz.approx import parse_rate
from hurwitz.arith.gaussian import GaussInt
from hurwitz.enumeration import (
    alphabet,
    annulus_count,
    digit_annulus,
    enumerate_full,
    enumerate_relative,
    gauss_circle_count,
    is_crossing,
    oracle_full,
    window_holds,
)
from hurwitz.enumeration.annulus import continuant_sandwich_holds, six_bound_holds
from hurwitz.enumeration.lattice import annulus_points, sample_annulus
from hurwitz.exceptions import BudgetExceeded, PreconditionViolated, RateTooLarge
from hurwitz.geometry import FullStatus, is_full
from hurwitz.hcf import DigitSeq


@pytest.mark.parametrize(
    "r_sq, count",
    [
        (0, 1),
        (2, 9),
        (4, 13),
        (Fraction(9, 2), 13),
        (25, 81),
    ],
)
def test_gauss_circle_count(r_sq, count):
    assert gauss_circle_count(r_sq) == count


def test_annulus_count_matches_brute_force():
    lo, hi = Fraction(10404), Fraction(39204)
    brute = sum(
        1 for x in range(-198, 199) for y in range(-198, 199) if lo < x * x + y * y < hi
    )
    assert annulus_count(lo, hi) == brute
    assert len(list(annulus_points(Fraction(100), Fraction(200)))) == annulus_count(
        Fraction(100), Fraction(200)
    )


def test_sample_annulus_is_seeded():
    first = sample_annulus(Fraction(100), Fraction(400), 20, random.Random(1))
    again = sample_annulus(Fraction(100), Fraction(400), 20, random.Random(1))
    assert first == again
    assert len(set(first)) == 20
    assert all(100 < b.norm() < 400 for b in first)


@pytest.mark.parametrize("m, size", [(2, 8), (3, 24)])
def test_alphabet(m, size):
    digits = alphabet(m)
    assert len(digits) == size
    assert all(1 < b.norm() <= m * m for b in digits)
    assert list(digits) == sorted(digits, key=GaussInt.sort_key)


def test_alphabet_rejects_small_bound():
    with pytest.raises(PreconditionViolated):
        alphabet(1)


@pytest.mark.parametrize("q", [Fraction(3), Fraction(5)])
def test_enumerate_full_matches_oracle(q):
    family = enumerate_full(3, q)
    assert family.members == oracle_full(3, q)
    assert family.policy_log == 0
    q_sq = q * q
    for u in family.members:
        assert is_crossing(u, q_sq)
        assert all(b.norm() <= 9 for b in u)


def test_level_one_crossings():
    family = enumerate_full(3, Fraction(101, 100))
    # every digit crosses at once; only |b|^2 >= 8 are full
    assert {u[0] for u in family.members} == {b for b in alphabet(3) if b.norm() >= 8}
    assert all(len(u) == 1 for u in family.members)


def test_family_grows_with_alphabet():
    small = set(enumerate_full(2, 4).members)
    large = set(enumerate_full(3, 4).members)
    assert small <= large


def test_enumerate_full_budget():
    with pytest.raises(BudgetExceeded) as exc_info:
        enumerate_full(3, 20, budget=10)
    assert not exc_info.value.partial.complete


def test_enumerate_relative_filters_full_family():
    total = enumerate_full(3, 5)
    w = DigitSeq.of([3])
    relative = enumerate_relative(w, 3, 5, total=len(total))
    expected = tuple(u[1:] for u in total.members if u[:1] == w and len(u) > 1)
    assert relative.members == expected
    assert "ratio_log10" in relative.diagnostics
    assert enumerate_relative(DigitSeq(), 3, 5).members == total.members


def test_enumerate_relative_after_crossing():
    # q(3) = 3 already crosses Q = 2
    relative = enumerate_relative(DigitSeq.of([3]), 3, 2)
    assert relative.members == (DigitSeq(),)


def test_family_dump(tmp_path):
    family = enumerate_full(3, 3)
    path = family.write(tmp_path / "family.txt")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# M=3 Q=3")
    assert lines[1:] == [str(u) for u in family.members]


def test_digit_annulus_of_seven():
    u = DigitSeq.of([7])
    annulus = digit_annulus(u, 2, parse_rate("1/100*x^-2"), cap=None)
    assert annulus.rho.lo == annulus.rho.hi == 100
    assert annulus.j1 == (Fraction(102**2), Fraction(198**2))
    assert annulus.j2 == (Fraction(98**2), Fraction(202**2))
    assert annulus.j1_count == annulus_count(Fraction(102**2), Fraction(198**2))
    assert annulus.j1_count <= annulus.j2_count
    assert not annulus.sampled
    assert len(annulus.certified) == annulus.j1_count
    for b in annulus.certified[:: max(1, len(annulus.certified) // 50)]:
        assert b.norm() > 64
        assert window_holds(annulus, b)
        assert six_bound_holds(annulus, b)
        assert continuant_sandwich_holds(annulus, b)
        assert is_full(u.append(b)) is FullStatus.FULL


def test_digit_annulus_samples_above_cap():
    annulus = digit_annulus(DigitSeq.of([7]), 2, parse_rate("1/100*x^-2"), cap=30)
    assert annulus.sampled
    assert len(annulus.certified) == 30
    assert all(102**2 < b.norm() < 198**2 for b in annulus.certified)


def test_digit_annulus_needs_small_rate():
    with pytest.raises(RateTooLarge):
        digit_annulus(DigitSeq.of([3]), 2, parse_rate("x^-2"))
    with pytest.raises(PreconditionViolated):
        digit_annulus(DigitSeq.of([2]), 2, parse_rate("1/100*x^-2"))


def test_annulus_window_against_continuants():
    u = DigitSeq.of([3, 4])
    annulus = digit_annulus(u, 3, parse_rate("x^-3"), cap=25)
    assert annulus.rho.lo > 6
    assert all(window_holds(annulus, b) for b in annulus.certified)
