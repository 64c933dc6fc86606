import math
from fractions import Fraction

import pytest

from lftop.exact import Dist, parse_rational, rational_token


def test_sqrt_normalizes_perfect_squares():
    assert Dist.sqrt_of(4) == Dist(2)
    assert not Dist.sqrt_of(4).root
    assert Dist.sqrt_of(Fraction(9, 4)) == Dist(Fraction(3, 2))
    assert Dist.sqrt_of(2).root


def test_ordering_mixes_forms_exactly():
    # sqrt(2) sits strictly between 1 and 3/2
    assert Dist(1) < Dist.sqrt_of(2) < Dist(Fraction(3, 2))
    assert Dist.sqrt_of(5) > Dist(2)
    assert Dist.sqrt_of(5) < Dist(Fraction(9, 4))
    vals = sorted([Dist(2), Dist.sqrt_of(2), Dist(1), Dist.sqrt_of(8)])
    assert [v.token() for v in vals] == ["1", "sqrt(2)", "2", "sqrt(8)"]


def test_equality_and_hash():
    assert Dist.sqrt_of(Fraction(16, 4)) == Dist(2)
    assert hash(Dist.sqrt_of(9)) == hash(Dist(3))
    assert Dist.sqrt_of(2) != Dist(Fraction(141421356, 100000000))
    assert len({Dist(2), Dist.sqrt_of(4), Dist.sqrt_of(2)}) == 2


def test_addition_rules():
    assert (Dist(1) + Dist(Fraction(1, 2))).q == Fraction(3, 2)
    assert Dist.ZERO + Dist.sqrt_of(2) == Dist.sqrt_of(2)
    assert Dist.sqrt_of(2) + Dist.sqrt_of(2) == Dist.sqrt_of(8)
    with pytest.raises(ValueError):
        Dist.sqrt_of(2) + Dist.sqrt_of(3)
    with pytest.raises(ValueError):
        Dist(1) + Dist.sqrt_of(2)


def test_scaling_and_division():
    assert Dist.sqrt_of(2) * Fraction(3, 2) == Dist.sqrt_of(Fraction(9, 2))
    assert Dist(3) / Dist(2) == Dist(Fraction(3, 2))
    assert Dist.sqrt_of(8) / Dist.sqrt_of(2) == Dist(2)
    assert Dist(2) / Dist.sqrt_of(2) == Dist.sqrt_of(2)


def test_floor_exact():
    assert Dist(Fraction(7, 2)).floor() == 3
    assert Dist.sqrt_of(8).floor() == 2  # 2 < sqrt(8) < 3
    assert Dist.sqrt_of(9).floor() == 3
    assert Dist.sqrt_of(Fraction(99, 4)).floor() == 4  # sqrt(24.75) ~ 4.97
    big = 10**12
    assert Dist.sqrt_of(big * big + 1).floor() == big


def test_float_rendering():
    assert math.isclose(float(Dist.sqrt_of(2)), math.sqrt(2))
    assert float(Dist(Fraction(1, 4))) == 0.25


def test_parse_rational():
    assert parse_rational(3) == 3
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational(4.0) == 4
    with pytest.raises(ValueError):
        parse_rational(0.1)
    with pytest.raises(ValueError):
        parse_rational("x")
    assert rational_token(Fraction(10, 4)) == "5/2"
