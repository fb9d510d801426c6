from fractions import Fraction

import pytest

from wqt.exponent import E, R, ExponentFn


def test_field_arithmetic():
    e = (R + 1) / (R - 1)
    assert e * (R - 1) == R + 1
    assert e - 1 == 2 / (R - 1)
    assert (R * R - 1) / (R - 1) == R + 1
    assert -(R - 1) == 1 - R


def test_constants_and_evaluation():
    assert E(3).is_constant() and E(3).constant() == 3
    assert E(Fraction(1, 2)).constant() == Fraction(1, 2)
    assert not R.is_constant()
    assert ((R + 1) / R).evaluate(Fraction(2)) == Fraction(3, 2)


def test_order_follows_large_r():
    # r dominates every constant
    assert R > E(1000)
    assert -R < E(-1000)
    assert E(1) / R > 0
    assert sorted([R, E(0), -R, E(2)]) == [-R, E(0), E(2), R]


def test_text_round_trip():
    for e in (E(0), E(-7), R, (2 * R - 1) / (R + 3), E(Fraction(5, 3)) * R * R):
        assert ExponentFn.from_text(e.to_text()) == e


def test_hash_consistent_with_equality():
    a = (R * R - 1) / (R + 1)
    assert a == R - 1
    assert hash(a) == hash(R - 1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        R / E(0)
