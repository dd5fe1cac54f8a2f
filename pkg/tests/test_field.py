import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from fibertool.field import CoeffField, DivisionByZero

F = CoeffField(32003)


def test_inverse_of_one():
    assert F.inv(1) == 1


def test_inverse_of_two_mod_seven_by_scan():
    F7 = CoeffField(7)
    expected = next(b for b in range(7) if (2 * b) % 7 == 1)
    assert F7.inv(2) == expected == 4


def test_zero_has_no_inverse():
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(DivisionByZero):
        CoeffField.rationals().inv(Fraction(0))


def test_modulus_must_be_prime():
    with pytest.raises(ValueError):
        CoeffField(32004)


@given(st.integers(0, 32002))
def test_additive_inverse(a):
    assert F.add(a, F.neg(a)) == 0


@given(st.integers(1, 32002))
def test_inverse_is_involution(a):
    assert F.inv(F.inv(a)) == a
    assert F.mul(a, F.inv(a)) == 1


@given(st.fractions().filter(bool))
def test_rational_inverse(q):
    Q = CoeffField.rationals()
    assert Q.mul(q, Q.inv(q)) == 1
