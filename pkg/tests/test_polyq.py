from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tqftcount.polyq import PolyQ

coeff_lists = st.lists(st.integers(-50, 50), max_size=6)


def test_parse_and_print():
    f = PolyQ.parse("q^2*(q-2)*(q-1)")
    assert f.coeffs == (0, 0, 2, -3, 1)
    assert str(f) == "q^4-3*q^3+2*q^2"
    assert str(PolyQ.parse("-q+1")) == "-q+1"
    assert str(PolyQ()) == "0"
    assert PolyQ.parse(str(f)) == f


def test_evaluation():
    f = PolyQ.parse("q^2*(q^2-3*q+3)")
    assert f(3) == 27
    assert f(Fraction(1, 2)) == Fraction(1, 4) * Fraction(7, 4)


def test_eq_with_int():
    assert PolyQ([5]) == 5
    assert PolyQ() == 0
    assert PolyQ.q() != 1


def test_non_integer_rejected():
    with pytest.raises(ValueError):
        PolyQ.q() + Fraction(1, 2)


@given(coeff_lists, coeff_lists, st.integers(-7, 7))
def test_ring_homomorphism(a, b, x):
    f, g = PolyQ(a), PolyQ(b)
    assert (f + g)(x) == f(x) + g(x)
    assert (f * g)(x) == f(x) * g(x)
    assert (f - g)(x) == f(x) - g(x)


@given(coeff_lists)
def test_print_round_trip(a):
    f = PolyQ(a)
    assert PolyQ.parse(str(f)) == f


@given(coeff_lists, st.integers(0, 3))
def test_power(a, n):
    f = PolyQ(a)
    assert (f**n)(2) == f(2) ** n
