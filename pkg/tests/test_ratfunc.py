from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from uinvariants.ratfunc import RatFunc

e = sp.Symbol("e")
coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), max_size=4)


@st.composite
def ratfuncs(draw):
    den = draw(coeffs)
    if not any(den):
        den = [1]
    return RatFunc(tuple(draw(coeffs)), tuple(den))


def to_sympy(f: RatFunc):
    num = sum(sp.Rational(str(c)) * e**j for j, c in enumerate(f.num))
    den = sum(sp.Rational(str(c)) * e**j for j, c in enumerate(f.den))
    return num / den


def same(f, expr):
    return sp.cancel(to_sympy(f) - expr) == 0


def test_reduction_is_canonical():
    # (e^2 - 1) / (2e - 2) = (e + 1) / 2
    f = RatFunc((-1, 0, 1), (-2, 2))
    assert f.num == (Fraction(1, 2), Fraction(1, 2)) and f.den == (1,)
    assert f == RatFunc.line(Fraction(1, 2), Fraction(1, 2))
    assert RatFunc((), (3, 1)) == 0


def test_at_zero():
    assert RatFunc((0, 1), (0, 2)).at_zero() == Fraction(1, 2)
    assert RatFunc((3, 1), (2,)).at_zero() == Fraction(3, 2)
    with pytest.raises(ZeroDivisionError):
        RatFunc((1,), (0, 1)).at_zero()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RatFunc.line(1, 2) / RatFunc.const(0)
    with pytest.raises(ZeroDivisionError):
        RatFunc((1,), ())


@settings(max_examples=50, deadline=None)
@given(ratfuncs(), ratfuncs())
def test_arithmetic_matches_sympy(f, g):
    F, G = to_sympy(f), to_sympy(g)
    assert same(f + g, F + G)
    assert same(f - g, F - G)
    assert same(f * g, F * G)
    if g:
        assert same(f / g, F / G)


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_laws(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f - f == 0
    if f:
        assert f / f == 1
    assert f ** 2 == f * f


def test_mixed_with_scalars():
    f = RatFunc.line(1, 1)
    assert 2 * f == f + f
    assert 1 - f == RatFunc.line(0, -1)
    assert (1 / f) * f == 1
