import math
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from pspin.exact import (
    Coefficient,
    GammaFactor,
    PoleError,
    Radical,
    as_fraction,
    bernoulli,
    euler_characteristic,
    format_fraction,
    gamma_reduce,
    parse_fraction,
)

fractions = st.fractions(min_value=-6, max_value=6, max_denominator=12)


def test_parse_accepts_exact_forms():
    assert parse_fraction("3") == 3
    assert parse_fraction("-3/2") == F(-3, 2)
    assert parse_fraction(" 1/2 ") == F(1, 2)


@pytest.mark.parametrize("text", ["1.5", "1e3", "", "0.5", "2E1"])
def test_parse_rejects_decimals(text):
    with pytest.raises(ValueError):
        parse_fraction(text)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_format_is_num_over_den():
    assert format_fraction(F(3)) == "3/1"
    assert format_fraction(F(-6, 4)) == "-3/2"


@given(fractions)
def test_gamma_normalization_is_exact(x):
    if x.denominator == 1 and x <= 0:
        with pytest.raises(PoleError):
            GammaFactor.of(x)
        return
    r, g = GammaFactor.of(x)
    for a, _e in g.factors:
        assert 0 < a <= 1
    assert math.isclose(float(r) * float(g), math.gamma(float(x)), rel_tol=1e-12)


@given(fractions, fractions)
def test_gamma_reduce_against_sympy(a, b):
    if (a.denominator == 1 and a <= 0) or (b.denominator == 1 and b <= 0):
        return
    r, g = gamma_reduce([a], [b])
    ref = sympy.gammasimp(sympy.gamma(sympy.Rational(a.numerator, a.denominator)) / sympy.gamma(sympy.Rational(b.numerator, b.denominator)))
    assert math.isclose(float(r) * float(g), float(ref), rel_tol=1e-10)
    if (a - b).denominator == 1:
        assert g.is_empty()


def test_gamma_ratio_with_integer_shift_is_rational():
    r, g = gamma_reduce([F(-2, 3)], [F(1, 3)])
    # Gamma(-2/3) = Gamma(1/3) / (-2/3)
    assert g.is_empty() and r == F(-3, 2)
    assert math.isclose(float(r), math.gamma(-2 / 3) / math.gamma(1 / 3))


@pytest.mark.parametrize("n", range(0, 21))
def test_bernoulli_matches_sympy(n):
    ref = sympy.bernoulli(n)
    if n == 1:
        ref = sympy.Rational(1, 2)
    assert bernoulli(n) == F(int(ref.p), int(ref.q))


def test_euler_characteristic_values():
    assert euler_characteristic(1) == F(-1, 12)
    assert euler_characteristic(2) == F(1, 120)
    assert euler_characteristic(3) == F(-1, 252)


def test_radical_folds_integer_parts():
    r, rad = Radical.from_powers([(2, F(5, 2)), (3, F(-1, 3))])
    assert r == F(4, 3)
    assert rad.powers == ((2, F(1, 2)), (3, F(2, 3)))
    assert math.isclose(float(r) * float(rad), 2**2.5 * 3 ** (-1 / 3))


@given(fractions, fractions)
def test_coefficient_arithmetic_matches_floats(a, b):
    ra, ga = GammaFactor.of(F(1, 3))
    x = Coefficient(a * ra, ga, F(1, 2))
    y = Coefficient(b, GammaFactor(), F(-1, 3))
    prod = x * y
    assert prod.coupling_power == F(1, 6) or prod.rational == 0
    assert math.isclose(float(prod), float(x) * float(y), rel_tol=1e-12, abs_tol=1e-300)
    if b:
        q = x / y
        assert math.isclose(float(q), float(x) / float(y), rel_tol=1e-12, abs_tol=1e-300)


def test_zero_coefficient_drops_basis():
    c = Coefficient(0, GammaFactor.of(F(1, 3))[1], F(2))
    assert c.is_rational() and c.coupling_power == 0
