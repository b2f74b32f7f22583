from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from pspin.exact import Coefficient, GammaFactor, PoleError
from pspin.series import (
    BivariateMonomialSum,
    GradingError,
    PuiseuxSeries,
    SectorPhase,
    TruncationError,
    formal_exp,
    residue_at_zero,
    sector_moment,
    series_multiply,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=6)
terms = st.dictionaries(st.fractions(min_value=0, max_value=4, max_denominator=3), small, max_size=5)


def test_coefficient_beyond_truncation_raises():
    s = PuiseuxSeries({F(1, 3): 2}, truncation=2)
    assert s.coefficient(F(1, 3))[0].rational == 2
    assert s.coefficient(1) == []
    with pytest.raises(TruncationError):
        s.coefficient(2)


@given(terms, terms)
def test_product_is_commutative_and_truncated(a, b):
    x = PuiseuxSeries(a, truncation=3)
    y = PuiseuxSeries(b, truncation=3)
    xy, yx = series_multiply(x, y), series_multiply(y, x)
    assert xy == yx
    for e in xy.exponents():
        assert e < xy.truncation


def test_product_against_sympy():
    t = sympy.symbols("t")  # s = t^2 keeps sympy exponents integral
    a = PuiseuxSeries({0: 1, F(1, 2): 3, F(3, 2): -2}, truncation=4)
    b = PuiseuxSeries({F(1, 2): 1, 1: F(1, 5)}, truncation=4)
    prod = a * b
    ref = sympy.Poly(sympy.expand((1 + 3 * t - 2 * t**3) * (t + t**2 / 5)), t)
    got = {int(2 * e): c.rational for e, c in prod.items()}
    want = {m[0]: F(int(c.p), int(c.q)) for m, c in zip(ref.monoms(), ref.coeffs()) if m[0] < 2 * prod.truncation}
    assert got == want


def test_formal_exp_matches_sympy():
    y, s = sympy.symbols("y s")
    x = BivariateMonomialSum({(1, 1): 2, (-3, 2): F(1, 3)}, sigma_truncation=5)
    e = formal_exp(x)
    ref = sympy.expand(sympy.series(sympy.exp(2 * y * s + s**2 / (3 * y**3)), s, 0, 5).removeO())
    for a, sp, c in e.items():
        want = ref.coeff(s, int(sp)).coeff(y, int(a))
        assert sympy.Rational(c.rational.numerator, c.rational.denominator) == want


def test_formal_exp_requires_positive_grading():
    with pytest.raises(GradingError):
        formal_exp(BivariateMonomialSum({(1, 0): 1}, 3))


def test_residue_of_total_derivative_vanishes():
    x = BivariateMonomialSum({(1, 1): 1, (-2, 1): F(1, 2), (3, 2): 4}, 6)
    body = formal_exp(x) * BivariateMonomialSum({(-2, 0): 1, (1, 0): 3}, 6)
    assert len(residue_at_zero(body.derivative())) == 0


def test_sector_moment_is_gamma():
    m = sector_moment(F(0), F(3))
    r, g = GammaFactor.of(F(1, 3))
    assert m.coefficient.gamma == g
    assert m.sigma_exponent == F(-1, 3)


def test_sector_moment_at_gamma_pole():
    with pytest.raises(PoleError):
        sector_moment(F(-1), F(3))


def test_contour_factor():
    assert SectorPhase.contour_factor_vanishes(F(-1))
    assert not SectorPhase.contour_factor_vanishes(F(1, 3))
    ray = SectorPhase.ray(F(3), 1)
    assert ray.turns == F(1, 3)
