import cmath
import math

import numpy as np
import pytest
import scipy.special

from pspin import oracle
from pspin.oracle import (
    AI0,
    AIP0,
    ConvergenceError,
    DegeneratePoleError,
    RangeError,
    SourceConfig,
    airy,
    airy_prime,
    quadrature,
)


def test_airy_constants():
    # Gamma forms carry 3^(1/6); the decimal values are the standard ones
    assert airy(0.0) == pytest.approx(math.gamma(1 / 3) / (2 * math.pi * 3 ** (1 / 6)), rel=1e-12)
    assert airy(0.0) == pytest.approx(0.3550280539, abs=1e-10)
    assert airy_prime(0.0) == pytest.approx(-math.gamma(2 / 3) * 3 ** (1 / 6) / (2 * math.pi), rel=1e-12)
    assert airy_prime(0.0) == pytest.approx(-0.2588194038, abs=1e-10)
    assert AI0 == pytest.approx(airy(0.0)) and AIP0 == pytest.approx(airy_prime(0.0))


@pytest.mark.parametrize("x", np.linspace(-30, 30, 61))
def test_airy_against_scipy(x):
    ai, aip, _bi, _bip = scipy.special.airy(x)
    assert airy(x) == pytest.approx(ai, rel=1e-10, abs=1e-14)
    assert airy_prime(x) == pytest.approx(aip, rel=1e-10, abs=1e-14)


def test_airy_decays_beyond_one():
    assert airy(1.0) > airy(5.0) > airy(10.0) > 0


def test_airy_range():
    with pytest.raises(RangeError):
        airy(30.5)
    with pytest.raises(RangeError):
        airy_prime(-31)


def test_quadrature_doubles_until_converged():
    v, err = quadrature(np.exp, 0.0, 1.0, 1e-13)
    assert v == pytest.approx(math.e - 1, abs=1e-13) and err >= 0
    with pytest.raises(ConvergenceError):
        quadrature(lambda x: np.sin(1 / np.maximum(x, 1e-300)), 0.0, 1.0, 1e-14, max_nodes=64)


@pytest.mark.parametrize("s", [0.05, 0.1, 0.2])
def test_p3_quadrature_matches_airy(s):
    r = oracle.one_point_numeric(3, s)
    assert abs(r.value - r.extra["airy"]) <= 1e-8
    assert r.estimated_error >= 0


def test_p3_two_term_series():
    s = 0.05
    r = oracle.one_point_numeric(3, s)
    assert abs(r.value.real - oracle.airy_two_term_p3(s)) <= 1e-6 * abs(r.value)


def test_p3_two_series_exponents():
    a, b = oracle.fit_two_series_exponents_p3()
    assert a == pytest.approx(-4 / 3, abs=1e-2)
    assert b == pytest.approx(4 / 3, abs=1e-2)
    assert a % 1 == pytest.approx(2 / 3, abs=1e-2) and b % 1 == pytest.approx(1 / 3, abs=1e-2)


def test_p2_leading_exponent():
    # the real-axis integral behaves as sigma^(-3/2) at this normalization
    assert oracle.fit_leading_exponent(2) == pytest.approx(-1.5, abs=1e-3)


def test_one_point_numeric_preconditions():
    with pytest.raises(ValueError):
        oracle.one_point_numeric(3, 0.6)
    with pytest.raises(ValueError):
        oracle.one_point_numeric(1, 0.1)


@pytest.mark.parametrize("p", [3, 4])
def test_two_point_symmetry(p):
    a = oracle.two_point_numeric(p, 0.07, 0.19).value
    b = oracle.two_point_numeric(p, 0.19, 0.07).value
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_p3_two_point_leading_coefficient():
    lead = oracle.two_point_p3_leading_coefficient(0.05)
    assert lead["normalized"] == pytest.approx(1 / 12, rel=0.05)


def test_p4_two_point_finite_with_genus_zero_exponent():
    v = oracle.two_point_numeric(4, 0.1, 0.1).value
    assert np.isfinite(v)
    # (2g + s - 2)(1 + 1/p) with g = 0, s = 2
    assert oracle.two_point_scaling_exponent(4) == pytest.approx(0.0, abs=1e-2)


def test_two_point_numeric_preconditions():
    with pytest.raises(ValueError):
        oracle.two_point_numeric(5, 0.1, 0.1)


SRC = SourceConfig([0.3, 1.1, -0.7], [0.45])


def test_supertrace_limit():
    assert abs(oracle.finite_n_one_point(SRC, 1e-11) - 2) <= 1e-10


def test_hermitian_specialization():
    a = [0.3, 1.1, -0.7]
    s = 0.37
    herm = oracle.hermitian_one_point(a, s)
    super_ = oracle.finite_n_one_point(SourceConfig(a, []), s, phase=1)
    assert abs(herm - super_) <= 1e-12 * abs(herm)


def test_single_source_residue():
    s = 0.6
    assert abs(oracle.finite_n_one_point(SourceConfig([0.0], []), s) - cmath.exp(-1j * s * s / 2)) <= 1e-14


def test_degenerate_poles_raise():
    with pytest.raises(DegeneratePoleError):
        oracle.finite_n_one_point(SourceConfig([0.2, 0.2], []), 0.1)
    # r + s/2 = rho - s/2
    with pytest.raises(DegeneratePoleError):
        oracle.finite_n_one_point(SourceConfig([0.0], [0.2]), 0.2)


def test_contour_stability():
    s = 0.37
    base = oracle.finite_n_one_point(SRC, s)
    c1 = oracle.contour_one_point(SRC, s, 3.0)
    c2 = oracle.contour_one_point(SRC, s, 3.0 * (1 + 1e-6))
    assert abs(base - c1) <= 1e-10 and abs(c1 - c2) <= 1e-10
    with pytest.raises(ValueError):
        oracle.contour_one_point(SRC, s, 0.1)


def test_two_point_finite_n_symmetry():
    a = oracle.finite_n_two_point(SRC, 0.21, 0.34)
    b = oracle.finite_n_two_point(SRC, 0.34, 0.21)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_single_source_two_point_identities():
    src = SourceConfig([0.4], [])
    s1, s2 = 0.3, 0.5
    u = lambda s: oracle.finite_n_one_point(src, s)
    full = oracle.contour_two_point(src, s1, s2, 3.0, 1.5)
    assert abs(full - (u(s1 + s2) - u(s1) * u(s2))) <= 1e-12
    # source poles alone give -U(s1) U(s2)
    assert abs(oracle.finite_n_two_point(src, s1, s2) + u(s1) * u(s2)) <= 1e-12


def test_two_point_cluster_limit():
    src = SourceConfig([0.4], [])
    vals = [abs(oracle.contour_two_point(src, t, 0.5, 3.0, 1.5)) for t in (1e-2, 1e-4, 1e-6)]
    assert vals[0] > vals[1] > vals[2] and vals[2] < 1e-5
    with pytest.raises(ValueError):
        oracle.contour_two_point(src, 0.1, 0.5, 1.6, 1.5)


def test_pspin_tuning_check():
    assert SourceConfig([1.0, -1.0], []).satisfies_pspin(3)
    assert not SourceConfig([1.0, 1.0], []).satisfies_pspin(3)
