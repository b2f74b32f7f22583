import math
from fractions import Fraction as F

import pytest

from pspin.onepoint import IntersectionRecord, PunctureLabel, one_point_ns
from pspin.openkp import (
    APPENDIX_TAU0_TAU4R_SQUARED,
    MPolynomial,
    OpenLabel,
    boundary_profile,
    calibrate_coupling,
    continuation_descent_holds,
    contour_rule,
    gamma_rule,
    gamma_rule_closed,
    open_one_point,
    open_riemann_roch_check,
    string_equation_check,
)
from pspin.twopoint import two_point_p2


@pytest.fixture(scope="module")
def table():
    return open_one_point(F(29, 2), 10)


def test_reference_values(table):
    assert table[OpenLabel(1)] == MPolynomial({0: F(1, 24), 2: F(1, 2)})
    assert table[OpenLabel(F(5, 2))] == MPolynomial({1: F(1, 12), 3: F(1, 12)})
    assert table[OpenLabel(4)] == MPolynomial({0: F(1, 1152), 2: F(56, 1152), 4: F(16, 1152)})
    assert table[OpenLabel(F(11, 2))] == MPolynomial({1: F(12, 2880), 3: F(25, 2880), 5: F(3, 2880)})


def test_m_zero_reproduces_closed_numbers(table):
    closed = {r.genus: r.value for r in one_point_ns(2, 5)}
    for g in range(1, 6):
        v = table[OpenLabel(3 * g - 2)](0)
        assert v == F(1, 24**g * math.factorial(g)) == closed[g]


def test_parity_of_every_slot(table):
    for lab, poly in table.items():
        if poly:
            assert poly.parity() == (1 if lab.on_boundary else 0)


def test_emitted_index_set(table):
    assert sorted(table)[:4] == [OpenLabel(1), OpenLabel(F(5, 2)), OpenLabel(4), OpenLabel(F(11, 2))]
    for lab in table:
        assert (2 * lab.n) % 3 == 2


def test_m_degree_truncation():
    t = open_one_point(4, 2)
    assert t[OpenLabel(4)] == MPolynomial({0: F(1, 1152), 2: F(56, 1152)})


def test_boundary_profile():
    assert boundary_profile(MPolynomial({0: F(1, 24), 2: F(1, 2)})) == [(0, F(1, 24)), (2, F(1, 2))]
    assert boundary_profile(MPolynomial({1: F(1, 12), 3: F(1, 12)})) == [(1, F(1, 12)), (3, F(1, 12))]
    assert boundary_profile(MPolynomial.constant(0)) == []


def test_open_riemann_roch():
    assert open_riemann_roch_check(1, 0, 2, 1, [OpenLabel(1)])
    assert not open_riemann_roch_check(1, 1, 2, 1, [OpenLabel(1)])
    assert not open_riemann_roch_check(0, 0, 0, 0, [])
    with pytest.raises(ValueError):
        open_riemann_roch_check(-1, 0, 0, 0, [])


def test_integration_rules_agree_under_descent():
    for k in range(-4, 9):
        assert continuation_descent_holds(k)
    assert contour_rule(2, F(1, 3)) == F(1, 18)
    assert gamma_rule_closed(0) == (F(1), F(-1, 2))
    # int exp(-a u^2) u^2 du = sqrt(pi) a^(-3/2) / 2
    assert gamma_rule_closed(-1) == (F(1, 2), F(-3, 2))
    c = gamma_rule(1)
    assert c.rational == -2 and str(c.gamma) == "Gamma(1/2)"


def test_gamma_rule_numerically():
    # moments continued to negative order equal Gamma(1/2 - k) a^(k - 1/2)
    for k in range(-3, 5):
        r, e = gamma_rule_closed(k)
        a = 0.7
        assert float(r) * math.sqrt(math.pi) * a ** float(e) == pytest.approx(math.gamma(0.5 - k) * a ** (k - 0.5))


def test_calibration():
    assert calibrate_coupling() == F(-1, 2)


def test_labels_validate():
    with pytest.raises(ValueError):
        OpenLabel(F(1, 3))
    with pytest.raises(ValueError):
        OpenLabel(-1)
    assert OpenLabel(F(5, 2)).on_boundary and not OpenLabel(4).on_boundary


def test_mpolynomial_arithmetic():
    a = MPolynomial({0: 1, 2: 3})
    b = MPolynomial({1: 2})
    assert a * b == MPolynomial({1: 2, 3: 6})
    assert (a + b)(2) == 1 + 12 + 4
    assert a.parity() == 0 and (a + b).parity() is None
    with pytest.raises(ValueError):
        MPolynomial({-1: 1})


def test_string_equation_appendix_bookkeeping():
    lhs = IntersectionRecord(F(2), F(0), (PunctureLabel(0, 0), PunctureLabel(4, -1), PunctureLabel(4, -1)), APPENDIX_TAU0_TAU4R_SQUARED)
    half = APPENDIX_TAU0_TAU4R_SQUARED * F(1, 2)
    rhs = [IntersectionRecord(F(2), F(0), (PunctureLabel(3, -1), PunctureLabel(4, -1)), half)] * 2
    assert string_equation_check(lhs, rhs)
    assert not string_equation_check(lhs, rhs[:1])
    m2 = MPolynomial({2: 1})
    assert APPENDIX_TAU0_TAU4R_SQUARED == m2 * MPolynomial({0: 16, 2: 11, 4: 1}) * F(1, 144)


def test_string_equation_against_p2_pipelines():
    two = [r for r in two_point_p2(2) if (r.punctures[0].n, r.punctures[1].n) == (0, 2)][0]
    one = [r for r in one_point_ns(2, 1) if r.genus == 1][0]
    assert string_equation_check(two, [one])


def test_string_equation_mixed_p_is_an_error():
    lhs = IntersectionRecord(F(2), F(1), (PunctureLabel(0, 0), PunctureLabel(2, 0)), F(1, 24))
    rhs = IntersectionRecord(F(3), F(1), (PunctureLabel(1, 0),), F(1, 12))
    with pytest.raises(ValueError):
        string_equation_check(lhs, [rhs])
