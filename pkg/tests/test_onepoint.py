from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pspin.exact import Coefficient
from pspin.onepoint import (
    RAMOND,
    ZeroSpinError,
    admissible_components,
    euler_records,
    genus_from_sigma_exponent,
    one_point_ns,
    one_point_ns_fractional,
    one_point_ns_raw,
    one_point_r,
    riemann_roch_holds,
    solve_selection_one_point,
    spin_model,
)


def test_admissible_components():
    assert admissible_components(3) == [-1, 0, 1]
    assert admissible_components(-3) == [0, -1, -2]
    assert admissible_components(F(1, 2)) == [-1]
    assert admissible_components(F(5, 2)) == [-1, F(-1, 2), 0, F(1, 2), 1]
    with pytest.raises(ZeroSpinError):
        admissible_components(0)


def test_spin_model_sector_counts():
    assert spin_model(3).sector_count == 3
    assert spin_model(-3).sector_count == 3
    assert spin_model(F(3, 2)).sector_count == 3
    assert spin_model(1).special and spin_model(-1).special


def test_selection_examples():
    assert solve_selection_one_point(3, 1) == (1, 0)
    assert solve_selection_one_point(F(1, 2), 1) == (3, -1)
    assert solve_selection_one_point(3, 2) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 6, 7, -2, -3, -4, F(1, 2), F(3, 2), F(-3, 2), F(5, 2)]), st.integers(0, 8))
def test_selection_solutions_obey_riemann_roch(p, g):
    sol = solve_selection_one_point(p, g)
    if sol is None:
        return
    n, l = sol
    p = F(p)
    assert (2 * g - 1) * (1 + 1 / p) == n + (l + 1) / p
    from pspin.onepoint import PunctureLabel

    assert riemann_roch_holds(p, g, [PunctureLabel(n, l)])


@pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
def test_genus_one_is_p_minus_one_over_24(p):
    rec = [r for r in one_point_ns(p, 1) if r.genus == 1][0]
    assert rec.value == F(p - 1, 24)
    assert rec.punctures[0].n == 1 and rec.punctures[0].l == 0


def test_p4_genus_two_closed_form():
    p = F(4)
    rec = [r for r in one_point_ns(4, 2) if r.genus == 2][0]
    assert (rec.punctures[0].n, rec.punctures[0].l) == (3, 2)
    assert rec.value == (1 + 2 * p) * (p - 1) * (p - 3) / (p * 120 * 16 * 3)


@pytest.mark.parametrize("p", [2, 3, 4, 5, 6, -2, -4])
def test_records_satisfy_selection_and_coupling_power(p):
    for r in one_point_ns(p, 4):
        lab = r.punctures[0]
        assert (2 * r.genus - 1) * (1 + F(1, p)) == lab.n + (lab.l + 1) / F(p)
        assert r.coupling_power == (2 * r.genus - 1) / F(p)
        assert isinstance(r.value, F)


def test_p2_reproduces_airy_tower():
    from math import factorial

    recs = {r.genus: r.value for r in one_point_ns(2, 6)}
    for g in range(1, 7):
        assert recs[g] == F(1, 24**g * factorial(g))


def test_p1_is_empty_and_minus_one_is_rejected():
    assert one_point_ns(1, 5) == []
    with pytest.raises(ValueError):
        one_point_ns(-1, 2)


def test_p_minus_two_genus_one():
    recs = {r.genus: r.value for r in one_point_ns(-2, 1)}
    assert recs[1] == F(-1, 8)


def test_half_integer_ramond_closed_form():
    series, records = one_point_r(F(1, 2), 16)
    for j in range(3):
        from math import factorial

        c = series.coefficient(3 + 6 * j)[0]
        assert c.rational == F(3 ** (2 + 3 * j) * (-1) ** j, factorial(j) * factorial(3 * j + 3))
        assert c.coupling_power == 4 * j + 2
    assert all(r.punctures[0].puncture_type == RAMOND for r in records)
    assert [r.genus for r in records] == [1, 2, 3]


def test_p_minus_half_has_two_terms():
    series, _ = one_point_r(F(-1, 2), 30)
    got = {e: (c.rational, c.coupling_power) for e, c in series.items()}
    assert got == {F(-1): (F(1), F(-2)), F(1): (F(1, 2), F(2))}


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_integer_p_has_no_ramond_part(p):
    series, records = one_point_r(p, 20)
    assert len(series) == 0 and records == []


def test_p_three_halves_ramond_leading_term_against_sympy():
    # residue of (y^-3 + y) exp(k Q), Q = 5y^3 - 10/y + 1/y^5, at k^2
    y, k = sympy.symbols("y k")
    Q = 5 * y**3 - 10 / y + y**-5
    expr = sympy.expand((y**-3 + y) * (k * Q) ** 2 / 2)
    want = expr.coeff(y, -1).coeff(k, 2)
    series, _ = one_point_r(F(3, 2), 6)
    c = series.coefficient(5)[0]
    assert c.coupling_power == 2 and c.rational == F(int(want))


def test_ray_route_p_minus_three_halves_leading():
    s, skipped = one_point_ns_fractional(F(-3, 2), 2)
    lead = s.coefficient(F(-1, 3))[0]
    # -(1/3) Gamma(-2/3) = (1/2) Gamma(1/3)
    assert lead.rational == F(1, 2) and str(lead.gamma) == "Gamma(1/3)"
    assert s.coefficient(1)[0].rational == -1


def test_ray_route_lists_ramond_slots():
    _s, skipped = one_point_ns_fractional(F(3, 2), 6)
    assert skipped == [5]


def test_sector_route_gamma_numerics_against_sympy():
    # p=3, g=1 raw coefficient: -(1/12) Gamma(2/3) c^(1/3), check against direct sympy gamma
    raw, ramond = one_point_ns_raw(F(3), 1)
    c = raw[1][0]
    assert float(c) == pytest.approx(float(-sympy.gamma(sympy.Rational(2, 3)) / 12), rel=1e-12)
    assert ramond == []


def test_genus_from_sigma_exponent():
    assert genus_from_sigma_exponent(3, F(4, 3)) == 1
    assert genus_from_sigma_exponent(F(1, 2), 9) == 2


def test_euler_records():
    recs = euler_records(3)
    assert [r.value for r in recs] == [F(-1, 12), F(1, 120), F(-1, 252)]
    assert [F(r.metadata["series_coefficient"]) for r in recs[:2]] == [F(1, 12), F(-1, 120)]


@pytest.mark.parametrize("k,e", [(2, 5), (6, 15), (10, 25)])
def test_p_three_halves_ramond_tower_against_sympy(k, e):
    y = sympy.symbols("y")
    Q = 5 * y**3 - 10 / y + y**-5
    want = sympy.expand((y**-3 + y) * Q**k / sympy.factorial(k)).coeff(y, -1)
    series, _ = one_point_r(F(3, 2), 26)
    c = series.coefficient(e)[0]
    assert c.rational == F(str(want)) and c.coupling_power == k


def test_p_minus_two_genus_two_matches_continued_closed_form():
    # the g=2 closed form continued to p=-2: Gamma(5/2)/Gamma(3/2) = 3/2
    p = F(-2)
    pre = (1 + 2 * p) * (p - 1) * (p - 3) / (p * 120 * 16 * 3)
    recs = {r.genus: r.value for r in one_point_ns(-2, 2)}
    assert recs[2] == pre * F(3, 2) == F(3, 512)


def test_p_minus_three_genus_one_matches_general_formula():
    recs = {r.genus: r for r in one_point_ns(-3, 3)}
    assert recs[1].value == F(-3 - 1, 24)
    assert all(r.punctures[0].l in (0, -1, -2) for r in recs.values())
