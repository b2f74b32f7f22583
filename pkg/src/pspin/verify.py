"""Acceptance checks shared by ``pspin verify`` and the test suite.

Each ``criterion_N`` returns a list of :class:`Item`; a criterion passes when
every item does.  Expected values are fixed reference numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F

from .exact import Coefficient, GammaFactor, Radical, bernoulli, euler_characteristic
from .onepoint import (
    GammaCancellationError,
    IntersectionRecord,
    PunctureLabel,
    euler_records,
    one_point_ns,
    one_point_ns_fractional,
    one_point_ns_raw,
    one_point_r,
    solve_selection_one_point,
)
from .openkp import APPENDIX_TAU0_TAU4R_SQUARED, MPolynomial, OpenLabel, ParityError, open_one_point, string_equation_check
from .twopoint import ResidueOrder, two_point_p2, two_point_residue


@dataclass
class Item:
    name: str
    passed: bool
    observed: object
    expected: object

    def line(self) -> str:
        return "%s %s: observed %s, expected %s" % ("PASS" if self.passed else "FAIL", self.name, self.observed, self.expected)


def _item(name, observed, expected, ok=None) -> Item:
    return Item(name, observed == expected if ok is None else bool(ok), observed, expected)


def _record(records, g, n=None, l=None):
    for r in records:
        if r.genus == g and (n is None or r.punctures[0].n == n) and (l is None or r.punctures[0].l == l):
            return r
    return None


def _value(records, g, n=None, l=None):
    r = _record(records, g, n, l)
    return None if r is None else r.value


def _single(series, e) -> Coefficient:
    """The coefficient of sigma^e, which must sit on a single basis."""
    cs = series.coefficient(e)
    if len(cs) > 1:
        raise AssertionError("sigma^%s mixes %d bases" % (e, len(cs)))
    return cs[0] if cs else Coefficient(0)


def criterion_1():
    out = []
    for p in range(2, 7):
        recs = one_point_ns(p, 1)
        out.append(_item("p=%d <tau_{1,0}>_1" % p, _value(recs, 1, 1, 0), F(p - 1, 24)))
    return out


def _closed_form(p: int, g: int, l) -> Fraction:
    """g = 2, 3 closed forms; the Gamma ratio must reduce to a rational."""
    from .exact import gamma_reduce

    p = F(p)
    if g == 2:
        pre = (1 + 2 * p) * (p - 1) * (p - 3) / (p * 120 * 16 * 3)
        top = 1 - F(3) / p
    else:
        pre = (1 + 2 * p) * (p - 1) * (p - 5) * (8 * p * p - 13 * p - 13) / (p * p * 5040 * 64 * 9)
        top = 1 - F(5) / p
    if pre == 0:
        return F(0)
    r, rest = gamma_reduce([top], [1 - (1 + F(l)) / p])
    if not rest.is_empty():
        raise GammaCancellationError("closed form does not reduce: %s" % rest)
    return pre * r


def criterion_2():
    out = []
    for p in (4, 5, 6):
        recs = one_point_ns(p, 3)
        for g in (2, 3):
            r = _record(recs, g)
            if r is None:
                # a vanishing closed form means the record is legitimately absent
                sol = solve_selection_one_point(p, g)
                want = _closed_form(p, g, sol[1] if sol else -1)
                out.append(_item("p=%d g=%d record" % (p, g), "absent", "absent" if want == 0 else want))
                continue
            lab = r.punctures[0]
            out.append(_item("p=%d g=%d <tau_{%s,%s}>" % (p, g, lab.n, lab.l), r.value, _closed_form(p, g, lab.l)))
    recs = one_point_ns(3, 3)
    out.append(_item("p=3 g=2 record absent", _record(recs, 2) is None, True))
    return out


def criterion_3():
    out = []
    recs = one_point_ns(2, 5)
    open_vals = open_one_point(13, 0)
    for g in range(1, 6):
        want = F(1, 24**g * math.factorial(g))
        out.append(_item("p=2 <tau_%d>_%d" % (3 * g - 2, g), _value(recs, g, 3 * g - 2, 0), want))
        out.append(_item("open m=0 <tau_%d>" % (3 * g - 2), open_vals[OpenLabel(3 * g - 2)](0), want))
    return out


def _bernoulli_independent(n: int) -> Fraction:
    """Akiyama-Tanigawa; gives B_1 = +1/2."""
    a = [F(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = F(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def criterion_4():
    out = []
    for g in range(1, 6):
        out.append(_item("chi(%d)" % g, euler_characteristic(g), -_bernoulli_independent(2 * g) / (2 * g)))
        out.append(_item("B_%d tables agree" % (2 * g), bernoulli(2 * g), _bernoulli_independent(2 * g)))
    series = {r.genus: F(r.metadata["series_coefficient"]) for r in euler_records(2)}
    out.append(_item("series coefficient g=1", series[1], F(1, 12)))
    out.append(_item("series coefficient g=2", series[2], F(-1, 120)))
    return out


def criterion_5():
    out = []
    raw, _ = one_point_ns_raw(F(-2), 4)
    reference = [F(1, 8), F(9, 6 * 2**7), F(9 * 25, 120 * 2**9), F(9 * 25 * 49, 21 * 2**18)]
    half = GammaFactor.of(F(1, 2))[1]
    for g, want in zip(range(1, 5), reference):
        if len(raw[g]) != 1:
            raise AssertionError("p=-2 genus %d should carry a single Gamma basis" % g)
        total = raw[g][0]
        # the reference bracket multiplies -1/(2 sqrt(pi sigma)); Gamma(3/2) = Gamma(1/2)/2
        ok_gamma = total.gamma == half
        got = abs(total.rational) * 2
        out.append(_item("p=-2 bracket coefficient sigma^%d" % g, got, want, ok_gamma and got == want))
    recs = one_point_ns(-2, 2)
    out.append(_item("p=-2 <tau_{1,0}>_1", _value(recs, 1, 1, 0), F(-1, 8)))
    out.append(_item("p=-2 <tau_{2,0}>_2", _value(recs, 2, 2, 0), F(1, 2**7)))
    return out


def criterion_6():
    recs = one_point_ns(-3, 3)
    return [
        _item("p=-3 <tau_{0,1}>_0", _value(recs, 0, 0, 1), F(-1, 3)),
        _item("p=-3 <tau_{1,0}>_1", _value(recs, 1, 1, 0), F(5, 18)),
        _item("p=-3 <tau_{2,-1}>_2", _value(recs, 2, 2, -1), F(16)),
    ]


def criterion_7():
    out = []
    series, _ = one_point_r(F(1, 2), 3 + 6 * 6)
    for j in range(7):
        c = _single(series, F(3 + 6 * j))
        want = F(3 ** (2 + 3 * j) * (-1) ** j, math.factorial(j) * math.factorial(3 * j + 3))
        ok = c.rational == want and c.coupling_power == 4 * j + 2 and c.gamma.is_empty()
        out.append(_item("p=1/2 sigma^%d" % (3 + 6 * j), "%s*c'^%s" % (c.rational, c.coupling_power), "%s*c'^%d" % (want, 4 * j + 2), ok))
    return out


def criterion_8():
    series, _ = one_point_r(F(-1, 2), 20)
    nonzero = sorted(e for e, c in series.items() if c.rational != 0)
    return [_item("p=-1/2 nonzero exponents up to sigma^20", nonzero, [F(-1), F(1)])]


def _magnitude(c: Coefficient, base_powers) -> Coefficient:
    """|c| times prod base^power, kept exact."""
    r, rad = Radical.from_powers(base_powers)
    return Coefficient(abs(c.rational) * r, c.gamma, 0, rad) * Coefficient(1, GammaFactor(), 0, c.radical)


def criterion_9():
    out = []
    # kappa multiplies sigma^(5/2) Q(y); the reference form writes c (sigma/2)^(5/2), so kappa = c 2^(-5/2)
    series, _ = one_point_r(F(3, 2), 26)
    reference = {
        5: F(5, 2**5),
        15: -F(7 * 5**4, 3 * 2**16),
        25: F(79 * 11 * 5**7 * 3**2, math.factorial(10) * 2**24),
    }
    for e, want in reference.items():
        c = _single(series, F(e))
        k = c.coupling_power
        got = c.rational / 2 ** (5 * k / 2) if (5 * k) % 2 == 0 else None
        out.append(_item("p=3/2 U_R sigma^%d" % e, got, want))
    # the ray route carries b = -5 kappa sigma^(5/2) = -5 c (sigma/2)^(5/2) as coupling
    ns, _ = one_point_ns_fractional(F(3, 2), 2)
    first = _single(ns, F(-5, 3))
    second = _single(ns, F(5, 3))
    got1 = _magnitude(first, [(5, first.coupling_power), (2, -F(5, 2) * first.coupling_power)])
    got2 = _magnitude(second, [(5, second.coupling_power), (2, -F(5, 2) * second.coupling_power)])
    # reference: 5^(1/3)/15 Gamma(2/3) (c sigma/2)^(-5/3) and 5^(5/3)/15 Gamma(-2/3) (c sigma/2)^(5/3)
    want1 = _magnitude(Coefficient(F(1, 15), GammaFactor.of(F(2, 3))[1]), [(5, F(1, 3)), (2, F(5, 3))])
    r, gm = GammaFactor.of(F(-2, 3))
    want2 = _magnitude(Coefficient(F(1, 15) * r, gm), [(5, F(5, 3)), (2, -F(5, 3))])
    out.append(_item("p=3/2 NS sigma^(-5/3) magnitude", str(got1), str(want1), float(got1) == float(want1) and got1.basis == want1.basis and got1.rational == want1.rational))
    out.append(_item("p=3/2 NS sigma^(5/3) magnitude", str(got2), str(want2), got2.basis == want2.basis and got2.rational == want2.rational))
    return out


def criterion_10():
    out = []
    ns, _ = one_point_ns_fractional(F(-3, 2), 8)
    r, g23 = GammaFactor.of(F(-2, 3))
    reference = [
        (F(-1, 3), Coefficient(F(-1, 3) * r, g23)),
        (F(1, 3), Coefficient(F(-5, 6), GammaFactor.of(F(2, 3))[1])),
        (F(1), Coefficient(F(-1))),
    ]
    for e, want in reference:
        c = _single(ns, e)
        got = Coefficient(c.rational, c.gamma)
        ok = got.rational == want.rational and got.gamma == want.gamma
        out.append(_item("p=-3/2 sigma^(%s)" % e, str(got), str(want), ok))
    integer = sorted(e for e, c in ns.items() if e.denominator == 1 and c.rational != 0)
    slots = [e for e in integer if e % 2 == 1 and ((3 * e + 1) / 2 - 2) % 3 == 0]
    out.append(_item("p=-3/2 integer powers sit at sigma^(2m+1), g=2+3m", integer, slots, bool(integer) and integer == slots))
    return out


def criterion_11():
    out = []
    recs = two_point_p2(8)
    one = {r.genus: r for r in one_point_ns(2, 4)}
    def two(n1, n2):
        for r in recs:
            if (r.punctures[0].n, r.punctures[1].n) == (n1, n2):
                return r.value
        return None
    out.append(_item("p=2 <tau_{0,0} tau_{2,0}>_1", two(0, 2), F(1, 24)))
    for r in recs:
        a, b = r.punctures
        if a.n != 0:
            continue
        target = one.get(r.genus)
        want = target.value if target is not None and target.punctures[0].n == b.n - 1 else F(0)
        out.append(_item("string: <tau_0 tau_%s>_%s" % (b.n, r.genus), r.value, want))
    return out


def criterion_12():
    out = []
    s = two_point_residue(F(1, 2), 12, ResidueOrder.SumBoth)
    # the reference bracket is multiplied by 4
    reference = {
        (2, 4): 4 * F(27, 4), (4, 2): 4 * F(27, 4),
        (6, 6): -4 * F(243, 40),
        (2, 10): 4 * F(243, 160), (10, 2): 4 * F(243, 160),
    }
    for key, want in reference.items():
        out.append(_item("p=1/2 sigma1^%d sigma2^%d" % key, s[key], want))
    out.append(_item("p=1/2 sigma1^4 sigma2^8 vanishes", s[(4, 8)], F(0)))
    bad = [k for k, c in s.items() if c.rational and (k[0] % 2 or k[1] % 2 or (k[0] + k[1]) % 6)]
    out.append(_item("p=1/2 only even n_i with n1+n2 = 6g", bad, []))
    return out


def criterion_13():
    s = two_point_residue(F(-1, 2), 12)
    return [_item("p=-1/2 two-point vanishes to order 12", s.is_zero(), True)]


def criterion_14():
    out = []
    vals = open_one_point(F(11, 2), 8)
    reference = {
        F(1): MPolynomial({0: F(1, 24), 2: F(12, 24)}),
        F(5, 2): MPolynomial({1: F(1, 12), 3: F(1, 12)}),
        F(4): MPolynomial({0: F(1, 1152), 2: F(56, 1152), 4: F(16, 1152)}),
        F(11, 2): MPolynomial({1: F(12, 2880), 3: F(25, 2880), 5: F(3, 2880)}),
    }
    for n, want in reference.items():
        out.append(_item("<tau_%s>" % n, vals[OpenLabel(n)], want))
    try:
        table = open_one_point(F(17, 2), 8)
        bad = [str(k) for k, v in table.items() if v and v.parity() != (1 if k.on_boundary else 0)]
        out.append(_item("boundary parity up to n=17/2", bad, []))
    except ParityError as exc:
        out.append(_item("boundary parity up to n=17/2", str(exc), []))
    lhs = IntersectionRecord(F(2), F(0), (PunctureLabel(0, 0), PunctureLabel(4, -1), PunctureLabel(4, -1)), APPENDIX_TAU0_TAU4R_SQUARED)
    half = APPENDIX_TAU0_TAU4R_SQUARED * F(1, 2)
    rhs = [IntersectionRecord(F(2), F(0), (PunctureLabel(3, -1), PunctureLabel(4, -1)), half) for _ in range(2)]
    out.append(_item("appendix string-equation bookkeeping", string_equation_check(lhs, rhs), True))
    return out


def criterion_15():
    from . import oracle

    out = []
    for s in (0.05, 0.1, 0.2):
        r = oracle.one_point_numeric(3, s)
        d = abs(r.value - r.extra["airy"])
        out.append(_item("p=3 quadrature vs Airy at sigma=%g" % s, "%.2e" % d, "<= 1e-8", d <= 1e-8))
    lead = oracle.two_point_p3_leading_coefficient(0.05)["normalized"]
    out.append(_item("p=3 two-point leading coefficient", "%.6f" % lead, "1/12 within 5%", abs(lead - 1 / 12) <= 0.05 / 12))
    src = oracle.SourceConfig([0.3, 1.1, -0.7], [0.45])
    v = oracle.finite_n_one_point(src, 1e-11)
    out.append(_item("finite-N supertrace limit", "%.3e" % abs(v - 2), "n-m = 2 within 1e-10", abs(v - 2) <= 1e-10))
    base = oracle.finite_n_one_point(src, 0.37)
    c1 = oracle.contour_one_point(src, 0.37, 3.0)
    c2 = oracle.contour_one_point(src, 0.37, 3.0 * (1 + 1e-6))
    dev = max(abs(base - c1), abs(c1 - c2))
    out.append(_item("contour stability", "%.2e" % dev, "<= 1e-10", dev <= 1e-10))
    return out


def criterion_16():
    out = []
    try:
        series, recs = one_point_r(1, 20)
        out.append(_item("p=1 residue vanishes to sigma^20", len(series) + len(recs), 0))
        out.append(_item("p=1 sector route empty", one_point_ns(1, 5), []))
        for p in (2, 3, 4, 5):
            series, recs = one_point_r(p, 20)
            out.append(_item("p=%d no Ramond term to sigma^20" % p, len(series) + len(recs), 0))
            _raw, ramond = one_point_ns_raw(F(p), 10)
            ns = one_point_ns(p, 10)
            bad = [r for r in ns if r.punctures[0].l == -1]
            out.append(_item("p=%d no Ramond record in the sector route" % p, len(bad), 0))
            # genera whose sigma power is an integer would need l = -1; the contour phase must kill them
            forced = [g for g in range(11) if ((2 * g - 1) * (1 + F(1, p))).denominator == 1]
            out.append(_item("p=%d integer-power slots are killed by the contour phase" % p, ramond, forced))
        fired = None
        for c in (criterion_1, criterion_2, criterion_3, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10):
            c()
    except GammaCancellationError as exc:
        fired = str(exc)
    out.append(_item("Gamma cancellation never fires", fired, None))
    return out


CRITERIA = {i: globals()["criterion_%d" % i] for i in range(1, 17)}

SUITES = {
    "paper-values": [1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 14],
    "properties": [8, 13, 16],
    "oracle": [15],
}


def run_suite(name: str, echo=print) -> bool:
    ok = True
    for i in SUITES[name]:
        items = CRITERIA[i]()
        passed = all(it.passed for it in items)
        ok &= passed
        echo("criterion %d: %s" % (i, "PASS" if passed else "FAIL"))
        for it in items:
            echo("  " + it.line())
    return ok
