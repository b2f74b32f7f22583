"""Two-point functions: the p = 2 closed form and the half-integer residue engine."""
from __future__ import annotations

import enum
import math
from collections import defaultdict
from fractions import Fraction

from .exact import Coefficient, as_fraction
from .onepoint import (
    IntersectionRecord,
    PunctureLabel,
    _is_int,
    admissible_components,
    q_expansion,
)
from .series import TruncationError

__all__ = [
    "ResidueOrder",
    "TwoPointSeries",
    "PoleCancellationError",
    "two_point_p2",
    "two_point_p2_series",
    "two_point_residue",
    "two_point_records",
    "two_point_selection",
    "genus_from_degree",
]


class ResidueOrder(enum.Enum):
    Y2ThenY1 = "y2-then-y1"
    Y1ThenY2 = "y1-then-y2"
    SumBoth = "sum-both"


class PoleCancellationError(AssertionError):
    """The residues at y1 = +-y2 collected in the two orders do not cancel."""


class TwoPointSeries:
    """Bivariate series sum c_{e1,e2} sigma1**e1 sigma2**e2, exact below total degree ``truncation``."""

    def __init__(self, terms=None, truncation=None, metadata=None):
        self.terms: dict[tuple[Fraction, Fraction], Coefficient] = {}
        for (e1, e2), c in (terms or {}).items():
            if not isinstance(c, Coefficient):
                c = Coefficient(as_fraction(c))
            if c.rational:
                self.terms[(as_fraction(e1), as_fraction(e2))] = c
        self.truncation = None if truncation is None else as_fraction(truncation)
        self.metadata = dict(metadata or {})

    def __getitem__(self, key) -> Fraction:
        c = self.terms.get((as_fraction(key[0]), as_fraction(key[1])))
        return Fraction(0) if c is None else c.rational

    def coefficient(self, e1, e2) -> Coefficient:
        e1, e2 = as_fraction(e1), as_fraction(e2)
        if self.truncation is not None and e1 + e2 >= self.truncation:
            raise TruncationError("total degree %s is beyond the truncation %s" % (e1 + e2, self.truncation))
        return self.terms.get((e1, e2), Coefficient(0))

    def is_symmetric(self) -> bool:
        return all(self.terms.get((b, a)) == c for (a, b), c in self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        body = " + ".join("(%s)s1^%s s2^%s" % (c, a, b) for (a, b), c in self.items()) or "0"
        return "TwoPointSeries(%s, trunc=%s)" % (body, self.truncation)


def two_point_selection(p, l1, l2, g: int) -> set[tuple[int, int]]:
    """Pairs (n1, n2) allowed by the dimension rule with two marked points."""
    p, l1, l2 = as_fraction(p), as_fraction(l1), as_fraction(l2)
    allowed = admissible_components(p)
    if l1 not in allowed or l2 not in allowed:
        raise ValueError("spin components %s, %s are not admissible for p=%s" % (l1, l2, p))
    total = 3 * as_fraction(g) - 1 - (as_fraction(g) - 1) * (1 - 2 / p) - (l1 + l2) / p
    if not _is_int(total) or total < 0:
        return set()
    n = int(total)
    return {(k, n - k) for k in range(n + 1)}


def genus_from_degree(p, degree) -> Fraction:
    """Genus of a two-point Ramond record with n1 + n2 = degree."""
    p = as_fraction(p)
    return as_fraction(degree) / (2 + 2 / p)


# --- p = 2 closed form ---------------------------------------------------

def _poly_mul(a: dict, b: dict, max_deg: int) -> dict:
    out: dict = defaultdict(Fraction)
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            if i + j + k + l <= max_deg:
                out[(i + k, j + l)] += x * y
    return {k: v for k, v in out.items() if v}


def _divide_by_sum(poly: dict) -> dict:
    """Exact quotient of poly(s1, s2) by (s1 + s2); raises if it does not divide."""
    by_deg: dict = defaultdict(dict)
    for (i, j), c in poly.items():
        by_deg[i + j][i] = c
    out = {}
    for d, row in by_deg.items():
        if d == 0:
            if row.get(0):
                raise ArithmeticError("constant term is not divisible by s1 + s2")
            continue
        # q_{i, d-1-i}: p_{i, d-i} = q_{i-1, d-i} + q_{i, d-1-i}
        prev = Fraction(0)
        for i in range(d):
            q = row.get(i, Fraction(0)) - prev
            if q:
                out[(i, d - 1 - i)] = q
            prev = q
        if row.get(d, Fraction(0)) != prev:
            raise ArithmeticError("polynomial is not divisible by s1 + s2")
    return out


def two_point_p2_series(order_max: int) -> TwoPointSeries:
    """Expand (F - 1) / (s1 + s2) * sqrt(s1 s2) for p = 2, without the genus-0 kernel.

    F = exp((s1+s2)**3/24) * sum_m (-1)**m / (m! (2m+1)) * (s1 s2 (s1+s2)/8)**m.
    Keys are the sigma exponents n_i + 1/2; the series is exact for n1 + n2 <= order_max.
    """
    if order_max < 1:
        raise ValueError("order_max must be at least 1")
    D = order_max + 1  # one degree is lost in the division
    S = {(1, 0): Fraction(1), (0, 1): Fraction(1)}
    cube = _poly_mul(_poly_mul(S, S, D), S, D)
    exp_part = {(0, 0): Fraction(1)}
    term = {(0, 0): Fraction(1)}
    k = 1
    while True:
        term = {key: v / (24 * k) for key, v in _poly_mul(term, cube, D).items()}
        if not term:
            break
        for key, v in term.items():
            exp_part[key] = exp_part.get(key, Fraction(0)) + v
        k += 1
    x = {key: v / 8 for key, v in _poly_mul({(1, 1): Fraction(1)}, S, D).items()}
    bessel = {(0, 0): Fraction(1)}
    power = {(0, 0): Fraction(1)}
    m = 1
    while True:
        power = _poly_mul(power, x, D)
        if not power:
            break
        w = Fraction((-1) ** m, math.factorial(m) * (2 * m + 1))
        for key, v in power.items():
            bessel[key] = bessel.get(key, Fraction(0)) + w * v
        m += 1
    full = _poly_mul(exp_part, bessel, D)
    full[(0, 0)] = full.get((0, 0), Fraction(0)) - 1
    quotient = _divide_by_sum({k: v for k, v in full.items() if v})
    half = Fraction(1, 2)
    terms = {(i + half, j + half): c for (i, j), c in quotient.items() if i + j <= order_max}
    out = TwoPointSeries(terms, order_max + 2, {"normalization": "N'=1", "kernel": "excluded"})
    if not out.is_symmetric():
        raise AssertionError("p=2 two-point series is not symmetric")
    return out


def two_point_p2(order_max: int) -> list[IntersectionRecord]:
    """Records <tau_{n1,0} tau_{n2,0}>_g at p = 2 with n1 + n2 = 3g - 1 <= order_max."""
    series = two_point_p2_series(order_max)
    p = Fraction(2)
    out = []
    for (e1, e2), c in series.items():
        n1, n2 = e1 - Fraction(1, 2), e2 - Fraction(1, 2)
        g = (n1 + n2 + 1) / 3
        if not _is_int(g) or n1 < 0 or n2 < 0:
            continue
        out.append(
            IntersectionRecord(
                p, g, (PunctureLabel(n1, 0), PunctureLabel(n2, 0)), c.rational, Fraction(0),
                {"route": "closed-form", "normalization": "N'=1"},
            )
        )
    return sorted(out, key=IntersectionRecord.sort_key)


# --- half-integer residue engine -----------------------------------------
#
# After y_i -> sigma_i**(-1/2) y_i the integrand is
#   4 P1 P2 E / ((y1^2 - s1^2/y1^2 - y2^2 + s2^2/y2^2)^2 + 4 (s1 + s2)^2)
# with P_i = y_i + s_i^2 / y_i^3 and E = exp(kappa sum_i Q-terms).  Writing the
# denominator as X^2 (1 - f) with X = y1^2 - y2^2, 1/(1 - f) is summed as a
# geometric series; every term of f carries sigma-degree 2, so truncating in
# total sigma-degree is exact.  Monomials are integer tuples
# (kappa, s1, s2, y1, y2, j) standing for kappa^a s1^b s2^c y1^d y2^e X^-j.

_ONE = (0, 0, 0, 0, 0, 0)


def _add_into(acc: dict, key, v):
    x = acc.get(key, 0) + v
    if x:
        acc[key] = x
    else:
        acc.pop(key, None)


def _mul(a: dict, b: dict, smax: int) -> dict:
    out: dict = {}
    for ka, va in a.items():
        sa = ka[1] + ka[2]
        for kb, vb in b.items():
            if sa + kb[1] + kb[2] > smax:
                continue
            key = tuple(x + y for x, y in zip(ka, kb))
            _add_into(out, key, va * vb)
    return out


def _exp(a: dict, smax: int) -> dict:
    res = {_ONE: Fraction(1)}
    term = {_ONE: Fraction(1)}
    n = 1
    while True:
        term = {k: v / n for k, v in _mul(term, a, smax).items()}
        if not term:
            return res
        for k, v in term.items():
            _add_into(res, k, v)
        n += 1


def _exponent_terms(p: Fraction) -> dict:
    m = 2 * p + 2
    out = {}
    for e, q in q_expansion(p, "infinity", 4 * abs(m) + 8).items():
        s = (m - e) / 2
        if not _is_int(s) or s <= 0 or not _is_int(e):
            raise AssertionError("unexpected exponent layout for p=%s" % p)
        s, e = int(s), int(e)
        out[(1, s, 0, e, 0, 0)] = q
        out[(1, 0, s, 0, e, 0)] = q
    return out


def _integrand(p: Fraction, smax: int) -> dict:
    P1 = {(0, 0, 0, 1, 0, 0): Fraction(1), (0, 2, 0, -3, 0, 0): Fraction(1)}
    P2 = {(0, 0, 0, 0, 1, 0): Fraction(1), (0, 0, 2, 0, -3, 0): Fraction(1)}
    E = _exp(_exponent_terms(p), smax)
    # f = 2Y/X - (Y^2 + 4 (s1+s2)^2)/X^2 with Y = s1^2/y1^2 - s2^2/y2^2
    Y = {(0, 2, 0, -2, 0, 0): Fraction(1), (0, 0, 2, 0, -2, 0): Fraction(-1)}
    S2 = {(0, 2, 0, 0, 0, 0): Fraction(1), (0, 1, 1, 0, 0, 0): Fraction(2), (0, 0, 2, 0, 0, 0): Fraction(1)}
    f = {}
    for k, v in Y.items():
        _add_into(f, k[:5] + (1,), 2 * v)
    for k, v in _mul(Y, Y, smax).items():
        _add_into(f, k[:5] + (2,), -v)
    for k, v in S2.items():
        _add_into(f, k[:5] + (2,), -4 * v)
    geo = {_ONE: Fraction(1)}
    fm = {_ONE: Fraction(1)}
    while True:
        fm = _mul(fm, f, smax)
        if not fm:
            break
        for k, v in fm.items():
            _add_into(geo, k, v)
    body = _mul(_mul(_mul(P1, P2, smax), E, smax), geo, smax)
    return {k[:5] + (k[5] + 2,): 4 * v for k, v in body.items()}


def _iterated_residue(body: dict, first: int) -> dict:
    """Res at 0 in y_first, then in the other variable; X^-j expanded for small y_first."""
    out: dict = defaultdict(Fraction)
    for (cp, s1, s2, e1, e2, j), v in body.items():
        a, b = (e2, e1) if first == 2 else (e1, e2)
        if j == 0:
            if a == -1 and b == -1:
                out[(cp, s1, s2)] += v
            continue
        need = -1 - a
        if need < 0 or need % 2:
            continue
        k = need // 2
        if b - 2 * j - 2 * k != -1:
            continue
        # X = y1^2 - y2^2 = (+-)(y_other^2 - y_first^2)
        sign = 1 if first == 2 else (-1) ** j
        out[(cp, s1, s2)] += v * math.comb(j + k - 1, k) * sign
    return {k: v for k, v in out.items() if v}


def _cross_pole_residue(body: dict, first: int) -> dict:
    """Res at 0 in the outer variable of the residues at y_first = +-y_other.

    Computed from the residue theorem in y_first: the poles at +-y_other carry
    minus the residues at 0 and at infinity.  The infinity side expands X^-j
    for large y_first, independent of :func:`_iterated_residue`.
    """
    out: dict = defaultdict(Fraction)
    for (cp, s1, s2, e1, e2, j), v in body.items():
        a, b = (e2, e1) if first == 2 else (e1, e2)
        sign = 1 if first == 2 else (-1) ** j
        if j == 0:
            # a Laurent monomial has no residue at finite non-zero points
            continue
        # at 0: X^-j = sign * y_o^-2j sum_k C(j+k-1,k) (y_f/y_o)^2k
        need = -1 - a
        if need >= 0 and need % 2 == 0:
            k = need // 2
            if b - 2 * j - 2 * k == -1:
                out[(cp, s1, s2)] -= v * sign * math.comb(j + k - 1, k)
        # at infinity: X^-j = sign * (-1)^j y_f^-2j sum_k C(j+k-1,k) (y_o/y_f)^2k,
        # and Res_inf = -[y_f^-1], so minus Res_inf adds the coefficient
        need = a - 2 * j + 1
        if need >= 0 and need % 2 == 0:
            k = need // 2
            if b + 2 * k == -1:
                out[(cp, s1, s2)] += v * sign * (-1) ** j * math.comb(j + k - 1, k)
    return {k: v for k, v in out.items() if v}


def two_point_residue(p, order_max: int, order: ResidueOrder = ResidueOrder.SumBoth) -> TwoPointSeries:
    """Iterated residues at y = 0 of the half-integer two-point integrand.

    Coefficients carry kappa**a as the coupling power and include the overall
    factor 4 of the integrand.  Metadata holds both single-order values and the
    residues picked up at y1 = +-y2 in each order; their sum must vanish.
    """
    p = as_fraction(p)
    if p not in (Fraction(1, 2), Fraction(3, 2), Fraction(-1, 2)):
        raise ValueError("the residue engine covers p in {1/2, 3/2, -1/2}, got %s" % p)
    if order_max < 1:
        raise TruncationError("order_max must be at least 1 to reach the first term of f")
    body = _integrand(p, order_max)
    r21 = _iterated_residue(body, 2)
    r12 = _iterated_residue(body, 1)
    cross21 = _cross_pole_residue(body, 2)
    cross12 = _cross_pole_residue(body, 1)
    for key in set(cross21) | set(cross12):
        if cross21.get(key, 0) + cross12.get(key, 0):
            raise PoleCancellationError("residues at y1 = +-y2 do not cancel at %s" % (key,))
    if order is ResidueOrder.Y2ThenY1:
        chosen = r21
    elif order is ResidueOrder.Y1ThenY2:
        chosen = r12
    else:
        chosen = defaultdict(Fraction, r21)
        for k, v in r12.items():
            chosen[k] += v
    terms = {}
    for (cp, s1, s2), v in chosen.items():
        if not v:
            continue
        key = (Fraction(s1), Fraction(s2))
        if key in terms:
            raise AssertionError("two coupling powers at sigma1^%s sigma2^%s" % key)
        terms[key] = Coefficient(v, coupling_power=cp)

    def fmt(d):
        return {"%d,%d" % (s1, s2): str(v) for (cp, s1, s2), v in sorted(d.items())}

    meta = {
        "residue_order": order.value,
        "convention": "kappa",
        "prefactor": "4",
        "symmetrization_factor": "1",
        "per_order": {"y2-then-y1": fmt(r21), "y1-then-y2": fmt(r12)},
        "cross_pole": {"y2-then-y1": fmt(cross21), "y1-then-y2": fmt(cross12)},
    }
    out = TwoPointSeries(terms, order_max + 1, meta)
    if order is ResidueOrder.SumBoth and not out.is_symmetric():
        raise AssertionError("summed-order two-point series is not symmetric")
    return out


def two_point_records(p, order_max: int, order: ResidueOrder = ResidueOrder.SumBoth) -> list[IntersectionRecord]:
    """Ramond records <tau_{n1,-1} tau_{n2,-1}>_g read off :func:`two_point_residue`."""
    p = as_fraction(p)
    series = two_point_residue(p, order_max, order)
    out = []
    for (n1, n2), c in series.items():
        g = genus_from_degree(p, n1 + n2)
        meta = {"route": "residue", "residue_order": order.value, "convention": "kappa"}
        if not _is_int(g) or g < 0:
            meta["off_lattice"] = True
        out.append(
            IntersectionRecord(
                p, g, (PunctureLabel(n1, -1), PunctureLabel(n2, -1)), c.rational, c.coupling_power, meta,
            )
        )
    return sorted(out, key=IntersectionRecord.sort_key)
