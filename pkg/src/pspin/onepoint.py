"""One-point intersection numbers for rational spin p.

Three routes are implemented:

* the u-plane sector route (:func:`one_point_ns`): expand the cubic and
  higher corrections of the exponent in sigma, integrate each monomial
  along a Stokes ray, and normalize;
* the y-plane residue at y = 0 (:func:`one_point_r`), which carries the
  Ramond (l = -1) terms;
* the y-plane ray route in t = y**(2p) (:func:`one_point_ns_fractional`),
  used for half-integer and negative p where the sector phases are not
  simply the p-th roots of unity.

Conventions.  The u-route uses the coupling ``c`` of exp(-c sigma u**p).
The y-routes use ``kappa`` with exponent kappa * sigma**(p+1) * Q(y), where
Q(y) = [(y - i/y)**m - (y + i/y)**m] / (-2i) and m = 2p + 2.  The ray route
reports powers of ``b``, the decay rate of exp(-b t) on the ray.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import Coefficient, GammaFactor, PoleError, as_fraction, euler_characteristic
from .series import (
    BivariateMonomialSum,
    PuiseuxSeries,
    SectorPhase,
    formal_exp,
    residue_at_zero,
    sector_moment,
)

__all__ = [
    "ZeroSpinError",
    "NormalizationPoleError",
    "GammaCancellationError",
    "SpinModel",
    "PunctureLabel",
    "IntersectionRecord",
    "admissible_components",
    "spin_model",
    "solve_selection_one_point",
    "riemann_roch_holds",
    "genus_from_sigma_exponent",
    "expansion_exponent",
    "one_point_ns_raw",
    "normalize_one_point",
    "one_point_ns",
    "q_expansion",
    "one_point_r",
    "one_point_ns_fractional",
    "one_point_ns_negative_fractional",
    "euler_records",
]


class ZeroSpinError(ValueError):
    pass


class NormalizationPoleError(PoleError):
    pass


class GammaCancellationError(AssertionError):
    """A normalized intersection number kept a transcendental factor."""


RAMOND = "Ramond"
NEVEU_SCHWARZ = "NeveuSchwarz"


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def admissible_components(p) -> list[Fraction]:
    """Spin components l labelling the Stokes sectors of spin p."""
    p = as_fraction(p)
    if p == 0:
        raise ZeroSpinError("p must be non-zero")
    if _is_int(p) and p > 0:
        return [Fraction(l) for l in range(-1, int(p) - 1)]
    if _is_int(p):
        return [Fraction(-l) for l in range(0, -int(p))]
    if p.denominator == 2:
        top = abs(p) - Fraction(3, 2)
        out, l = [], Fraction(-1)
        while l <= top:
            out.append(l)
            l += Fraction(1, 2)
        return out
    raise ValueError("spin components are defined for integer and half-integer p, got %s" % p)


@dataclass(frozen=True)
class SpinModel:
    p: Fraction
    admissible_l: tuple[Fraction, ...]
    sector_count: int
    coupling_convention: str = "c_form"

    @property
    def special(self) -> bool:
        return abs(self.p) == 1


def spin_model(p, coupling_convention: str = "c_form") -> SpinModel:
    p = as_fraction(p)
    ls = admissible_components(p)
    count = abs(p) if _is_int(p) else 2 * abs(p)
    return SpinModel(p, tuple(ls), int(count), coupling_convention)


@dataclass(frozen=True)
class PunctureLabel:
    n: Fraction
    l: Fraction

    def __post_init__(self):
        object.__setattr__(self, "n", as_fraction(self.n))
        object.__setattr__(self, "l", as_fraction(self.l))

    @property
    def puncture_type(self) -> str:
        return RAMOND if self.l == -1 else NEVEU_SCHWARZ


@dataclass
class IntersectionRecord:
    """<prod tau_{n_i, l_i}>_g = value, with value rational or a polynomial in m."""

    p: Fraction
    genus: Fraction
    punctures: tuple[PunctureLabel, ...]
    value: Any
    coupling_power: Fraction = Fraction(0)
    metadata: dict = field(default_factory=dict)

    def sort_key(self):
        return (self.genus, tuple(x.n for x in self.punctures), tuple(x.l for x in self.punctures))


def riemann_roch_holds(p, g, labels) -> bool:
    """3g - 3 + s = sum n_i + (g - 1)(1 - 2/p) + (1/p) sum l_i."""
    p, g = as_fraction(p), as_fraction(g)
    s = len(labels)
    rhs = sum((x.n for x in labels), Fraction(0)) + (g - 1) * (1 - 2 / p) + sum((x.l for x in labels), Fraction(0)) / p
    return 3 * g - 3 + s == rhs


def genus_from_sigma_exponent(p, e) -> Fraction:
    """Invert e = (2g - 1)(1 + 1/p)."""
    p, e = as_fraction(p), as_fraction(e)
    return (e / (1 + 1 / p) + 1) / 2


def solve_selection_one_point(p, g: int):
    """The (n, l) with (2g-1)(1+1/p) = n + (l+1)/p, n >= 0 an integer, l admissible."""
    p = as_fraction(p)
    target = (2 * as_fraction(g) - 1) * (1 + 1 / p)
    for l in admissible_components(p):
        n = target - (l + 1) / p
        if _is_int(n) and n >= 0:
            if _is_int(p) and p > 0 and l == -1:
                continue
            return (n, l)
    return None


def _gen_binomial(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out = out * (a - j) / (j + 1)
    return out


def expansion_exponent(p, sigma_truncation) -> BivariateMonomialSum:
    """Corrections -c * sum_{k odd >= 3} a_k sigma**k u**(p+1-k) to exp(-c sigma u**p).

    a_k = 2 binom(p+1, k) / ((p+1) 2**k); the k = 1 term is the ray weight itself.
    """
    p = as_fraction(p)
    if p == -1:
        raise ValueError("p = -1 has no polynomial exponent; use euler_characteristic")
    trunc = as_fraction(sigma_truncation)
    terms = {}
    k = 3
    while k < trunc:
        a_k = 2 * _gen_binomial(p + 1, k) / ((p + 1) * 2**k)
        if a_k:
            terms[(p + 1 - k, k)] = Coefficient(-a_k, coupling_power=1)
        k += 2
    return BivariateMonomialSum(terms, trunc)


def one_point_ns_raw(p, g_max: int):
    """Sector-route coefficients of U(sigma), grouped by genus.

    Returns ``(raw, ramond_slots)`` where ``raw[g]`` is the list of
    Coefficients multiplying sigma**((2g-1)(1+1/p)) (the 1/|p| of the ray
    moment included, the contour phase factor and 1/(2 pi i) stripped) and
    ``ramond_slots`` lists the genera whose contour phase factor vanishes.
    """
    p = as_fraction(p)
    if p == 0:
        raise ZeroSpinError("p must be non-zero")
    trunc = 3 * g_max + 1
    E = formal_exp(expansion_exponent(p, trunc))
    acc: dict[int, dict] = defaultdict(lambda: defaultdict(Fraction))
    ramond: set[int] = set()
    for A, s, coeff in E.items():
        j = coeff.coupling_power
        g2 = s - j
        if not _is_int(g2) or g2 % 2:
            raise AssertionError("unexpected monomial sigma^%s c^%s" % (s, j))
        g = int(g2) // 2
        if g > g_max:
            continue
        theta = (1 - 2 * Fraction(g)) / p
        if SectorPhase.contour_factor_vanishes(theta):
            ramond.add(g)
            continue
        m = sector_moment(A, p)
        term = coeff * m.coefficient
        acc[g][term.basis] += term.rational
    raw = {}
    for g in range(0, g_max + 1):
        if g in ramond:
            continue
        items = [Coefficient(v, b[0], b[1], b[2]) for b, v in acc[g].items() if v]
        raw[g] = items
    return raw, sorted(ramond)


def normalize_one_point(p, g: int, n, l, raw: list[Coefficient]) -> Fraction:
    """<tau_{n,l}>_g = (-1)^g |p| p^(-g) raw / Gamma(1 - (1+l)/p).

    Raises GammaCancellationError if the Gamma factors do not cancel.
    """
    p, l = as_fraction(p), as_fraction(l)
    arg = 1 - (1 + l) / p
    if _is_int(arg) and arg <= 0:
        raise NormalizationPoleError("normalization Gamma(%s) is singular" % arg)
    r, gam = GammaFactor.of(arg)
    norm = Coefficient(r * p**g * (-1) ** g / abs(p), gam, (2 * Fraction(g) - 1) / p)
    total = Fraction(0)
    for c in raw:
        v = c / norm
        if not v.is_rational() or v.coupling_power != 0:
            raise GammaCancellationError(
                "p=%s g=%s: %s does not reduce to a rational number" % (p, g, v)
            )
        total += v.rational
    return total


def one_point_ns(p, g_max: int) -> list[IntersectionRecord]:
    """Normalized NS one-point numbers <tau_{n,l}>_g for g = 0 .. g_max."""
    p = as_fraction(p)
    if p == 0:
        raise ZeroSpinError("p must be non-zero")
    if p == -1:
        raise ValueError("p = -1 is computed by euler_characteristic")
    if p == 1:
        return []
    raw, ramond = one_point_ns_raw(p, g_max)
    out = []
    for g in range(0, g_max + 1):
        if g in ramond:
            continue
        sol = solve_selection_one_point(p, g)
        coeffs = raw.get(g, [])
        if sol is None:
            continue
        n, l = sol
        value = normalize_one_point(p, g, n, l, coeffs)
        out.append(
            IntersectionRecord(
                p,
                Fraction(g),
                (PunctureLabel(n, l),),
                value,
                (2 * Fraction(g) - 1) / p,
                {
                    "route": "sector",
                    "convention": "c",
                    "sigma_exponent": str((2 * Fraction(g) - 1) * (1 + 1 / p)),
                    "raw": [str(c) for c in coeffs],
                },
            )
        )
    return sorted(out, key=IntersectionRecord.sort_key)


def q_expansion(p, at: str, order) -> dict[Fraction, Fraction]:
    """Laurent coefficients of Q(y) near y = 0 ("zero") or y = infinity ("infinity").

    Near zero only exponents <= order are kept; near infinity only exponents
    >= -order.  For m = 2p + 2 a non-negative integer both are the same finite
    Laurent polynomial.
    """
    p = as_fraction(p)
    m2 = 2 * p + 2
    if not _is_int(m2):
        raise ValueError("the y-representation needs 2p integer, got p=%s" % p)
    m = int(m2)
    order = as_fraction(order)
    out: dict[Fraction, Fraction] = {}
    if at == "infinity" or (at == "zero" and m >= 0 and m % 2 == 0):
        # sum over odd k of binom(m, k) (-1)^((k-1)/2) y^(m - 2k)
        k = 1
        while True:
            e = Fraction(m - 2 * k)
            if at == "infinity" and e < -order:
                break
            if m >= 0 and k > m:
                break
            c = _gen_binomial(Fraction(m), k) * (-1) ** ((k - 1) // 2)
            if c and (at == "infinity" or e <= order):
                out[e] = out.get(e, Fraction(0)) + c
            k += 2
        return out
    if at != "zero":
        raise ValueError("at must be 'zero' or 'infinity'")
    if m % 2 == 0:
        # Q(y) = -(-1)^(m/2) Q(1/y)
        sign = -(Fraction(-1) ** (m // 2))
        k = 1
        while True:
            e = Fraction(2 * k - m)
            if e > order:
                break
            c = _gen_binomial(Fraction(m), k) * (-1) ** ((k - 1) // 2)
            if c:
                out[e] = sign * c
            k += 2
        return out
    # odd m: Q(y) = i^(m-1) sum over even k of binom(m, k) (-1)^(k/2) y^(2k - m)
    unit = (-1) ** (((m - 1) // 2) % 2)
    k = 0
    while True:
        e = Fraction(2 * k - m)
        if e > order:
            break
        if m >= 0 and k > m:
            break
        c = _gen_binomial(Fraction(m), k) * (-1) ** (k // 2)
        if c:
            out[e] = unit * c
        k += 2
    return out


def one_point_r(p, sigma_max):
    """Residue of (y**-3 + y) exp(kappa sigma**(p+1) Q(y)) at y = 0.

    Returns ``(series, records)``.  The series is in sigma with coefficients
    in powers of kappa; the overall factor i/2 of U is not included.  For
    p = -1/2 the integrand has an essential singularity at the origin and
    the piece obtained from y -> -1/x, kappa**-2 sigma**-1, is added.
    Integer p >= 1 gives the empty series.
    """
    p = as_fraction(p)
    sigma_max = as_fraction(sigma_max)
    if p == 0:
        raise ZeroSpinError("p must be non-zero")
    if p == -1:
        raise ValueError("p = -1 has no y-representation")
    trunc = sigma_max + Fraction(1, 2 * p.denominator * 2)
    prefactor = BivariateMonomialSum({(-3, 0): 1, (1, 0): 1})
    if p > -1:
        q = q_expansion(p, "zero", 2 * p + 2)
        x = BivariateMonomialSum(
            {(e, p + 1): Coefficient(c, coupling_power=1) for e, c in q.items()}, trunc
        )
        res = residue_at_zero(prefactor.truncate(trunc) * formal_exp(x))
        series = res
    else:
        # Q is analytic at 0 with a zero of order >= 1: grade by the power of kappa
        q = q_expansion(p, "zero", 2)
        cap = 3
        x = BivariateMonomialSum({(e, 1): Coefficient(c, coupling_power=1) for e, c in q.items()}, cap)
        res = residue_at_zero(prefactor.truncate(cap) * formal_exp(x))
        terms = []
        for k, coeff in res.items():
            terms.append((k * (p + 1), coeff))
        series = PuiseuxSeries(terms, trunc)
    meta = {"prefactor": "i/2", "convention": "kappa"}
    if 2 * p + 2 == 1:
        # integral of x exp(-kappa sqrt(sigma) x) over x > 0
        extra = PuiseuxSeries({Fraction(-1): Coefficient(1, coupling_power=-2)}, trunc)
        series = series + extra
        meta["essential_singularity_piece"] = "kappa^-2 sigma^-1"
    records = []
    for e, coeff in series.items():
        g = genus_from_sigma_exponent(p, e)
        if not _is_int(g) or g < 0 or not _is_int(e):
            continue
        records.append(
            IntersectionRecord(
                p, g, (PunctureLabel(e, -1),), coeff.rational, coeff.coupling_power,
                dict(meta, route="residue", sigma_exponent=str(e)),
            )
        )
    return series, sorted(records, key=IntersectionRecord.sort_key)


def one_point_ns_fractional(p, order):
    """Ray route: substitute t = y**L with L = 2p on the decaying ray of exp(-b t).

    U = (1/L) int_0^oo dt (t**(-3/L) + t**(1/L)) t**(1/L - 1) exp(-b t) exp(P(t)),
    where P collects the subleading terms of kappa sigma**(p+1) Q(y) at large y,
    rewritten with kappa sigma**(p+1) = -b / m.  Each monomial b**k t**A
    integrates to Gamma(A+1) b**(k-A-1).

    Returns ``(series, skipped)``: the series is in sigma, valid below
    sigma**order, with coefficients carrying powers of b as the coupling.
    Terms that would need Gamma at a non-positive integer are the Ramond
    slots of this ray; their sigma exponents are listed in ``skipped``.
    """
    p = as_fraction(p)
    order = as_fraction(order)
    if p == 0:
        raise ZeroSpinError("p must be non-zero")
    if p == -1:
        raise ValueError("p = -1 has no y-representation")
    L = 2 * p
    m = 2 * p + 2
    # sigma exponent carried by b**x
    def sigma_of(x):
        return x * (p + 1)
    # subleading exponents e < L give factors b**(1 - e/L) t**(e/L)
    trunc_grade = order + 2 * abs(p + 1) + 2
    q = q_expansion(p, "infinity", abs(L) * (trunc_grade / abs(p + 1) + 2) + 8)
    terms = {}
    for e, c in q.items():
        if e == L:
            if c != m:
                raise AssertionError("leading coefficient of Q should be 2p+2")
            continue
        x = 1 - e / L
        grade = sigma_of(x)
        if grade <= 0:
            raise AssertionError("non-positive grading on the ray")
        terms[(e / L, grade)] = Coefficient(-c / m, coupling_power=1)
    pert = formal_exp(BivariateMonomialSum(terms, trunc_grade))
    base = [(-3 / L + 1 / L - 1, Fraction(1) / L), (2 / L - 1, Fraction(1) / L)]
    acc = []
    skipped = set()
    for A0, w in base:
        for A, _s, coeff in pert.items():
            At = A0 + A
            k = coeff.coupling_power
            arg = At + 1
            power = k - arg
            e_sigma = sigma_of(power)
            if e_sigma >= order:
                continue
            if _is_int(arg) and arg <= 0:
                skipped.add(e_sigma)
                continue
            r, gam = GammaFactor.of(arg)
            acc.append((e_sigma, Coefficient(coeff.rational * w * r, gam, power)))
    return PuiseuxSeries(acc, order), sorted(skipped)


one_point_ns_negative_fractional = one_point_ns_fractional


def euler_records(g_max: int) -> list[IntersectionRecord]:
    """p = -1: orbifold Euler characteristics chi(M_{g,1}) = -B_2g / (2g)."""
    out = []
    for g in range(1, g_max + 1):
        out.append(
            IntersectionRecord(
                Fraction(-1), Fraction(g), (PunctureLabel(0, 0),), euler_characteristic(g), Fraction(0),
                {"route": "bernoulli", "series_coefficient": str(-euler_characteristic(g))},
            )
        )
    return out
