"""Truncated Puiseux series, contour/sigma monomial sums and sector moments.

Coefficients are kept as exact linear combinations: a term is keyed by its
exponent(s) together with a *basis* (Gamma part, coupling power, radical)
and stores the rational multiplier of that basis.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .exact import Coefficient, GammaFactor, PoleError, Radical, as_fraction

__all__ = [
    "GradingError",
    "TruncationError",
    "ONE",
    "PuiseuxSeries",
    "BivariateMonomialSum",
    "SectorPhase",
    "Moment",
    "series_multiply",
    "formal_exp",
    "residue_at_zero",
    "sector_moment",
]

ONE = (GammaFactor(), Fraction(0), Radical())


class GradingError(ValueError):
    """A formal exponential was asked to expand a term without positive sigma degree."""


class TruncationError(ValueError):
    pass


def _mul_basis(a, b) -> tuple[Fraction, tuple]:
    r, rad = a[2] * b[2]
    return r, (a[0] * b[0], a[1] + b[1], rad)


def _coeff_items(value) -> Iterator[tuple[tuple, Fraction]]:
    if isinstance(value, Coefficient):
        if value.rational:
            yield value.basis, value.rational
    else:
        v = as_fraction(value)
        if v:
            yield ONE, v


def _lcm_den(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


class PuiseuxSeries:
    """Sum of coefficient * sigma**e for exponents e < truncation.

    ``truncation`` is the order of validity: the series says nothing about
    exponents at or above it.  Use ``None`` for an exact (finite) series.
    """

    __slots__ = ("terms", "truncation")

    def __init__(self, terms=(), truncation=None):
        self.truncation = None if truncation is None else as_fraction(truncation)
        acc: dict[tuple, Fraction] = defaultdict(Fraction)
        items = terms.items() if isinstance(terms, dict) else terms
        for e, value in items:
            e = as_fraction(e)
            if self.truncation is not None and e >= self.truncation:
                continue
            for basis, r in _coeff_items(value):
                acc[(e, basis)] += r
        self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, terms: dict, truncation) -> "PuiseuxSeries":
        s = cls.__new__(cls)
        s.truncation = truncation
        s.terms = {k: v for k, v in terms.items() if v and (truncation is None or k[0] < truncation)}
        return s

    @property
    def exponent_denominator(self) -> int:
        return _lcm_den(e for e, _ in self.terms)

    def exponents(self) -> list[Fraction]:
        return sorted({e for e, _ in self.terms})

    def valuation(self):
        return min((e for e, _ in self.terms), default=self.truncation)

    def coefficient(self, e) -> list[Coefficient]:
        e = as_fraction(e)
        if self.truncation is not None and e >= self.truncation:
            raise TruncationError("exponent %s is beyond the truncation %s" % (e, self.truncation))
        out = [Coefficient(v, b[0], b[1], b[2]) for (x, b), v in self.terms.items() if x == e]
        return sorted(out, key=lambda c: str(c.basis))

    def items(self) -> Iterator[tuple[Fraction, Coefficient]]:
        for (e, b), v in sorted(self.terms.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
            yield e, Coefficient(v, b[0], b[1], b[2])

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        trunc = _min_trunc(self.truncation, other.truncation)
        acc = defaultdict(Fraction, self.terms)
        for k, v in other.terms.items():
            acc[k] += v
        return PuiseuxSeries._raw(acc, trunc)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries._raw({k: -v for k, v in self.terms.items()}, self.truncation)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def scale(self, c) -> "PuiseuxSeries":
        acc: dict = defaultdict(Fraction)
        for basis, r in _coeff_items(c):
            for (e, b), v in self.terms.items():
                f, nb = _mul_basis(b, basis)
                acc[(e, nb)] += v * r * f
        return PuiseuxSeries._raw(acc, self.truncation)

    def shift(self, d) -> "PuiseuxSeries":
        d = as_fraction(d)
        trunc = None if self.truncation is None else self.truncation + d
        return PuiseuxSeries._raw({(e + d, b): v for (e, b), v in self.terms.items()}, trunc)

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return series_multiply(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.terms == other.terms and self.truncation == other.truncation

    def __repr__(self) -> str:
        body = " + ".join("(%s)*s^(%s)" % (c, e) for e, c in self.items()) or "0"
        return "PuiseuxSeries(%s; O(s^%s))" % (body, self.truncation)


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def series_multiply(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    """Exact truncated product.

    The product is valid below min(val(a) + trunc(b), val(b) + trunc(a)).
    """
    cands = []
    if b.truncation is not None and a.valuation() is not None:
        cands.append(a.valuation() + b.truncation)
    if a.truncation is not None and b.valuation() is not None:
        cands.append(b.valuation() + a.truncation)
    trunc = min(cands) if cands else None
    acc: dict = defaultdict(Fraction)
    for (ea, ba), va in a.terms.items():
        for (eb, bb), vb in b.terms.items():
            e = ea + eb
            if trunc is not None and e >= trunc:
                continue
            f, basis = _mul_basis(ba, bb)
            acc[(e, basis)] += va * vb * f
    return PuiseuxSeries._raw(acc, trunc)


class BivariateMonomialSum:
    """Finite sum of coefficient * y**a * sigma**s, truncated at sigma**sigma_truncation.

    ``y`` stands for the contour variable (Laurent exponents allowed).
    """

    __slots__ = ("terms", "sigma_truncation")

    def __init__(self, terms=(), sigma_truncation=None):
        self.sigma_truncation = None if sigma_truncation is None else as_fraction(sigma_truncation)
        acc: dict = defaultdict(Fraction)
        items = terms.items() if isinstance(terms, dict) else terms
        for (a, s), value in items:
            a, s = as_fraction(a), as_fraction(s)
            if self.sigma_truncation is not None and s >= self.sigma_truncation:
                continue
            for basis, r in _coeff_items(value):
                acc[(a, s, basis)] += r
        self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, terms, trunc) -> "BivariateMonomialSum":
        x = cls.__new__(cls)
        x.sigma_truncation = trunc
        x.terms = {k: v for k, v in terms.items() if v and (trunc is None or k[1] < trunc)}
        return x

    @classmethod
    def one(cls, sigma_truncation=None) -> "BivariateMonomialSum":
        return cls({(0, 0): 1}, sigma_truncation)

    def items(self) -> Iterator[tuple[Fraction, Fraction, Coefficient]]:
        for (a, s, b), v in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0], str(kv[0][2]))):
            yield a, s, Coefficient(v, b[0], b[1], b[2])

    def truncate(self, trunc) -> "BivariateMonomialSum":
        trunc = _min_trunc(self.sigma_truncation, as_fraction(trunc))
        return BivariateMonomialSum._raw(self.terms, trunc)

    def __add__(self, other: "BivariateMonomialSum") -> "BivariateMonomialSum":
        acc = defaultdict(Fraction, self.terms)
        for k, v in other.terms.items():
            acc[k] += v
        return BivariateMonomialSum._raw(acc, _min_trunc(self.sigma_truncation, other.sigma_truncation))

    def __mul__(self, other):
        if not isinstance(other, BivariateMonomialSum):
            acc: dict = defaultdict(Fraction)
            for basis, r in _coeff_items(other):
                for (a, s, b), v in self.terms.items():
                    f, nb = _mul_basis(b, basis)
                    acc[(a, s, nb)] += v * r * f
            return BivariateMonomialSum._raw(acc, self.sigma_truncation)
        trunc = _min_trunc(self.sigma_truncation, other.sigma_truncation)
        acc = defaultdict(Fraction)
        for (a1, s1, b1), v1 in self.terms.items():
            for (a2, s2, b2), v2 in other.terms.items():
                s = s1 + s2
                if trunc is not None and s >= trunc:
                    continue
                f, basis = _mul_basis(b1, b2)
                acc[(a1 + a2, s, basis)] += v1 * v2 * f
        return BivariateMonomialSum._raw(acc, trunc)

    def derivative(self) -> "BivariateMonomialSum":
        """d/dy, term by term."""
        return BivariateMonomialSum._raw(
            {(a - 1, s, b): v * a for (a, s, b), v in self.terms.items()}, self.sigma_truncation
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariateMonomialSum):
            return NotImplemented
        return self.terms == other.terms and self.sigma_truncation == other.sigma_truncation

    def __repr__(self) -> str:
        body = " + ".join("(%s)*y^(%s)*s^(%s)" % (c, a, s) for a, s, c in self.items()) or "0"
        return "BivariateMonomialSum(%s; O(s^%s))" % (body, self.sigma_truncation)


def formal_exp(x: BivariateMonomialSum) -> BivariateMonomialSum:
    """sum_k x^k / k!, cut at the sigma truncation of ``x``.

    Every term of ``x`` must carry a strictly positive sigma exponent, which
    makes the sum finite once a truncation is set.
    """
    for (_, s, _), _v in x.terms.items():
        if s <= 0:
            raise GradingError("formal_exp needs positive sigma degrees, found s^%s" % s)
    if x.sigma_truncation is None and x.terms:
        raise GradingError("formal_exp of a non-zero sum needs a sigma truncation")
    result = BivariateMonomialSum.one(x.sigma_truncation)
    power = result
    k = 1
    while True:
        power = (power * x) * Fraction(1, k)
        if not power.terms:
            return result
        result = result + power
        k += 1


def residue_at_zero(x: BivariateMonomialSum) -> PuiseuxSeries:
    """Coefficient of y**-1, as a series in sigma."""
    acc: dict = defaultdict(Fraction)
    for (a, s, b), v in x.terms.items():
        if a == -1:
            acc[(s, b)] += v
    return PuiseuxSeries._raw(acc, x.sigma_truncation)


@dataclass(frozen=True)
class SectorPhase:
    """A Stokes ray of exp(-c sigma u**p): direction ``turns`` (fraction of 2 pi), label ``l``."""

    l: Fraction
    turns: Fraction

    @classmethod
    def ray(cls, p, k: int, l=None) -> "SectorPhase":
        """The k-th ray, along which u**p is real and positive."""
        p = as_fraction(p)
        label = Fraction(k - 1) if l is None else as_fraction(l)
        return cls(label, (Fraction(k) / p) % 1)

    def moment_turns(self, A) -> Fraction:
        """Phase (in turns) picked up by the u**A dy measure along this ray."""
        return (self.turns * (as_fraction(A) + 1)) % 1

    @staticmethod
    def contour_factor_vanishes(theta) -> bool:
        """Difference of two adjacent rays is e^{2 pi i k theta}(e^{2 pi i theta} - 1)."""
        return as_fraction(theta).denominator == 1


@dataclass(frozen=True)
class Moment:
    coefficient: Coefficient
    sigma_exponent: Fraction
    phase_turns: Fraction


def sector_moment(A, p, sector: SectorPhase | None = None) -> Moment:
    """Formal value of the ray integral of u**A exp(-c sigma u**p).

    Equals Gamma((A+1)/p) (c sigma)**(-(A+1)/p) / |p| times the ray phase.
    """
    A, p = as_fraction(A), as_fraction(p)
    if p == 0:
        raise ValueError("p must be non-zero")
    arg = (A + 1) / p
    if arg.denominator == 1 and arg <= 0:
        raise PoleError("moment u^%s with p=%s hits Gamma(%s)" % (A, p, arg))
    r, g = GammaFactor.of(arg)
    coeff = Coefficient(r / abs(p), g, -arg)
    turns = sector.moment_turns(A) if sector is not None else Fraction(0)
    return Moment(coeff, -arg, turns)
