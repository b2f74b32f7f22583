"""Exact scalars: rationals, Bernoulli numbers and formal Gamma products.

Every coefficient produced by the engines is a rational number times a
product of Gamma functions at rational arguments, times a formal power of
the coupling constant.  Gamma arguments are always shifted into (0, 1]
using Gamma(x + 1) = x Gamma(x), so two coefficients that differ only by
such shifts end up with identical Gamma parts and can be added.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "Fraction",
    "PoleError",
    "GammaFactor",
    "Radical",
    "Coefficient",
    "as_fraction",
    "gamma_reduce",
    "bernoulli",
    "euler_characteristic",
    "format_fraction",
    "parse_fraction",
]


class PoleError(ArithmeticError):
    """Raised when a Gamma function is evaluated at a non-positive integer."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact values: %r" % (x,))
    return Fraction(x)


def parse_fraction(text: str) -> Fraction:
    """Parse "3", "-3/2" or "1/2".  Decimal notation is rejected."""
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError("expected an exact fraction such as '3' or '-3/2', got %r" % text)
    return Fraction(s)


def format_fraction(x: Fraction) -> str:
    x = as_fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


def _shift_into_unit(x: Fraction) -> tuple[Fraction, Fraction]:
    """Return (r, y) with Gamma(x) = r * Gamma(y) and y in (0, 1]."""
    if x.denominator == 1 and x <= 0:
        raise PoleError("Gamma has a pole at %s" % x)
    r = Fraction(1)
    y = x
    while y > 1:
        y -= 1
        r *= y
    while y <= 0:
        r /= y
        y += 1
    return r, y


@dataclass(frozen=True)
class GammaFactor:
    """Formal product of Gamma(a)**e, arguments normalized into (0, 1].

    Build instances with :meth:`from_args`, which also returns the rational
    prefactor split off during normalization.  Gamma(1) = 1 is dropped.
    """

    factors: tuple[tuple[Fraction, int], ...] = ()

    @classmethod
    def from_args(cls, args: Mapping[Fraction, int] | Iterable[tuple[Fraction, int]]):
        items = args.items() if isinstance(args, Mapping) else args
        r = Fraction(1)
        acc: dict[Fraction, int] = {}
        for a, e in items:
            if e == 0:
                continue
            s, y = _shift_into_unit(as_fraction(a))
            r *= s**e
            if y != 1:
                acc[y] = acc.get(y, 0) + e
        return r, cls(tuple(sorted((a, e) for a, e in acc.items() if e)))

    @classmethod
    def of(cls, *args) -> tuple[Fraction, "GammaFactor"]:
        return cls.from_args([(as_fraction(a), 1) for a in args])

    def is_empty(self) -> bool:
        return not self.factors

    def __mul__(self, other: "GammaFactor") -> "GammaFactor":
        acc = dict(self.factors)
        for a, e in other.factors:
            acc[a] = acc.get(a, 0) + e
        return GammaFactor(tuple(sorted((a, e) for a, e in acc.items() if e)))

    def __truediv__(self, other: "GammaFactor") -> "GammaFactor":
        return self * other.inverse()

    def inverse(self) -> "GammaFactor":
        return GammaFactor(tuple((a, -e) for a, e in self.factors))

    def __float__(self) -> float:
        v = 1.0
        for a, e in self.factors:
            v *= math.gamma(float(a)) ** e
        return v

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for a, e in self.factors:
            g = "Gamma(%s)" % a
            parts.append(g if e == 1 else "%s^%d" % (g, e))
        return "*".join(parts)


def gamma_reduce(numerator_args, denominator_args) -> tuple[Fraction, GammaFactor]:
    """Reduce prod Gamma(num) / prod Gamma(den) to r * G with G normalized."""
    acc: dict[Fraction, int] = {}
    for a in numerator_args:
        a = as_fraction(a)
        acc[a] = acc.get(a, 0) + 1
    for a in denominator_args:
        a = as_fraction(a)
        acc[a] = acc.get(a, 0) - 1
    return GammaFactor.from_args(acc)


@dataclass(frozen=True)
class Radical:
    """Formal product of b**q over positive integer bases with q in (0, 1).

    Integer parts of exponents are folded into the rational prefactor when a
    radical is created through :meth:`from_powers`.
    """

    powers: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_powers(cls, powers: Iterable[tuple[int, Fraction]]) -> tuple[Fraction, "Radical"]:
        acc: dict[int, Fraction] = {}
        for b, q in powers:
            if b <= 0:
                raise ValueError("radical base must be a positive integer")
            if b == 1:
                continue
            acc[b] = acc.get(b, Fraction(0)) + as_fraction(q)
        r = Fraction(1)
        out = []
        for b, q in sorted(acc.items()):
            whole = math.floor(q)
            r *= Fraction(b) ** whole
            frac = q - whole
            if frac:
                out.append((b, frac))
        return r, cls(tuple(out))

    def __mul__(self, other: "Radical") -> tuple[Fraction, "Radical"]:
        return Radical.from_powers(self.powers + other.powers)

    def __float__(self) -> float:
        v = 1.0
        for b, q in self.powers:
            v *= b ** float(q)
        return v

    def __str__(self) -> str:
        return "*".join("%d^(%s)" % (b, q) for b, q in self.powers) or "1"


@dataclass(frozen=True)
class Coefficient:
    """rational * gamma * radical * c**coupling_power."""

    rational: Fraction
    gamma: GammaFactor = field(default_factory=GammaFactor)
    coupling_power: Fraction = Fraction(0)
    radical: Radical = field(default_factory=Radical)

    def __post_init__(self):
        object.__setattr__(self, "rational", as_fraction(self.rational))
        object.__setattr__(self, "coupling_power", as_fraction(self.coupling_power))
        if self.rational == 0:
            object.__setattr__(self, "gamma", GammaFactor())
            object.__setattr__(self, "coupling_power", Fraction(0))
            object.__setattr__(self, "radical", Radical())

    @classmethod
    def gamma_ratio(cls, num, den, coupling_power=0) -> "Coefficient":
        r, g = gamma_reduce(num, den)
        return cls(r, g, as_fraction(coupling_power))

    @property
    def basis(self) -> tuple[GammaFactor, Fraction, Radical]:
        return (self.gamma, self.coupling_power, self.radical)

    def is_rational(self) -> bool:
        return self.gamma.is_empty() and not self.radical.powers

    def __mul__(self, other) -> "Coefficient":
        if not isinstance(other, Coefficient):
            return Coefficient(self.rational * as_fraction(other), *self.basis)
        r, rad = self.radical * other.radical
        return Coefficient(
            self.rational * other.rational * r,
            self.gamma * other.gamma,
            self.coupling_power + other.coupling_power,
            rad,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Coefficient":
        if not isinstance(other, Coefficient):
            return Coefficient(self.rational / as_fraction(other), *self.basis)
        r, rad = Radical.from_powers([(b, -q) for b, q in other.radical.powers])
        inverse = Coefficient(r / other.rational, other.gamma.inverse(), -other.coupling_power, rad)
        return self * inverse

    def __neg__(self) -> "Coefficient":
        return Coefficient(-self.rational, *self.basis)

    def __float__(self) -> float:
        """Numeric value with the coupling constant set to 1."""
        return float(self.rational) * float(self.gamma) * float(self.radical)

    def __str__(self) -> str:
        parts = [str(self.rational)]
        if not self.gamma.is_empty():
            parts.append(str(self.gamma))
        if self.radical.powers:
            parts.append(str(self.radical))
        if self.coupling_power:
            parts.append("c^(%s)" % self.coupling_power)
        return "*".join(parts)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{k<=m} binom(m+1, k) B_k = m + 1 holds for B_1 = +1/2
    table = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(math.comb(m + 1, k) * table[k] for k in range(m))
        table.append((Fraction(m + 1) - s) / (m + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with t/(1 - exp(-t)) = sum B_n t^n / n!, so B_1 = +1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _bernoulli_table(n)[n]


def euler_characteristic(g: int) -> Fraction:
    """Orbifold Euler characteristic of the genus-g one-pointed moduli space, -B_2g/(2g)."""
    if g < 1:
        raise ValueError("g must be at least 1")
    return -bernoulli(2 * g) / (2 * g)
