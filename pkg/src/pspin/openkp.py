"""Open intersection numbers of the Airy model with a logarithmic potential.

U(sigma) = exp(-c sigma^3/12) / (2 sigma^{3/2}) * int du exp(-(c/4) u^2 + m log((u + x)/(u - x))),
with x = sigma^{3/2}.  Expanding the logarithm gives powers (x/u)^d, so each
u-monomial carries exactly the x-power of its numerator.  Odd d are residues
at u = 0; even d are Gaussian moments continued to negative order.

The power of m counts boundary components.  Integer n comes with even powers
of m and half-integer n with odd powers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import Coefficient, GammaFactor, as_fraction, gamma_reduce
from .onepoint import IntersectionRecord

__all__ = [
    "MPolynomial",
    "OpenLabel",
    "ParityError",
    "contour_rule",
    "gamma_rule",
    "gamma_rule_closed",
    "continuation_descent_holds",
    "calibrate_coupling",
    "open_one_point",
    "boundary_profile",
    "open_riemann_roch_check",
    "string_equation_check",
    "APPENDIX_TAU0_TAU4R_SQUARED",
]


class ParityError(AssertionError):
    pass


class MPolynomial:
    """Polynomial in the boundary parameter m with rational coefficients."""

    def __init__(self, coefficients=None):
        items = coefficients.items() if isinstance(coefficients, dict) else (coefficients or [])
        self.coefficients: dict[int, Fraction] = {}
        for d, c in items:
            c = as_fraction(c)
            if int(d) < 0:
                raise ValueError("degrees must be non-negative")
            if c:
                self.coefficients[int(d)] = self.coefficients.get(int(d), Fraction(0)) + c
        self.coefficients = {d: c for d, c in sorted(self.coefficients.items()) if c}

    @classmethod
    def constant(cls, c) -> "MPolynomial":
        return cls({0: c})

    def degree(self) -> int:
        return max(self.coefficients, default=-1)

    def parity(self):
        """0 or 1 if every degree has that parity, None for mixed, and None for zero."""
        ps = {d % 2 for d in self.coefficients}
        return ps.pop() if len(ps) == 1 else None

    def truncate(self, max_degree: int) -> "MPolynomial":
        return MPolynomial({d: c for d, c in self.coefficients.items() if d <= max_degree})

    def __call__(self, m):
        m = as_fraction(m)
        return sum((c * m**d for d, c in self.coefficients.items()), Fraction(0))

    def __add__(self, other):
        if not isinstance(other, MPolynomial):
            other = MPolynomial.constant(other)
        acc = dict(self.coefficients)
        for d, c in other.coefficients.items():
            acc[d] = acc.get(d, Fraction(0)) + c
        return MPolynomial(acc)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, MPolynomial):
            other = as_fraction(other)
            return MPolynomial({d: c * other for d, c in self.coefficients.items()})
        acc: dict[int, Fraction] = {}
        for d1, c1 in self.coefficients.items():
            for d2, c2 in other.coefficients.items():
                acc[d1 + d2] = acc.get(d1 + d2, Fraction(0)) + c1 * c2
        return MPolynomial(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MPolynomial):
            try:
                other = MPolynomial.constant(as_fraction(other))
            except (TypeError, ValueError):
                return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(self.coefficients.items()))

    def __bool__(self):
        return bool(self.coefficients)

    def __repr__(self):
        return "MPolynomial(%s)" % self

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for d, c in self.coefficients.items():
            parts.append(str(c) if d == 0 else ("(%s)*m" % c if d == 1 else "(%s)*m^%d" % (c, d)))
        return " + ".join(parts)


@dataclass(frozen=True, order=True)
class OpenLabel:
    """tau_n; half-integer n marks a point on the boundary."""

    n: Fraction

    def __post_init__(self):
        n = as_fraction(self.n)
        object.__setattr__(self, "n", n)
        if n < 0 or (2 * n).denominator != 1:
            raise ValueError("open labels need n >= 0 with 2n an integer, got %s" % n)

    @property
    def on_boundary(self) -> bool:
        return self.n.denominator == 2

    def __str__(self):
        return "tau_%s" % self.n


# --- the two integration rules -------------------------------------------

def contour_rule(k: int, a) -> Fraction:
    """Residue at 0 of exp(-a u^2) / u^(2k+1): (-a)^k / k!."""
    if k < 0:
        return Fraction(0)
    return (-as_fraction(a)) ** k / math.factorial(k)


def _double_factorial_odd(n: int) -> Fraction:
    """n!! for odd n, continued to negative n through n!! = (n+2)!! / (n+2)."""
    if n % 2 == 0:
        raise ValueError("odd argument expected")
    if n >= -1:
        return Fraction(math.prod(range(n, 0, -2)))
    return _double_factorial_odd(n + 2) / (n + 2)


def gamma_rule_closed(k: int) -> tuple[Fraction, Fraction]:
    """int exp(-a u^2) u^(-2k) du = r sqrt(pi) a^(k - 1/2); returns (r, k - 1/2)."""
    r = Fraction(-1) ** k * Fraction(2) ** k / _double_factorial_odd(2 * k - 1)
    return r, Fraction(2 * k - 1, 2)


def gamma_rule(k: int) -> Coefficient:
    """Same moment as Gamma(1/2 - k) a^(k - 1/2), with Gamma(1/2) = sqrt(pi) kept formal."""
    r, g = GammaFactor.of(Fraction(1, 2) - k)
    return Coefficient(r, g, Fraction(2 * k - 1, 2))


def continuation_descent_holds(k: int) -> bool:
    """-d/da of the order-k moment equals the order-(k-1) moment, for both rules."""
    r, e = gamma_rule_closed(k)
    r_prev, e_prev = gamma_rule_closed(k - 1)
    even_ok = -r * e == r_prev and e - 1 == e_prev
    # -d/da (-a)^k/k! = (-a)^(k-1)/(k-1)!
    odd_ok = k < 1 or -k * contour_rule(k, 1) == contour_rule(k - 1, 1)
    formal = gamma_rule(k)
    formal_ok = formal.rational == r and formal.gamma == GammaFactor(((Fraction(1, 2), 1),))
    return even_ok and odd_ok and formal_ok


# --- the expansion --------------------------------------------------------

def _exp_log_series(d_max: int) -> list[MPolynomial]:
    """Coefficients P_d(m) of z^d in exp(m * sum_j 2 z^(2j+1)/(2j+1))."""
    L = [Fraction(0)] * (d_max + 1)
    for d in range(1, d_max + 1, 2):
        L[d] = Fraction(2, d)
    # exp via P' = m L' P, i.e. d P_d = m sum_k k L_k P_{d-k}
    P = [MPolynomial.constant(1)] + [MPolynomial() for _ in range(d_max)]
    m_poly = MPolynomial({1: 1})
    for d in range(1, d_max + 1):
        acc = MPolynomial()
        for k in range(1, d + 1):
            if L[k]:
                acc = acc + P[d - k] * (k * L[k])
        P[d] = acc * m_poly * Fraction(1, d)
    return P


def calibrate_coupling(g_check: int = 5) -> Fraction:
    """Fix c so that the m = 0 series (-c/12)^g / g! gives 1/(24^g g!)."""
    c = -Fraction(12, 24)
    for g in range(1, g_check + 1):
        if (-c / 12) ** g / math.factorial(g) != Fraction(1, 24**g * math.factorial(g)):
            raise AssertionError("coupling calibration is not uniform in g")
    return c


ODD_WEIGHT = Fraction(1, 2)  # a line through the pole at u = 0 takes half its residue


def open_one_point(n_max, m_degree_max: int) -> dict[OpenLabel, MPolynomial]:
    """<tau_n> as polynomials in m for 0 <= n <= n_max, truncated at m-degree m_degree_max.

    The sigma power of x^D is 3D/2 - 2, so n = 3D/2 - 2.
    """
    n_max = as_fraction(n_max)
    c = calibrate_coupling()
    a = c / 4
    D_max = int(math.floor((2 * (n_max + 2)) / 3))
    P = _exp_log_series(D_max)
    moment = []
    for d in range(D_max + 1):
        if d % 2:
            moment.append(ODD_WEIGHT * contour_rule((d - 1) // 2, a))
        else:
            # ratio to the Gaussian mass: a^k Gamma(1/2 - k) / Gamma(1/2)
            r, g = gamma_reduce([Fraction(1, 2) - d // 2], [Fraction(1, 2)])
            if not g.is_empty():
                raise AssertionError("sqrt(pi) failed to cancel: %s" % g)
            moment.append(r * a ** (d // 2))
    inner = [P[d] * moment[d] for d in range(D_max + 1)]
    # times exp(-c x^2 / 12)
    out: dict[OpenLabel, MPolynomial] = {}
    for D in range(D_max + 1):
        total = MPolynomial()
        for j in range(D // 2 + 1):
            total = total + inner[D - 2 * j] * ((-c / 12) ** j / math.factorial(j))
        n = Fraction(3 * D, 2) - 2
        if n < 0 or n > n_max:
            continue
        poly = total.truncate(m_degree_max)
        want = 1 if n.denominator == 2 else 0
        if poly and poly.parity() != want:
            raise ParityError("tau_%s has the wrong m-parity: %s" % (n, poly))
        out[OpenLabel(n)] = poly
    return out


def boundary_profile(poly: MPolynomial) -> list[tuple[int, Fraction]]:
    """(number of boundaries, coefficient) pairs of an open intersection number."""
    return list(poly.coefficients.items())


def open_riemann_roch_check(g: int, h: int, b: int, n: int, labels) -> bool:
    """3g - 3 + 2n = 6h - 6 + 3b + 2n = 2 sum n_i with g = 2h + b - 1."""
    if min(g, h, b, n) < 0:
        raise ValueError("arguments must be non-negative")
    if len(labels) != n:
        return False
    if g != 2 * h + b - 1:
        return False
    total = sum((as_fraction(x.n if isinstance(x, OpenLabel) else x) for x in labels), Fraction(0))
    return 3 * g - 3 + 2 * n == 6 * h - 6 + 3 * b + 2 * n == 2 * total


def _label_key(lab):
    return (lab.n, lab.l)


def string_equation_check(lhs: IntersectionRecord, rhs_terms: list[IntersectionRecord]) -> bool:
    """<tau_{0,0} prod tau_{n_i,l_i}> = sum_i <tau_{n_i - 1, l_i} prod_{j != i} tau_{n_j,l_j}>.

    ``rhs_terms`` lists the records for the lowered insertions (terms with
    n_i = 0 are dropped).  Repeated insertions give repeated records.
    """
    for r in rhs_terms:
        if r.p != lhs.p:
            raise ValueError("records mix p=%s and p=%s" % (lhs.p, r.p))
    labels = list(lhs.punctures)
    lead = labels[0]
    if (lead.n, lead.l) != (0, 0):
        raise ValueError("the left-hand side must start with tau_{0,0}")
    rest = labels[1:]
    expected = []
    for i, lab in enumerate(rest):
        if lab.n == 0:
            continue
        lowered = [(x.n - 1, x.l) if j == i else (x.n, x.l) for j, x in enumerate(rest)]
        expected.append(sorted(lowered))
    got = [sorted(_label_key(x) for x in r.punctures) for r in rhs_terms]
    if sorted(expected) != sorted(got):
        return False
    total = MPolynomial()
    for r in rhs_terms:
        total = total + (r.value if isinstance(r.value, MPolynomial) else MPolynomial.constant(r.value))
    lhs_value = lhs.value if isinstance(lhs.value, MPolynomial) else MPolynomial.constant(lhs.value)
    return total == lhs_value


# <tau_{0,0} tau_{4,-1}^2> from the Virasoro constraints of the logarithmic model
APPENDIX_TAU0_TAU4R_SQUARED = MPolynomial({2: Fraction(16, 144), 4: Fraction(11, 144), 6: Fraction(1, 144)})
