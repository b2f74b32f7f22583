"""Floating-point cross-checks.

Nothing here feeds the exact engines.  The contour integrals are done along
steepest-descent rays with Gauss-Legendre rules whose node count doubles until
two successive results agree; finite-N correlators are exact residue sums.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import special

__all__ = [
    "RangeError",
    "ConvergenceError",
    "DegeneratePoleError",
    "ComplexSeriesSample",
    "SourceConfig",
    "airy",
    "airy_prime",
    "airy_series",
    "airy_asymptotic",
    "quadrature",
    "one_point_numeric",
    "airy_closed_form_p3",
    "airy_two_term_p3",
    "fit_leading_exponent",
    "two_point_numeric",
    "two_point_p3_leading_coefficient",
    "two_point_scaling_exponent",
    "finite_n_one_point",
    "hermitian_one_point",
    "finite_n_two_point",
    "contour_one_point",
    "contour_two_point",
    "fit_two_series_exponents_p3",
]


class RangeError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


class DegeneratePoleError(ArithmeticError):
    pass


@dataclass
class ComplexSeriesSample:
    sigma: complex
    value: complex
    estimated_error: float
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.estimated_error >= 0:
            raise ValueError("estimated_error must be non-negative")


# --- Airy function --------------------------------------------------------

_AIRY_SWITCH = 8.0
AI0 = 1 / (3 ** (2 / 3) * math.gamma(2 / 3))
AIP0 = -1 / (3 ** (1 / 3) * math.gamma(1 / 3))


def airy_series(x: float, derivative: bool = False) -> float:
    """Maclaurin series of Ai or Ai', summed in extended precision to survive cancellation."""
    with mpmath.workdps(20 + int(abs(x) ** 1.5)):
        x = mpmath.mpf(x)
        c1 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = 1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
        x3 = x**3
        if not derivative:
            f = t = mpmath.mpf(1)
            g = s = x
            k = 1
            while True:
                t *= x3 / ((3 * k - 1) * (3 * k))
                s *= x3 / ((3 * k) * (3 * k + 1))
                f += t
                g += s
                if abs(t) + abs(s) < mpmath.eps * (abs(f) + abs(g)) and k > 3:
                    break
                k += 1
            return float(c1 * f - c2 * g)
        # f' = sum x^(3k-1)/..., g' = sum x^(3k)/...
        fp = mpmath.mpf(0)
        gp = mpmath.mpf(1)
        t = mpmath.mpf(1)
        s = mpmath.mpf(1)
        k = 1
        while True:
            t *= x3 / ((3 * k - 1) * (3 * k))
            s *= x3 / ((3 * k) * (3 * k + 1))
            dt = 3 * k * t / x if x else mpmath.mpf(0)
            ds = (3 * k + 1) * s
            fp += dt
            gp += ds
            if abs(dt) + abs(ds) < mpmath.eps * (abs(fp) + abs(gp) + 1) and k > 3:
                break
            k += 1
        return float(c1 * fp - c2 * gp)


def _asymptotic_terms(zeta: float, derivative: bool):
    """u_k / zeta^k (or v_k / zeta^k) up to the smallest term."""
    out = []
    u = 1.0
    k = 0
    prev = math.inf
    while k < 200:
        coeff = u if not derivative else (-u * (6 * k + 1) / (6 * k - 1) if k else 1.0)
        term = coeff / zeta**k
        if abs(term) > prev:
            break
        out.append(term)
        prev = abs(term)
        if prev < 1e-18:
            break
        k += 1
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
    return out


def airy_asymptotic(x: float, derivative: bool = False) -> float:
    if abs(x) < 1:
        raise RangeError("asymptotic expansion needs |x| >= 1")
    r = abs(x)
    zeta = 2.0 / 3.0 * r**1.5
    terms = _asymptotic_terms(zeta, derivative)
    if x > 0:
        s = sum((-1) ** k * t for k, t in enumerate(terms))
        if derivative:
            return -(r**0.25) * math.exp(-zeta) / (2 * math.sqrt(math.pi)) * s
        return math.exp(-zeta) / (2 * math.sqrt(math.pi) * r**0.25) * s
    even = sum((-1) ** (k // 2) * t for k, t in enumerate(terms) if k % 2 == 0)
    odd = sum((-1) ** (k // 2) * t for k, t in enumerate(terms) if k % 2 == 1)
    phase = zeta + math.pi / 4
    if derivative:
        return r**0.25 / math.sqrt(math.pi) * (-math.cos(phase) * even - math.sin(phase) * odd)
    return (math.sin(phase) * even - math.cos(phase) * odd) / (math.sqrt(math.pi) * r**0.25)


def airy(x: float) -> float:
    """Ai(x) for |x| <= 30: power series below |x| = 8, asymptotic series beyond."""
    x = float(x)
    if not abs(x) <= 30:
        raise RangeError("airy is only provided for |x| <= 30, got %r" % x)
    if abs(x) <= _AIRY_SWITCH:
        return airy_series(x)
    return airy_asymptotic(x)


def airy_prime(x: float) -> float:
    x = float(x)
    if not abs(x) <= 30:
        raise RangeError("airy_prime is only provided for |x| <= 30, got %r" % x)
    if abs(x) <= _AIRY_SWITCH:
        return airy_series(x, derivative=True)
    return airy_asymptotic(x, derivative=True)


# --- quadrature -----------------------------------------------------------

def quadrature(f, a: float, b: float, tol: float = 1e-12, n0: int = 32, max_nodes: int = 8192):
    """Gauss-Legendre on [a, b], doubling nodes until successive values agree.

    ``f`` takes a numpy array.  Returns (value, estimated_error).
    """
    n = n0
    prev = None
    while n <= max_nodes:
        x, w = np.polynomial.legendre.leggauss(n)
        t = 0.5 * (b - a) * x + 0.5 * (b + a)
        val = 0.5 * (b - a) * np.sum(w * f(t))
        if prev is not None:
            err = abs(val - prev)
            if err < tol * max(1.0, abs(val)):
                return complex(val) if np.iscomplexobj(val) else float(val), float(err)
        prev = val
        n *= 2
    raise ConvergenceError("quadrature did not converge on [%g, %g] with %d nodes" % (a, b, max_nodes))


# --- one-point ------------------------------------------------------------

def _exponent_poly(p: int, sigma: float):
    """Coefficients (low to high) of (u - s/2)^(p+1) - (u + s/2)^(p+1)."""
    out = np.zeros(p + 2)
    for k in range(p + 2):
        out[k] = math.comb(p + 1, k) * ((-sigma / 2) ** (p + 1 - k) - (sigma / 2) ** (p + 1 - k))
    return out


def _contour_rays(p: int):
    """Ray angles (incoming, outgoing) of a contour joining two decaying sectors."""
    if p % 2 == 0:
        return math.pi, 0.0
    k = (p - 1) // 2
    return -2 * math.pi * k / p, 2 * math.pi * k / p


def one_point_numeric(p: int, sigma: float, tol: float = 1e-13) -> ComplexSeriesSample:
    """(1/sigma) int du/(2 pi i) exp[(u - s/2)^(p+1) - (u + s/2)^(p+1)] along two decaying rays.

    For p = 3 the closed Airy form is returned in ``extra["airy"]``.
    """
    if int(p) != p or p < 2:
        raise ValueError("one_point_numeric needs an integer p >= 2")
    if not 0 < sigma <= 0.5:
        raise ValueError("sigma must lie in (0, 0.5]")
    p = int(p)
    coeffs = _exponent_poly(p, sigma)
    R = (60.0 / ((p + 1) * sigma)) ** (1.0 / p) + 1.0
    th_in, th_out = _contour_rays(p)
    total = 0j
    err = 0.0
    for theta, sign in ((th_out, 1), (th_in, -1)):
        e = cmath.exp(1j * theta)

        def f(r, e=e):
            u = r * e
            return np.exp(np.polynomial.polynomial.polyval(u, coeffs)) * e

        v, dv = quadrature(f, 0.0, R, tol)
        total += sign * v
        err += dv
    value = total / (2j * math.pi * sigma)
    extra = {}
    if p == 3:
        extra["airy"] = airy_closed_form_p3(sigma)
    return ComplexSeriesSample(sigma, value, err / (2 * math.pi * sigma), extra)


def airy_closed_form_p3(sigma: float) -> float:
    """The p = 3 integral in closed form: 12^(-1/3) sigma^(-4/3) Ai(-12^(-1/3) sigma^(8/3))."""
    k = 12.0 ** (-1.0 / 3.0)
    return k * sigma ** (-4.0 / 3.0) * airy(-k * sigma ** (8.0 / 3.0))


def airy_two_term_p3(sigma: float) -> float:
    """Leading term of each of the two small-sigma series of the p = 3 one-point function."""
    k = 12.0 ** (-1.0 / 3.0)
    z = -k * sigma ** (8.0 / 3.0)
    return k * sigma ** (-4.0 / 3.0) * (AI0 + AIP0 * z)


def fit_leading_exponent(p: int, sigmas=(0.05, 0.1, 0.2)) -> float:
    """Fit log|U| = a log(sigma) + b + c sigma^(2 + 2/p) through the samples and return a.

    The third parameter absorbs the first genus correction.
    """
    xs = np.array(sigmas, dtype=float)
    ys = np.array([math.log(abs(one_point_numeric(p, s).value)) for s in xs])
    A = np.vstack([np.log(xs), np.ones_like(xs), xs ** (2 + 2.0 / p)]).T
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(sol[0])


def _loglog_slope(f, sigmas, correction: float) -> float:
    xs = np.array(sigmas, dtype=float)
    ys = np.array([math.log(abs(f(s))) for s in xs])
    A = np.vstack([np.log(xs), np.ones_like(xs), xs**correction]).T
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(sol[0])


def fit_two_series_exponents_p3(small=(0.02, 0.04, 0.08), large=(0.1, 0.2, 0.3)) -> tuple[float, float]:
    """Leading sigma exponents of the two small-sigma series of the p = 3 one-point function.

    The leading exponent a comes from the small samples.  Dividing it out
    leaves W = A + B sigma^e + ..., and W(s) - W(s/2) isolates sigma^e, so
    the second series starts at a + e.
    """
    def U(s):
        return one_point_numeric(3, s).value.real

    step = 8.0 / 3.0
    a = _loglog_slope(U, small, step)

    def D(s):
        return U(s) * s ** (-a) - U(s / 2) * (s / 2) ** (-a)

    e = _loglog_slope(D, large, step)
    return a, a + e


# --- two-point ------------------------------------------------------------

def _two_point_p3(s1: float, s2: float, tol: float):
    S = s1 + s2
    k1, k2 = (3 * s1) ** (1 / 3), (3 * s2) ** (1 / 3)
    d1 = s1 ** (8 / 3) / (4 * 3 ** (1 / 3))
    d2 = s2 ** (8 / 3) / (4 * 3 ** (1 / 3))
    X = 28.0 / k2  # Ai(28) ~ 1e-44

    def f(x):
        a = special.airy(k2 * x - d1)[0]
        b = special.airy(-k1 * x - d2)[0]
        return np.sinh(0.5 * S * k1 * k2 * x) * a * b

    v, err = quadrature(f, 0.0, X, tol, n0=64)
    return 2.0 / S * v, 2.0 / S * err


def _phi(x: np.ndarray, quad_coeff: float, slope: float):
    """int dv exp(-v^4/4 - q v^2 + slope x v) with v on the imaginary axis, divided by i.

    On v = i w this is int dw exp(-w^4/4 + q w^2 + i slope x w) = 2 int_0^oo cos(slope x w) ...
    """
    w, wt = np.polynomial.legendre.leggauss(400)
    W = 4.5 + math.sqrt(max(quad_coeff, 0.0)) * 2
    w = 0.5 * W * (w + 1)
    wt = 0.5 * W * wt
    base = np.exp(-(w**4) / 4 + quad_coeff * w**2) * wt
    return 2.0 * np.cos(np.outer(x, w) * slope) @ base


def _two_point_p4(s1: float, s2: float, tol: float):
    S = s1 + s2
    k1, k2 = (4 * s1) ** 0.25, (4 * s2) ** 0.25
    q1, q2 = s1**2.5 / 4, s2**2.5 / 4
    X = 40.0 / min(k1, k2)

    def f(x):
        return np.sinh(0.5 * S * k1 * k2 * x) * _phi(x, q1, k2) * _phi(x, q2, -k1)

    v, err = quadrature(f, 0.0, X, tol, n0=64, max_nodes=4096)
    # the two factors of i from the rotated v-contours give -1
    return -2.0 / S * v, 2.0 / S * err


def two_point_numeric(p: int, sigma1: float, sigma2: float, tol: float = 1e-12) -> ComplexSeriesSample:
    """Connected two-point function at p = 3 (Airy product) or p = 4 (nested quadrature)."""
    if p not in (3, 4):
        raise ValueError("two_point_numeric supports p = 3 and p = 4")
    for s in (sigma1, sigma2):
        if not 0 < s <= 0.5:
            raise ValueError("sigma values must lie in (0, 0.5]")
    if p == 3:
        v, err = _two_point_p3(sigma1, sigma2, tol)
    else:
        v, err = _two_point_p4(sigma1, sigma2, max(tol, 1e-10))
    return ComplexSeriesSample(complex(sigma1, 0), complex(v), err, {"sigma2": sigma2})


def _leading_sigma1_coefficient(s2: float, ts=(0.004, 0.003, 0.002, 0.001)) -> float:
    """lim U_c(s1, s2) / s1^(1/3) as s1 -> 0, by polynomial extrapolation in t = s1^(1/3)."""
    ts = np.array(ts)
    hs = np.array([two_point_numeric(3, t**3, s2, tol=1e-14).value.real / t for t in ts])
    coeffs = np.polyfit(ts, hs, len(ts) - 1)
    return float(coeffs[-1])


def two_point_p3_leading_coefficient(sigma: float = 0.05) -> dict:
    """Numeric <tau_{0,0} tau_{2,0}>_1 at p = 3.

    The s1^(1/3) coefficient h(s2) of U_c is k0 s2^(-1/3) (1 + A s2^(8/3) + ...).
    A is measured at s2 = sigma and k0 near s2 = 0.  The symbolic two-term
    Airy series fixes A in the same variables; the normalized value is
    (p - 1)/24 * A_numeric / A_series.
    """
    h_small = _leading_sigma1_coefficient(1e-3)
    k0 = h_small * (1e-3) ** (1 / 3)
    h = _leading_sigma1_coefficient(sigma)
    A_num = (h * sigma ** (1 / 3) / k0 - 1) / sigma ** (8 / 3)
    A_series = -(AIP0 / AI0) / (4 * 3 ** (1 / 3))
    return {
        "k0": k0,
        "A_numeric": A_num,
        "A_series": A_series,
        "normalized": (3 - 1) / 24 * A_num / A_series,
    }


def two_point_scaling_exponent(p: int, sigmas=(0.05, 0.1, 0.2)) -> float:
    """Log-log slope of U_c(s, s) on the diagonal, with the genus-1 correction fitted out."""
    xs = np.array(sigmas, dtype=float)
    ys = np.array([math.log(abs(two_point_numeric(p, s, s).value)) for s in xs])
    A = np.vstack([np.log(xs), np.ones_like(xs), xs ** (2 + 2.0 / p)]).T
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(sol[0])


# --- finite N -------------------------------------------------------------

@dataclass
class SourceConfig:
    """Upper (r) and lower (rho) source eigenvalues of the supermatrix model."""

    upper: list = field(default_factory=list)
    lower: list = field(default_factory=list)

    def satisfies_pspin(self, p: int, tol: float = 1e-12) -> bool:
        """sum 1/a^2 = p - 1 and sum 1/a^m = 0 for m = 3..p over the upper sources."""
        a = np.array(self.upper, dtype=complex)
        if abs(np.sum(a**-2.0) - (p - 1)) > tol:
            return False
        return all(abs(np.sum(a ** (-float(m)))) <= tol for m in range(3, p + 1))


def _points(src: SourceConfig):
    """Poles and zeros as (centre, multiple of sigma) so differences avoid r + sigma/2 rounding."""
    poles = [(complex(r), 0.5) for r in src.upper] + [(complex(rho), -0.5) for rho in src.lower]
    zeros = [(complex(r), -0.5) for r in src.upper] + [(complex(rho), 0.5) for rho in src.lower]
    return poles, zeros


def _poles(src: SourceConfig, sigma: complex):
    return [c + k * sigma for c, k in _points(src)[0]]


def _check_distinct(points, what="poles"):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) < 1e-10:
                raise DegeneratePoleError("%s %d and %d coincide at %s" % (what, i, j, points[i]))


def _one_point_residues(src: SourceConfig, sigma: complex, phase: complex = -1j):
    """Residues of exp(phase sigma u) prod(u - r + s/2)/(u - r - s/2) prod(u - rho - s/2)/(u - rho + s/2)."""
    poles, zeros = _points(src)
    _check_distinct([c + k * sigma for c, k in poles])
    out = []
    for idx, (c0, k0) in enumerate(poles):
        u0 = c0 + k0 * sigma
        v = cmath.exp(phase * sigma * u0)
        for c, k in zeros:
            v *= (c0 - c) + (k0 - k) * sigma
        for j, (c, k) in enumerate(poles):
            if j != idx:
                v /= (c0 - c) + (k0 - k) * sigma
        out.append((u0, v))
    return out


def finite_n_one_point(src: SourceConfig, sigma: complex, phase: complex = -1j) -> complex:
    """(1/sigma) times the sum of residues at the source poles.

    ``phase`` = -i is the supermatrix convention exp(-i sigma u); phase = 1 gives
    the Hermitian convention after the shift u -> u - sigma/2 with N = 1.
    """
    if sigma == 0:
        raise ValueError("sigma must be non-zero")
    return sum(v for _u, v in _one_point_residues(src, sigma, phase)) / sigma


def hermitian_one_point(a, sigma: complex, N: int = 1) -> complex:
    """(1/(N sigma)) exp(N sigma^2/2) sum of residues at u = a_j of prod(1 - sigma/(a_j - u)) exp(N sigma u)."""
    a = [complex(x) for x in a]
    _check_distinct(a, "sources")
    total = 0j
    for k, ak in enumerate(a):
        # (1 - s/(a - u)) = (u - a + s)/(u - a); the pole at a_k has residue factor s
        v = sigma * cmath.exp(N * sigma * ak)
        for j, aj in enumerate(a):
            if j != k:
                v *= (ak - aj + sigma) / (ak - aj)
        total += v
    return cmath.exp(N * sigma**2 / 2) * total / (N * sigma)


def finite_n_two_point(src: SourceConfig, sigma1: complex, sigma2: complex) -> complex:
    """Connected two-point function: double residue sum over source poles only.

    The poles at u1 - u2 = +-(s1 + s2)/2 are left out.  With nested circles
    they contribute as well; see :func:`contour_two_point`.
    """
    S = sigma1 + sigma2
    r1 = _one_point_residues(src, sigma1)
    r2 = _one_point_residues(src, sigma2)
    total = 0j
    for u1, v1 in r1:
        for u2, v2 in r2:
            d = (u1 - u2 - S / 2) * (u1 - u2 + S / 2)
            if abs(d) < 1e-10:
                raise DegeneratePoleError("source pole meets a determinant pole at u1 - u2 = %s" % (u1 - u2))
            total += v1 * v2 / d
    return total


def contour_one_point(src: SourceConfig, sigma: complex, radius: float, nodes: int = 4096, phase: complex = -1j) -> complex:
    """The same one-point integral on a circle of the given radius (trapezoidal rule)."""
    poles = _poles(src, sigma)
    centre = sum(poles) / len(poles) if poles else 0j
    if any(abs(q - centre) >= radius for q in poles):
        raise ValueError("the circle does not enclose every pole")
    zeros = [complex(r) - sigma / 2 for r in src.upper] + [complex(rho) + sigma / 2 for rho in src.lower]
    theta = 2 * np.pi * np.arange(nodes) / nodes
    u = centre + radius * np.exp(1j * theta)
    f = np.exp(phase * sigma * u)
    for z in zeros:
        f = f * (u - z)
    for q in poles:
        f = f / (u - q)
    # du/(2 pi i) = radius e^{i theta} d theta / (2 pi)
    val = np.mean(f * radius * np.exp(1j * theta))
    return complex(val) / sigma


def _source_factor(src: SourceConfig, sigma: complex, u):
    f = np.exp(-1j * sigma * u)
    for r in src.upper:
        f = f * (u - r + sigma / 2) / (u - r - sigma / 2)
    for rho in src.lower:
        f = f * (u - rho - sigma / 2) / (u - rho + sigma / 2)
    return f


def contour_two_point(src: SourceConfig, sigma1: complex, sigma2: complex, outer: float, inner: float, nodes: int = 1024) -> complex:
    """Connected two-point integral with u1 on a circle of radius ``outer`` and u2 on ``inner``.

    The outer circle must enclose every u2 + -(s1 + s2)/2, so the determinant
    poles are picked up too.  For a single source this equals
    U(s1 + s2) - U(s1) U(s2).
    """
    S = sigma1 + sigma2
    reach = max([abs(q) for q in _poles(src, sigma2)] + [0.0])
    if reach >= inner or inner + abs(S) / 2 >= outer:
        raise ValueError("the circles must be nested around every pole")
    if any(abs(q) >= outer for q in _poles(src, sigma1)):
        raise ValueError("the outer circle does not enclose every pole")
    theta = 2 * np.pi * np.arange(nodes) / nodes
    u1 = outer * np.exp(1j * theta)[:, None]
    u2 = inner * np.exp(1j * theta)[None, :]
    body = _source_factor(src, sigma1, u1) * _source_factor(src, sigma2, u2)
    body = body / ((u1 - u2 - S / 2) * (u1 - u2 + S / 2))
    # du/(2 pi i) = u d theta / (2 pi) on each circle
    return complex(np.mean(body * u1 * u2))
