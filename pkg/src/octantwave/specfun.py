"""Scalar special functions: Gamma, Pochhammer, modified Bessel I, Gauss 2F1.

Everything here is pure-double arithmetic built from first principles so the
higher modules carry no opaque dependencies in their numerical core:

* ``gamma_fn``   Lanczos rational approximation with reflection for x < 0.5,
                 good to ~1e-13 relative on [-30, 30] away from poles.
* ``pochhammer`` rising factorial, switching to log-space accumulation with a
                 sign tracker once the direct product could lose range.
* ``bessel_i``   power series for x <= 15, large-x asymptotic expansion above;
                 the crossover leaves the dropped subdominant e^{-x} branch
                 below 1e-13 relative.
* ``gauss_2f1_series`` plain term-recurrence summation inside |w| < 1.
"""

from __future__ import annotations

import math

from .control import AccuracyBudget
from .errors import ConvergenceError, DivergenceError, DomainError, OverflowRangeError, PoleError

_SQRT_PI = math.sqrt(math.pi)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# Lanczos g = 7, n = 9 coefficient set.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_MAX_LOG = math.log(1.7976931348623157e308)
_DIRECT_POCHHAMMER_LIMIT = 30


def _is_nonpositive_integer(x: float, tol: float = 1e-12) -> bool:
    return x <= 0.5 and abs(x - round(x)) < tol and round(x) <= 0


def _lanczos_gamma_positive(x: float) -> float:
    # valid for x >= 0.5
    xx = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (xx + i)
    tt = xx + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * tt ** (xx + 0.5) * math.exp(-tt) * acc


def gamma_fn(x: float) -> float:
    """Gamma function for real x not a non-positive integer."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma_fn pole at x = {x}")
    if x >= 0.5:
        return _lanczos_gamma_positive(x)
    # reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    s = math.sin(math.pi * x)
    if s == 0.0:
        raise PoleError(f"gamma_fn pole at x = {x}")
    return math.pi / (s * _lanczos_gamma_positive(1.0 - x))


def log_abs_gamma(x: float) -> tuple[float, float]:
    """Return (log |Gamma(x)|, sign of Gamma(x))."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"log_abs_gamma pole at x = {x}")
    if x >= 0.5:
        xx = x - 1.0
        acc = _LANCZOS[0]
        for i in range(1, len(_LANCZOS)):
            acc += _LANCZOS[i] / (xx + i)
        tt = xx + _LANCZOS_G + 0.5
        return (0.5 * math.log(2.0 * math.pi) + (xx + 0.5) * math.log(tt) - tt + math.log(acc), 1.0)
    s = math.sin(math.pi * x)
    lg, _ = log_abs_gamma(1.0 - x)
    return (math.log(math.pi) - math.log(abs(s)) - lg, math.copysign(1.0, s))


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise DomainError(f"pochhammer needs n >= 0, got {n}")
    if n == 0:
        return 1.0
    if n <= _DIRECT_POCHHAMMER_LIMIT:
        out = 1.0
        for i in range(n):
            out *= a + i
        if math.isinf(out):
            raise OverflowRangeError(f"pochhammer({a}, {n}) overflows")
        return out
    log_abs, sign = pochhammer_log(a, n)
    if sign == 0.0:
        return 0.0
    if log_abs > _MAX_LOG:
        raise OverflowRangeError(f"pochhammer({a}, {n}) exceeds double range (log {log_abs:.1f})")
    return sign * math.exp(log_abs)


def pochhammer_log(a: float, n: int) -> tuple[float, float]:
    """(log |(a)_n|, sign); sign 0.0 when a factor vanishes exactly."""
    if n < 0:
        raise DomainError(f"pochhammer_log needs n >= 0, got {n}")
    log_abs = 0.0
    sign = 1.0
    for i in range(n):
        f = a + i
        if f == 0.0:
            return (-math.inf, 0.0)
        if f < 0.0:
            sign = -sign
        log_abs += math.log(abs(f))
    return (log_abs, sign)


def _bessel_i_series_scaled(order: float, x: float, rel_tol: float = 1e-16) -> float:
    # sum_k (x^2/4)^k / (k! Gamma(order+k+1)); this is (x/2)^(-order) I_order(x)
    q = 0.25 * x * x
    term = 1.0 / gamma_fn(order + 1.0)
    total = term
    for k in range(1, 400):
        term *= q / (k * (order + k))
        total += term
        if abs(term) < rel_tol * abs(total):
            break
    else:
        raise ConvergenceError("bessel_i series did not converge")
    return total


def _bessel_i_asymptotic(order: float, x: float) -> float:
    # e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(order) / x^k, truncated at the
    # smallest term; dropped subdominant branch is O(e^{-2x}).
    mu = 4.0 * order * order
    acc = 1.0
    term = 1.0
    for k in range(1, 60):
        factor = (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        new = -term * factor
        if abs(new) >= abs(term):
            break
        term = new
        acc += term
        if abs(term) < 1e-17 * abs(acc):
            break
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * acc


_BESSEL_CROSSOVER = 15.0


def bessel_i(order: float, x: float) -> float:
    """Modified Bessel function I_order(x) for x >= 0, order >= -1/2."""
    if x < 0.0:
        raise DomainError(f"bessel_i needs x >= 0, got {x}")
    if order < -0.5:
        raise DomainError(f"bessel_i supports order >= -1/2, got {order}")
    if x == 0.0:
        if order > 0.0:
            return 0.0
        if order == 0.0:
            return 1.0
        return math.inf
    if x <= _BESSEL_CROSSOVER:
        return (0.5 * x) ** order * _bessel_i_series_scaled(order, x)
    return _bessel_i_asymptotic(order, x)


def bessel_i_scaled(order: float, x: float) -> float:
    """(x/2)^(-order) I_order(x): entire and even in x, finite at x = 0.

    This is the natural building block for Laplace-type integrals whose
    Bessel arguments change sign.
    """
    ax = abs(x)
    if ax <= _BESSEL_CROSSOVER:
        return _bessel_i_series_scaled(order, ax)
    return (0.5 * ax) ** (-order) * _bessel_i_asymptotic(order, ax)


def gauss_2f1_series(a: float, b: float, c: float, w: float,
                     budget: AccuracyBudget | None = None) -> float:
    """Gauss hypergeometric 2F1(a, b; c; w) by direct summation, |w| < 1."""
    if budget is None:
        budget = AccuracyBudget()
    if _is_nonpositive_integer(c):
        raise PoleError(f"gauss_2f1_series: c = {c} is a non-positive integer")
    if abs(w) >= 1.0:
        raise DivergenceError(f"gauss_2f1_series needs |w| < 1, got {w}")
    total = 1.0
    term = 1.0
    quiet = 0
    for n in range(budget.max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * w
        total += term
        if abs(term) <= budget.rel_tol * abs(total):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise ConvergenceError(
        f"gauss_2f1_series: {budget.max_terms} terms exhausted at |w| = {abs(w)}")
