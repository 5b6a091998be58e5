"""Three-variable hypergeometric function F_A(3): evaluation and verification.

F_A(apex; b1,b2,b3; c1,c2,c3; w1,w2,w3)
    = sum_{m,n,p} (apex)_{m+n+p} (b1)_m (b2)_n (b3)_p
                  / ((c1)_m m! (c2)_n n! (c3)_p p!) w1^m w2^n w3^p,

convergent for |w1|+|w2|+|w3| < 1. Three independent evaluation routes are
provided and cross-checked against each other:

* ``fa3_series``          shell summation by total degree (inside the region),
* ``fa3_euler_integral``  triple Gauss-Jacobi quadrature of the Euler kernel
                          (valid for arguments of arbitrary negative size),
* ``fa3_laplace_bessel``  a semi-infinite Laplace integral whose integrand is
                          a product of scaled modified Bessel functions.

On top of the evaluators sit the derivative identity in the scale variable,
the singular-surface asymptotic form, the eight-element solution basis of the
associated PDE system, and a finite-difference residual check of that system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .control import DEFAULT_CONTROL, AccuracyBudget, EvaluationControl
from .errors import (
    ConvergenceError,
    DegenerateParameterError,
    DivergenceError,
    DomainError,
    PoleError,
    RegionError,
)
from .specfun import gamma_fn, log_abs_gamma, _is_nonpositive_integer

__all__ = [
    "Fa3Parameters",
    "Fa3Point",
    "Fa3LaplaceInput",
    "Fa3Evaluation",
    "PhasedValue",
    "fa3_series",
    "fa3_euler_integral",
    "fa3_laplace_bessel",
    "fa3_eval",
    "fa3_a_derivative",
    "fa3_lightcone_asymptotic",
    "fa3_solution_basis",
    "lauricella_system_residual",
    "SERIES_DISPATCH_THRESHOLD",
]

SERIES_DISPATCH_THRESHOLD = 0.9


@dataclass(frozen=True)
class Fa3Parameters:
    """Apex, numerator and denominator parameters of F_A(3)."""

    a: float
    b1: float
    b2: float
    b3: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        for c in (self.c1, self.c2, self.c3):
            if _is_nonpositive_integer(c):
                raise PoleError(f"denominator parameter {c} is a non-positive integer")

    @property
    def bs(self) -> tuple[float, float, float]:
        return (self.b1, self.b2, self.b3)

    @property
    def cs(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)


@dataclass(frozen=True)
class Fa3Point:
    w1: float
    w2: float
    w3: float

    @property
    def w(self) -> tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)

    @property
    def sum_norm(self) -> float:
        return abs(self.w1) + abs(self.w2) + abs(self.w3)


@dataclass(frozen=True)
class Fa3LaplaceInput:
    """Arguments of the Laplace-type representation.

    The represented quantity is a_var^alpha * Gamma(-alpha) *
    F_A(-alpha; betas; 2*betas; h/a_var, k/a_var, l/a_var).
    """

    a_var: float
    h: float
    k: float
    l: float
    alpha: float

    def __post_init__(self) -> None:
        if self.a_var <= 0.0:
            raise DomainError(f"a_var must be > 0, got {self.a_var}")
        if self.alpha >= 0.0:
            raise DomainError(f"alpha must be < 0, got {self.alpha}")

    @property
    def hkl(self) -> tuple[float, float, float]:
        return (self.h, self.k, self.l)


@dataclass(frozen=True)
class Fa3Evaluation:
    value: float
    path: str


@dataclass(frozen=True)
class PhasedValue:
    """Magnitude plus phase in units of pi (negative bases keep |base|^e and
    contribute e phase units each)."""

    magnitude: float
    phase_units: float

    @property
    def as_complex(self) -> complex:
        return self.magnitude * complex(math.cos(math.pi * self.phase_units),
                                        math.sin(math.pi * self.phase_units))


# ----------------------------------------------------------------- series ---

def fa3_series(params: Fa3Parameters, point: Fa3Point,
               ctrl: EvaluationControl | AccuracyBudget = DEFAULT_CONTROL) -> float:
    """Shell summation of the triple series by total degree N = m+n+p.

    Terms inside one shell share the apex factor (apex)_N, so shells give a
    monotone tail estimate; summation stops once three consecutive shells
    fall below rel_tol times the partial sum.
    """
    if isinstance(ctrl, AccuracyBudget):
        rel_tol, max_degree = ctrl.rel_tol, ctrl.max_terms
    else:
        rel_tol, max_degree = ctrl.rel_tol, ctrl.max_degree
    w1, w2, w3 = point.w
    if point.sum_norm >= 1.0:
        raise DivergenceError(
            f"series diverges: |w1|+|w2|+|w3| = {point.sum_norm:.6f} >= 1")

    apex = params.a
    b1, b2, b3 = params.bs
    c1, c2, c3 = params.cs

    # per-axis one-step ratios r[k] = w (b+k-1) / ((c+k-1) k)
    ks = np.arange(1, max_degree + 2, dtype=float)
    f_lut = w1 * (b1 + ks - 1.0) / ((c1 + ks - 1.0) * ks)
    g_lut = w2 * (b2 + ks - 1.0) / ((c2 + ks - 1.0) * ks)
    h_lut = w3 * (b3 + ks - 1.0) / ((c3 + ks - 1.0) * ks)

    shell = np.array([[1.0]])
    total = 1.0
    quiet = 0
    for n_deg in range(1, max_degree + 1):
        apex_factor = apex + n_deg - 1.0
        prev = shell
        shell = np.zeros((n_deg + 1, n_deg + 1))
        # route through the third index (p >= 1): same (m, n), p -> p+1
        m_idx = np.arange(n_deg)
        msum = np.add.outer(m_idx, m_idx)            # m + n over prev block
        p_new = n_deg - msum                          # >= 1 where prev valid
        valid = p_new >= 1
        mult = np.where(valid, h_lut[np.clip(p_new, 1, None) - 1], 0.0)
        shell[:n_deg, :n_deg] = prev * apex_factor * mult
        # anti-diagonal p = 0: step in m from (m-1, n, 0), and (0, n_deg, 0) in n
        m_diag = np.arange(1, n_deg + 1)
        prev_ad = prev[m_diag - 1, n_deg - m_diag]    # (m-1) + n = n_deg - 1
        shell[m_diag, n_deg - m_diag] = prev_ad * apex_factor * f_lut[m_diag - 1]
        shell[0, n_deg] = prev[0, n_deg - 1] * apex_factor * g_lut[n_deg - 1]

        s = float(shell.sum())
        total += s
        if abs(s) <= rel_tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise ConvergenceError(
        f"fa3_series: degree budget {max_degree} exhausted (sum norm {point.sum_norm:.4f})")


# ---------------------------------------------------------- Euler integral ---

@lru_cache(maxsize=256)
def _jacobi_rule(n: int, b: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    # weight u^(b-1) (1-u)^(c-b-1) on [0, 1], normalized by Beta(b, c-b):
    # returns nodes u_i and weights summing to 1.
    x, wgt = roots_jacobi(n, c - b - 1.0, b - 1.0)
    u = 0.5 * (x + 1.0)
    beta_log = log_abs_gamma(b)[0] + log_abs_gamma(c - b)[0] - log_abs_gamma(c)[0]
    norm = 2.0 ** (1.0 - c) / math.exp(beta_log)
    return u, wgt * norm


def fa3_euler_integral(params: Fa3Parameters, point: Fa3Point,
                       ctrl: EvaluationControl = DEFAULT_CONTROL) -> float:
    """Triple Gauss-Jacobi quadrature of the Euler representation.

    Requires c_j > b_j > 0. The base 1 - sum u_j w_j must stay positive on
    the unit cube; this is automatic for w_j <= 0 and checked at the cube
    corners otherwise. Node counts double until two successive rules agree.
    """
    for b, c in zip(params.bs, params.cs):
        if not (c > b > 0.0):
            raise DomainError(f"Euler integral needs c > b > 0, got b={b}, c={c}")
    w = np.array(point.w)
    min_base = 1.0 - float(np.clip(w, 0.0, None).sum())
    if min_base <= 0.0:
        raise DomainError(
            f"Euler integrand singular on the cube (1 - sum max(w,0) = {min_base:.3e})")

    def rule_value(n: int) -> float:
        us, wts = [], []
        for b, c in zip(params.bs, params.cs):
            u, wgt = _jacobi_rule(n, b, c)
            us.append(u)
            wts.append(wgt)
        # slice along u1 so memory stays O(n^2); fsum the slice totals
        base23 = 1.0 - w[1] * us[1][:, None] - w[2] * us[2][None, :]
        slices = []
        for u1, wgt1 in zip(us[0], wts[0]):
            cube = (base23 - w[0] * u1) ** (-params.a)
            slices.append(wgt1 * float(wts[1] @ cube @ wts[2]))
        return math.fsum(slices)

    # Node/weight rounding makes very large rules NOISIER, not better, so
    # agreement is judged against a floor and the smaller rule is returned.
    tol = max(ctrl.rel_tol, 5e-12)
    n = ctrl.quad_nodes
    val = rule_value(n)
    for _ in range(ctrl.quad_doublings):
        val2 = rule_value(2 * n)
        if abs(val - val2) <= tol * max(abs(val2), 1e-300):
            return val
        val, n = val2, 2 * n
    raise ConvergenceError(
        f"fa3_euler_integral: no node-doubling agreement at rel_tol={tol}")


# ------------------------------------------------------ Laplace - Bessel ----

def _log_bessel_scaled(order: float, x: float) -> float:
    # log of (x/2)^(-order) I_order(x); even in x, finite at 0.
    from .specfun import _BESSEL_CROSSOVER, _bessel_i_series_scaled

    ax = abs(x)
    if ax <= _BESSEL_CROSSOVER:
        return math.log(_bessel_i_series_scaled(order, ax))
    mu = 4.0 * order * order
    acc = 1.0
    term = 1.0
    for kk in range(1, 60):
        new = -term * (mu - (2 * kk - 1) ** 2) / (8.0 * kk * ax)
        if abs(new) >= abs(term):
            break
        term = new
        acc += term
        if abs(term) < 1e-17 * abs(acc):
            break
    return ax - 0.5 * math.log(2.0 * math.pi * ax) + math.log(acc) - order * math.log(0.5 * ax)


def fa3_laplace_bessel(lap: Fa3LaplaceInput, betas: tuple[float, float, float],
                       ctrl: EvaluationControl = DEFAULT_CONTROL) -> float:
    """Semi-infinite Laplace integral with a product of scaled Bessel factors.

    Evaluates  prod_j Gamma(beta_j + 1/2) *
               int_0^inf exp(-(a - (h+k+l)/2) t) t^(-alpha-1)
                         prod_j gI_{beta_j - 1/2}(t h_j / 2) dt,
    where gI_nu(z) = (z/2)^(-nu) I_nu(z) carries the (t h_j/4)^(1/2-beta_j)
    prefactors of the raw Bessel form. The caller compares the result with
    a^alpha Gamma(-alpha) F_A(3)(...; h/a, k/a, l/a).

    The integrand is mapped by t = e^s and the trapezoid rule is applied on a
    window截 truncated where the integrand falls 16 decades below its peak.
    """
    h = np.array(lap.hkl)
    decay = lap.a_var - 0.5 * float(h.sum())
    if decay <= 0.0:
        raise DomainError(f"integrand does not decay: a - (h+k+l)/2 = {decay:.3e}")
    true_decay = lap.a_var - float(np.clip(h, 0.0, None).sum())
    if true_decay <= 0.0:
        raise DomainError(
            f"integrand does not decay against Bessel growth (margin {true_decay:.3e})")
    if any(b + 0.5 <= 0.0 for b in betas):
        raise DomainError("betas must satisfy beta + 1/2 > 0")

    nu = [b - 0.5 for b in betas]
    log_pref = sum(log_abs_gamma(b + 0.5)[0] for b in betas)
    neg_alpha = -lap.alpha

    def log_integrand(s: float) -> float:
        t = math.exp(s)
        out = -decay * t + neg_alpha * s + log_pref   # t^(-alpha-1) dt -> t^(-alpha) ds
        for j in range(3):
            out += _log_bessel_scaled(nu[j], 0.5 * t * h[j])
        return out

    # locate the peak on a coarse grid, then expand until 16 decades down
    grid = np.linspace(-30.0, 8.0, 153)
    vals = np.array([log_integrand(s) for s in grid])
    s_peak = float(grid[np.argmax(vals)])
    peak = float(vals.max())
    floor = peak + math.log(1e-16)
    s_lo, s_hi = s_peak, s_peak
    while log_integrand(s_lo) > floor:
        s_lo -= 1.0
        if s_lo < -80:
            break
    while log_integrand(s_hi) > floor:
        s_hi += 0.5
        if s_hi > 40:
            break

    n = max(ctrl.quad_nodes * 2, 96)
    prev = None
    for _ in range(ctrl.quad_doublings + 2):
        ss = np.linspace(s_lo, s_hi, n)
        li = np.array([log_integrand(s) for s in ss])
        total = float(np.exp(li - peak).sum() * (ss[1] - ss[0]) * math.exp(peak))
        if prev is not None and abs(total - prev) <= ctrl.rel_tol * max(abs(total), 1e-300):
            return total
        prev = total
        n *= 2
    raise ConvergenceError("fa3_laplace_bessel: trapezoid refinement did not settle")


# -------------------------------------------------------------- dispatcher ---

def fa3_eval(params: Fa3Parameters, point: Fa3Point,
             ctrl: EvaluationControl = DEFAULT_CONTROL) -> Fa3Evaluation:
    """Evaluate F_A(3), choosing the representation from the argument size.

    Sum norms up to 0.9 go to the series; larger ones go to the Euler
    integral. If the Euler route is not applicable (parameter constraints)
    but the series still converges, the series is used as a fallback.
    """
    snorm = point.sum_norm
    if snorm <= SERIES_DISPATCH_THRESHOLD:
        return Fa3Evaluation(fa3_series(params, point, ctrl), "series")
    try:
        return Fa3Evaluation(fa3_euler_integral(params, point, ctrl), "euler")
    except DomainError:
        if snorm < 1.0:
            return Fa3Evaluation(fa3_series(params, point, ctrl), "series-fallback")
        raise RegionError(
            f"no representation applicable at sum norm {snorm:.4f} "
            f"(series divergent, Euler integrand invalid)")


def _scaled_fa3(lap: Fa3LaplaceInput, betas: tuple[float, float, float],
                ctrl: EvaluationControl, apex_shift: int = 0) -> float:
    params = Fa3Parameters(-lap.alpha + apex_shift, *betas,
                           *(2.0 * b for b in betas))
    point = Fa3Point(lap.h / lap.a_var, lap.k / lap.a_var, lap.l / lap.a_var)
    return fa3_eval(params, point, ctrl).value


def fa3_a_derivative(lap: Fa3LaplaceInput, betas: tuple[float, float, float],
                     ctrl: EvaluationControl = DEFAULT_CONTROL) -> float:
    """d/da [ a^alpha F_A(-alpha; betas; 2 betas; h/a, k/a, l/a) ].

    Equals alpha a^(alpha-1) F_A(-alpha+1; betas; 2 betas; h/a, k/a, l/a):
    differentiating the series termwise multiplies (-alpha)_s by (alpha - s),
    and (-alpha)_s (alpha - s) = alpha (-alpha+1)_s. The finite-difference
    oracle in the test suite pins this form.
    """
    val = _scaled_fa3(lap, betas, ctrl, apex_shift=1)
    return lap.alpha * lap.a_var ** (lap.alpha - 1.0) * val


def fa3_lightcone_asymptotic(lap: Fa3LaplaceInput,
                             betas: tuple[float, float, float]) -> PhasedValue:
    """Leading singular-surface form of a^alpha Gamma(-alpha) F_A(3).

    As the arguments approach the surface h/a + k/a + l/a = 1 the scaled
    function behaves like

        Gamma(-beta1-beta2-beta3-alpha)
        * prod_j [Gamma(2 beta_j)/Gamma(beta_j)] |h_j|^(-beta_j)
        * (a - h - k - l)^(alpha + beta1 + beta2 + beta3),

    with one phase unit of -beta_j per negative h_j. The support factor
    exponent equals -1 exactly when alpha = -1 - sum(betas), the kernel case.
    """
    bsum = sum(betas)
    gap = lap.a_var - lap.h - lap.k - lap.l
    if gap <= 0.0:
        raise DomainError(f"support factor non-positive: a-h-k-l = {gap:.3e}")
    if any(v == 0.0 for v in lap.hkl):
        raise DomainError("asymptotic form needs h, k, l != 0")
    head = -bsum - lap.alpha
    if _is_nonpositive_integer(head):
        raise PoleError(f"Gamma(-b1-b2-b3-alpha) pole at {head}")
    mag = gamma_fn(head)
    phase = 0.0
    for hj, bj in zip(lap.hkl, betas):
        mag *= gamma_fn(2.0 * bj) / gamma_fn(bj) * abs(hj) ** (-bj)
        if hj < 0.0:
            phase += -bj
    mag *= gap ** (lap.alpha + bsum)
    if mag < 0.0:
        mag, phase = -mag, phase + 1.0
    return PhasedValue(mag, phase)


# ---------------------------------------------------------- solution basis ---

def _check_nondegenerate(betas: tuple[float, float, float], tol: float = 1e-9) -> None:
    for b in betas:
        if abs(2.0 * b - round(2.0 * b)) < tol:
            raise DegenerateParameterError(
                f"2*beta = {2 * b} is (numerically) an integer; basis degenerates")


def _subset_params(alpha: float, betas: tuple[float, float, float],
                   bits: tuple[int, int, int]) -> Fa3Parameters:
    shift = sum((1.0 - 2.0 * b) for b, s in zip(betas, bits) if s)
    bs = [1.0 - b if s else b for b, s in zip(betas, bits)]
    cs = [2.0 - 2.0 * b if s else 2.0 * b for b, s in zip(betas, bits)]
    return Fa3Parameters(-alpha + shift, *bs, *cs)


def _basis_element_real(alpha: float, betas: tuple[float, float, float],
                        bits: tuple[int, int, int], point: Fa3Point,
                        ctrl: EvaluationControl) -> float:
    """|w_j|^(1-2 beta_j) prefactors (for flipped axes) times the F_A value;
    real and smooth on each fixed-sign region of the arguments."""
    pref = 1.0
    for wj, bj, s in zip(point.w, betas, bits):
        if s:
            if wj == 0.0:
                raise DomainError("prefactor axis requires w != 0")
            pref *= abs(wj) ** (1.0 - 2.0 * bj)
    params = _subset_params(alpha, betas, bits)
    return pref * fa3_eval(params, point, ctrl).value


_SUBSETS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
            (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1))


def fa3_solution_basis(alpha: float, betas: tuple[float, float, float],
                       point: Fa3Point,
                       ctrl: EvaluationControl = DEFAULT_CONTROL) -> list[PhasedValue]:
    """The eight solutions of the F_A(3) system at one point.

    Element for a subset S of {1,2,3} is
        prod_{j in S} w_j^(1-2 beta_j)
        * F_A(-alpha + sum_S (1-2 beta_j);
              b_j -> 1-beta_j on S; c_j -> 2-2 beta_j on S; w),
    returned as magnitude plus phase units (each negative prefactor base w_j
    contributes 1-2 beta_j units, a negative F_A value contributes one unit).
    Requires 2 beta_j to be non-integral so the branches stay independent.
    """
    _check_nondegenerate(betas)
    out = []
    for bits in _SUBSETS:
        val = _basis_element_real(alpha, betas, bits, point, ctrl)
        phase = 0.0
        for wj, bj, s in zip(point.w, betas, bits):
            if s and wj < 0.0:
                phase += 1.0 - 2.0 * bj
        mag = abs(val)
        if val < 0.0:
            phase += 1.0
        out.append(PhasedValue(mag, phase))
    return out


# ------------------------------------------------- PDE system verification ---

def _system_operators(apex: float, bs: tuple[float, float, float],
                      cs: tuple[float, float, float],
                      w: tuple[float, float, float],
                      phi0: float, d1: np.ndarray, d2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Apply the three F_A system operators given value/gradient/Hessian.

    Returns (residuals, scales): residual_j is the signed operator value,
    scale_j the sum of magnitudes of its constituent terms.
    """
    res = np.empty(3)
    scl = np.empty(3)
    for j in range(3):
        terms = [w[j] * (1.0 - w[j]) * d2[j, j]]
        for k in range(3):
            if k != j:
                terms.append(-w[j] * w[k] * d2[j, k])
        terms.append((cs[j] - (apex + bs[j] + 1.0) * w[j]) * d1[j])
        for k in range(3):
            if k != j:
                terms.append(-bs[j] * w[k] * d1[k])
        terms.append(-apex * bs[j] * phi0)
        res[j] = math.fsum(terms)
        scl[j] = sum(abs(t) for t in terms)
    return res, scl


def lauricella_system_residual(alpha: float, betas: tuple[float, float, float],
                               point: Fa3Point, solution_index: int,
                               step: float = 1e-3,
                               ctrl: EvaluationControl | None = None) -> tuple[float, float, float]:
    """Relative finite-difference residuals of the F_A system (three operators)
    applied to one of the eight basis solutions.

    Second-order central differences, pure and mixed; the stencil must stay
    inside the series convergence region with a five-step margin and away
    from the coordinate hyperplanes w_j = 0 where prefactors branch.
    """
    if not 1 <= solution_index <= 8:
        raise DomainError(f"solution_index must be 1..8, got {solution_index}")
    if ctrl is None:
        ctrl = EvaluationControl(rel_tol=1e-13, max_degree=900)
    _check_nondegenerate(betas)
    w = np.array(point.w)
    if np.sum(np.abs(w)) + 5.0 * step * 3 >= 1.0:
        raise RegionError("stencil leaves the series convergence region")
    if np.any((np.abs(w) <= 5.0 * step) & (np.array(_SUBSETS[solution_index - 1]) > 0)):
        raise RegionError("stencil too close to a branching hyperplane w_j = 0")

    bits = _SUBSETS[solution_index - 1]

    def phi(ws: np.ndarray) -> float:
        return _basis_element_real(alpha, betas, bits, Fa3Point(*ws), ctrl)

    h = step
    phi0 = phi(w)
    d1 = np.empty(3)
    d2 = np.empty((3, 3))
    for j in range(3):
        ep = w.copy(); ep[j] += h
        em = w.copy(); em[j] -= h
        fp, fm = phi(ep), phi(em)
        d1[j] = (fp - fm) / (2.0 * h)
        d2[j, j] = (fp - 2.0 * phi0 + fm) / (h * h)
    for j in range(3):
        for k in range(j + 1, 3):
            epp = w.copy(); epp[j] += h; epp[k] += h
            epm = w.copy(); epm[j] += h; epm[k] -= h
            emp = w.copy(); emp[j] -= h; emp[k] += h
            emm = w.copy(); emm[j] -= h; emm[k] -= h
            d2[j, k] = d2[k, j] = (phi(epp) - phi(epm) - phi(emp) + phi(emm)) / (4.0 * h * h)

    apex = -alpha
    cs = tuple(2.0 * b for b in betas)
    res, scl = _system_operators(apex, betas, cs, tuple(w), phi0, d1, d2)
    scl = np.where(scl > 0.0, scl, 1.0)
    rel = np.abs(res) / scl
    return (float(rel[0]), float(rel[1]), float(rel[2]))
