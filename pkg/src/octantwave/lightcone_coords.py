"""Change of variables between space-time and the hypergeometric arguments.

For a time t and two points p, p' in the open positive octant, set

    a  = t^2 - |p + p'|^2,
    w1 = -4 x x' / a,   w2 = -4 y y' / a,   w3 = -4 z z' / a.

This module computes (a, w), their analytic space-time partial derivatives,
and the twelve closed-form contraction identities that reduce the conjugated
wave operator to the hypergeometric system. The identities are stated here in
the form that actually holds (each one is covered by a finite-difference
oracle in the test suite); they hold to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control import DEFAULT_CONTROL, EvaluationControl
from .errors import DomainError, LightConeError

__all__ = [
    "OctantPoint",
    "ConeVariables",
    "ConePartials",
    "cone_variables",
    "cone_partials",
    "chain_rule_identities_residual",
    "IDENTITY_LABELS",
]


@dataclass(frozen=True)
class OctantPoint:
    """A point with strictly positive coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not (self.x > 0.0 and self.y > 0.0 and self.z > 0.0):
            raise DomainError(f"point must lie in the open octant, got {self}")

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def shifted(self, axis: int, delta: float) -> "OctantPoint":
        c = [self.x, self.y, self.z]
        c[axis] += delta
        return OctantPoint(*c)


def as_point(p) -> OctantPoint:
    if isinstance(p, OctantPoint):
        return p
    return OctantPoint(*p)


@dataclass(frozen=True)
class ConeVariables:
    a: float
    w1: float
    w2: float
    w3: float

    @property
    def w(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3])


@dataclass(frozen=True)
class ConePartials:
    """first[j, v]: d w_j / d v and second[j, v]: d^2 w_j / d v^2,
    with v running over (x, y, z, t)."""

    first: np.ndarray
    second: np.ndarray


def _guard_cone(a: float, t: float, p: np.ndarray, pp: np.ndarray, rtol: float) -> None:
    scale = max(t * t, float(np.dot(p + pp, p + pp)))
    if abs(a) < rtol * scale:
        raise LightConeError(f"configuration is on the light cone (a = {a:.3e})")


def cone_variables(t: float, p, pp, ctrl: EvaluationControl = DEFAULT_CONTROL) -> ConeVariables:
    """a = t^2 - |p+p'|^2 and the three arguments w_j = -4 p_j p'_j / a."""
    p = as_point(p).array
    pp = as_point(pp).array
    a = t * t - float(np.dot(p + pp, p + pp))
    _guard_cone(a, t, p, pp, ctrl.cone_rtol)
    w = -4.0 * p * pp / a
    return ConeVariables(a, *w)


def cone_partials(t: float, p, pp, ctrl: EvaluationControl = DEFAULT_CONTROL) -> ConePartials:
    """Analytic first and second pure partials of each w_j in (x, y, z, t)."""
    p = as_point(p).array
    pp = as_point(pp).array
    a = t * t - float(np.dot(p + pp, p + pp))
    _guard_cone(a, t, p, pp, ctrl.cone_rtol)
    q = p * pp                    # (x x', y y', z z')
    s = p + pp                    # (x + x', ...)
    a2 = a * a
    a3 = a2 * a

    first = np.empty((3, 4))
    second = np.empty((3, 4))
    for j in range(3):
        for k in range(3):
            if k == j:
                first[j, k] = (-4.0 * pp[j] * a - 8.0 * q[j] * s[j]) / a2
                second[j, k] = (-24.0 * q[j] - 16.0 * pp[j] ** 2) / a2 - 32.0 * q[j] * s[j] ** 2 / a3
            else:
                first[j, k] = -8.0 * q[j] * s[k] / a2
                second[j, k] = -8.0 * q[j] / a2 - 32.0 * q[j] * s[k] ** 2 / a3
        first[j, 3] = 8.0 * q[j] * t / a2
        second[j, 3] = 8.0 * q[j] / a2 - 32.0 * q[j] * t * t / a3
    return ConePartials(first=first, second=second)


IDENTITY_LABELS = (
    "grad_square_w1", "grad_square_w2", "grad_square_w3",
    "cross_w1_w2", "cross_w1_w3", "cross_w2_w3",
    "box_w1", "box_w2", "box_w3",
    "contraction_w1", "contraction_w2", "contraction_w3",
)


def chain_rule_identities_residual(t: float, p, pp,
                                   betas: tuple[float, float, float] = (0.8, 0.7, 0.6),
                                   alpha: float | None = None,
                                   ctrl: EvaluationControl = DEFAULT_CONTROL) -> np.ndarray:
    """Residuals |LHS - RHS| / (1 + |RHS|) of the twelve contraction identities.

    LHS values are assembled from the analytic partials; RHS values are the
    closed forms in (w, a, coordinates). With exact formulas both sides agree
    to rounding, so residuals sit near machine epsilon.

    ``alpha`` defaults to -1 - beta1 - beta2 - beta3, the value at which the
    conjugated wave operator reduces to the hypergeometric system.
    """
    p_pt = as_point(p)
    pp_pt = as_point(pp)
    cv = cone_variables(t, p_pt, pp_pt, ctrl)
    cp = cone_partials(t, p_pt, pp_pt, ctrl)
    b = np.asarray(betas, dtype=float)
    if alpha is None:
        alpha = -1.0 - float(b.sum())

    a = cv.a
    w = cv.w
    coords = p_pt.array
    csq = coords ** 2

    def lorentz_dot(u: np.ndarray, v: np.ndarray) -> float:
        return float(u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3])

    residuals = np.empty(12)

    # gradient squares: <grad w_j, grad w_j>_L = (w_j^2/c_j^2) (1 - w_j)
    for j in range(3):
        lhs = lorentz_dot(cp.first[j], cp.first[j])
        rhs = w[j] ** 2 / csq[j] * (1.0 - w[j])
        residuals[j] = abs(lhs - rhs) / (1.0 + abs(rhs))

    # cross terms: 2 <grad w_i, grad w_j>_L = -(w_i^2 w_j / c_i^2 + w_j^2 w_i / c_j^2)
    pairs = ((0, 1), (0, 2), (1, 2))
    for idx, (i, j) in enumerate(pairs):
        lhs = 2.0 * lorentz_dot(cp.first[i], cp.first[j])
        rhs = -(w[i] ** 2 * w[j] / csq[i] + w[j] ** 2 * w[i] / csq[j])
        residuals[3 + idx] = abs(lhs - rhs) / (1.0 + abs(rhs))

    # box: (d_xx + d_yy + d_zz - d_tt) w_j = -w_j^2/c_j^2 + 4 w_j / a
    for j in range(3):
        lhs = float(cp.second[j, 0] + cp.second[j, 1] + cp.second[j, 2] - cp.second[j, 3])
        rhs = -w[j] ** 2 / csq[j] + 4.0 * w[j] / a
        residuals[6 + j] = abs(lhs - rhs) / (1.0 + abs(rhs))

    # first-order contraction with the conjugation vector field
    pp_arr = pp_pt.array
    s = coords + pp_arr
    avec = 2.0 * b / coords - 4.0 * alpha * s / a
    at = 4.0 * alpha * t / a
    bsum = float(b.sum())
    for j in range(3):
        lhs = float(avec @ cp.first[j, :3]) - at * cp.first[j, 3]
        others = [k for k in range(3) if k != j]
        rhs = ((4.0 * alpha + 4.0 * bsum) * w[j] / a
               + 2.0 * b[j] * w[j] / csq[j]
               + (alpha - b[j]) * w[j] ** 2 / csq[j]
               - w[j] * sum(b[k] * w[k] / csq[k] for k in others))
        residuals[9 + j] = abs(lhs - rhs) / (1.0 + abs(rhs))

    return residuals
