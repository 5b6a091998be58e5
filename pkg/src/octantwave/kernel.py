"""Wave kernels on the positive octant with three inverse-square potentials.

For parameters (nu1, nu2, nu3) the potential is

    v(x, y, z) = (1/4 - nu1^2)/x^2 + (1/4 - nu2^2)/y^2 + (1/4 - nu3^2)/z^2,

and with beta_j = 1/2 + nu_j each choice b_j in {beta_j, 1 - beta_j} yields a
two-point kernel

    W(t, p, p') = c3 (xx')^b1 (yy')^b2 (zz')^b3 / a^(1 + b1 + b2 + b3)
                  * F_A(3)(1 + b1 + b2 + b3; b; 2b; w1, w2, w3),

with a = t^2 - |p+p'|^2 and w_j = -4 p_j p'_j / a. Off the light cones each of
the eight kernels solves u_tt = (Laplacian + v) u; the finite-difference
residual check below certifies this numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .control import DEFAULT_CONTROL, EvaluationControl
from .errors import DegenerateParameterError, DomainError, PoleError, RegionError
from .lauricella import Fa3Parameters, Fa3Point, PhasedValue, fa3_eval
from .lightcone_coords import OctantPoint, as_point, cone_variables
from .specfun import gamma_fn, _is_nonpositive_integer

__all__ = [
    "PotentialParams",
    "BranchSelection",
    "KernelValue",
    "potential_v",
    "branch_exponents",
    "c3_constant",
    "cone_trace_constant",
    "kernel_w",
    "wave_operator_residual",
    "kernel_smallt_asymptotic",
]


@dataclass(frozen=True)
class PotentialParams:
    """The potential-strength triple (nu1, nu2, nu3)."""

    nu1: float
    nu2: float
    nu3: float

    @property
    def nus(self) -> tuple[float, float, float]:
        return (self.nu1, self.nu2, self.nu3)

    @property
    def betas(self) -> tuple[float, float, float]:
        return (0.5 + self.nu1, 0.5 + self.nu2, 0.5 + self.nu3)


@dataclass(frozen=True)
class BranchSelection:
    """Resolved exponent triple b_j, each from {beta_j, 1 - beta_j}.

    ``bits`` records the choice: 0 keeps beta_j, 1 flips to 1 - beta_j.
    """

    b1: float
    b2: float
    b3: float
    bits: tuple[int, int, int]

    @property
    def exponents(self) -> tuple[float, float, float]:
        return (self.b1, self.b2, self.b3)

    @property
    def total(self) -> float:
        return self.b1 + self.b2 + self.b3


@dataclass(frozen=True)
class KernelValue:
    magnitude: float
    phase_units: float
    region: str          # "inside_cone" (a > 0) or "outside_cone" (a < 0)

    @property
    def as_complex(self) -> complex:
        return self.magnitude * complex(math.cos(math.pi * self.phase_units),
                                        math.sin(math.pi * self.phase_units))


def potential_v(params: PotentialParams, p) -> float:
    """The three-term inverse-square potential at a point of the open octant."""
    pt = as_point(p)
    n1, n2, n3 = params.nus
    return ((0.25 - n1 * n1) / pt.x ** 2
            + (0.25 - n2 * n2) / pt.y ** 2
            + (0.25 - n3 * n3) / pt.z ** 2)


def _check_branchable(params: PotentialParams, tol: float = 1e-9) -> None:
    for b in params.betas:
        if abs(2.0 * b - round(2.0 * b)) < tol:
            raise DegenerateParameterError(
                f"2*beta = {2 * b:.12g} is an integer; the two branches coincide")


def branch_exponents(params: PotentialParams) -> list[BranchSelection]:
    """All eight branch choices b_j in {beta_j, 1 - beta_j}, in bit order."""
    _check_branchable(params)
    betas = params.betas
    out = []
    for i in range(8):
        bits = ((i >> 2) & 1, (i >> 1) & 1, i & 1)
        bs = tuple(1.0 - b if s else b for b, s in zip(betas, bits))
        out.append(BranchSelection(*bs, bits=bits))
    return out


def c3_constant(sel: BranchSelection) -> PhasedValue:
    """The kernel's normalizing constant.

    magnitude = Gamma(1/2 + b1 + b2 + b3)
                / (sqrt(pi) Gamma(1/2+b1) Gamma(1/2+b2) Gamma(1/2+b3)),
    with b1 + b2 + b3 phase units from the (-1)^(b1+b2+b3) factor.
    """
    for b in sel.exponents:
        if _is_nonpositive_integer(0.5 + b):
            raise PoleError(f"Gamma(1/2 + {b}) pole in c3")
    if _is_nonpositive_integer(0.5 + sel.total):
        raise PoleError(f"Gamma(1/2 + {sel.total}) pole in c3")
    mag = gamma_fn(0.5 + sel.total) / (
        math.sqrt(math.pi)
        * gamma_fn(0.5 + sel.b1) * gamma_fn(0.5 + sel.b2) * gamma_fn(0.5 + sel.b3))
    phase = sel.total
    if mag < 0.0:
        mag, phase = -mag, phase + 1.0
    return PhasedValue(mag, phase)


def cone_trace_constant(sel: BranchSelection) -> float:
    """|W| (t^2 - |p-p'|^2) at the direct light cone.

    The kernel's leading singularity on |p - p'| = t has the p'-independent
    coefficient Gamma(1/2 + b1+b2+b3) / (8 pi^2 Gamma(1 + b1+b2+b3)); the
    coordinate factors cancel exactly against the argument powers.
    """
    s = sel.total
    return gamma_fn(0.5 + s) / (8.0 * math.pi ** 2 * gamma_fn(1.0 + s))


def kernel_w(t: float, p, pp, params: PotentialParams, sel: BranchSelection,
             ctrl: EvaluationControl = DEFAULT_CONTROL) -> KernelValue:
    """Evaluate one branch kernel off the light cone.

    Inside the cone (a > 0) the hypergeometric arguments are negative and
    either representation applies. Outside (a < 0) the arguments are positive
    and evaluation is possible while w1+w2+w3 < 1, i.e. for |p - p'| > t;
    closer configurations sit past the function's singular surface and raise
    a region error.
    """
    p_pt = as_point(p)
    pp_pt = as_point(pp)
    cv = cone_variables(t, p_pt, pp_pt, ctrl)
    total = sel.total
    apex = 1.0 + total
    if cv.a < 0.0 and cv.w1 + cv.w2 + cv.w3 >= 1.0:
        raise RegionError(
            "kernel arguments past the singular surface (outside-cone, |p-p'| < |t|); "
            "no representation applies")
    fa_params = Fa3Parameters(apex, *sel.exponents, *(2.0 * b for b in sel.exponents))
    ev = fa3_eval(fa_params, Fa3Point(cv.w1, cv.w2, cv.w3), ctrl)

    c3 = c3_constant(sel)
    coord_factor = ((p_pt.x * pp_pt.x) ** sel.b1
                    * (p_pt.y * pp_pt.y) ** sel.b2
                    * (p_pt.z * pp_pt.z) ** sel.b3)
    mag = c3.magnitude * coord_factor * abs(cv.a) ** (-apex) * abs(ev.value)
    phase = c3.phase_units
    region = "inside_cone"
    if cv.a < 0.0:
        region = "outside_cone"
        phase += -apex          # |a|^{-apex} e^{-i pi apex} for a < 0
    if ev.value < 0.0:
        phase += 1.0
    return KernelValue(mag, phase, region)


def _kernel_real_on_stencil(t: float, p: OctantPoint, pp: OctantPoint,
                            params: PotentialParams, sel: BranchSelection,
                            ctrl: EvaluationControl,
                            ref_phase: float) -> float:
    kv = kernel_w(t, p, pp, params, sel, ctrl)
    rot = kv.magnitude * complex(math.cos(math.pi * (kv.phase_units - ref_phase)),
                                 math.sin(math.pi * (kv.phase_units - ref_phase)))
    if abs(rot.imag) > 1e-9 * (abs(rot.real) + 1e-300):
        raise RegionError("kernel phase varies across the stencil (cone crossing)")
    return rot.real


def wave_operator_residual(t: float, p, pp, params: PotentialParams,
                           sel: BranchSelection, step: float = 1e-3,
                           ctrl: EvaluationControl | None = None) -> float:
    """Relative residual of [Laplacian + v - d^2/dt^2] applied to the kernel.

    Second-order central differences around (t, p) at fixed p'; the stencil
    must stay inside the octant, on one side of the light cone, and clear of
    it. The residual is normalized by the summed magnitudes of the operator
    pieces, so an exact solution shows O(step^2) decay.
    """
    if ctrl is None:
        ctrl = EvaluationControl(rel_tol=1e-13, max_degree=900)
    p_pt = as_point(p)
    pp_pt = as_point(pp)
    h = step
    if min(p_pt.x, p_pt.y, p_pt.z) <= h:
        raise RegionError("stencil leaves the open octant")
    cv = cone_variables(t, p_pt, pp_pt, ctrl)
    if abs(cv.a) < 10.0 * (4.0 * h) * max(abs(t), 1.0):
        raise RegionError("stencil too close to the light cone")

    center = kernel_w(t, p_pt, pp_pt, params, sel, ctrl)
    ref = center.phase_units
    w0 = center.magnitude

    def ev(tt: float, pt: OctantPoint) -> float:
        return _kernel_real_on_stencil(tt, pt, pp_pt, params, sel, ctrl, ref)

    second = []
    for axis in range(3):
        fp = ev(t, p_pt.shifted(axis, +h))
        fm = ev(t, p_pt.shifted(axis, -h))
        second.append((fp - 2.0 * w0 + fm) / (h * h))
    ftp = ev(t + h, p_pt)
    ftm = ev(t - h, p_pt)
    dtt = (ftp - 2.0 * w0 + ftm) / (h * h)

    vterm = potential_v(params, p_pt) * w0
    residual = second[0] + second[1] + second[2] + vterm - dtt
    scale = sum(abs(s) for s in second) + abs(vterm) + abs(dtt)
    if scale == 0.0:
        return 0.0
    return abs(residual) / scale


def kernel_smallt_asymptotic(t: float, p, pp, params: PotentialParams,
                             sel: BranchSelection) -> tuple[float, bool]:
    """Magnitude of the kernel's light-cone form and the support indicator.

    Returns (cone_trace_constant / |t^2 - |p-p'|^2| , |p - p'| < t). The
    exponent of the support factor is exactly -1 for every branch: the
    kernel's apex is 1 + b1+b2+b3 while the singular-surface shift is
    b1+b2+b3, so their difference is fixed.
    """
    if t <= 0.0:
        raise DomainError(f"small-t form needs t > 0, got {t}")
    p_arr = as_point(p).array
    pp_arr = as_point(pp).array
    gap = t * t - float(np.dot(p_arr - pp_arr, p_arr - pp_arr))
    indicator = gap > 0.0
    s = cone_trace_constant(sel)
    if gap == 0.0:
        return (math.inf, indicator)
    return (s / abs(gap), indicator)
