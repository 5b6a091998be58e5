"""Wave kernels with inverse-square potentials on the positive octant.

Evaluation of the three-variable hypergeometric function F_A(3) by series,
Euler integral, and Laplace-Bessel routes; the light-cone substitution layer
and its contraction identities; the eight branch kernels of the octant wave
equation with a finite-difference certification of the governing equation;
and a Cauchy solver checked against spherical-means and grid-solver oracles.
"""

from .control import AccuracyBudget, EvaluationControl
from .errors import (
    ConvergenceError,
    DegenerateParameterError,
    DivergenceError,
    DomainError,
    LightConeError,
    OctantWaveError,
    OverflowRangeError,
    PoleError,
    RegionError,
    StabilityError,
    SupportError,
)
from .specfun import bessel_i, bessel_i_scaled, gamma_fn, gauss_2f1_series, pochhammer
from .lightcone_coords import (
    ConePartials,
    ConeVariables,
    OctantPoint,
    chain_rule_identities_residual,
    cone_partials,
    cone_variables,
)
from .lauricella import (
    Fa3LaplaceInput,
    Fa3Parameters,
    Fa3Point,
    PhasedValue,
    fa3_a_derivative,
    fa3_eval,
    fa3_euler_integral,
    fa3_laplace_bessel,
    fa3_lightcone_asymptotic,
    fa3_series,
    fa3_solution_basis,
    lauricella_system_residual,
)
from .kernel import (
    BranchSelection,
    KernelValue,
    PotentialParams,
    branch_exponents,
    c3_constant,
    cone_trace_constant,
    kernel_smallt_asymptotic,
    kernel_w,
    potential_v,
    wave_operator_residual,
)
from .solver import (
    AuditResult,
    FdtdResult,
    GridSpec,
    InitialData,
    RegularizationSpec,
    SolveResult,
    bump_product,
    fdtd_reference,
    gaussian_bump,
    initial_data_catalog,
    kirchhoff_classical,
    smallt_audit,
    solve_cauchy,
    spherical_mean,
)

__version__ = "0.1.0"
