"""Exception taxonomy shared by all modules."""


class OctantWaveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OctantWaveError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation at (or too close to) a pole of a Gamma factor."""


class DivergenceError(DomainError):
    """Series or integral evaluated outside its convergence region."""


class LightConeError(DomainError):
    """Configuration on (or numerically indistinguishable from) a light cone."""


class DegenerateParameterError(DomainError):
    """Parameters for which the solution branches coincide (2*beta integral)."""


class RegionError(DomainError):
    """Requested point or stencil leaves the evaluable region."""


class SupportError(DomainError):
    """Initial data support violates a geometric precondition."""


class StabilityError(DomainError):
    """Grid/time-step combination violates the explicit-scheme CFL bound."""


class ConvergenceError(OctantWaveError, RuntimeError):
    """Iteration budget exhausted before reaching the requested tolerance."""


class OverflowRangeError(OctantWaveError, OverflowError):
    """Result exceeds the representable double range even via log-space."""
