"""Accuracy and evaluation-control records shared across modules."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class AccuracyBudget:
    """Tolerance and term budget for scalar series evaluation.

    rel_tol must lie in (0, 1); max_terms must be at least 1.
    """

    rel_tol: float = 1e-12
    max_terms: int = 4000

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


@dataclass(frozen=True)
class EvaluationControl:
    """Knobs for the multivariate evaluators.

    rel_tol         target relative accuracy
    max_degree      cap on the total series degree m+n+p
    quad_nodes      Gauss-Jacobi nodes per axis (doubled until agreement)
    quad_doublings  how many times quad_nodes may be doubled
    cone_rtol       |a| < cone_rtol * t**2 counts as on the light cone
    """

    rel_tol: float = 1e-10
    max_degree: int = 700
    quad_nodes: int = 48
    quad_doublings: int = 3
    cone_rtol: float = 1e-9

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.max_degree < 1 or self.quad_nodes < 2 or self.quad_doublings < 0:
            raise DomainError("invalid evaluation-control sizes")

    def budget(self) -> AccuracyBudget:
        return AccuracyBudget(rel_tol=self.rel_tol, max_terms=self.max_degree)


DEFAULT_CONTROL = EvaluationControl()
