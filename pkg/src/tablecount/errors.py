"""Exception hierarchy for margin validation and solver failures."""

from __future__ import annotations

__all__ = [
    "TableCountError",
    "ShapeMismatch",
    "NonPositive",
    "SumMismatch",
    "Infeasible",
    "NegativeEntry",
    "NoConvergence",
    "NotPositiveDefinite",
    "IndexOutOfRange",
    "BudgetExceeded",
    "DimensionTooLarge",
]


class TableCountError(Exception):
    """Base class for all package errors."""


class ShapeMismatch(TableCountError):
    """Input arrays have incompatible or empty shapes."""


class NonPositive(TableCountError):
    """Margins must consist of strictly positive integers."""


class SumMismatch(TableCountError):
    """Row totals and column totals disagree."""


class Infeasible(TableCountError):
    """No margin vector with the requested properties exists."""


class NegativeEntry(TableCountError):
    """Matrix entries must be non-negative."""


class NoConvergence(TableCountError):
    """Iterative solver exhausted its iteration budget.

    Carries the iteration count and the last residual seen.
    """

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"no convergence after {iterations} sweeps "
            f"(residual {residual:.3e})"
        )


class NotPositiveDefinite(TableCountError):
    """Quadratic-form matrix failed its Cholesky factorization."""


class IndexOutOfRange(TableCountError):
    """Row or column index outside the matrix dimensions."""


class BudgetExceeded(TableCountError):
    """Exact count would exceed the configured state budget.

    Raised before large allocations; carries the state estimate.
    """

    def __init__(self, states_estimate: int):
        self.states_estimate = states_estimate
        super().__init__(
            f"estimated {states_estimate} states exceeds the configured budget"
        )


class DimensionTooLarge(TableCountError):
    """Operation restricted to small dimension was called on a large input."""
