"""Counting non-negative integer matrices with fixed row and column sums.

The pipeline: validate margins, solve for the maximum-entropy typical
matrix, build the Gaussian model of the log-weight around it, apply the
cubic/quartic correction factor.  Independent oracles (exact dynamic
program, brute force, trapezoid quadrature of the exact integral
representation, geometric Monte Carlo) validate the approximations.
"""

from .edgeworth import (
    CountEstimate,
    McExpectations,
    estimate_count,
    log_to_decimal,
    mc_expectations,
    mu_term,
    nu_term,
)
from .errors import (
    BudgetExceeded,
    DimensionTooLarge,
    Infeasible,
    IndexOutOfRange,
    NegativeEntry,
    NoConvergence,
    NonPositive,
    NotPositiveDefinite,
    ShapeMismatch,
    SumMismatch,
    TableCountError,
)
from .gaussian import (
    CovarianceDiagnostics,
    Hyperplane,
    QuadraticModel,
    build_quadratic,
    covariance_diagnostics,
    gaussian_log_count,
    pair_sum_covariance,
)
from .margins import (
    Margins,
    SmoothnessReport,
    margins_from_csv,
    margins_from_json,
    margins_to_csv,
    margins_to_json,
    parse_margins,
    scale_and_round,
    smoothness_report,
    validate_margins,
)
from .oracle import (
    ExactCount,
    GeometricMcCount,
    QuadratureResult,
    brute_enumerate,
    exact_count,
    geometric_mc_count,
    integral_count,
)
from .typical import (
    DualPotentials,
    TypicalSolution,
    entropy_g,
    residuals,
    solve_typical,
)

__version__ = "0.1.0"

__all__ = [
    "Margins",
    "SmoothnessReport",
    "validate_margins",
    "scale_and_round",
    "smoothness_report",
    "margins_to_json",
    "margins_from_json",
    "margins_to_csv",
    "margins_from_csv",
    "parse_margins",
    "DualPotentials",
    "TypicalSolution",
    "entropy_g",
    "solve_typical",
    "residuals",
    "Hyperplane",
    "QuadraticModel",
    "CovarianceDiagnostics",
    "build_quadratic",
    "pair_sum_covariance",
    "gaussian_log_count",
    "covariance_diagnostics",
    "CountEstimate",
    "McExpectations",
    "estimate_count",
    "mu_term",
    "nu_term",
    "mc_expectations",
    "log_to_decimal",
    "ExactCount",
    "QuadratureResult",
    "GeometricMcCount",
    "exact_count",
    "brute_enumerate",
    "integral_count",
    "geometric_mc_count",
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
