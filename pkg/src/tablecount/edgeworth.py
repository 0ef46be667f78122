"""Third/fourth order correction to the Gaussian count approximation.

The Gaussian estimate ignores the cubic and quartic terms of the
log-weight expansion around the typical matrix Z.  With pair sums
w_jk = s_j + t_k under the Gaussian measure, define

    f = sum_jk z(z+1)(2z+1)/6  * w_jk^3
    h = sum_jk z(z+1)(6z^2+6z+1)/24 * w_jk^4

and let mu = E f^2, nu = E h.  The corrected count multiplies the
Gaussian estimate by exp(-mu/2 + nu).  Both expectations reduce to pair
covariances through the Gaussian moment identities

    E w^4           = 3 (E w^2)^2
    E w1^3 w2^3     = 9 s1 s2 r + 6 r^3   (s_i = Var w_i, r = Cov(w1, w2))

so mu and nu are exact polynomial functions of the covariance model, and
the Monte Carlo estimator here serves only as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np
import scipy.linalg

from .gaussian import Hyperplane, QuadraticModel, build_quadratic, gaussian_log_count
from .margins import Margins
from .typical import TypicalSolution, solve_typical

__all__ = [
    "CountEstimate",
    "McExpectations",
    "mu_term",
    "nu_term",
    "estimate_count",
    "mc_expectations",
    "log_to_decimal",
]

_MC_BLOCK = 32768


@dataclass(frozen=True)
class CountEstimate:
    """Count approximation in natural-log form with its components."""

    log_count: float
    gaussian_log: float
    edgeworth_log_factor: float
    g_of_Z: float
    logdet_qH: float
    mu: float
    nu: float

    @property
    def decimal(self) -> str:
        """Decimal rendering of exp(log_count), 6 significant digits."""
        return log_to_decimal(self.log_count)

    @property
    def gaussian_decimal(self) -> str:
        return log_to_decimal(self.gaussian_log)

    def as_dict(self) -> dict:
        return {
            "log_count": self.log_count,
            "gaussian_log": self.gaussian_log,
            "edgeworth_log_factor": self.edgeworth_log_factor,
            "g_of_Z": self.g_of_Z,
            "logdet_qH": self.logdet_qH,
            "mu": self.mu,
            "nu": self.nu,
            "estimate": self.decimal,
            "gaussian_estimate": self.gaussian_decimal,
        }


@dataclass(frozen=True)
class McExpectations:
    """Monte Carlo estimates of mu, nu and related checks."""

    mu_hat: float
    nu_hat: float
    var_h_hat: float
    char_fn_hat: complex
    std_errors: dict


def log_to_decimal(log_value: float, digits: int = 6) -> str:
    """Render exp(log_value) as 'd.dddddEe' with round-half-even mantissa."""
    if not math.isfinite(log_value):
        raise ValueError(f"log value must be finite, got {log_value}")
    log10 = log_value / math.log(10.0)
    exponent = math.floor(log10)
    mantissa = 10.0 ** (log10 - exponent)
    quantum = Decimal(1).scaleb(-(digits - 1))
    dec = Decimal(repr(mantissa)).quantize(quantum, rounding=ROUND_HALF_EVEN)
    if dec >= 10:
        dec = (dec / 10).quantize(quantum, rounding=ROUND_HALF_EVEN)
        exponent += 1
    return f"{dec}e{exponent}"


def _cubic_coeff(Z: np.ndarray) -> np.ndarray:
    return Z * (Z + 1.0) * (2.0 * Z + 1.0) / 6.0


def _quartic_coeff(Z: np.ndarray) -> np.ndarray:
    return Z * (Z + 1.0) * (6.0 * Z * Z + 6.0 * Z + 1.0) / 24.0


def _zeta_of(solution) -> np.ndarray:
    return np.asarray(getattr(solution, "zeta", solution), dtype=float)


def nu_term(solution, model: QuadraticModel) -> float:
    """nu = E h, computed from pair variances via E w^4 = 3 (E w^2)^2."""
    Z = _zeta_of(solution)
    V = model.pair_variances()
    return float(np.sum(_quartic_coeff(Z) * 3.0 * V * V))


def mu_term(solution, model: QuadraticModel) -> float:
    """mu = E f^2 as a double sum over entry pairs, blocked over row pairs."""
    Z = _zeta_of(solution)
    c3 = _cubic_coeff(Z)
    A, B, D = model.pair_covariance_components()
    V = model.pair_variances()
    m = model.m
    total = 0.0
    for j1 in range(m):
        for j2 in range(j1, m):
            # rho[k1, k2] = Cov(s_j1 + t_k1, s_j2 + t_k2)
            rho = A[j1, j2] + B[j1][None, :] + B[j2][:, None] + D
            block = (
                c3[j1][:, None]
                * c3[j2][None, :]
                * (9.0 * V[j1][:, None] * V[j2][None, :] * rho + 6.0 * rho**3)
            ).sum()
            total += block if j1 == j2 else 2.0 * block
    return float(total)


def estimate_count(
    margins: Margins,
    *,
    tol: float = 1e-10,
    max_iter: int = 10000,
    hyperplane: Hyperplane | None = None,
) -> CountEstimate:
    """Full pipeline: typical matrix, Gaussian term, correction factor."""
    solution = solve_typical(margins, tol=tol, max_iter=max_iter)
    model = build_quadratic(solution, margins, hyperplane)
    mu = mu_term(solution, model)
    nu = nu_term(solution, model)
    gauss = gaussian_log_count(solution.g_of_Z, model)
    edge = -0.5 * mu + nu
    return CountEstimate(
        log_count=gauss + edge,
        gaussian_log=gauss,
        edgeworth_log_factor=edge,
        g_of_Z=solution.g_of_Z,
        logdet_qH=model.logdet_qH,
        mu=mu,
        nu=nu,
    )


def mc_expectations(
    model: QuadraticModel,
    solution,
    samples: int = 100_000,
    seed: int = 42,
) -> McExpectations:
    """Sample the Gaussian measure and estimate mu, nu, var h and E exp(if).

    Sampling is blocked at a fixed internal size, so results for a given
    seed and sample count are reproducible bit for bit.
    """
    Z = _zeta_of(solution)
    c3 = _cubic_coeff(Z)
    c4 = _quartic_coeff(Z)
    m, n = model.m, model.n
    chol = scipy.linalg.cholesky(model.sigma, lower=True)
    if model.hyperplane.kind == "s":
        drop = model.hyperplane.index
    else:
        drop = m + model.hyperplane.index
    keep = np.delete(np.arange(m + n), drop)

    rng = np.random.default_rng(seed)
    sum_f2 = sum_f4 = 0.0
    sum_h = sum_h2 = sum_h3 = sum_h4 = 0.0
    sum_cos = sum_sin = sum_cos2 = sum_sin2 = 0.0
    done = 0
    while done < samples:
        b = min(_MC_BLOCK, samples - done)
        X = rng.standard_normal((b, m + n - 1))
        Y = X @ chol.T
        coords = np.zeros((b, m + n))
        coords[:, keep] = Y
        pair = coords[:, :m, None] + coords[:, None, m:]
        p3 = pair**3
        f = np.einsum("bjk,jk->b", p3, c3)
        h = np.einsum("bjk,jk->b", p3 * pair, c4)
        f2 = f * f
        sum_f2 += float(f2.sum())
        sum_f4 += float((f2 * f2).sum())
        sum_h += float(h.sum())
        sum_h2 += float((h * h).sum())
        sum_h3 += float((h**3).sum())
        sum_h4 += float((h**4).sum())
        cos_f = np.cos(f)
        sin_f = np.sin(f)
        sum_cos += float(cos_f.sum())
        sum_sin += float(sin_f.sum())
        sum_cos2 += float((cos_f * cos_f).sum())
        sum_sin2 += float((sin_f * sin_f).sum())
        done += b

    S = float(samples)
    mu_hat = sum_f2 / S
    var_f2 = max(sum_f4 / S - mu_hat * mu_hat, 0.0)
    nu_hat = sum_h / S
    var_h = max(sum_h2 / S - nu_hat * nu_hat, 0.0)
    # central fourth moment of h, for the standard error of var_h_hat
    m2 = var_h
    m4 = (
        sum_h4 / S
        - 4.0 * nu_hat * sum_h3 / S
        + 6.0 * nu_hat**2 * sum_h2 / S
        - 3.0 * nu_hat**4
    )
    mean_cos = sum_cos / S
    mean_sin = sum_sin / S
    var_cos = max(sum_cos2 / S - mean_cos * mean_cos, 0.0)
    var_sin = max(sum_sin2 / S - mean_sin * mean_sin, 0.0)
    std_errors = {
        "mu": math.sqrt(var_f2 / S),
        "nu": math.sqrt(var_h / S),
        "var_h": math.sqrt(max(m4 - m2 * m2, 0.0) / S),
        "char_fn": math.sqrt((var_cos + var_sin) / S),
    }
    return McExpectations(
        mu_hat=mu_hat,
        nu_hat=nu_hat,
        var_h_hat=var_h * S / max(S - 1.0, 1.0),
        char_fn_hat=complex(mean_cos, mean_sin),
        std_errors=std_errors,
    )
