"""Gaussian (second-order) approximation around the typical matrix.

With Z the typical matrix of margins (R, C), the count of non-negative
integer matrices with those margins is approximated by a Gaussian
integral of the quadratic form

    q(s, t) = 1/2 sum_jk (z_jk^2 + z_jk)(s_j + t_k)^2

restricted to a hyperplane transversal to the null direction
u = (1,...,1; -1,...,-1).  In the coordinates that remain after pinning
one variable to zero, q has the matrix Q/2 where Q carries
row/column weights on the diagonal and the weights z^2 + z in the
off-diagonal bipartite block.  The leading estimate in log form is

    log count ~ g(Z) + (1/2) ln(m+n) - ((m+n-1)/2) ln(4 pi)
                - (1/2) ln det(q restricted to the hyperplane).

Covariances of the pair sums s_j + t_k under the Gaussian measure do not
depend on the choice of hyperplane, which makes the moment computations
of the correction factor well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import IndexOutOfRange, NotPositiveDefinite, ShapeMismatch
from .margins import Margins
from .typical import TypicalSolution

__all__ = [
    "Hyperplane",
    "QuadraticModel",
    "CovarianceDiagnostics",
    "build_quadratic",
    "pair_sum_covariance",
    "gaussian_log_count",
    "covariance_diagnostics",
]


@dataclass(frozen=True)
class Hyperplane:
    """Coordinate hyperplane used to pin the shift degree of freedom.

    kind "t" pins column potential t_index to zero, kind "s" pins row
    potential s_index.  The default for an m x n problem is to pin the
    last column, drop_t(n-1).
    """

    kind: str
    index: int

    @classmethod
    def drop_t(cls, index: int) -> "Hyperplane":
        return cls("t", index)

    @classmethod
    def drop_s(cls, index: int) -> "Hyperplane":
        return cls("s", index)


@dataclass(frozen=True)
class QuadraticModel:
    """Quadratic form matrix Q, its inverse, and log determinants.

    Q is (m+n-1) x (m+n-1) in the coordinates s_0..s_{m-1}, t_0..t_{n-1}
    with the pinned coordinate removed; q(x) = <x, Q x>/2.  sigma_full is
    the (m+n) x (m+n) covariance of the Gaussian with density
    proportional to exp(-q), with zero row and column at the pinned
    coordinate.  logdet_qL is the log determinant of q restricted to the
    coordinate hyperplane; logdet_qH adds ln(m+n) for the restriction to
    the hyperplane orthogonal to the null direction.
    """

    m: int
    n: int
    hyperplane: Hyperplane
    Q: np.ndarray
    sigma: np.ndarray
    sigma_full: np.ndarray
    logdet_Q: float
    logdet_qL: float
    logdet_qH: float

    def pair_covariance_components(
        self,
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Blocks (A, B, D) of sigma_full: rows/rows, rows/cols, cols/cols."""
        m = self.m
        return (
            self.sigma_full[:m, :m],
            self.sigma_full[:m, m:],
            self.sigma_full[m:, m:],
        )

    def pair_variances(self) -> np.ndarray:
        """Matrix of Var(s_j + t_k), shape (m, n)."""
        A, B, D = self.pair_covariance_components()
        return np.diag(A)[:, None] + 2.0 * B + np.diag(D)[None, :]


@dataclass(frozen=True)
class CovarianceDiagnostics:
    """Row/column weights a_j, b_k and the uniform covariance error bound.

    For typical entries within [delta*tau, tau] and dimensions within a
    factor delta of each other, every pair-sum covariance differs from
    its separable prediction (1/a_j, 1/b_k, or 0) by at most
    delta_bound = 12 / (delta^{15/2} (tau^2 + tau) m n).
    """

    a: np.ndarray
    b: np.ndarray
    delta_bound: float


def _zeta_of(solution) -> np.ndarray:
    return np.asarray(getattr(solution, "zeta", solution), dtype=float)


def build_quadratic(
    solution, margins: Margins, hyperplane: Hyperplane | None = None
) -> QuadraticModel:
    """Assemble Q on the chosen coordinate hyperplane and invert it."""
    Z = _zeta_of(solution)
    m, n = margins.m, margins.n
    if Z.shape != (m, n):
        raise ShapeMismatch(
            f"typical matrix shape {Z.shape} does not match margins ({m}, {n})"
        )
    if hyperplane is None:
        hyperplane = Hyperplane.drop_t(n - 1)
    if hyperplane.kind == "s":
        if not 0 <= hyperplane.index < m:
            raise IndexOutOfRange(f"row index {hyperplane.index} out of range")
        drop = hyperplane.index
    elif hyperplane.kind == "t":
        if not 0 <= hyperplane.index < n:
            raise IndexOutOfRange(f"column index {hyperplane.index} out of range")
        drop = m + hyperplane.index
    else:
        raise IndexOutOfRange(f"unknown hyperplane kind {hyperplane.kind!r}")

    W = Z * Z + Z
    full = np.zeros((m + n, m + n))
    full[:m, m:] = W
    full[m:, :m] = W.T
    diag = np.concatenate([W.sum(axis=1), W.sum(axis=0)])
    full[np.diag_indices(m + n)] = diag

    keep = np.delete(np.arange(m + n), drop)
    Q = full[np.ix_(keep, keep)]
    try:
        chol = scipy.linalg.cholesky(Q, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            "quadratic form is not positive definite on the chosen hyperplane"
        ) from exc
    logdet_Q = 2.0 * float(np.sum(np.log(np.diag(chol))))
    sigma = scipy.linalg.cho_solve((chol, True), np.eye(m + n - 1))
    sigma = 0.5 * (sigma + sigma.T)
    sigma_full = np.zeros((m + n, m + n))
    sigma_full[np.ix_(keep, keep)] = sigma
    logdet_qL = (1 - m - n) * math.log(2.0) + logdet_Q
    logdet_qH = math.log(m + n) + logdet_qL
    return QuadraticModel(
        m=m,
        n=n,
        hyperplane=hyperplane,
        Q=Q,
        sigma=sigma,
        sigma_full=sigma_full,
        logdet_Q=logdet_Q,
        logdet_qL=logdet_qL,
        logdet_qH=logdet_qH,
    )


def pair_sum_covariance(
    model: QuadraticModel, j1: int, k1: int, j2: int, k2: int
) -> float:
    """Cov(s_j1 + t_k1, s_j2 + t_k2) under the Gaussian measure."""
    m, n = model.m, model.n
    for j in (j1, j2):
        if not 0 <= j < m:
            raise IndexOutOfRange(f"row index {j} out of range for m={m}")
    for k in (k1, k2):
        if not 0 <= k < n:
            raise IndexOutOfRange(f"column index {k} out of range for n={n}")
    S = model.sigma_full
    return float(
        S[j1, j2] + S[j1, m + k2] + S[m + k1, j2] + S[m + k1, m + k2]
    )


def gaussian_log_count(g_of_Z: float, model: QuadraticModel) -> float:
    """Log of the second-order count approximation (natural log)."""
    d = model.m + model.n
    return (
        g_of_Z
        + 0.5 * math.log(d)
        - 0.5 * (d - 1) * math.log(4.0 * math.pi)
        - 0.5 * model.logdet_qH
    )


def covariance_diagnostics(solution, margins: Margins) -> CovarianceDiagnostics:
    """Weights a_j, b_k and the covariance error bound for this instance.

    delta is taken as the largest value compatible with the observed
    typical matrix: the minimum of the entry ratio min z / max z and the
    dimension ratio min(m/n, n/m).
    """
    Z = _zeta_of(solution)
    m, n = margins.m, margins.n
    if Z.shape != (m, n):
        raise ShapeMismatch(
            f"typical matrix shape {Z.shape} does not match margins ({m}, {n})"
        )
    W = Z * Z + Z
    tau = float(Z.max())
    delta = min(float(Z.min()) / tau, m / n, n / m)
    bound = 12.0 / (delta**7.5 * (tau * tau + tau) * m * n)
    return CovarianceDiagnostics(
        a=W.sum(axis=1), b=W.sum(axis=0), delta_bound=bound
    )
