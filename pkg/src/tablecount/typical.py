"""Typical matrix of a margin pair via maximum-entropy duality.

Over all non-negative real matrices with row sums R and column sums C,
the strictly concave functional

    g(X) = sum_jk (x_jk + 1) ln(x_jk + 1) - x_jk ln x_jk

has a unique maximizer Z, the typical matrix.  Its entries have the form
z_jk = 1 / (exp(phi_j + psi_k) - 1) for dual potentials (phi, psi), and
the optimal value satisfies

    g(Z) = sum_j phi_j r_j + sum_k psi_k c_k + sum_jk ln(1 + z_jk).

The solver performs alternating dual updates: with psi fixed, each phi_j
solves a strictly decreasing scalar equation matching row sum r_j, and
symmetrically for the columns.  The gauge psi[last] = 0 pins the shift
degree of freedom.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEntry, NoConvergence, ShapeMismatch
from .margins import Margins

__all__ = [
    "DualPotentials",
    "TypicalSolution",
    "entropy_g",
    "solve_typical",
    "residuals",
]


@dataclass(frozen=True)
class DualPotentials:
    """Row and column potentials, gauged so that psi[-1] == 0."""

    phi: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class TypicalSolution:
    zeta: np.ndarray
    potentials: DualPotentials
    g_of_Z: float
    iterations: int
    row_residual: float
    col_residual: float

    @property
    def max_rel_residual(self) -> float:
        return max(self.row_residual, self.col_residual)


def entropy_g(X) -> float:
    """Evaluate g(X) = sum (x+1)ln(x+1) - x ln x entrywise, with g(0) = 0."""
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        raise ShapeMismatch("empty matrix")
    if np.any(X < 0) or not np.all(np.isfinite(X)):
        raise NegativeEntry("entropy defined only for finite non-negative entries")
    pos = X[X > 0]
    # x*log1p(1/x) + log1p(x) is the numerically stable rearrangement
    return float(np.sum(pos * np.log1p(1.0 / pos) + np.log1p(pos)))


def _zeta_from(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(phi[:, None] + psi[None, :])


def _solve_side(
    fixed: np.ndarray, targets: np.ndarray, start: np.ndarray | None
) -> np.ndarray:
    """Solve sum_k 1/(exp(x_i + fixed_k) - 1) = targets_i for each i.

    The left side is strictly decreasing in x_i on (-min(fixed), inf), so
    a bracketed Newton iteration converges for every component.
    """
    q = len(fixed)
    lo = -float(fixed.min())
    tiny = 1e-13 * (1.0 + abs(lo))
    xlo = np.full(len(targets), lo + tiny)
    # sum <= q / expm1(x + min fixed), so this is a guaranteed upper bracket
    xhi = lo + np.log1p(q / targets) + tiny
    if start is None:
        x = 0.5 * (xlo + xhi)
    else:
        x = np.clip(start, xlo, xhi)
    rtol = max(8.0 * q * np.finfo(float).eps, 1e-13)
    for _ in range(120):
        with np.errstate(over="ignore"):
            zrow = 1.0 / np.expm1(x[:, None] + fixed[None, :])
        s = zrow.sum(axis=1)
        f = s - targets
        xlo = np.where(f > 0, np.maximum(xlo, x), xlo)
        xhi = np.where(f < 0, np.minimum(xhi, x), xhi)
        done = np.abs(f) <= rtol * targets
        if done.all():
            break
        ds = -(zrow * (1.0 + zrow)).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - f / ds
        mid = 0.5 * (xlo + xhi)
        bad = ~np.isfinite(xn) | (xn <= xlo) | (xn >= xhi)
        xn = np.where(bad, mid, xn)
        x = np.where(done, x, xn)
    return x


def residuals(Z: np.ndarray, margins: Margins) -> tuple[float, float]:
    """Worst relative margin defects of Z: (max_j |sum_k z_jk - r_j| / r_j,
    and the analogous column quantity)."""
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (margins.m, margins.n):
        raise ShapeMismatch(
            f"matrix shape {Z.shape} does not match margins "
            f"({margins.m}, {margins.n})"
        )
    row_res = Z.sum(axis=1) - margins.row_array().astype(float)
    col_res = Z.sum(axis=0) - margins.col_array().astype(float)
    return (
        float(np.max(np.abs(row_res) / margins.row_array())),
        float(np.max(np.abs(col_res) / margins.col_array())),
    )


def solve_typical(
    margins: Margins, tol: float = 1e-10, max_iter: int = 10000
) -> TypicalSolution:
    """Compute the typical matrix by alternating dual coordinate updates."""
    r = margins.row_array().astype(float)
    c = margins.col_array().astype(float)
    n = margins.n
    # with psi = 0 this start satisfies every row sum exactly
    phi = np.log1p(n / r)
    psi = np.zeros(n)
    best_res = np.inf
    for sweep in range(1, max_iter + 1):
        phi = _solve_side(psi, r, phi)
        psi = _solve_side(phi, c, psi)
        # re-gauge without changing any phi_j + psi_k
        shift = psi[-1]
        psi = psi - shift
        phi = phi + shift
        Z = _zeta_from(phi, psi)
        row_res, col_res = residuals(Z, margins)
        best_res = max(row_res, col_res)
        if best_res <= tol:
            g_val = float(np.sum(Z * np.log1p(1.0 / Z) + np.log1p(Z)))
            return TypicalSolution(
                zeta=Z,
                potentials=DualPotentials(phi=phi, psi=psi),
                g_of_Z=g_val,
                iterations=sweep,
                row_residual=row_res,
                col_residual=col_res,
            )
    raise NoConvergence(max_iter, best_res)
