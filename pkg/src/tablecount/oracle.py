"""Independent oracles for the count of matrices with fixed margins.

Four routes that do not share code with the approximation pipeline:

* an exact dynamic program over partial column sums (two engines: a
  vectorized dense-array engine for low-dimensional margins, and a
  hash-map engine whose work is linear in the reachable states),
* brute-force enumeration for tiny inputs,
* a multidimensional trapezoid quadrature of the exact integral
  representation of the count (geometrically convergent because the
  integrand is smooth and periodic),
* a geometric Monte Carlo estimate: independent geometric entries with
  the typical matrix as means hit the prescribed margins with
  probability exp(-g(Z)) times the count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionTooLarge
from .margins import Margins
from .typical import TypicalSolution, entropy_g

__all__ = [
    "ExactCount",
    "QuadratureResult",
    "GeometricMcCount",
    "exact_count",
    "brute_enumerate",
    "integral_count",
    "geometric_mc_count",
]

_LIMB_BITS = 30
_LIMB_BASE = 1 << _LIMB_BITS
_BRUTE_BUDGET = 10_000_000
_DENSE_MEMORY_CELLS = 600_000_000  # int64 cells across all limbs, ~4.8 GB


@dataclass(frozen=True)
class ExactCount:
    value: int
    states_explored: int
    method: str


@dataclass(frozen=True)
class QuadratureResult:
    real_part: float
    imag_part: float
    grid_points_per_axis: int
    estimate: float


@dataclass(frozen=True)
class GeometricMcCount:
    estimate: float
    hits: int
    samples: int
    std_error: float


def _zeta_g(solution, margins: Margins) -> tuple[np.ndarray, float]:
    if isinstance(solution, TypicalSolution):
        return solution.zeta, solution.g_of_Z
    Z = np.asarray(solution, dtype=float)
    return Z, entropy_g(Z)


# ---------------------------------------------------------------------------
# dense dynamic program
#
# State: partial column sums v of the rows placed so far, stored as a
# dense array over every column axis except the largest one (that
# coordinate is implied by the number of units placed).  Rows are added
# one unit at a time; within a row, units must land in non-decreasing
# column order, so each row composition is produced exactly once.  The
# array therefore carries one extra leading axis for the last column
# used.  Each unit step is a prefix sum over that axis followed by a
# one-slot shift along the chosen column axis, which keeps every
# transition a vectorized pass.  The row with the largest sum is never
# processed: it is forced to take whatever remains in each column.
#
# Counts can exceed 64 bits, so cells hold base-2^30 limbs (one plain
# int64 when a rigorous a-priori bound fits).  The bound is the product
# over processed rows of C(r_j + n - 1, n - 1), since every
# intermediate cell counts partial placements of at most those rows.
# ---------------------------------------------------------------------------


def _log2_compositions(total: int, parts: int) -> float:
    # log2 C(total + parts - 1, parts - 1)
    return (
        math.lgamma(total + parts)
        - math.lgamma(total + 1)
        - math.lgamma(parts)
    ) / math.log(2.0)


def _dense_plan(steps_side: tuple[int, ...], state_side: tuple[int, ...]):
    """Cost model for one orientation: cells, limbs, and step count."""
    n = len(state_side)
    drop = max(range(n), key=lambda i: state_side[i])
    slab = 1
    for i, c in enumerate(state_side):
        if i != drop:
            slab *= c + 1
    skip = max(range(len(steps_side)), key=lambda j: steps_side[j])
    bits = 1.0 + math.ceil(math.log2(n))
    for j, r in enumerate(steps_side):
        if j != skip:
            bits += _log2_compositions(r, n)
    limbs = 1 if bits <= 62.0 else math.ceil(bits / _LIMB_BITS)
    steps = sum(steps_side) - steps_side[skip]
    return {
        "drop": drop,
        "skip": skip,
        "slab": slab,
        "cells": slab * n,
        "limbs": limbs,
        "steps": steps,
    }


def _shift_axis(arr: np.ndarray, axis: int, scratch: np.ndarray) -> None:
    # in-place shift by +1 along `axis`, zero-filling the first slot
    src = tuple(
        slice(0, -1) if a == axis else slice(None) for a in range(arr.ndim)
    )
    dst = tuple(
        slice(1, None) if a == axis else slice(None) for a in range(arr.ndim)
    )
    first = tuple(
        0 if a == axis else slice(None) for a in range(arr.ndim)
    )
    np.copyto(scratch, arr[src])
    arr[dst] = scratch
    arr[first] = 0


def _count_dense(
    steps_side: tuple[int, ...], state_side: tuple[int, ...], plan: dict
) -> int:
    n = len(state_side)
    drop = plan["drop"]
    skip = plan["skip"]
    limbs = plan["limbs"]
    dims = tuple(c + 1 for i, c in enumerate(state_side) if i != drop)
    # column index -> stored axis within a limb array (axis 0 is `last`)
    axis_of = {}
    pos = 1
    for i in range(n):
        if i != drop:
            axis_of[i] = pos
            pos += 1

    F = [np.zeros((n,) + dims, dtype=np.int64) for _ in range(limbs)]
    F[0][(0,) * (len(dims) + 1)] = 1
    scratch = {
        ax: np.empty(
            tuple(
                d - 1 if a + 1 == ax else d for a, d in enumerate(dims)
            ),
            dtype=np.int64,
        )
        for ax in axis_of.values()
    }

    carry_interval = max(1, math.floor(32.0 / max(1.0, math.log2(n))))

    def normalize() -> None:
        if limbs == 1:
            return
        for i in range(limbs - 1):
            carry = F[i] >> _LIMB_BITS
            F[i] &= _LIMB_BASE - 1
            F[i + 1] += carry

    since_carry = 0
    rows = [r for j, r in enumerate(steps_side) if j != skip]
    for r in rows:
        for _ in range(r):
            for arr in F:
                # prefix sums over the last-column axis
                for l in range(1, n):
                    arr[l] += arr[l - 1]
                # place one unit in column l: shift its stored axis
                for col, ax in axis_of.items():
                    _shift_axis(arr[col], ax - 1, scratch[ax])
            since_carry += 1
            if limbs > 1 and since_carry >= carry_interval:
                normalize()
                since_carry = 0
        # row boundary: the next row may start at any column again
        if limbs > 1 and since_carry > 0:
            normalize()
        for arr in F:
            collapsed = arr.sum(axis=0)
            arr[:] = 0
            arr[0] = collapsed
        normalize()
        since_carry = 0

    placed = sum(rows)
    index_sum = np.zeros(dims, dtype=np.int64)
    for a, d in enumerate(dims):
        shape = tuple(d if b == a else 1 for b in range(len(dims)))
        index_sum += np.arange(d, dtype=np.int64).reshape(shape)
    valid = (index_sum >= placed - state_side[drop]) & (index_sum <= placed)

    value = 0
    for i in range(limbs - 1, -1, -1):
        part = int(F[i][0][valid].sum(dtype=np.int64))
        value = (value << _LIMB_BITS) + part
    return value


# ---------------------------------------------------------------------------
# hash-map dynamic program
#
# State: tuple of remaining row sums; one column is consumed at a time
# through m single-row passes.  A pass takes suffix sums along the
# direction (row j decreases together with the column budget), realized
# by walking the states level by level in decreasing total sum, so the
# work stays linear in the number of live states.  The budget coordinate
# itself is implicit: all states entering a column share one total, so
# the remaining column budget is determined by the current total.
# Columns are processed in ascending sum order and the largest column is
# never processed; it absorbs whatever remains.
# ---------------------------------------------------------------------------


def _hash_visits_estimate(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
    # number of bounded compositions at each partial total, via the
    # coefficient vector of prod_j (1 + x + ... + x^{r_j})
    N = sum(rows)
    coeff = np.zeros(N + 1)
    coeff[0] = 1.0
    for r in rows:
        coeff = np.convolve(coeff, np.ones(r + 1))[: N + 1]
    total = 0.0
    seq = sorted(cols)
    high = N
    for c in seq[:-1]:
        low = high - c
        total += len(rows) * float(coeff[low : high + 1].sum())
        high = low
    if not math.isfinite(total) or total > 2**62:
        return 2**62
    return int(total)


def _count_hash(
    rows: tuple[int, ...], cols: tuple[int, ...], budget: int
) -> tuple[int, int]:
    m = len(rows)
    table: dict[tuple[int, ...], int] = {tuple(rows): 1}
    high = sum(rows)
    visits = 0
    for c in sorted(cols)[:-1]:
        low = high - c
        for j in range(m):
            by_sum: dict[int, dict[tuple[int, ...], int]] = {}
            for key, val in table.items():
                by_sum.setdefault(sum(key), {})[key] = val
            out: dict[tuple[int, ...], int] = {}
            for s in range(high, low - 1, -1):
                bucket = by_sum.get(s)
                if not bucket:
                    continue
                visits += len(bucket)
                if visits > budget:
                    raise BudgetExceeded(visits)
                for key, val in bucket.items():
                    # keep the state only if the untouched rows can still
                    # absorb the remaining column budget
                    if sum(key[: j + 1]) <= low:
                        out[key] = val
                    if key[j] > 0 and s > low:
                        k2 = key[:j] + (key[j] - 1,) + key[j + 1 :]
                        lower = by_sum.setdefault(s - 1, {})
                        lower[k2] = lower.get(k2, 0) + val
            table = out
        high = low
    return sum(table.values()), visits


def exact_count(
    margins: Margins,
    state_budget: int = 200_000_000,
    engine: str = "auto",
) -> ExactCount:
    """Exact count by dynamic programming.

    engine "auto" picks the dense array engine when its allocation fits
    the state budget and falls back to the hash-map engine otherwise;
    "dense" and "hash" force one engine.  Raises BudgetExceeded before
    any large allocation when neither engine fits.
    """
    rows = margins.row_sums
    cols = margins.col_sums
    if margins.m == 1 or margins.n == 1:
        return ExactCount(value=1, states_explored=1, method="dp")
    if engine not in ("auto", "dense", "hash"):
        raise ValueError(f"unknown engine {engine!r}")

    plans = []
    if engine in ("auto", "dense"):
        for steps_side, state_side in ((rows, cols), (cols, rows)):
            plan = _dense_plan(steps_side, state_side)
            plans.append((plan["cells"] * plan["limbs"], steps_side, state_side, plan))
        plans.sort(key=lambda item: item[0])
        weighted, steps_side, state_side, plan = plans[0]
        if plan["cells"] <= state_budget and weighted <= _DENSE_MEMORY_CELLS:
            value = _count_dense(steps_side, state_side, plan)
            return ExactCount(
                value=value, states_explored=plan["cells"], method="dp"
            )
        if engine == "dense":
            raise BudgetExceeded(plan["cells"])

    estimate = _hash_visits_estimate(rows, cols)
    if estimate > state_budget:
        raise BudgetExceeded(
            min(estimate, plans[0][3]["cells"]) if plans else estimate
        )
    value, visits = _count_hash(rows, cols, state_budget)
    return ExactCount(value=value, states_explored=visits, method="dp")


def brute_enumerate(margins: Margins) -> ExactCount:
    """Recursive enumeration of all matrices matching the margins.

    Guarded by the product of (r_j + 1); intended for tiny cases only.
    """
    guard = 1
    for r in margins.row_sums:
        guard *= r + 1
        if guard > _BRUTE_BUDGET:
            raise BudgetExceeded(guard)
    m, n = margins.m, margins.n
    cols_rem = list(margins.col_sums)
    visited = 0

    def fill_row(j: int) -> int:
        nonlocal visited
        if j == m - 1:
            # the last row is forced to take every remaining column sum
            return 1

        def place(k: int, remaining: int) -> int:
            nonlocal visited
            visited += 1
            if k == n - 1:
                if remaining > cols_rem[k]:
                    return 0
                cols_rem[k] -= remaining
                sub = fill_row(j + 1)
                cols_rem[k] += remaining
                return sub
            total = 0
            for d in range(min(remaining, cols_rem[k]) + 1):
                cols_rem[k] -= d
                total += place(k + 1, remaining - d)
                cols_rem[k] += d
            return total

        return place(0, margins.row_sums[j])

    value = fill_row(0)
    return ExactCount(value=value, states_explored=visited, method="brute")


def integral_count(
    solution, margins: Margins, grid: int | None = None
) -> QuadratureResult:
    """Trapezoid quadrature of the exact integral representation.

    The count equals e^{g(Z)} (2 pi)^{-(m+n-1)} times the integral over
    the torus (with t for the last column pinned to zero) of

        exp(-i <R, s> - i <C, t>) prod_jk 1 / (1 + z_jk - z_jk e^{i(s_j + t_k)}).

    On a uniform periodic grid the trapezoid rule converges
    geometrically in the number of points per axis.
    """
    Z, g_val = _zeta_g(solution, margins)
    m, n = margins.m, margins.n
    dims = m + n - 1
    if dims > 5:
        raise DimensionTooLarge(
            f"quadrature restricted to m + n - 1 <= 5, got {dims}"
        )
    if grid is None:
        grid = 2 * margins.total + 2
    theta = -math.pi + 2.0 * math.pi * np.arange(grid) / grid
    phase = np.exp(1j * theta)
    R = margins.row_array().astype(np.float64)
    C = margins.col_array().astype(np.float64)

    # The grid sum factors: for fixed t the integrand is a product of
    # per-row terms, each depending on one s_j only (and symmetrically
    # with rows and columns swapped).  Summing the inner variable first
    # reduces the work from grid^(m+n-1) to a mesh of one side's
    # variables, without changing the set of grid points.  The pinned
    # coordinate stays t_n = 0 either way.
    mesh_dims = n - 1 if n - 1 <= m else m

    def on_axis(axis: int, values: np.ndarray) -> np.ndarray:
        shape = [1] * max(mesh_dims, 1)
        shape[axis] = grid
        return values.reshape(shape)

    mesh_shape = (grid,) * mesh_dims if mesh_dims else ()
    mesh = np.ones(mesh_shape, dtype=np.complex128)
    if n - 1 <= m:
        # mesh over t_1..t_{n-1}; inner sums over each s_j
        for k in range(n - 1):
            mesh *= on_axis(k, np.exp(-1j * C[k] * theta))
        for j in range(m):
            acc = np.zeros(mesh_shape, dtype=np.complex128)
            pinned = 1.0 / (1.0 + Z[j, n - 1] - Z[j, n - 1] * phase)
            row_phase = np.exp(-1j * R[j] * theta)
            for si in range(grid):
                term = np.asarray(row_phase[si] * pinned[si], dtype=np.complex128)
                for k in range(n - 1):
                    z = Z[j, k]
                    term = term * on_axis(
                        k, 1.0 / (1.0 + z - z * (phase[si] * phase))
                    )
                acc += term
            mesh *= acc / grid
    else:
        # mesh over s_1..s_m; inner sums over each t_k, k < n
        for j in range(m):
            mesh *= on_axis(j, np.exp(-1j * R[j] * theta))
            zjn = Z[j, n - 1]
            mesh *= on_axis(j, 1.0 / (1.0 + zjn - zjn * phase))
        for k in range(n - 1):
            acc = np.zeros(mesh_shape, dtype=np.complex128)
            col_phase = np.exp(-1j * C[k] * theta)
            for ti in range(grid):
                term = np.asarray(col_phase[ti], dtype=np.complex128)
                for j in range(m):
                    z = Z[j, k]
                    term = term * on_axis(
                        j, 1.0 / (1.0 + z - z * (phase * phase[ti]))
                    )
                acc += term
            mesh *= acc / grid
    mean = complex(mesh.mean())
    volume = (2.0 * math.pi) ** dims
    estimate = math.exp(g_val) * mean.real if mean.real > 0 else 0.0
    return QuadratureResult(
        real_part=mean.real * volume,
        imag_part=mean.imag * volume,
        grid_points_per_axis=grid,
        estimate=estimate,
    )


def geometric_mc_count(
    solution,
    margins: Margins,
    samples: int = 1_000_000,
    seed: int = 42,
) -> GeometricMcCount:
    """Estimate the count as e^{g(Z)} times the margin hit probability.

    Entries are independent geometric variables with means z_jk; a
    sample is a hit when every row and column sum matches.  Blocked at a
    fixed internal size, so a given seed is reproducible exactly.
    """
    Z, g_val = _zeta_g(solution, margins)
    p = 1.0 / (1.0 + Z)
    R = margins.row_array()
    C = margins.col_array()
    rng = np.random.default_rng(seed)
    block = 50_000
    hits = 0
    done = 0
    while done < samples:
        b = min(block, samples - done)
        draws = rng.geometric(p, size=(b,) + Z.shape) - 1
        row_ok = (draws.sum(axis=2) == R).all(axis=1)
        col_ok = (draws.sum(axis=1) == C).all(axis=1)
        hits += int(np.count_nonzero(row_ok & col_ok))
        done += b
    phat = hits / samples
    if hits > 0:
        estimate = math.exp(g_val + math.log(phat))
        std_error = math.exp(
            g_val + 0.5 * math.log(phat * (1.0 - phat) / samples)
        )
    else:
        estimate = 0.0
        std_error = 0.0
    return GeometricMcCount(
        estimate=estimate, hits=hits, samples=samples, std_error=std_error
    )
