"""Margin vectors for counting problems on non-negative integer matrices.

A margin pair (R, C) prescribes the row sums R = (r_1, ..., r_m) and the
column sums C = (c_1, ..., c_n) of an m x n matrix with non-negative
integer entries.  Everything downstream (the maximum-entropy solve, the
count approximations and the exact oracles) consumes the validated
``Margins`` value built here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import Infeasible, NonPositive, ShapeMismatch, SumMismatch

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
]

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class Margins:
    """Validated row and column sums with equal totals."""

    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.row_sums)

    @property
    def n(self) -> int:
        return len(self.col_sums)

    @property
    def total(self) -> int:
        return sum(self.row_sums)

    def row_array(self) -> np.ndarray:
        return np.asarray(self.row_sums, dtype=np.int64)

    def col_array(self) -> np.ndarray:
        return np.asarray(self.col_sums, dtype=np.int64)

    def transposed(self) -> "Margins":
        return Margins(self.col_sums, self.row_sums)


@dataclass(frozen=True)
class SmoothnessReport:
    """Shape diagnostics of a margin pair and its typical matrix.

    ``tau`` is the largest typical entry, ``zeta_ratio`` the smallest
    typical entry divided by the largest.  ``golden_ratio_guarantee`` is
    set when both margin spread ratios stay below (1 + sqrt 5)/2, the
    regime where the typical entries provably stay within a bounded
    ratio of each other.
    """

    tau: float
    zeta_ratio: float
    dim_ratio: float
    density: float
    row_ratio: float
    col_ratio: float
    golden_ratio_guarantee: bool


def _as_int_tuple(values: Iterable, label: str) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool):
            raise NonPositive(f"{label} must be integers, got boolean {v!r}")
        if isinstance(v, (int, np.integer)):
            out.append(int(v))
            continue
        if isinstance(v, float) and v.is_integer():
            out.append(int(v))
            continue
        raise NonPositive(f"{label} must be integers, got {v!r}")
    return tuple(out)


def validate_margins(rows: Sequence, cols: Sequence) -> Margins:
    """Check shapes, positivity and matching totals; return a Margins value."""
    row_sums = _as_int_tuple(rows, "row sums")
    col_sums = _as_int_tuple(cols, "column sums")
    if len(row_sums) == 0 or len(col_sums) == 0:
        raise ShapeMismatch("margins must have at least one row and one column")
    if any(r <= 0 for r in row_sums):
        raise NonPositive(f"row sums must be positive, got {row_sums}")
    if any(c <= 0 for c in col_sums):
        raise NonPositive(f"column sums must be positive, got {col_sums}")
    if sum(row_sums) != sum(col_sums):
        raise SumMismatch(
            f"row total {sum(row_sums)} != column total {sum(col_sums)}"
        )
    return Margins(row_sums, col_sums)


def _apportion(values: tuple[int, ...], alpha: float, target: int) -> list[int]:
    # largest-remainder apportionment of `target` among alpha-scaled values,
    # ties broken toward the lowest index
    quotas = [alpha * v for v in values]
    floors = [math.floor(q) for q in quotas]
    deficit = target - sum(floors)
    order = sorted(range(len(values)), key=lambda i: (-(quotas[i] - floors[i]), i))
    out = list(floors)
    for i in order[:deficit]:
        out[i] += 1
    return out


def _force_positive(values: list[int]) -> list[int]:
    # lift zero entries to one, paying each unit from the current largest entry
    out = list(values)
    for i, v in enumerate(out):
        while out[i] < 1:
            j = max(range(len(out)), key=lambda k: (out[k], -k))
            if j == i or out[j] <= 1:
                raise Infeasible("cannot make all scaled entries positive")
            out[j] -= 1
            out[i] += 1
    return out


def scale_and_round(margins: Margins, alpha: float) -> Margins:
    """Scale both margin vectors by alpha and round back to integer margins.

    The target total is round(alpha * N).  Each side is apportioned
    independently by largest fractional part (lowest index wins ties),
    then entries are forced to stay >= 1 with a compensating decrement
    taken from the largest entry.
    """
    if not (alpha > 0):
        raise Infeasible(f"alpha must be positive, got {alpha}")
    target = math.floor(alpha * margins.total + 0.5)
    if margins.m > target or margins.n > target:
        raise Infeasible(
            f"target total {target} cannot cover {margins.m} rows "
            f"and {margins.n} columns with positive entries"
        )
    rows = _force_positive(_apportion(margins.row_sums, alpha, target))
    cols = _force_positive(_apportion(margins.col_sums, alpha, target))
    return validate_margins(rows, cols)


def smoothness_report(margins: Margins, Z: np.ndarray) -> SmoothnessReport:
    """Summarize how balanced the margins and their typical matrix are."""
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (margins.m, margins.n):
        raise ShapeMismatch(
            f"typical matrix shape {Z.shape} does not match margins "
            f"({margins.m}, {margins.n})"
        )
    tau = float(Z.max())
    zeta_ratio = float(Z.min()) / tau
    m, n = margins.m, margins.n
    dim_ratio = min(m / n, n / m)
    density = margins.total / (m * n)
    row_ratio = max(margins.row_sums) / min(margins.row_sums)
    col_ratio = max(margins.col_sums) / min(margins.col_sums)
    return SmoothnessReport(
        tau=tau,
        zeta_ratio=zeta_ratio,
        dim_ratio=dim_ratio,
        density=density,
        row_ratio=row_ratio,
        col_ratio=col_ratio,
        golden_ratio_guarantee=bool(
            row_ratio < GOLDEN_RATIO and col_ratio < GOLDEN_RATIO
        ),
    )


def margins_to_json(margins: Margins) -> str:
    return json.dumps(
        {"rows": list(margins.row_sums), "cols": list(margins.col_sums)},
        sort_keys=True,
    )


def margins_from_json(text: str) -> Margins:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeMismatch(f"invalid margins JSON: {exc}") from exc
    if not isinstance(obj, dict) or "rows" not in obj or "cols" not in obj:
        raise ShapeMismatch('margins JSON must be {"rows": [...], "cols": [...]}')
    return validate_margins(obj["rows"], obj["cols"])


def margins_to_csv(margins: Margins) -> str:
    rows = ",".join(str(r) for r in margins.row_sums)
    cols = ",".join(str(c) for c in margins.col_sums)
    return f"{rows}\n{cols}\n"


def margins_from_csv(text: str) -> Margins:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) != 2:
        raise ShapeMismatch(
            f"margins CSV needs exactly two non-empty lines, got {len(lines)}"
        )

    def parse_line(line: str, label: str) -> list[int]:
        try:
            return [int(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise ShapeMismatch(f"invalid integer in {label}: {line!r}") from exc

    return validate_margins(
        parse_line(lines[0], "row sums"), parse_line(lines[1], "column sums")
    )


def parse_margins(text: str) -> Margins:
    """Parse margins from JSON or two-line CSV, sniffing the format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return margins_from_json(text)
    return margins_from_csv(text)
