"""Command line interface.

Subcommands: estimate, exact, typical, integral, sample, check, scale.
Margins are read from a file path or stdin ("-"), in JSON
{"rows": [...], "cols": [...]} or two-line CSV form.  Results go to
stdout as JSON (default) or aligned text; errors go to stderr as JSON
objects.  Exit codes: 0 success, 1 input error, 2 computational failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .edgeworth import estimate_count
from .errors import (
    BudgetExceeded,
    DimensionTooLarge,
    Infeasible,
    NegativeEntry,
    NoConvergence,
    NonPositive,
    NotPositiveDefinite,
    ShapeMismatch,
    SumMismatch,
)
from .margins import Margins, parse_margins, scale_and_round, smoothness_report
from .oracle import exact_count, geometric_mc_count, integral_count
from .typical import solve_typical

__all__ = ["RunConfig", "main"]

SCHEMA_VERSION = 1

_VALIDATION_ERRORS = (
    ShapeMismatch,
    NonPositive,
    SumMismatch,
    Infeasible,
    NegativeEntry,
)
_COMPUTE_ERRORS = (
    NoConvergence,
    BudgetExceeded,
    NotPositiveDefinite,
    DimensionTooLarge,
)


@dataclass(frozen=True)
class RunConfig:
    """Numerical knobs shared by the subcommands."""

    tol: float = 1e-10
    max_iter: int = 10000
    grid: int | None = None  # None means 2N + 2
    samples: int = 1_000_000
    seed: int = 42
    state_budget: int = 200_000_000
    threads: int = 0


def _apply_threads(threads: int) -> None:
    if threads <= 0:
        return
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(threads)
    except ImportError:
        pass


def _read_margins(source: str) -> Margins:
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_margins(text)


def _margins_header(margins: Margins) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "m": margins.m,
        "n": margins.n,
        "rows": list(margins.row_sums),
        "cols": list(margins.col_sums),
        "total": margins.total,
    }


def _cmd_estimate(margins: Margins, cfg: RunConfig) -> dict:
    est = estimate_count(margins, tol=cfg.tol, max_iter=cfg.max_iter)
    out = _margins_header(margins)
    out.update(est.as_dict())
    return out


def _cmd_typical(margins: Margins, cfg: RunConfig) -> dict:
    sol = solve_typical(margins, tol=cfg.tol, max_iter=cfg.max_iter)
    report = smoothness_report(margins, sol.zeta)
    out = _margins_header(margins)
    out.update(
        {
            "zeta": [[float(z) for z in row] for row in sol.zeta],
            "phi": [float(v) for v in sol.potentials.phi],
            "psi": [float(v) for v in sol.potentials.psi],
            "g_of_Z": sol.g_of_Z,
            "iterations": sol.iterations,
            "row_residual": sol.row_residual,
            "col_residual": sol.col_residual,
            "smoothness": {
                "tau": report.tau,
                "zeta_ratio": report.zeta_ratio,
                "dim_ratio": report.dim_ratio,
                "density": report.density,
                "row_ratio": report.row_ratio,
                "col_ratio": report.col_ratio,
                "golden_ratio_guarantee": report.golden_ratio_guarantee,
            },
        }
    )
    return out


def _cmd_exact(margins: Margins, cfg: RunConfig) -> dict:
    res = exact_count(margins, state_budget=cfg.state_budget)
    out = _margins_header(margins)
    out.update(
        {
            "value": str(res.value),
            "states_explored": res.states_explored,
            "method": res.method,
        }
    )
    return out


def _cmd_integral(margins: Margins, cfg: RunConfig) -> dict:
    sol = solve_typical(margins, tol=cfg.tol, max_iter=cfg.max_iter)
    res = integral_count(sol, margins, grid=cfg.grid)
    out = _margins_header(margins)
    out.update(
        {
            "real_part": res.real_part,
            "imag_part": res.imag_part,
            "grid_points_per_axis": res.grid_points_per_axis,
            "estimate": res.estimate,
        }
    )
    return out


def _cmd_sample(margins: Margins, cfg: RunConfig) -> dict:
    sol = solve_typical(margins, tol=cfg.tol, max_iter=cfg.max_iter)
    res = geometric_mc_count(sol, margins, samples=cfg.samples, seed=cfg.seed)
    out = _margins_header(margins)
    out.update(
        {
            "estimate": res.estimate,
            "hits": res.hits,
            "samples": res.samples,
            "std_error": res.std_error,
        }
    )
    return out


def _relative_error(value: float, reference: float) -> float:
    return abs(value / reference - 1.0)


def _cmd_check(margins: Margins, cfg: RunConfig) -> dict:
    est = estimate_count(margins, tol=cfg.tol, max_iter=cfg.max_iter)
    sol = solve_typical(margins, tol=cfg.tol, max_iter=cfg.max_iter)
    out = _margins_header(margins)
    out["estimate"] = est.as_dict()

    exact_value = None
    try:
        res = exact_count(margins, state_budget=cfg.state_budget)
        exact_value = res.value
        out["exact"] = {
            "value": str(res.value),
            "states_explored": res.states_explored,
            "method": res.method,
        }
    except BudgetExceeded as exc:
        out["exact"] = {"skipped": f"state budget: {exc.states_estimate}"}

    integral_estimate = None
    if margins.m + margins.n - 1 <= 5:
        quad = integral_count(sol, margins, grid=cfg.grid)
        integral_estimate = quad.estimate
        out["integral"] = {
            "real_part": quad.real_part,
            "imag_part": quad.imag_part,
            "grid_points_per_axis": quad.grid_points_per_axis,
            "estimate": quad.estimate,
        }
    else:
        out["integral"] = {"skipped": "m + n - 1 > 5"}

    mc = geometric_mc_count(sol, margins, samples=cfg.samples, seed=cfg.seed)
    out["sample"] = {
        "estimate": mc.estimate,
        "hits": mc.hits,
        "samples": mc.samples,
        "std_error": mc.std_error,
    }

    errors: dict = {}
    if exact_value is not None and exact_value > 0:
        log_exact = math.log(exact_value)
        errors["estimate_vs_exact"] = _relative_error(
            math.exp(est.log_count - log_exact), 1.0
        )
        errors["gaussian_vs_exact"] = _relative_error(
            math.exp(est.gaussian_log - log_exact), 1.0
        )
        if integral_estimate is not None and integral_estimate > 0:
            errors["integral_vs_exact"] = _relative_error(
                integral_estimate, float(exact_value)
            )
        if mc.estimate > 0:
            errors["sample_vs_exact"] = _relative_error(
                mc.estimate, float(exact_value)
            )
    out["relative_errors"] = errors
    return out


def _cmd_scale(margins: Margins, cfg: RunConfig, alpha: float) -> dict:
    scaled = scale_and_round(margins, alpha)
    return {
        "schema": SCHEMA_VERSION,
        "rows": list(scaled.row_sums),
        "cols": list(scaled.col_sums),
    }


def _render_text(obj: dict) -> str:
    lines = []
    for key in sorted(obj):
        value = obj[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tablecount",
        description=(
            "Count non-negative integer matrices with prescribed row and "
            "column sums: asymptotic estimates and exact oracles."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "margins", help='margins file (JSON or two-line CSV), or "-" for stdin'
    )
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--threads", type=int, default=0, help="0 = auto")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--max-iter", type=int, default=10000)
    common.add_argument("--grid", type=int, default=None, help="default 2N + 2")
    common.add_argument("--samples", type=int, default=1_000_000)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--state-budget", type=int, default=200_000_000)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "estimate", parents=[common], help="Gaussian estimate with correction"
    )
    sub.add_parser("exact", parents=[common], help="exact count by dynamic program")
    sub.add_parser("typical", parents=[common], help="maximum-entropy typical matrix")
    sub.add_parser("integral", parents=[common], help="trapezoid quadrature oracle")
    sub.add_parser("sample", parents=[common], help="geometric Monte Carlo oracle")
    sub.add_parser("check", parents=[common], help="estimate plus every usable oracle")
    scale = sub.add_parser("scale", parents=[common], help="scale margins by alpha")
    scale.add_argument("--alpha", type=float, required=True)
    return parser


def _check_config(cfg: RunConfig) -> None:
    if cfg.tol <= 0:
        raise NonPositive(f"tol must be positive, got {cfg.tol}")
    if cfg.max_iter < 1:
        raise NonPositive(f"max_iter must be positive, got {cfg.max_iter}")
    if cfg.grid is not None and cfg.grid < 1:
        raise NonPositive(f"grid must be positive, got {cfg.grid}")
    if cfg.samples < 1:
        raise NonPositive(f"samples must be positive, got {cfg.samples}")
    if cfg.seed < 0:
        raise NonPositive(f"seed must be non-negative, got {cfg.seed}")
    if cfg.state_budget < 1:
        raise NonPositive(f"state_budget must be positive, got {cfg.state_budget}")
    if cfg.threads < 0:
        raise NonPositive(f"threads must be non-negative, got {cfg.threads}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        tol=args.tol,
        max_iter=args.max_iter,
        grid=args.grid,
        samples=args.samples,
        seed=args.seed,
        state_budget=args.state_budget,
        threads=args.threads,
    )

    def fail(kind: str, exc: Exception, code: int) -> int:
        payload = {
            "schema": SCHEMA_VERSION,
            "error": kind,
            "detail": f"{type(exc).__name__}: {exc}",
        }
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return code

    try:
        _check_config(cfg)
        margins = _read_margins(args.margins)
    except OSError as exc:
        return fail("io", exc, 1)
    except _VALIDATION_ERRORS as exc:
        return fail("validation", exc, 1)
    _apply_threads(cfg.threads)

    try:
        if args.command == "estimate":
            out = _cmd_estimate(margins, cfg)
        elif args.command == "exact":
            out = _cmd_exact(margins, cfg)
        elif args.command == "typical":
            out = _cmd_typical(margins, cfg)
        elif args.command == "integral":
            out = _cmd_integral(margins, cfg)
        elif args.command == "sample":
            out = _cmd_sample(margins, cfg)
        elif args.command == "check":
            out = _cmd_check(margins, cfg)
        else:
            out = _cmd_scale(margins, cfg, args.alpha)
    except _VALIDATION_ERRORS as exc:
        return fail("validation", exc, 1)
    except _COMPUTE_ERRORS as exc:
        return fail("compute", exc, 2)

    if args.format == "json":
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        print(_render_text(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
