"""Acceptance gate: one test per advertised guarantee.

Each test name carries its criterion number; the terminal summary hook in
conftest prints a PASS/FAIL line per criterion after the run.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tablecount import solve_typical, validate_margins
from tablecount.edgeworth import estimate_count, mc_expectations, mu_term, nu_term
from tablecount.gaussian import (
    Hyperplane,
    build_quadratic,
    covariance_diagnostics,
    pair_sum_covariance,
)
from tablecount.margins import scale_and_round, smoothness_report
from tablecount.oracle import brute_enumerate, exact_count, integral_count
from tests.conftest import (
    adaptive_grid,
    covariance_deviation_ratio,
    make_corpus,
    smooth_random_margins,
)

SKEWED_ROWS = [220, 215, 93, 64]
SKEWED_COLS = [108, 286, 71, 127]
SKEWED_EXACT = 1225914276768514

REGULAR_EXACT_300 = 20269699596926337751
REGULAR_EXACT_50 = 2697649164626


def relative_error(log_estimate: float, exact: int) -> float:
    return abs(math.expm1(log_estimate - math.log(exact)))


def test_criterion_1_oracle_consistency(corpus200):
    start = time.monotonic()
    for mg in corpus200:
        assert brute_enumerate(mg).value == exact_count(mg).value
    assert time.monotonic() - start < 60.0


def test_criterion_2_integral_identity(corpus200):
    start = time.monotonic()
    cases = [mg for mg in corpus200 if mg.m + mg.n - 1 <= 4 and mg.total <= 10]
    assert len(cases) >= 30
    for mg in cases:
        exact = exact_count(mg).value
        sol = solve_typical(mg)
        grid = adaptive_grid(float(sol.zeta.max()), mg.total)
        quad = integral_count(sol, mg, grid=grid)
        assert abs(quad.estimate - exact) / exact <= 1e-8
        assert abs(quad.imag_part) <= 1e-10 * abs(quad.real_part)
    assert time.monotonic() - start < 120.0


def test_criterion_3_tiny_end_to_end():
    mg = validate_margins([1, 1], [1, 1])
    assert exact_count(mg).value == 2
    est = estimate_count(mg)
    assert abs(math.exp(est.gaussian_log) / 2.2269 - 1.0) <= 1e-3
    assert abs(math.exp(est.log_count) / 1.7956 - 1.0) <= 1e-3
    assert est.gaussian_decimal == "2.22698e0"
    assert est.decimal == "1.79565e0"


def test_criterion_4_skewed_benchmark():
    start = time.monotonic()
    mg = validate_margins(SKEWED_ROWS, SKEWED_COLS)
    exact = exact_count(mg).value
    assert exact == SKEWED_EXACT
    est = estimate_count(mg)
    gauss_err = relative_error(est.gaussian_log, exact)
    edge_err = relative_error(est.log_count, exact)
    assert 0.03 <= gauss_err <= 0.09
    assert edge_err <= gauss_err
    assert time.monotonic() - start < 600.0


def test_criterion_5_regular_margins():
    # fast surrogate for the 300-per-margin benchmark; the full instance
    # runs in the slow suite
    start = time.monotonic()
    mg = validate_margins([50] * 4, [50] * 4)
    exact = exact_count(mg).value
    assert exact == REGULAR_EXACT_50
    est = estimate_count(mg)
    gauss_err = relative_error(est.gaussian_log, exact)
    edge_err = relative_error(est.log_count, exact)
    assert edge_err <= gauss_err
    assert time.monotonic() - start < 60.0


@pytest.mark.slow
def test_criterion_5_regular_margins_slow_suite():
    mg = validate_margins([300] * 4, [300] * 4)
    exact = exact_count(mg, state_budget=4 * 10**8).value
    assert exact == REGULAR_EXACT_300
    est = estimate_count(mg)
    gauss_err = relative_error(est.gaussian_log, exact)
    assert 0.08 <= gauss_err <= 0.16
    assert relative_error(est.log_count, exact) <= gauss_err


def test_criterion_6_moment_closed_forms_vs_monte_carlo():
    instances = [
        ([3, 2], [2, 3]),
        ([4, 4], [5, 3]),
        ([5, 3, 4], [4, 4, 4]),
        ([6, 2], [3, 3, 2]),
        ([5, 5, 5], [3, 7, 5]),
        ([7, 3, 5, 2], [4, 5, 4, 4]),
        ([6, 6, 6, 6], [8, 6, 4, 6]),
        ([9, 5, 6, 4, 7], [7, 6, 5, 8, 5]),
        ([8, 7, 6, 5, 4, 3], [6, 6, 6, 5, 5, 5]),
        ([10, 8, 9, 7, 8, 9], [9, 8, 9, 8, 9, 8]),
    ]
    for rows, cols in instances:
        mg = validate_margins(rows, cols)
        sol = solve_typical(mg)
        model = build_quadratic(sol, mg)
        mc = mc_expectations(model, sol, samples=100_000, seed=42)
        assert abs(mc.mu_hat - mu_term(sol, model)) <= 3.0 * mc.std_errors["mu"]
        assert abs(mc.nu_hat - nu_term(sol, model)) <= 3.0 * mc.std_errors["nu"]


def test_criterion_7_covariance_structure():
    # hyperplane independence of pair-sum covariances
    for rows, cols in [([9, 5, 6], [7, 6, 4, 3]), ([12, 9, 7, 5, 4, 3], [8, 8, 7, 7, 5, 5])]:
        mg = validate_margins(rows, cols)
        sol = solve_typical(mg)
        pin_col = build_quadratic(sol, mg, Hyperplane.drop_t(mg.n - 1))
        pin_row = build_quadratic(sol, mg, Hyperplane.drop_s(0))
        for j1 in range(mg.m):
            for k1 in range(mg.n):
                for j2 in range(mg.m):
                    for k2 in range(mg.n):
                        a = pair_sum_covariance(pin_col, j1, k1, j2, k2)
                        b = pair_sum_covariance(pin_row, j1, k1, j2, k2)
                        assert abs(a - b) <= 1e-8

    # product of nonzero eigenvalues of the full form vs restricted determinant
    for rows, cols in [([9, 5, 6], [7, 6, 4, 3]), ([12, 9, 7, 5, 4, 3], [8, 8, 7, 7, 5, 5])]:
        mg = validate_margins(rows, cols)
        sol = solve_typical(mg)
        model = build_quadratic(sol, mg)
        W = sol.zeta**2 + sol.zeta
        full = np.zeros((mg.m + mg.n, mg.m + mg.n))
        full[: mg.m, : mg.m] = np.diag(W.sum(axis=1))
        full[mg.m :, mg.m :] = np.diag(W.sum(axis=0))
        full[: mg.m, mg.m :] = W
        full[mg.m :, : mg.m] = W.T
        eigs = np.sort(np.linalg.eigvalsh(0.5 * full))
        log_product = float(np.sum(np.log(eigs[1:])))
        target = math.log(mg.m + mg.n) + model.logdet_qL
        assert abs(log_product - target) <= 1e-8 * abs(target)

    # spectrum of the unit-coefficient form on a uniform instance
    mg = validate_margins([7] * 4, [4] * 7)
    sol = solve_typical(mg)
    z = float(sol.zeta[0, 0])
    W = sol.zeta**2 + sol.zeta
    full = np.zeros((11, 11))
    full[:4, :4] = np.diag(W.sum(axis=1))
    full[4:, 4:] = np.diag(W.sum(axis=0))
    full[:4, 4:] = W
    full[4:, :4] = W.T
    spectrum = np.sort(np.linalg.eigvalsh(0.5 * full / (z * z + z)))
    expected = np.sort([0.0] + [2.0] * 6 + [3.5] * 3 + [5.5])
    assert np.max(np.abs(spectrum - expected)) <= 1e-10

    # uniform covariance error bound on random smooth instances
    rng = np.random.default_rng(11)
    for _ in range(20):
        mg = smooth_random_margins(rng)
        sol = solve_typical(mg)
        model = build_quadratic(sol, mg)
        diag = covariance_diagnostics(sol, mg)
        assert covariance_deviation_ratio(model, diag) <= 1.0


def test_criterion_8_scaling_consistency():
    rows = [91000 + 2000 * j for j in range(10)]
    cols = [95500 + 1000 * k for k in range(10)]
    mg = validate_margins(rows, cols)
    sol = solve_typical(mg)
    report = smoothness_report(mg, sol.zeta)
    assert report.tau >= (mg.m * mg.n) ** 2
    base = estimate_count(mg).log_count
    for alpha in (0.5, 0.25):
        scaled = scale_and_round(mg, alpha)
        shift = estimate_count(scaled).log_count - base
        predicted = (mg.m - 1) * (mg.n - 1) * math.log(alpha)
        assert abs(shift / predicted - 1.0) <= 0.02


def test_criterion_9_byte_identical_output(tmp_path):
    path = tmp_path / "margins.json"
    path.write_text(json.dumps({"rows": [5, 3, 4], "cols": [4, 4, 4]}))
    for command in ("estimate", "sample"):
        argv = [
            sys.executable,
            "-m",
            "tablecount.cli",
            command,
            str(path),
            "--samples",
            "50000",
            "--seed",
            "7",
        ]
        first = subprocess.run(argv, capture_output=True, check=True)
        second = subprocess.run(argv, capture_output=True, check=True)
        assert first.stdout == second.stdout
        assert first.stdout.strip() != b""
