import io
import json
import math

import pytest

from tablecount.cli import main


def write_margins(tmp_path, rows, cols, name="margins.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"rows": rows, "cols": cols}))
    return str(path)


def run_cli(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_estimate_reports_pipeline_fields(tmp_path, capsys):
    path = write_margins(tmp_path, [220, 215, 93, 64], [108, 286, 71, 127])
    rc, out, err = run_cli(capsys, ["estimate", path])
    assert rc == 0 and err == ""
    payload = json.loads(out)
    for key in ("gaussian_log", "mu", "nu", "log_count", "estimate", "schema"):
        assert key in payload
    assert payload["schema"] == 1
    assert payload["rows"] == [220, 215, 93, 64]
    assert payload["log_count"] == pytest.approx(
        payload["gaussian_log"] + payload["edgeworth_log_factor"]
    )


def test_check_tiny_against_all_oracles(tmp_path, capsys):
    path = write_margins(tmp_path, [1, 1], [1, 1])
    rc, out, _ = run_cli(capsys, ["check", path, "--grid", "64", "--samples", "200000"])
    assert rc == 0
    payload = json.loads(out)
    assert payload["exact"]["value"] == "2"
    assert math.exp(payload["estimate"]["log_count"]) == pytest.approx(1.7956, abs=1e-3)
    assert payload["integral"]["estimate"] == pytest.approx(2.0, abs=1e-6)
    assert payload["sample"]["hits"] > 0
    errors = payload["relative_errors"]
    assert set(errors) == {
        "estimate_vs_exact",
        "gaussian_vs_exact",
        "integral_vs_exact",
        "sample_vs_exact",
    }
    assert errors["integral_vs_exact"] < 1e-6


def no_bad_numbers(node):
    if isinstance(node, dict):
        return all(no_bad_numbers(v) for v in node.values())
    if isinstance(node, list):
        return all(no_bad_numbers(v) for v in node)
    if isinstance(node, float):
        return math.isfinite(node)
    return True


def test_check_reports_only_finite_fields(tmp_path, capsys):
    path = write_margins(tmp_path, [6, 2], [3, 3, 2])
    rc, out, _ = run_cli(capsys, ["check", path, "--samples", "50000"])
    assert rc == 0
    payload = json.loads(out)
    assert no_bad_numbers(payload)
    assert payload["estimate"]["log_count"] > 0
    for section in ("integral", "sample"):
        assert payload[section]["estimate"] >= 0


def test_check_skips_oracles_it_cannot_run(tmp_path, capsys):
    path = write_margins(tmp_path, [9, 5, 6, 4, 7], [7, 6, 5, 8, 5])
    rc, out, _ = run_cli(capsys, ["check", path, "--samples", "1000"])
    assert rc == 0
    payload = json.loads(out)
    assert "skipped" in payload["integral"]
    assert payload["exact"]["value"] == str(int(payload["exact"]["value"]))


def test_missing_file_is_io_error(tmp_path, capsys):
    rc, out, err = run_cli(capsys, ["estimate", str(tmp_path / "missing.json")])
    assert rc == 1 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "io"
    assert payload["schema"] == 1


def test_bad_margins_is_validation_error(tmp_path, capsys):
    path = write_margins(tmp_path, [3, 3], [2, 2])
    rc, _, err = run_cli(capsys, ["estimate", path])
    assert rc == 1
    assert json.loads(err)["error"] == "validation"


def test_bad_config_is_validation_error(tmp_path, capsys):
    path = write_margins(tmp_path, [1, 1], [1, 1])
    for flags in (["--tol", "0"], ["--seed", "-1"], ["--max-iter", "0"]):
        rc, _, err = run_cli(capsys, ["estimate", path] + flags)
        assert rc == 1
        assert json.loads(err)["error"] == "validation"


def test_compute_failures_exit_two(tmp_path, capsys):
    big = write_margins(tmp_path, [220, 215, 93, 64], [108, 286, 71, 127])
    rc, _, err = run_cli(capsys, ["exact", big, "--state-budget", "10"])
    assert rc == 2
    assert json.loads(err)["error"] == "compute"

    rc, _, err = run_cli(capsys, ["typical", big, "--max-iter", "1"])
    assert rc == 2
    assert json.loads(err)["error"] == "compute"

    wide = write_margins(tmp_path, [4, 4, 4, 4], [4, 4, 4, 4], name="wide.json")
    rc, _, err = run_cli(capsys, ["integral", wide])
    assert rc == 2
    assert json.loads(err)["error"] == "compute"


def test_scale_rounds_to_feasible_margins(tmp_path, capsys):
    path = write_margins(tmp_path, [3, 5], [4, 4])
    rc, out, _ = run_cli(capsys, ["scale", path, "--alpha", "0.5"])
    assert rc == 0
    payload = json.loads(out)
    assert payload["rows"] == [2, 2]
    assert payload["cols"] == [2, 2]


def test_typical_reports_residuals_and_smoothness(tmp_path, capsys):
    path = write_margins(tmp_path, [6, 6, 6], [3, 6, 9])
    rc, out, _ = run_cli(capsys, ["typical", path])
    assert rc == 0
    payload = json.loads(out)
    assert payload["row_residual"] <= 1e-10
    assert payload["col_residual"] <= 1e-10
    assert payload["smoothness"]["tau"] == pytest.approx(3.0)
    assert payload["smoothness"]["golden_ratio_guarantee"] is False
    first_row = payload["zeta"][0]
    assert first_row == pytest.approx([1.0, 2.0, 3.0], abs=1e-8)


def test_csv_margins_accepted(tmp_path, capsys):
    path = tmp_path / "margins.csv"
    path.write_text("2,2\n2,2\n")
    rc, out, _ = run_cli(capsys, ["exact", str(path)])
    assert rc == 0
    assert json.loads(out)["value"] == "3"


def test_stdin_margins(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"rows": [2, 2], "cols": [2, 2]}'))
    rc, out, _ = run_cli(capsys, ["exact", "-"])
    assert rc == 0
    assert json.loads(out)["value"] == "3"


def test_text_format_renders_sorted_lines(tmp_path, capsys):
    path = write_margins(tmp_path, [1, 1], [1, 1])
    rc, out, _ = run_cli(capsys, ["exact", path, "--format", "text"])
    assert rc == 0
    lines = out.strip().split("\n")
    keys = [line.split(":", 1)[0] for line in lines]
    assert keys == sorted(keys)
    assert "value: 2" in lines


def test_output_is_deterministic(tmp_path, capsys):
    path = write_margins(tmp_path, [5, 3, 4], [4, 4, 4])
    outputs = []
    for _ in range(2):
        rc, out, _ = run_cli(capsys, ["check", path, "--samples", "30000"])
        assert rc == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_sample_seed_changes_draws(tmp_path, capsys):
    path = write_margins(tmp_path, [1, 1], [1, 1])
    hits = []
    for seed in ("1", "2"):
        rc, out, _ = run_cli(
            capsys, ["sample", path, "--samples", "200000", "--seed", seed]
        )
        assert rc == 0
        hits.append(json.loads(out)["hits"])
    assert hits[0] != hits[1]
