import json
import subprocess
import sys

import pytest

from tcsm.cli import main


def run_cli(*argv):
    """Invoke the CLI in-process, capturing stdout and the exit code."""
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def test_params_basic():
    code, out = run_cli("params", "--n", "8", "--r", "3", "--beta", "1")
    data = json.loads(out)
    assert code == 0
    assert data["E0_reduced"] == 56.0
    assert data["k"] == 2
    assert data["regime"] == "truncated"
    assert data["triple_count_formula"] == data["triple_count_enumerated"] == 24


def test_params_full_regime():
    code, out = run_cli("params", "--n", "7", "--r", "3")
    data = json.loads(out)
    assert code == 0
    assert data["regime"] == "full"
    assert data["k"] is None
    assert data["triple_count_formula"] == 0
    assert data["triple_count_enumerated"] == 0


def test_params_conflict_row_flagged():
    code, out = run_cli("params", "--n", "9", "--r", "3", "--beta", "1")
    data = json.loads(out)
    assert code == 1
    assert data["E0_reduced"] == 57.0
    assert data["table1_conflict"] is True
    assert any(v["verdict"] == "conflict" for v in data["verdicts"])


def test_params_usage_error():
    code, _ = run_cli("params", "--n", "2", "--r", "1")
    assert code == 2


def test_table1_rows_and_exit_code():
    code, out = run_cli("table1", "--samples", "300")
    data = json.loads(out)
    # the (9,3) row is a known conflict, so the command reports failure
    assert code == 1
    by_key = {(row["N"], row["r"]): row for row in data["rows"]}
    for key, value in [((6, 2), 20), ((7, 2), 21), ((8, 2), 24), ((8, 3), 56), ((9, 2), 27)]:
        assert by_key[key]["verdict"] == "match"
        assert by_key[key]["formula"] == value
    conflict = by_key[(9, 3)]
    assert conflict["verdict"] == "conflict"
    assert conflict["oracle_confirms_formula"] is True
    assert abs(conflict["oracle_energy_reduced"] - 57.0) < 1e-6


def test_verify_ground_pass():
    code, out = run_cli("verify-ground", "--n", "6", "--r", "2", "--samples", "300")
    data = json.loads(out)
    assert code == 0
    assert data["verdict"] == "Pass"
    assert abs(data["energy_mean"] - 5.0) < 1e-8  # 20 * pi^2/L^2 at L = 2*pi


def test_verify_excited_states():
    for state, reduced in [("e1", 5.0), ("en", 6.0), ("nondeg", 10.0)]:
        code, out = run_cli(
            "verify-excited", "--n", "6", "--r", "2", "--state", state, "--samples", "300"
        )
        data = json.loads(out)
        assert code == 0, data
        assert data["reduced_mean"] == pytest.approx(reduced, rel=1e-8)


def test_verify_excited_boosted():
    code, out = run_cli(
        "verify-excited", "--n", "6", "--r", "2", "--state", "e1", "--q", "1",
        "--samples", "300",
    )
    data = json.loads(out)
    assert code == 0
    assert data["reduced_mean"] == pytest.approx(13.0, rel=1e-8)


def test_spectrum_command():
    code, out = run_cli("spectrum", "--n", "6", "--r", "2", "--degree", "1")
    data = json.loads(out)
    assert code == 0
    assert data["eigenvalues"][0]["value"] == pytest.approx(5.0)
    assert data["matched_levels"]["e1"] == pytest.approx(5.0)


def test_count_triples():
    code, out = run_cli("count-triples", "--n", "12", "--r", "2", "--enumerate")
    data = json.loads(out)
    assert code == 0
    assert data["formula"] == data["enumerated"] == 36


def test_deterministic_output():
    _, out1 = run_cli("verify-ground", "--n", "6", "--r", "2", "--samples", "200", "--seed", "7")
    _, out2 = run_cli("verify-ground", "--n", "6", "--r", "2", "--samples", "200", "--seed", "7")
    assert out1 == out2


def test_csv_projection():
    code, out = run_cli("table1", "--samples", "200", "--output", "csv")
    lines = out.strip().splitlines()
    assert lines[0].startswith("N,")
    assert len(lines) == 7  # header + six rows


def test_out_path(tmp_path):
    target = tmp_path / "report.json"
    code, out = run_cli(
        "params", "--n", "6", "--r", "2", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["E0_reduced"] == 20.0


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "tcsm.cli", "params", "--n", "6", "--r", "2"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["E0_reduced"] == 20.0
