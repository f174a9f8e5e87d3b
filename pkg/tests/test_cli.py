"""Tests for the gaussqkd command-line interface."""
import json

import pytest
from click.testing import CliRunner

from cli.main import cli


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("GAUSSQKD_SEED", raising=False)
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args), catch_exceptions=False)


def test_state_report_json(runner):
    result = invoke(runner, "state", "--lambda", "2", "--cx", "1.5", "--cp", "0.5", "--format", "json")
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["nppt"] is True
    assert report["physical"] is True
    assert report["log_negativity"] == pytest.approx(0.2075187496, abs=1e-9)
    assert report["log_negativity_spectrum"] == pytest.approx(report["log_negativity"], abs=1e-9)


def test_state_vacuum_has_no_entanglement(runner):
    result = invoke(runner, "state", "--lambda", "1", "--cx", "0", "--cp", "0", "--format", "json")
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["nppt"] is False
    assert report["log_negativity"] == 0.0
    assert report["purity"] == pytest.approx(1.0)


def test_state_unphysical_exits_2(runner):
    result = invoke(runner, "state", "--lambda", "1", "--cx", ".5", "--cp", ".5")
    assert result.exit_code == 2
    assert "unphysical" in result.output


def test_state_text_table(runner):
    result = invoke(runner, "state", "--lambda", "2", "--cx", "1.5", "--cp", "0.5")
    assert result.exit_code == 0
    assert "log_negativity" in result.stdout


def test_security_window_json(runner):
    result = invoke(runner, "security", "--lambda", "2", "--cx", "1.5", "--cp", "0.5",
                    "--x0a", "1.0", "--x0b", "1.2", "--format", "json")
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["alpha"] == pytest.approx(31.0 / 7.0)
    assert report["x0b_min"] < 1.0 < report["x0b_max"]
    assert report["secure"] == report["inside_window"]


def test_security_coherent_unsecurable_exits_3(runner):
    result = invoke(runner, "security", "--lambda", "2", "--cx", "1.5", "--cp", "0.5", "--attack", "coherent")
    assert result.exit_code == 3
    assert "insecure" in result.output


def test_security_ppt_exits_3(runner):
    result = invoke(runner, "security", "--lambda", "2", "--cx", "0.5", "--cp", "0.5")
    assert result.exit_code == 3


def test_security_pure_state_unbounded(runner):
    result = invoke(runner, "security", "--lambda", "1.5430806348152437",
                    "--cx", "1.1752011936438014", "--cp", "1.1752011936438014")
    assert result.exit_code == 0
    assert "interval: unbounded (alpha = 1)" in result.stdout


@pytest.mark.parametrize("command", ["rsa", "bb84", "vernam", "cad", "ekert"])
def test_check_golden(runner, command):
    result = invoke(runner, command, "--check-golden")
    assert result.exit_code == 0
    assert "FAIL" not in result.stdout
    assert "PASS" in result.stdout


def test_rsa_report(runner):
    result = invoke(runner, "rsa", "--format", "json")
    report = json.loads(result.stdout)
    assert (report["n"], report["k"], report["cipher"], report["decrypted"]) == (3233, 2753, 855, 123)


def test_rsa_invalid_exponent_exits_1(runner):
    result = invoke(runner, "rsa", "--l", "3")
    assert result.exit_code == 1


def test_vernam_with_key(runner):
    result = invoke(runner, "vernam", "-m", "010011101", "-k", "110100011", "--format", "json")
    assert json.loads(result.stdout)["cipher"] == "100111110"


def test_vernam_requires_message(runner):
    result = runner.invoke(cli, ["vernam"])
    assert result.exit_code == 2


def test_cad_report(runner):
    result = invoke(runner, "cad", "--epsilon", "0.2", "--M", "2", "--trials", "20000", "--format", "json")
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["epsilon_out_formula"] == pytest.approx(0.04 / 0.68)
    assert report["n_trials"] == 20000


def test_bb84_csv(runner):
    result = invoke(runner, "bb84", "--bits", "2000", "--format", "csv")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "key,value"
    assert "error_rate,0" in lines


def test_sweep_writes_csv(runner, tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("lambda,c_x,c_p\n2,1.5,0.5\n2,0.5,0.5\n", encoding="utf-8")
    out = tmp_path / "out"
    result = invoke(runner, "sweep", "--grid", str(grid), "--out", str(out), "--threads", "1", "--format", "json")
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert (report["records"], report["skipped"]) == (1, 1)
    assert (out / "sweep.csv").read_text(encoding="utf-8").startswith("lambda,c_x,c_p,")
    assert "SeparableState" in (out / "skipped.csv").read_text(encoding="utf-8")
    assert (out / "gaussqkd_run.yaml").is_file()


def test_sweep_empty_grid_exits_4(runner, tmp_path):
    """A grid of only PPT and unphysical points leaves nothing to report."""
    grid = tmp_path / "grid.csv"
    grid.write_text("2,0.5,0.5\n1,0.5,0.5\n", encoding="utf-8")
    result = invoke(runner, "sweep", "--grid", str(grid), "--out", str(tmp_path), "--threads", "1")
    assert result.exit_code == 4


def test_invalid_config_exits_1(runner, tmp_path):
    config = tmp_path / "bad.yaml"
    config.write_text("seed: -1\n", encoding="utf-8")
    result = invoke(runner, "--config", str(config), "rsa")
    assert result.exit_code == 1
    assert "seed" in result.output


@pytest.mark.parametrize("command", ["rsa", "bb84", "vernam", "cad", "ekert"])
def test_check_paper_alias(runner, command):
    """--check-paper runs the same reference checks as --check-golden."""
    result = invoke(runner, command, "--check-paper")
    assert result.exit_code == 0
    assert "PASS" in result.stdout


def test_sweep_verify_reports_monte_carlo_columns(runner, tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("2,1.5,0.5\n", encoding="utf-8")
    config = tmp_path / "run.yaml"
    config.write_text("quadrature:\n  n_points: 96\n  mc_samples: 20000\n  verify_sigma: 50\n", encoding="utf-8")
    out = tmp_path / "out"
    result = invoke(runner, "--config", str(config), "sweep", "--grid", str(grid), "--out", str(out),
                    "--threads", "1", "--verify", "--format", "json")
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["inconsistent"] == 0
    assert report["rows"][0]["mc_consistent"] is True
    header = (out / "sweep.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header.endswith(",mc_mean,mc_standard_error,mc_consistent")


def test_cad_rejects_too_few_trials(runner):
    result = invoke(runner, "cad", "--epsilon", "0.2", "--M", "2", "--trials", "9999")
    assert result.exit_code == 1
    assert "cad_trials" in result.output
