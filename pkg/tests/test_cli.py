"""
Tests for the CLI interface of scatter2d.
"""

import csv
import json
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import pytest
from click.testing import CliRunner

from scatter2d import cli as cli_module
from scatter2d.cli import cli
from scatter2d.errors import NumericalError


@pytest.fixture
def runner():
    """Create a Click CLI runner for testing."""
    return CliRunner()


def _config(tmp_path, payload, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _rows(path):
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def test_cli_help(runner):
    """The group and every command describe themselves."""
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "scatter2d: quantum, classical and semiclassical scattering" in result.output
    for command in ("phase-shifts", "cross-section", "deflection"):
        assert command in result.output
        sub = runner.invoke(cli, [command, "--help"])
        assert sub.exit_code == 0
        assert "--config" in sub.output


def test_config_is_required(runner):
    """Running a command without --config is a usage error."""
    result = runner.invoke(cli, ["deflection"])
    assert result.exit_code == 2


def test_phase_shifts_free_particle(runner, tmp_path):
    """U = 0 gives zero phase shifts in every column."""
    config = _config(tmp_path, {"potential": {"kind": "gaussian", "U0": 0.0, "a": 1.0}, "k": 1.0})
    out = tmp_path / "out"
    result = runner.invoke(cli, ["phase-shifts", "--config", config, "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = _rows(out / "phase_shifts.csv")
    assert [int(row["m"]) for row in rows] == list(range(len(rows)))
    for row in rows:
        for column in ("delta_quantum", "delta_wkb", "delta_eikonal"):
            assert abs(float(row[column])) < 1e-8
    summary = json.loads((out / "phase_shifts.json").read_text())
    assert summary["m_max"] == len(rows) - 1
    assert abs(summary["sigma_total"]) < 1e-12
    assert summary["diagnostics"] == []


def test_malformed_config_writes_nothing(runner, tmp_path):
    """Broken JSON exits with code 2 and leaves no output behind."""
    path = tmp_path / "bad.json"
    path.write_text("{ nope")
    out = tmp_path / "out"
    result = runner.invoke(cli, ["phase-shifts", "--config", str(path), "--out", str(out)])
    assert result.exit_code == 2
    assert "Configuration error" in result.output
    assert not out.exists()


def test_unknown_key_is_rejected(runner, tmp_path):
    """A misspelt key is a configuration error."""
    config = _config(
        tmp_path,
        {"potential": {"kind": "gaussian", "U0": 0.5, "a": 1.0}, "k": 1.0, "thetagrid": {}},
    )
    result = runner.invoke(cli, ["deflection", "--config", config, "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_cross_section_dark_side(runner, tmp_path):
    """Beyond the largest deflection the classical column is zero."""
    config = _config(
        tmp_path,
        {
            "potential": {"kind": "gaussian", "U0": 0.5, "a": 1.0},
            "k": 3.0,
            "b_grid": {"start": 0.0, "stop": 4.0, "num": 60},
            "theta_grid": {"start": 2.5, "stop": 3.0, "num": 3},
        },
    )
    out = tmp_path / "out"
    result = runner.invoke(
        cli, ["cross-section", "--config", config, "--out", str(out), "--threads", "2"]
    )
    assert result.exit_code == 0, result.output
    rows = _rows(out / "cross_section.csv")
    assert len(rows) == 3
    for row in rows:
        assert float(row["dcs_classical"]) == 0.0
        assert float(row["dcs_spa"]) == 0.0
        assert float(row["dcs_quantum"]) >= 0.0
        assert row["dcs_airy"] == ""
    summary = json.loads((out / "cross_section.json").read_text())
    assert summary["rainbow"]["theta_r"] < 2.5
    assert summary["sigma_quantum"] > 0.0
    assert summary["sigma_classical"] == pytest.approx(2.0 * math.sqrt(math.log(0.5 / 1e-10)))


@pytest.mark.parametrize("energy,above", [(1.65, True), (1.35, False)])
def test_deflection_appendix_b_threshold(runner, tmp_path, energy, above):
    """The summary places E against 3A/(2R_c) and agrees with the rainbow search."""
    config = _config(
        tmp_path,
        {
            "potential": {"kind": "appendix_b", "A": 1.0, "R_c": 1.0},
            "k": math.sqrt(energy),
            "b_grid": {"start": 0.01, "stop": 3.0, "num": 40},
        },
    )
    result = runner.invoke(cli, ["deflection", "--config", config, "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    summary = json.loads((tmp_path / "deflection.json").read_text())
    assert summary["appendix_b_threshold"]["value"] == 1.5
    assert summary["appendix_b_threshold"]["energy_above"] is above
    assert summary["rainbow_exists"] is above
    assert summary["orbiting"]["exists"] is False
    assert len(_rows(tmp_path / "deflection.csv")) == 40


def test_deflection_of_tabulated_zero(runner, tmp_path):
    """A tabulated U = 0 gives a flat deflection curve and no rainbow."""
    (tmp_path / "zero.csv").write_text("r,U\n0.0,0.0\n1.0,0.0\n2.0,0.0\n")
    config = _config(
        tmp_path,
        {
            "potential": {"kind": "tabulated", "path": "zero.csv"},
            "k": 1.0,
            "b_grid": {"start": 0.1, "stop": 3.0, "num": 10},
        },
    )
    out = tmp_path / "out"
    result = runner.invoke(cli, ["deflection", "--config", config, "--out", str(out)])
    assert result.exit_code == 0, result.output
    for row in _rows(out / "deflection.csv"):
        assert abs(float(row["theta_defl"])) < 1e-9
    summary = json.loads((out / "deflection.json").read_text())
    assert summary["rainbow_exists"] is False
    assert "appendix_b_threshold" not in summary


def test_deflection_is_deterministic(runner, tmp_path):
    """Two runs of one config write identical files."""
    config = _config(
        tmp_path,
        {
            "potential": {"kind": "gaussian", "U0": -0.5, "a": 1.0},
            "k": 3.0,
            "b_grid": {"start": 0.0, "stop": 3.0, "num": 25},
        },
    )
    outputs = []
    for name, threads in (("first", "1"), ("second", "3")):
        out = tmp_path / name
        result = runner.invoke(
            cli, ["deflection", "--config", config, "--out", str(out), "--threads", threads]
        )
        assert result.exit_code == 0, result.output
        outputs.append(
            ((out / "deflection.csv").read_bytes(), (out / "deflection.json").read_bytes())
        )
    assert outputs[0] == outputs[1]


def test_console_script_entry_point():
    """pyproject points the scatter2d script at main."""
    pyproject = Path(__file__).resolve().parents[1] / "pyproject.toml"
    scripts = tomllib.loads(pyproject.read_text())["tool"]["poetry"]["scripts"]
    assert scripts["scatter2d"] == "scatter2d.cli:main"


def test_main_maps_library_errors(monkeypatch):
    """An uncaught scatter2d error leaves main with the numerical exit code."""

    def failing(**kwargs):
        raise NumericalError("boom")

    monkeypatch.setattr(cli_module, "cli", failing)
    with pytest.raises(SystemExit) as excinfo:
        cli_module.main()
    assert excinfo.value.code == cli_module.EXIT_NUMERICAL
