"""
Tests for the command-line entry point.
"""

import csv
import json
from pathlib import Path

import pytest

from main import main

GRAPHENE = {"mu_c_ev": 0.1, "tau_ps": 0.35, "vd_over_vf": -0.5}


def _error(capsys) -> dict:
    err = capsys.readouterr().err.strip().splitlines()
    return json.loads(err[-1])


def _rows(path: Path):
    with path.open(encoding="utf-8") as handle:
        return list(csv.reader(handle))


@pytest.fixture
def conductivity_config(write_config):
    return write_config(
        {
            "environment": {"eps_r1": 4.0, "eps_r2": 4.0, "graphene": GRAPHENE},
            "conductivity": {
                "frequency_thz": [15.0],
                "qx_per_m": {"start": -1e7, "stop": 1e7, "n": 5},
                "local_sweep_thz": {"start": 5.0, "stop": 25.0, "n": 3},
            },
        }
    )


@pytest.fixture
def vacuum_angle_config(write_config):
    return write_config(
        {
            "environment": {"eps_r1": 4.0, "eps_r2": 4.0},
            "entangle": {
                "frequency_thz": 15.0,
                "sweep": "angle",
                "grid": [0.0, 90.0, 180.0],
                "height_over_lambda": 0.3333333333,
            },
        },
        name="angle.json",
    )


def test_conductivity_writes_outputs(conductivity_config, tmp_path):
    """Test the conductivity command writes CSV, SVG and run metadata."""
    out = tmp_path / "out"
    assert main(["conductivity", "--config", str(conductivity_config), "--out", str(out), "--threads", "1"]) == 0
    rows = _rows(out / "conductivity.csv")
    assert rows[0] == ["f_THz", "qx_per_m", "Re_sigma_over_sigmin", "Im_sigma_over_sigmin"]
    assert len(rows) == 1 + 5 + 3
    assert (out / "conductivity.svg").exists()
    assert (out / "conductivity_local.svg").exists()
    meta = json.loads((out / "run_meta.json").read_text())
    assert meta["command"] == "conductivity"
    assert meta["config"]["environment"]["graphene"]["vd_over_vf"] == -0.5
    assert meta["config"]["tolerances"]["quad_epsrel"] == 1e-8
    assert "git_describe" in meta and "wall_time_s" in meta


def test_run_meta_reproduces_csv(conductivity_config, tmp_path):
    """Test re-running from run_meta.json gives identical CSV bytes."""
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["conductivity", "--config", str(conductivity_config), "--out", str(first)]) == 0
    assert main(["conductivity", "--config", str(first / "run_meta.json"), "--out", str(second)]) == 0
    assert (first / "conductivity.csv").read_bytes() == (second / "conductivity.csv").read_bytes()


def test_overrides_are_applied(conductivity_config, tmp_path):
    """Test --vd-over-vf and --frequency-thz reach the resolved config."""
    out = tmp_path / "out"
    args = ["conductivity", "--config", str(conductivity_config), "--out", str(out), "--vd-over-vf", "0.25", "--frequency-thz", "10"]
    assert main(args) == 0
    meta = json.loads((out / "run_meta.json").read_text())
    assert meta["config"]["environment"]["graphene"]["vd_over_vf"] == 0.25
    assert meta["config"]["conductivity"]["frequency_thz"] == [10.0]


def test_dispersion_without_graphene_fails(write_config, tmp_path, capsys):
    """Test a missing graphene section is reported as a config error."""
    config = write_config({"environment": {"eps_r1": 4.0, "eps_r2": 4.0}, "dispersion": {}})
    assert main(["dispersion", "--config", str(config), "--out", str(tmp_path / "out")]) == 2
    error = _error(capsys)
    assert error["error"] == "config_error"
    assert error["key_path"] == "environment.graphene"
    assert not (tmp_path / "out" / "run_meta.json").exists()


def test_unknown_key_reports_path(write_config, tmp_path, capsys):
    """Test unknown config keys fail with their full key path."""
    config = write_config({"environment": {"graphene": {**GRAPHENE, "mu_ev": 0.2}}, "conductivity": {}})
    assert main(["conductivity", "--config", str(config), "--out", str(tmp_path)]) == 2
    assert _error(capsys)["key_path"] == "environment.graphene.mu_ev"


def test_empty_frequency_list_fails(write_config, tmp_path, capsys):
    """Test an empty conductivity grid is rejected."""
    config = write_config({"environment": {"graphene": GRAPHENE}, "conductivity": {"frequency_thz": []}})
    assert main(["conductivity", "--config", str(config), "--out", str(tmp_path)]) == 2
    assert _error(capsys)["key_path"] == "conductivity.frequency_thz"


def test_missing_config_file(tmp_path, capsys):
    """Test a missing config file is a config error."""
    assert main(["fieldmap", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2
    assert _error(capsys)["error"] == "config_error"


def test_entangle_needs_section(write_config, tmp_path, capsys):
    """Test the entangle command requires its section."""
    config = write_config({"environment": {}})
    assert main(["entangle", "--config", str(config), "--out", str(tmp_path)]) == 2
    assert _error(capsys)["key_path"] == "entangle"


def test_entangle_vacuum_angle(vacuum_angle_config, tmp_path):
    """Test an angle sweep writes its CSV, metadata and plot."""
    out = tmp_path / "out"
    assert main(["entangle", "--config", str(vacuum_angle_config), "--out", str(out), "--threads", "1"]) == 0
    rows = _rows(out / "entangle_angle.csv")
    assert rows[0][0] == "theta_deg"
    assert "pair" not in rows[0]
    assert len(rows) == 4
    meta = json.loads((out / "entangle_angle_meta.json").read_text())
    assert meta["case"] == "vacuum"
    assert meta["vacuum_baseline"] == "free_space"
    assert meta["eps_r2"] == 1.0
    assert (out / "entangle_angle.svg").exists()


def test_thread_count_does_not_change_output(vacuum_angle_config, tmp_path):
    """Test serial and parallel runs write identical CSVs."""
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    assert main(["entangle", "--config", str(vacuum_angle_config), "--out", str(serial), "--threads", "1"]) == 0
    assert main(["entangle", "--config", str(vacuum_angle_config), "--out", str(parallel), "--threads", "2"]) == 0
    assert (serial / "entangle_angle.csv").read_bytes() == (parallel / "entangle_angle.csv").read_bytes()


def test_transient_in_picoseconds(write_config, tmp_path):
    """Test absolute time output adds a t_ps column to the trajectory."""
    config = write_config(
        {
            "entangle": {
                "sweep": "transient",
                "grid": [0.0, 0.5, 1.0],
                "theta_deg": 0.0,
                "rho_over_lambda": 0.2,
                "time_unit": "ps",
                "dipole_moment_cm": 1e-28,
            }
        }
    )
    out = tmp_path / "out"
    assert main(["entangle", "--config", str(config), "--out", str(out), "--threads", "1"]) == 0
    header = _rows(out / "trajectory.csv")[0]
    assert header[:2] == ["t_gamma11", "t_ps"]
    assert header[-1] == "concurrence"
    assert len(header) == 2 + 32 + 1


def test_ps_without_dipole_is_rejected(write_config, tmp_path, capsys):
    """Test time_unit 'ps' requires a dipole moment."""
    config = write_config({"entangle": {"sweep": "transient", "time_unit": "ps"}})
    assert main(["entangle", "--config", str(config), "--out", str(tmp_path)]) == 2
    assert _error(capsys)["error"] == "config_error"


def test_dispersion_writes_outputs(write_config, tmp_path):
    """Test the dispersion command writes branch, contour and integrand CSVs."""
    config = write_config(
        {
            "environment": {"eps_r1": 4.0, "eps_r2": 4.0, "graphene": {**GRAPHENE, "vd_over_vf": 0.0}},
            "dispersion": {
                "frequency_thz": {"start": 10.0, "stop": 20.0, "n": 3},
                "directions_deg": [0.0, 180.0],
                "efc_frequency_thz": 15.0,
                "n_phi": 8,
                "integrand_heights_over_lambda": [0.25],
                "integrand_points": 8,
            },
        }
    )
    out = tmp_path / "out"
    assert main(["dispersion", "--config", str(config), "--out", str(out), "--threads", "1"]) == 0
    rows = _rows(out / "dispersion.csv")
    assert rows[0] == ["f_THz", "phi_deg", "Re_q_per_m", "Im_q_per_m", "residual", "status"]
    assert len(rows) == 1 + 2 * 3
    assert {row[-1] for row in rows[1:]} == {"ok"}
    efc = _rows(out / "efc.csv")
    assert len(efc) == 1 + 8
    integrand = _rows(out / "integrand_h0p25.csv")
    assert integrand[0] == ["qx_per_m", "qy_per_m", "abs_integrand"]
    assert len(integrand) == 1 + 8 * 8
    for name in ("dispersion.svg", "efc.svg", "integrand_h0p25.svg", "run_meta.json"):
        assert (out / name).exists()


def test_fieldmap_writes_outputs(write_config, tmp_path):
    """Test the fieldmap command writes the E_z grid with the source cells masked."""
    config = write_config(
        {
            "environment": {"eps_r1": 4.0, "eps_r2": 4.0, "graphene": {**GRAPHENE, "vd_over_vf": 0.0}},
            "fieldmap": {"frequency_thz": 15.0, "extent_over_lambda": 4.0, "n": 4},
        }
    )
    out = tmp_path / "out"
    assert main(["fieldmap", "--config", str(config), "--out", str(out), "--threads", "1"]) == 0
    rows = _rows(out / "fieldmap.csv")
    assert rows[0] == ["x_m", "y_m", "Re_Ez", "Im_Ez", "abs_Ez"]
    assert len(rows) == 1 + 4 * 4
    assert any(row[-1] == "nan" for row in rows[1:])
    assert any(row[-1] != "nan" for row in rows[1:])
    assert (out / "fieldmap.svg").exists()
    assert json.loads((out / "run_meta.json").read_text())["command"] == "fieldmap"


@pytest.mark.slow
def test_thread_count_does_not_change_drift_biased_sweep(write_config, tmp_path):
    """Test serial and parallel graphene angle sweeps write identical CSVs."""
    config = write_config(
        {
            "environment": {"eps_r1": 4.0, "eps_r2": 4.0, "graphene": GRAPHENE},
            "entangle": {"frequency_thz": 15.0, "sweep": "angle", "grid": [0.0, 90.0, 180.0]},
        },
        name="angle_nr.json",
    )
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    assert main(["entangle", "--config", str(config), "--out", str(serial), "--threads", "1"]) == 0
    assert main(["entangle", "--config", str(config), "--out", str(parallel), "--threads", "3"]) == 0
    assert (serial / "entangle_angle.csv").read_bytes() == (parallel / "entangle_angle.csv").read_bytes()
