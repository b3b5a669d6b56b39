"""Config parsing, output files, exit codes, and the snapshot round-trip."""

import json

import pytest

from spdc_walkoff.cli import ENV_OUTPUT_DIR, SCHEMA_VERSION, main

CONFIG = """
[crystal]
name = "BBO"
theta_deg = "auto-phase-match"
length_mm = 1.0

[pump]
wavelength_nm = 355.0
waist_um = 30.0
walkoff_deg = 2.0

[grid]
n_radial = 16
n_azimuthal = 64
l_max = 4
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(CONFIG)
    return path


def run(args):
    return main([str(a) for a in args])


def test_phase_match_output(config_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert run(["phase-match", config_file, "--output-dir", out]) == 0
    line = capsys.readouterr().out
    assert line.startswith("phase-match: theta = 32.913887")
    doc = json.loads((out / "phase_match.json").read_text())
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["results"]["theta_deg"] == pytest.approx(32.913887, abs=1e-5)
    # auto values are resolved to numbers in the snapshot
    assert isinstance(doc["config"]["crystal"]["theta_deg"], float)
    assert isinstance(doc["config"]["pump"]["walkoff_deg"], float)


def test_spectrum_files_and_schema(config_file, tmp_path):
    out = tmp_path / "out"
    assert run(["spectrum", config_file, "--output-dir", out]) == 0
    csv = (out / "spectrum.csv").read_text().splitlines()
    assert csv[0] == "l_s,l_i,probability"
    assert len(csv) == 1 + 9 * 9  # l_max 4 window
    doc = json.loads((out / "spectrum.json").read_text())
    assert len(doc["results"]["S"]) == 81
    assert set(doc["results"]["sidebands"]) == {"-3", "-2", "-1", "0", "1", "2", "3"}
    assert 0.0 < doc["results"]["f_leak"] < 1.0


def test_snapshot_round_trips_bit_identical(config_file, tmp_path):
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert run(["spectrum", config_file, "--output-dir", first]) == 0
    assert run(["spectrum", first / "spectrum.json", "--output-dir", second]) == 0
    assert (first / "spectrum.json").read_bytes() == (second / "spectrum.json").read_bytes()
    assert (first / "spectrum.csv").read_bytes() == (second / "spectrum.csv").read_bytes()


def test_repeat_runs_deterministic(config_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run(["farfield", config_file, "--output-dir", out]) == 0
    assert (a / "farfield.csv").read_bytes() == (b / "farfield.csv").read_bytes()
    assert (a / "farfield.json").read_bytes() == (b / "farfield.json").read_bytes()


def test_set_override_beats_file(config_file, tmp_path):
    out = tmp_path / "out"
    assert run(["spectrum", config_file, "--output-dir", out,
                "--set", "pump.walkoff_deg=0.0"]) == 0
    doc = json.loads((out / "spectrum.json").read_text())
    assert doc["config"]["pump"]["walkoff_deg"] == 0.0
    assert doc["results"]["f_leak"] == 0.0


def test_output_dir_precedence(config_file, tmp_path, monkeypatch):
    env_dir = tmp_path / "from_env"
    flag_dir = tmp_path / "from_flag"
    monkeypatch.setenv(ENV_OUTPUT_DIR, str(env_dir))
    assert run(["phase-match", config_file]) == 0
    assert (env_dir / "phase_match.json").exists()
    assert run(["phase-match", config_file, "--output-dir", flag_dir]) == 0
    assert (flag_dir / "phase_match.json").exists()


def test_formats_subset(config_file, tmp_path):
    out = tmp_path / "out"
    assert run(["spectrum", config_file, "--output-dir", out,
                "--set", 'output.formats=["json"]']) == 0
    assert not (out / "spectrum.csv").exists()
    assert (out / "spectrum.json").exists()


def test_unknown_key_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[crystal]\nlengthmm = 1.0\n")
    assert run(["phase-match", bad]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["category"] == "config"
    assert "lengthmm" in err["error"]


def test_missing_file_exit_2(tmp_path):
    assert run(["phase-match", tmp_path / "nope.toml"]) == 2


def test_invalid_toml_exit_2(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[crystal\n")
    assert run(["phase-match", bad]) == 2


def test_physics_error_exit_3(config_file, tmp_path, capsys):
    assert run(["phase-match", config_file, "--output-dir", tmp_path,
                "--set", "pump.wavelength_nm=1500.0"]) == 3
    err = json.loads(capsys.readouterr().err)
    assert err["category"] == "physics"


def test_convergence_error_exit_4(tmp_path, capsys):
    cfg = tmp_path / "flat.toml"
    cfg.write_text(CONFIG + "\n[sweep]\nwalkoff_deg = [1e-9, 2e-9, 3e-9, 4e-9, 5e-9]\n")
    assert run(["fit-scaling", cfg, "--output-dir", tmp_path / "out"]) == 4
    err = json.loads(capsys.readouterr().err)
    assert err["category"] == "convergence"


def test_bad_subcommand_exit_2(config_file):
    assert run(["polish", config_file]) == 2


def test_sweep_walkoff_csv_schema(config_file, tmp_path):
    out = tmp_path / "out"
    assert run(["sweep-walkoff", config_file, "--output-dir", out,
                "--set", "sweep.walkoff_deg=[1.0, 2.0, 3.0]"]) == 0
    lines = (out / "sweep_walkoff.csv").read_text().splitlines()
    assert lines[0] == "walkoff_deg,f_leak,P_-3,P_-2,P_-1,P_0,P_1,P_2,P_3"
    assert len(lines) == 4
    doc = json.loads((out / "sweep_walkoff.json").read_text())
    assert doc["axis_name"] == "walkoff_rad"
    assert len(doc["values"]) == 3
    assert doc["sweep_meta"]["knob"] == "walkoff_at_fixed_geometry"


def test_total_oam_columns(config_file, tmp_path):
    out = tmp_path / "out"
    assert run(["total-oam", config_file, "--output-dir", out]) == 0
    lines = (out / "total_oam.csv").read_text().splitlines()
    assert lines[0] == "l_total,window_probability,ring_probability"
    assert len(lines) == 1 + 17  # n in [-8, 8] for l_max 4
