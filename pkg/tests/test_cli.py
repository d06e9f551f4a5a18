"""Config validation, CSV artifacts, and byte-level determinism of the CLI."""

import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from dcdiff.cli import ScenarioConfig, ConfigError, main


def write_config(tmp_path, **overrides):
    cfg = {
        "Z": 0.4, "m": 0.0, "V": "zero", "r0": 1.0,
        "psi0": [1, 0, 0, 0],
        "h_values": [0.25],
        "k_max": 12,
        "n_r": 256, "p": 2.0, "r_max": 4.75, "dt": "auto",
        "snapshot_times": [1.0],
        "probe_theta_deg": [0.0, 90.0],
        "nonfocusing_powers": [],
        "spectrum_kappa": [-1],
        "spectrum_levels": 1,
        "spectrum_n_r": 512,
        "spectrum_r_max": 40.0,
        "out_dir": str(tmp_path / "out"),
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_config_defaults_valid():
    ScenarioConfig().validate()


def test_config_rejects_empty_snapshots(tmp_path):
    path = write_config(tmp_path, snapshot_times=[])
    with pytest.raises(ConfigError, match="snapshot_times"):
        ScenarioConfig.load(path)


def test_config_rejects_non_dyadic_h(tmp_path):
    path = write_config(tmp_path, h_values=[0.2, 0.15])
    with pytest.raises(ConfigError, match="h_values"):
        ScenarioConfig.load(path)


def test_config_rejects_small_rmax(tmp_path):
    path = write_config(tmp_path, r_max=1.5)
    with pytest.raises(ConfigError, match="r_max"):
        ScenarioConfig.load(path)


def test_config_rejects_fat_mollifier(tmp_path):
    path = write_config(tmp_path, h_values=[0.4])
    with pytest.raises(ConfigError, match="r0 > 3"):
        ScenarioConfig.load(path)


def test_config_rejects_unknown_field(tmp_path):
    path = write_config(tmp_path, bogus=7)
    with pytest.raises(ConfigError, match="bogus"):
        ScenarioConfig.load(path)


def test_usage_error_exit_code(tmp_path):
    path = write_config(tmp_path, snapshot_times=[])
    assert main(["indicial", "--config", str(path)]) == 2


def test_k_scaling_per_h():
    cfg = ScenarioConfig()
    ks = [cfg.k_for(h) for h in cfg.h_values]
    assert ks == [32, 64, 128, 256]
    cfg2 = ScenarioConfig(scale_k_with_h=False)
    assert [cfg2.k_for(h) for h in cfg2.h_values] == [32, 32, 32, 32]


# ---------------------------------------------------------------------------
# indicial subcommand
# ---------------------------------------------------------------------------

def test_indicial_supercritical_status(tmp_path, capsys):
    path = write_config(tmp_path, Z=0.9)
    out = tmp_path / "out"
    assert main(["indicial", "--config", str(path), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "extension_needed" in printed
    lines = (out / "indicial.csv").read_text().splitlines()
    assert lines[0] == "kappa,re_sigma_plus,im_sigma_plus,im_sigma_minus,in_window"
    in_window = {}
    for line in lines[1:]:
        kappa, _, im_p, im_m, flag = line.split(",")
        in_window[int(kappa)] = flag
        if int(kappa) == 1:
            assert abs(float(im_m) - 0.5641101056459328) < 1e-12
            assert abs(float(im_p) - 1.4358898943540672) < 1e-12
    assert in_window[1] == "true" and in_window[-1] == "true"
    assert in_window[2] == "false"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["selfadjointness"] == "extension_needed"


def test_indicial_subcritical_status(tmp_path, capsys):
    path = write_config(tmp_path, Z=0.5)
    out = tmp_path / "out"
    assert main(["indicial", "--config", str(path), "--out", str(out)]) == 0
    assert "essentially_selfadjoint" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# spectrum subcommand
# ---------------------------------------------------------------------------

def test_spectrum_attractive_anchor(tmp_path):
    path = write_config(tmp_path, Z=-0.5, m=1.0)
    out = tmp_path / "out"
    assert main(["spectrum", "--config", str(path), "--out", str(out)]) == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "kappa,level,energy,energy_extrapolated,conv_order"
    kappa, level, e, e_ex, order = lines[1].split(",")
    assert (int(kappa), int(level)) == (-1, 0)
    assert abs(float(e_ex) - 0.8660254037844386) < 1e-4
    assert float(order) > 1.5


def test_spectrum_refuses_supercritical(tmp_path):
    path = write_config(tmp_path, Z=0.9, m=1.0)
    assert main(["spectrum", "--config", str(path)]) == 4


def test_spectrum_massless_empty(tmp_path):
    path = write_config(tmp_path, Z=0.4, m=0.0)
    out = tmp_path / "out"
    assert main(["spectrum", "--config", str(path), "--out", str(out)]) == 0
    assert (out / "spectrum.csv").read_text().splitlines()[1:] == []


# ---------------------------------------------------------------------------
# simulate determinism
# ---------------------------------------------------------------------------

def _artifact_hashes(out: Path) -> dict:
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(out.iterdir()) if p.name != "manifest.json"}


def test_simulate_artifacts_and_determinism(tmp_path):
    path = write_config(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(["simulate", "--config", str(path), "--out", str(out_a)]) == 0
    assert main(["simulate", "--config", str(path), "--out", str(out_b)]) == 0
    ha, hb = _artifact_hashes(out_a), _artifact_hashes(out_b)
    assert set(ha) == {"snapshots_h0.dcwf", "channels_h0.dcch", "norms.csv",
                       "channel_mass.csv"}
    assert ha == hb
    manifest = json.loads((out_a / "manifest.json").read_text())
    for name, digest in manifest["checksums"].items():
        assert hb[name] == digest
    # norm drift column stays tiny
    for line in (out_a / "norms.csv").read_text().splitlines()[1:]:
        assert abs(float(line.split(",")[-1])) < 1e-10


def test_simulate_threads_do_not_change_bytes(tmp_path):
    path = write_config(tmp_path)
    out_a = tmp_path / "t1"
    out_b = tmp_path / "t4"
    assert main(["simulate", "--config", str(path), "--out", str(out_a),
                 "--threads", "1"]) == 0
    assert main(["simulate", "--config", str(path), "--out", str(out_b),
                 "--threads", "4"]) == 0
    assert _artifact_hashes(out_a) == _artifact_hashes(out_b)


def test_simulate_refuses_supercritical(tmp_path):
    path = write_config(tmp_path, Z=0.87)
    assert main(["simulate", "--config", str(path)]) == 4


def test_probe_missing_artifacts_dependency_error(tmp_path):
    path = write_config(tmp_path, h_values=[0.24, 0.12, 0.06, 0.03],
                        n_r=1024, r_max=6.0, snapshot_times=[2.5])
    assert main(["probe", "--config", str(path),
                 "--out", str(tmp_path / "nowhere")]) == 3
