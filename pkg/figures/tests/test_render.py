"""Rendering from checked-in sample CSVs; no primary package required."""

import csv
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

import render_figures as rf  # noqa: E402

SAMPLES = HERE.parent / "sample_data"


def rows_of(name, kind):
    return rf.load_rows([SAMPLES / name], kind)


@pytest.mark.parametrize("kind,src", [
    ("front_diagram", "peaks.csv"),
    ("exponent_fit", "fronts.csv"),
    ("spectrum", "spectrum.csv"),
])
def test_render_kind(tmp_path, kind, src):
    out = tmp_path / f"{kind}.png"
    rc = rf.main(["--kind", kind, "--in", str(SAMPLES / src),
                  "--out", str(out)])
    assert rc == 0
    assert out.exists() and out.stat().st_size > 5000


def test_render_is_deterministic(tmp_path):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    rf.render("exponent_fit", [SAMPLES / "fronts.csv"], a)
    rf.render("exponent_fit", [SAMPLES / "fronts.csv"], b)
    assert a.read_bytes() == b.read_bytes()


def test_inputs_not_modified(tmp_path):
    before = (SAMPLES / "peaks.csv").read_bytes()
    rf.render("front_diagram", [SAMPLES / "peaks.csv"], tmp_path / "x.png")
    assert (SAMPLES / "peaks.csv").read_bytes() == before


def test_schema_mismatch_is_input_error(tmp_path):
    with pytest.raises(rf.InputError):
        rf.load_rows([SAMPLES / "peaks.csv"], "exponent_fit")
    rc = rf.main(["--kind", "exponent_fit", "--in", str(SAMPLES / "peaks.csv"),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 2


def test_missing_input_is_input_error(tmp_path):
    rc = rf.main(["--kind", "spectrum", "--in", str(tmp_path / "nope.csv"),
                  "--out", str(tmp_path / "x.png")])
    assert rc == 2


def test_measured_D_peaks_lie_on_diffracted_line():
    # the sample data's matched, unmerged D peaks sit on r = t - r0 within
    # the plotted tube half-width 3h
    rows = rows_of("peaks.csv", "front_diagram")
    d_rows = [r for r in rows if r["front"] == "D" and r["matched"] == "true"
              and r["merged"] == "false"]
    assert d_rows
    r0 = 1.0
    for r in d_rows:
        assert abs(float(r["r_measured"]) - (float(r["t"]) - r0)) \
            <= 3.0 * float(r["h"])


def test_exponent_fit_sample_annotates_measured_gap():
    rows = rows_of("fronts.csv", "exponent_fit")
    ds = {float(r["delta_s"]) for r in rows
          if r["theta_deg"] == "90.0" and r["delta_s"]}
    assert len(ds) == 1
    assert 0.7 <= ds.pop() <= 1.1


def test_spectrum_sample_lists_ground_state():
    rows = rows_of("spectrum.csv", "spectrum")
    ground = [r for r in rows if r["kappa"] == "-1" and r["level"] == "0"][0]
    assert abs(float(ground["energy_extrapolated"]) - 0.8660254) < 1e-4
