#!/usr/bin/env python3
"""Render simulation report CSVs into figures.

Kinds:
  front_diagram  -- spacetime (r, t) diagram of measured front peaks overlaid
                    on the analytic cones |x - y| = t and r = t - r0
                    (input: peaks.csv from the probe step)
  exponent_fit   -- log2-log2 amplitude-vs-h scatter with regression lines and
                    the measured slope gap annotated (input: fronts.csv)
  spectrum       -- table of bound-state energies with grid extrapolation
                    (input: spectrum.csv)

Usage:
  render_figures.py --kind <kind> --in <csv> [<csv> ...] --out <img>

Reads only CSV artifacts; never touches binary snapshots.  Rendering is
read-only and deterministic: the same inputs plot the same data.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

SCHEMAS = {
    "front_diagram": {"h", "t", "theta_deg", "front", "r_predicted",
                      "r_measured", "amplitude", "matched", "merged"},
    "exponent_fit": {"front", "theta_deg", "h", "peak_amp", "tube_lo",
                     "tube_hi", "slope", "slope_err", "delta_s"},
    "spectrum": {"kappa", "level", "energy", "energy_extrapolated",
                 "conv_order"},
}

FRONT_COLORS = {"G": "tab:blue", "D": "tab:red"}


class InputError(ValueError):
    pass


def load_rows(paths, kind):
    """Read and concatenate CSVs, checking the column schema for the kind."""
    rows = []
    for path in paths:
        path = Path(path)
        if not path.exists():
            raise InputError(f"input file {path} does not exist")
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            cols = set(reader.fieldnames or [])
            missing = SCHEMAS[kind] - cols
            if missing:
                raise InputError(
                    f"{path} lacks columns {sorted(missing)} for kind {kind}")
            rows.extend(reader)
    return rows


def _floats(rows, key):
    return np.array([float(r[key]) for r in rows])


def render_front_diagram(rows, out_path):
    """Measured G/D peaks in the (r, t) plane on top of the analytic fronts."""
    found = [r for r in rows if r["r_measured"] not in ("", None)]
    if not found:
        raise InputError("no measured peaks to plot")
    # infer the source radius from the diffracted prediction r = t - r0
    d_rows = [r for r in rows if r["front"] == "D"]
    r0 = (np.mean(_floats(d_rows, "t") - _floats(d_rows, "r_predicted"))
          if d_rows else 1.0)

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    t_all = _floats(rows, "t")
    t_line = np.linspace(0.0, 1.05 * t_all.max(), 200)
    thetas = sorted({float(r["theta_deg"]) for r in rows})
    for th in thetas:
        rad = np.deg2rad(th)
        disc = t_line ** 2 - (r0 * np.sin(rad)) ** 2
        ok = disc >= 0
        rg = r0 * np.cos(rad) + np.sqrt(disc[ok])
        ax.plot(rg, t_line[ok], color="0.65", lw=0.8,
                label="|x-y| = t" if th == thetas[0] else None)
    ax.plot(t_line - r0, t_line, "--", color=FRONT_COLORS["D"], lw=1.2,
            label="r = t - r0")

    for front in ("G", "D"):
        sub = [r for r in found if r["front"] == front
               and not (front == "D" and r["merged"] == "true")]
        if not sub:
            continue
        r_meas = _floats(sub, "r_measured")
        t_meas = _floats(sub, "t")
        h_vals = _floats(sub, "h")
        ax.errorbar(r_meas, t_meas, xerr=3.0 * h_vals, fmt="o", ms=4,
                    color=FRONT_COLORS[front], lw=1,
                    label=f"measured {front} peaks")
    ax.set_xlabel("r")
    ax.set_ylabel("t")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("geometric and diffracted wavefronts")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_exponent_fit(rows, out_path):
    """Amplitude scaling in h per front with fitted slopes and the gap."""
    groups = {}
    for r in rows:
        groups.setdefault((r["front"], float(r["theta_deg"])), []).append(r)
    fig, ax = plt.subplots(figsize=(5.4, 4.2))
    annotated = None
    for (front, theta), sub in sorted(groups.items()):
        h = _floats(sub, "h")
        amp = _floats(sub, "peak_amp")
        slope = float(sub[0]["slope"])
        order = np.argsort(h)
        x, y = np.log2(h[order]), np.log2(amp[order])
        intercept = np.mean(y - slope * x)
        color = FRONT_COLORS.get(front, "k")
        ls = "-" if theta == 90.0 else ":"
        ax.plot(x, y, "o", ms=4, color=color)
        ax.plot(x, slope * x + intercept, ls, color=color, lw=1,
                label=f"{front} at {theta:g} deg: slope {slope:.2f}")
        if front == "D" and sub[0]["delta_s"] not in ("", None):
            annotated = (theta, float(sub[0]["delta_s"]))
    if annotated is not None:
        theta, ds = annotated
        ax.annotate(f"delta_s = s_D - s_G = {ds:.3f}  ({theta:g} deg)",
                    xy=(0.03, 0.04), xycoords="axes fraction", fontsize=9,
                    bbox={"boxstyle": "round", "fc": "lightyellow"})
    ax.set_xlabel("log2 h")
    ax.set_ylabel("log2 peak amplitude")
    ax.legend(fontsize=7, loc="upper right")
    ax.set_title("front strength vs mollification scale")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_spectrum(rows, out_path):
    """Bound-state table with per-level extrapolation."""
    if not rows:
        raise InputError("spectrum.csv has no levels to tabulate")
    cells = [[r["kappa"], r["level"], f"{float(r['energy']):.7f}",
              f"{float(r['energy_extrapolated']):.7f}",
              f"{float(r['conv_order']):.2f}"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.6, 0.6 + 0.35 * len(cells)))
    ax.axis("off")
    table = ax.table(
        cellText=cells,
        colLabels=["kappa", "level", "E (finest grid)", "E (extrapolated)",
                   "observed order"],
        loc="center")
    table.scale(1.0, 1.3)
    ax.set_title("bound states in the mass gap", pad=18)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


RENDERERS = {
    "front_diagram": render_front_diagram,
    "exponent_fit": render_exponent_fit,
    "spectrum": render_spectrum,
}


def render(kind, inputs, out_path):
    rows = load_rows(inputs, kind)
    RENDERERS[kind](rows, out_path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", required=True, choices=sorted(RENDERERS))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV")
    parser.add_argument("--out", required=True, metavar="IMG")
    args = parser.parse_args(argv)
    try:
        render(args.kind, args.inputs, args.out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
