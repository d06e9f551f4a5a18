"""Command-line pipeline: indicial -> spectrum -> simulate -> probe.

Outputs are deterministic for a fixed config: channel reductions are gathered
in sorted channel order regardless of threading, floats are printed with 17
significant digits, and the manifest carries sha256 checksums of every
artifact so re-runs can be compared byte for byte.

Sign convention: the scalar potential is A0 = Z/r + V(r) exactly as it enters
the operator, so negative Z is the attractive (hydrogen-like) case.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .angular import ChannelIndex
from .errors import ConfigurationError, DomainError, PrecisionError
from .indicial import (
    SELFADJOINT_THRESHOLD,
    PhysicalParams,
    boundary_spectrum,
    selfadjointness_check,
)
from .probe import (
    channel_tail_fraction,
    conormal_test,
    locate_fronts,
    smoothing_exponent,
)
from .propagator import (
    SimulationGrids,
    SourceSpec,
    fundamental_solution,
    read_dcch1,
    write_dcch1,
    write_dcwf1,
)
from .radial import RadialGrid, bound_states

USAGE_ERROR = 2
DEPENDENCY_ERROR = 3
DOMAIN_ERROR = 4


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return "%.17g" % float(x)


def write_csv(path: Path, header: list, rows: list) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v
                              for v in row))
    path.write_text("\n".join(lines) + "\n")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    """Validated scenario description (one JSON document)."""

    Z: float = 0.4
    m: float = 0.0
    V: object = "zero"                  # "zero" or polynomial coefficients
    r0: float = 1.0
    psi0: tuple = (1.0, 0.0, 0.0, 0.0)
    h_values: tuple = (0.12, 0.06, 0.03, 0.015)
    k_max: int = 32
    scale_k_with_h: bool = True
    n_r: int = 2880
    p: float = 2.0
    r_max: float = 4.75
    dt: object = "auto"
    snapshot_times: tuple = (0.5, 1.5, 2.0, 2.5)
    probe_theta_deg: tuple = (0.0, 90.0, 135.0, 180.0)
    nonfocusing_powers: tuple = (0, 1, 2)
    tail_kappa: int = 16
    kappa_max_indicial: int = 12
    spectrum_kappa: tuple = (-1, 1)
    spectrum_levels: int = 2
    spectrum_n_r: int = 1024
    spectrum_r_max: float = 40.0
    seed: int = 0
    out_dir: str = "runs/default"

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        cfg = cls(**{k: tuple(v) if isinstance(v, list) and k != "V" else v
                     for k, v in raw.items()})
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def fail(fieldname, msg):
            raise ConfigError(f"config field '{fieldname}': {msg}")

        if not np.isfinite(self.Z):
            fail("Z", "must be finite")
        if self.m < 0:
            fail("m", "mass must be >= 0")
        if self.V != "zero":
            try:
                [float(c) for c in self.V]
            except (TypeError, ValueError):
                fail("V", "must be 'zero' or a list of polynomial coefficients")
        if self.r0 <= 0:
            fail("r0", "source radius must be positive")
        psi0 = [complex(c) if not isinstance(c, (list, tuple))
                else complex(c[0], c[1]) for c in self.psi0]
        if len(psi0) != 4:
            fail("psi0", "needs 4 components (re or [re, im] pairs)")
        nrm = np.sqrt(sum(abs(c) ** 2 for c in psi0))
        if nrm == 0:
            fail("psi0", "must be nonzero")
        self.psi0 = tuple(c / nrm for c in psi0)
        hs = list(self.h_values)
        if not hs:
            fail("h_values", "need at least one mollification scale")
        for a, b in zip(hs[:-1], hs[1:]):
            if abs(a / b - 2.0) > 1e-9:
                fail("h_values", f"must decrease dyadically, got {hs}")
        if self.r0 <= 3.0 * max(hs):
            fail("h_values", f"need r0 > 3*h, got r0 = {self.r0}, h = {max(hs)}")
        if not self.snapshot_times:
            fail("snapshot_times", "must be a non-empty list")
        if sorted(self.snapshot_times) != list(self.snapshot_times):
            fail("snapshot_times", "must be sorted ascending")
        t_max = max(self.snapshot_times)
        needed = self.r0 + t_max + 10.0 * max(hs)
        if self.r_max < needed - 1e-12:
            fail("r_max", f"must be >= r0 + max(t) + 10*max(h) = {needed}")
        if self.k_max < 1:
            fail("k_max", "must be >= 1")
        if self.n_r < 64:
            fail("n_r", "must be >= 64")
        if self.p < 2.0:
            fail("p", "grading exponent must be >= 2")
        if self.dt != "auto":
            if not (0 < float(self.dt) <= self.r_max / self.n_r):
                fail("dt", "must be in (0, r_max / n_r]")
        if self.spectrum_levels < 1:
            fail("spectrum_levels", "must be >= 1")

    # ----- derived quantities -----

    def params(self) -> PhysicalParams:
        if self.V == "zero":
            vfun = None
        else:
            coeffs = [float(c) for c in self.V]
            vfun = lambda r: np.polynomial.polynomial.polyval(r, coeffs)
        return PhysicalParams(Z=float(self.Z), m=float(self.m), V=vfun)

    def k_for(self, h: float) -> int:
        """Channel cut per family member; scaled so the angular truncation
        stays subdominant (tail amplitude ~ K_SCALE_TAIL) at every h."""
        if not self.scale_k_with_h:
            return self.k_max
        return int(np.ceil(self.k_max * max(self.h_values) / h))

    def dt_for(self, h: float, grid: RadialGrid) -> float:
        if self.dt != "auto":
            return float(self.dt)
        return min(grid.uniform_spacing, h / 12.0)

    def radial_grid(self) -> RadialGrid:
        return RadialGrid(self.n_r, self.r_max, self.p)

    def echo(self) -> dict:
        d = {}
        for k in self.__dataclass_fields__:
            v = getattr(self, k)
            if k == "psi0":
                v = [[c.real, c.imag] for c in v]
            elif isinstance(v, tuple):
                v = list(v)
            d[k] = v
        return d


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, cfg: ScenarioConfig, extra: dict) -> None:
    import scipy
    manifest_path = out_dir / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
    else:
        manifest = {"config": cfg.echo(),
                    "versions": {"dcdiff": __version__,
                                 "numpy": np.__version__,
                                 "scipy": scipy.__version__,
                                 "python": sys.version.split()[0]},
                    "checksums": {}}
    manifest.update({k: v for k, v in extra.items() if k != "checksums"})
    for name in sorted(out_dir.iterdir()):
        if name.name != "manifest.json" and name.is_file():
            manifest["checksums"][name.name] = _sha256(name)
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_indicial(cfg: ScenarioConfig, out_dir: Path) -> int:
    rootset = boundary_spectrum(cfg.Z, cfg.kappa_max_indicial)
    report = selfadjointness_check(cfg.Z, cfg.kappa_max_indicial)
    rows = []
    for kappa in sorted(rootset.roots):
        sp, sm = rootset.roots[kappa]
        rows.append([kappa, sp.real, sp.imag, sm.imag,
                     "true" if rootset.in_window(kappa) else "false"])
    write_csv(out_dir / "indicial.csv",
              ["kappa", "re_sigma_plus", "im_sigma_plus", "im_sigma_minus",
               "in_window"], rows)
    write_manifest(out_dir, cfg, {"selfadjointness": report.classification})
    print(f"indicial: Z = {cfg.Z}, status: {report.classification}")
    if report.witnesses:
        for kappa, sigma in report.witnesses:
            print(f"  witness kappa = {kappa}, Im sigma = {sigma.imag:.6f}")
    return 0


def cmd_spectrum(cfg: ScenarioConfig, out_dir: Path) -> int:
    if abs(cfg.Z) >= SELFADJOINT_THRESHOLD:
        print(f"refused: |Z| = {abs(cfg.Z)} >= sqrt(3)/2 "
              "(selfadjointness classifier: extension_needed)", file=sys.stderr)
        return DOMAIN_ERROR
    params = cfg.params()
    rows = []
    if params.m <= 0:
        print("spectrum: m = 0 has no mass gap; nothing to compute")
    else:
        grid = RadialGrid(cfg.spectrum_n_r, cfg.spectrum_r_max, cfg.p)
        for kappa in cfg.spectrum_kappa:
            levels = bound_states(ChannelIndex(int(kappa), 0.5), params, grid,
                                  n_levels=cfg.spectrum_levels)
            for j, lv in enumerate(levels):
                rows.append([int(kappa), j, lv.energies[-1], lv.extrapolated,
                             lv.order])
            print(f"spectrum: kappa = {kappa}: "
                  + (", ".join("%.7f" % lv.extrapolated for lv in levels)
                     if levels else "no gap eigenvalues"))
    write_csv(out_dir / "spectrum.csv",
              ["kappa", "level", "energy", "energy_extrapolated", "conv_order"],
              rows)
    write_manifest(out_dir, cfg, {})
    return 0


def _simulate_family(cfg: ScenarioConfig, threads: int):
    """Run the h family.

    The largest-h member records every snapshot time; the finer members
    record only the first and last (memory: the finest member has hundreds of
    channels), which is what the probe and the h-uniformity checks consume.
    """
    params = cfg.params()
    params.check_potential(cfg.r_max)
    grid = cfg.radial_grid()
    times_all = list(cfg.snapshot_times)
    times_rest = sorted({times_all[0], times_all[-1]})
    fields = []
    for i, h in enumerate(cfg.h_values):
        k_eff = cfg.k_for(h)
        grids = SimulationGrids(grid, k_eff)
        src = SourceSpec(r0=cfg.r0, psi0=cfg.psi0, h=h)
        times = times_all if i == 0 else times_rest
        f = fundamental_solution(src, params, grids, times,
                                 dt=cfg.dt_for(h, grid), threads=threads)
        fields.append(f)
    return fields


def cmd_simulate(cfg: ScenarioConfig, out_dir: Path, threads: int) -> int:
    if abs(cfg.Z) >= SELFADJOINT_THRESHOLD:
        print(f"refused: |Z| = {abs(cfg.Z)} >= sqrt(3)/2 "
              "(selfadjointness classifier: extension_needed)", file=sys.stderr)
        return DOMAIN_ERROR
    fields = _simulate_family(cfg, threads)
    probe_ct = np.cos(np.deg2rad(np.asarray(cfg.probe_theta_deg, dtype=float)))
    norm_rows, mass_rows = [], []
    for i, f in enumerate(fields):
        write_dcwf1(out_dir / f"snapshots_h{i}.dcwf", f, probe_ct)
        write_dcch1(out_dir / f"channels_h{i}.dcch", f)
        for j, t in enumerate(f.slice_times):
            norm_rows.append([f.h, t, f.norms[j], f.norms[j] / f.norms[0] - 1.0])
        for ci in f.center_indices():
            for jc, ch in enumerate(f.channels):
                mass_rows.append([f.h, f.slice_times[ci], ch.kappa, ch.mu,
                                  f.channel_mass[ci, jc]])
    write_csv(out_dir / "norms.csv",
              ["h", "slice_time", "norm", "rel_drift"], norm_rows)
    write_csv(out_dir / "channel_mass.csv",
              ["h", "time", "kappa", "mu", "mass"], mass_rows)
    write_manifest(out_dir, cfg, {
        "k_per_h": {str(h): cfg.k_for(h) for h in cfg.h_values},
        "dt_per_h": {str(h): cfg.dt_for(h, cfg.radial_grid())
                     for h in cfg.h_values}})
    print(f"simulate: wrote {len(fields)} h-members to {out_dir}")
    return 0


def _load_family(cfg: ScenarioConfig, out_dir: Path):
    params = cfg.params()
    grid = cfg.radial_grid()
    fields = []
    for i, h in enumerate(cfg.h_values):
        path = out_dir / f"channels_h{i}.dcch"
        if not path.exists():
            raise FileNotFoundError(
                f"missing {path}; run `dcdiff simulate` first")
        fields.append(read_dcch1(path, params, grid, cfg.psi0))
    return fields


def cmd_probe(cfg: ScenarioConfig, out_dir: Path, threads: int) -> int:
    if abs(cfg.Z) >= SELFADJOINT_THRESHOLD:
        print(f"refused: |Z| = {abs(cfg.Z)} >= sqrt(3)/2", file=sys.stderr)
        return DOMAIN_ERROR
    try:
        fields = _load_family(cfg, out_dir)
    except FileNotFoundError as exc:
        print(f"dependency error: {exc}", file=sys.stderr)
        return DEPENDENCY_ERROR
    thetas = [float(t) for t in cfg.probe_theta_deg]
    t_probe = max(cfg.snapshot_times)

    # measured peaks: every stored snapshot of every member (front-diagram data)
    peak_rows = []
    for f in fields:
        for snap in range(f.snapshot_times.size):
            for p in locate_fronts(f, snap, thetas):
                peak_rows.append([f.h, p.t, p.theta_deg, p.front, p.r_predicted,
                                  p.r_measured, p.amplitude,
                                  "true" if p.matched else "false",
                                  "true" if p.merged else "false"])
    write_csv(out_dir / "peaks.csv",
              ["h", "t", "theta_deg", "front", "r_predicted", "r_measured",
               "amplitude", "matched", "merged"], peak_rows)

    # amplitude scaling across the family
    report = smoothing_exponent(fields, t_probe, thetas)
    front_rows = []
    for s in report.samples:
        fit = report.fits[(s.front, s.theta_deg)]
        ds = report.delta_s.get(s.theta_deg)
        front_rows.append([s.front, s.theta_deg, s.h, s.peak_amp, s.tube_lo,
                           s.tube_hi, fit.slope, fit.slope_err, ds])
    write_csv(out_dir / "fronts.csv",
              ["front", "theta_deg", "h", "peak_amp", "tube_lo", "tube_hi",
               "slope", "slope_err", "delta_s"], front_rows)
    for th, ds in sorted(report.delta_s.items()):
        print(f"probe: delta_s({th:g} deg) = {ds:.3f}")

    # conormality: slope change of D under tangent/transverse operators
    con = conormal_test(fields, t_probe, [90.0],
                        operators=("R", "lap", "K", "dr"))
    con_rows = []
    for op, per in sorted(con.items()):
        for th, (s_op, delta) in sorted(per.items()):
            con_rows.append([op, th, s_op, delta])
            print(f"probe: s_D under {op} at {th:g} deg: {s_op:.3f} "
                  f"(change {delta:+.3f})")
    write_csv(out_dir / "conormal.csv",
              ["operator", "theta_deg", "s_d", "delta_vs_identity"], con_rows)

    # nonfocusing: angularly smoothed initial data
    nf_rows = []
    if cfg.nonfocusing_powers:
        params = cfg.params()
        grid = cfg.radial_grid()
        for N in cfg.nonfocusing_powers:
            if N == 0:
                family = fields
            else:
                family = []
                for h in cfg.h_values:
                    grids = SimulationGrids(grid, cfg.k_for(h))
                    src = SourceSpec(r0=cfg.r0, psi0=cfg.psi0, h=h)
                    family.append(fundamental_solution(
                        src, params, grids, [t_probe],
                        dt=cfg.dt_for(h, grid), smoothing_power=N,
                        threads=threads))
            tail = channel_tail_fraction(family[0], 0, cfg.tail_kappa)
            rep_n = smoothing_exponent(family, t_probe, [90.0])
            s_d = rep_n.fits[("D", 90.0)].slope
            nf_rows.append([N, cfg.tail_kappa, tail, s_d])
            print(f"probe: nonfocusing N={N}: |kappa|={cfg.tail_kappa} tail "
                  f"fraction {tail:.3e}, s_D = {s_d:.3f}")
    write_csv(out_dir / "nonfocusing.csv",
              ["N", "tail_kappa", "tail_fraction", "s_d"], nf_rows)
    write_manifest(out_dir, cfg, {})
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dcdiff",
        description="Dirac-Coulomb propagator simulator and front diagnostics")
    parser.add_argument("subcommand",
                        choices=["indicial", "spectrum", "simulate", "probe",
                                 "all"])
    parser.add_argument("--config", required=True, help="scenario JSON path")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (fallback: DCDIFF_THREADS)")
    args = parser.parse_args(argv)

    try:
        cfg = ScenarioConfig.load(args.config)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("DCDIFF_THREADS", "1"))
    out_dir = Path(args.out if args.out is not None else cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    steps = [args.subcommand] if args.subcommand != "all" else \
        ["indicial", "spectrum", "simulate", "probe"]
    for step in steps:
        try:
            if step == "indicial":
                rc = cmd_indicial(cfg, out_dir)
            elif step == "spectrum":
                rc = cmd_spectrum(cfg, out_dir)
            elif step == "simulate":
                rc = cmd_simulate(cfg, out_dir, threads)
            else:
                rc = cmd_probe(cfg, out_dir, threads)
        except (ConfigurationError, PrecisionError, DomainError, ValueError) as exc:
            print(f"error in {step}: {exc}", file=sys.stderr)
            return USAGE_ERROR
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
