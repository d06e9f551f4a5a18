"""Front location and singularity-strength diagnostics.

The geometric front G is the sphere |x - y| = t around the source; along a
ray at polar angle theta from the source direction it crosses at

    r = r0 cos(theta) +- sqrt(t^2 - r0^2 sin^2(theta)).

The diffracted front D is the sphere r = t - r0 emanating from the potential
singularity once the incoming wave has reached it (t > r0); G and D meet
only on the antipodal ray theta = 180 deg.

Singularity strength is probed by peak amplitude in a tube of width w * h
around each front across a dyadic family of mollification scales h: for a
conormal front of order s the peak scales like a power of h, and the fitted
log2-log2 slope difference between D and G measures how many derivatives
smoother the diffracted wave is.  Operators tangent to D (the scaling field
R = (t - r0) D_t + r D_r and the angular Laplacian) leave the D slope
unchanged; the transverse derivative d_r costs one full order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np

from .quadrature import radial_derivative

__all__ = [
    "FrontGeometry",
    "FrontPeak",
    "AmplitudeSample",
    "SlopeFit",
    "FrontReport",
    "locate_fronts",
    "tube_amplitude",
    "smoothing_exponent",
    "apply_front_operator",
    "conormal_test",
    "channel_tail_fraction",
]

TUBE_WIDTH_FACTOR = 6.0
NOISE_FACTOR = 10.0
DYNAMIC_RANGE = 1e-4


@dataclass(frozen=True)
class FrontGeometry:
    """Analytic front radii for a source at distance r0 on the polar axis."""

    r0: float

    def geometric_radii(self, t: float, theta_deg: float) -> tuple:
        """Crossings of the sphere |x - y| = t with the ray at theta_deg."""
        th = np.deg2rad(theta_deg)
        disc = t * t - (self.r0 * np.sin(th)) ** 2
        if disc < 0:
            return ()
        root = np.sqrt(disc)
        out = tuple(r for r in (self.r0 * np.cos(th) + root,
                                self.r0 * np.cos(th) - root) if r > 1e-12)
        return tuple(sorted(set(np.round(out, 15))))

    def diffracted_radius(self, t: float):
        """Radius of D at time t, or None before the front is born."""
        return t - self.r0 if t > self.r0 else None

    def arrival_time(self) -> float:
        return self.r0


@dataclass(frozen=True)
class FrontPeak:
    front: str               # "G" or "D"
    theta_deg: float
    t: float
    r_predicted: float
    r_measured: float | None
    amplitude: float | None
    tolerance: float
    merged: bool = False

    @property
    def found(self) -> bool:
        return self.r_measured is not None

    @property
    def matched(self) -> bool:
        return self.found and abs(self.r_measured - self.r_predicted) <= self.tolerance


def _ray_amplitude(field, slice_idx: int, theta_deg: float) -> np.ndarray:
    ct = np.cos(np.deg2rad(theta_deg))
    u = field.sample(slice_idx, np.array([ct]))
    return np.sqrt(np.sum(np.abs(u[:, 0, :]) ** 2, axis=-1))


def _local_maxima(y: np.ndarray) -> np.ndarray:
    idx = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    return idx


def _local_spacing(r: np.ndarray, r_at: float) -> float:
    i = int(np.clip(np.searchsorted(r, r_at), 1, r.size - 1))
    return r[i] - r[i - 1]


def locate_fronts(field, snapshot: int, theta_degs,
                  noise_factor: float = NOISE_FACTOR,
                  dynamic_range: float = DYNAMIC_RANGE) -> list[FrontPeak]:
    """Find |u| peaks along probe rays and match them to the predicted fronts.

    The detection floor on each ray is the larger of noise_factor times the
    median amplitude inside the causal ball and dynamic_range times the ray
    maximum (a peak 4 decades below the dominant front is discretization
    noise, not a front).  A front with no peak above the floor is reported
    absent (r_measured None); on the antipodal ray the D entry is marked
    merged since G and D coincide there.
    """
    geo = FrontGeometry(field.r0)
    i_c = int(field.center_indices()[snapshot])
    t = float(field.slice_times[i_c])
    r = field.r
    peaks: list[FrontPeak] = []
    for theta in theta_degs:
        amp = _ray_amplitude(field, i_c, theta)
        ball = r <= t + field.r0 + 5.0 * field.h
        floor = max(noise_factor * float(np.median(amp[ball])),
                    dynamic_range * float(np.max(amp[ball])))
        cand = [i for i in _local_maxima(amp) if amp[i] > floor]
        cand_r = r[cand]
        cand_a = amp[cand]

        targets = [("G", rg) for rg in geo.geometric_radii(t, theta)]
        rd = geo.diffracted_radius(t)
        if rd is not None and rd > 3.0 * field.h:
            targets.append(("D", rd))
        for front, r_pred in targets:
            tol = 5.0 * field.h + 2.0 * _local_spacing(r, r_pred)
            merged = front == "D" and any(
                abs(r_pred - rg) < tol for f, rg in targets if f == "G")
            if cand_r.size:
                j = int(np.argmin(np.abs(cand_r - r_pred)))
                if abs(cand_r[j] - r_pred) <= tol:
                    peaks.append(FrontPeak(front, theta, t, r_pred,
                                           float(cand_r[j]), float(cand_a[j]),
                                           tol, merged))
                    continue
            peaks.append(FrontPeak(front, theta, t, r_pred, None, None, tol, merged))
    return peaks


def tube_amplitude(field, slice_idx: int, theta_deg: float, r_center: float,
                   width_factor: float = TUBE_WIDTH_FACTOR,
                   profile: np.ndarray | None = None,
                   clip: tuple | None = None) -> tuple[float, float, float]:
    """Peak |u| inside |r - r_center| <= width_factor * h / 2 on one ray.

    Returns (amplitude, tube_lo, tube_hi).  ``profile`` overrides the
    amplitude profile (used for operator-applied fields); ``clip`` bounds the
    tube (used to stop wide tubes from swallowing a neighboring front).
    """
    half = width_factor * field.h / 2.0
    lo, hi = r_center - half, r_center + half
    if clip is not None:
        lo, hi = max(lo, clip[0]), min(hi, clip[1])
    amp = _ray_amplitude(field, slice_idx, theta_deg) if profile is None else profile
    sel = (field.r >= lo) & (field.r <= hi)
    if not np.any(sel):
        raise ValueError(f"tube [{lo}, {hi}] contains no radial nodes")
    return float(np.max(amp[sel])), lo, hi


@dataclass(frozen=True)
class AmplitudeSample:
    front: str
    theta_deg: float
    h: float
    peak_amp: float
    tube_lo: float
    tube_hi: float


@dataclass(frozen=True)
class SlopeFit:
    front: str
    theta_deg: float
    slope: float
    slope_err: float
    residual: float          # max |deviation| from the regression line
    inconclusive: bool


@dataclass
class FrontReport:
    """Amplitude-scaling measurements across a dyadic h family."""

    t: float
    samples: list = dfield(default_factory=list)
    fits: dict = dfield(default_factory=dict)      # (front, theta) -> SlopeFit
    delta_s: dict = dfield(default_factory=dict)   # theta -> s_D - s_G

    def fit(self, front: str, theta_deg: float) -> SlopeFit:
        return self.fits[(front, float(theta_deg))]


def _fit_loglog(hs, amps, front, theta, residual_limit=0.15) -> SlopeFit:
    x = np.log2(np.asarray(hs, dtype=float))
    y = np.log2(np.asarray(amps, dtype=float))
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    fitted = A @ coef
    resid = float(np.max(np.abs(y - fitted)))
    dof = max(x.size - 2, 1)
    sigma2 = float(np.sum((y - fitted) ** 2)) / dof
    sxx = float(np.sum((x - x.mean()) ** 2))
    err = float(np.sqrt(sigma2 / sxx)) if sxx > 0 else float("nan")
    return SlopeFit(front, float(theta), float(coef[0]), err, resid,
                    resid > residual_limit)


def _check_family(fields) -> list:
    if len(fields) < 4:
        raise ValueError("need at least 4 dyadic h values")
    hs = [f.h for f in fields]
    order = np.argsort(hs)[::-1]
    fields = [fields[i] for i in order]
    hs = [f.h for f in fields]
    for h_big, h_small in zip(hs[:-1], hs[1:]):
        if abs(h_big / h_small - 2.0) > 1e-9:
            raise ValueError(f"h family is not dyadic: {hs}")
    z = {(f.params.Z, f.params.m, f.r0) for f in fields}
    if len(z) != 1:
        raise ValueError("h family members have differing physical parameters")
    return fields


def _resolve_snapshot(field, t_probe: float) -> int:
    times = field.snapshot_times
    j = int(np.argmin(np.abs(times - t_probe)))
    if abs(times[j] - t_probe) > 1e-9:
        raise ValueError(f"no snapshot at t = {t_probe} (have {times})")
    return j


def smoothing_exponent(fields, t_probe: float, theta_degs,
                       width_factor: float = TUBE_WIDTH_FACTOR,
                       exclude_merged: bool = True) -> FrontReport:
    """Fit peak-amplitude scaling A(h) for both fronts along each probe ray.

    ``fields`` is the dyadic h family (any order); each member is measured at
    its snapshot closest to t_probe (must match exactly).  D statistics skip
    the antipodal merge ray.
    """
    fields = _check_family(fields)
    geo = FrontGeometry(fields[0].r0)
    i_cs = [int(f.center_indices()[_resolve_snapshot(f, t_probe)]) for f in fields]
    t = float(fields[0].slice_times[i_cs[0]])
    report = FrontReport(t=t)
    rd = geo.diffracted_radius(t)

    for theta in theta_degs:
        theta = float(theta)
        targets = []
        radii_g = geo.geometric_radii(t, theta)
        if radii_g:
            targets.append(("G", max(radii_g)))
        # D statistics need separation from the G crossing at the probe scale
        merged_ray = rd is not None and radii_g and \
            any(abs(rd - rg) < 0.5 * TUBE_WIDTH_FACTOR * max(f.h for f in fields)
                for rg in radii_g)
        if rd is not None and not (exclude_merged and merged_ray):
            targets.append(("D", rd))
        for front, r_pred in targets:
            # clip wide tubes at the midpoint toward the other front
            clip = (0.0, np.inf)
            others = ([rd] if front == "G" and rd is not None
                      else [rg for rg in radii_g])
            for r_other in others:
                mid = 0.5 * (r_pred + r_other)
                if r_other > r_pred:
                    clip = (clip[0], min(clip[1], mid))
                elif r_other < r_pred:
                    clip = (max(clip[0], mid), clip[1])
            amps = []
            for f, i_c in zip(fields, i_cs):
                a, lo, hi = tube_amplitude(f, i_c, theta, r_pred, width_factor,
                                           clip=clip)
                report.samples.append(AmplitudeSample(front, theta, f.h, a, lo, hi))
                amps.append(a)
            report.fits[(front, theta)] = _fit_loglog(
                [f.h for f in fields], amps, front, theta)
        if ("G", theta) in report.fits and ("D", theta) in report.fits:
            report.delta_s[theta] = (report.fits[("D", theta)].slope
                                     - report.fits[("G", theta)].slope)
    return report


# ---------------------------------------------------------------------------
# conormality operators
# ---------------------------------------------------------------------------

def _sample_by_mu(field, slice_idx: int, cos_theta) -> dict:
    """Reconstructed field split by mu (each group has fixed azimuthal content)."""
    from .angular import ChannelCoefficients, reconstruct
    groups = {}
    for i, ch in enumerate(field.channels):
        groups.setdefault(ch.mu, {})[ch] = np.stack(
            [field.a[slice_idx, i], field.b[slice_idx, i]])
    return {mu: reconstruct(ChannelCoefficients(data), cos_theta, 0.0)
            for mu, data in groups.items()}


_THETA_STENCIL = 0.03    # radians; angular profiles vary on O(1) scales


def _angular_stencil(field, slice_idx: int, theta_deg: float):
    th = np.deg2rad(theta_deg)
    if np.sin(th) < 0.1:
        raise ValueError("local angular operators need sin(theta) > 0.1")
    d = _THETA_STENCIL
    ct = np.cos([th - d, th, th + d])
    by_mu = _sample_by_mu(field, slice_idx, ct)
    return th, d, by_mu


def _lap_local(field, slice_idx: int, theta_deg: float) -> np.ndarray:
    """Angular Laplacian by a local theta stencil with exact azimuthal terms.

    Each spinor component within a fixed-mu block carries e^{i m phi} with
    m = mu -+ 1/2, so the phi part acts as -m^2/sin^2; the theta part is a
    centered second difference.  Being local, this avoids the spectral
    leakage of distant fronts through truncated channel tails.
    """
    th, d, by_mu = _angular_stencil(field, slice_idx, theta_deg)
    out = None
    for mu, u3 in by_mu.items():
        u_m, u_0, u_p = u3[:, 0, :], u3[:, 1, :], u3[:, 2, :]
        d1 = (u_p - u_m) / (2.0 * d)
        d2 = (u_p - 2.0 * u_0 + u_m) / (d * d)
        m = np.array([mu - 0.5, mu + 0.5, mu - 0.5, mu + 0.5])
        lap = -(d2 + d1 / np.tan(th) - (m ** 2)[None, :] / np.sin(th) ** 2 * u_0)
        out = lap if out is None else out + lap
    return out


def _K_local(field, slice_idx: int, theta_deg: float) -> np.ndarray:
    """Dirac K = beta (1 + Sigma . L) by local angular differencing.

    With phi = 0 and fixed m per component, L_z u = m u and
    L_+- u = (+-d_theta - m cot(theta)) u, so sigma . L acts blockwise as
    [[L_z, L_-], [L_+, -L_z]] on each two-spinor.
    """
    th, d, by_mu = _angular_stencil(field, slice_idx, theta_deg)
    out = None
    for mu, u3 in by_mu.items():
        u_m, u_0, u_p = u3[:, 0, :], u3[:, 1, :], u3[:, 2, :]
        d1 = (u_p - u_m) / (2.0 * d)
        m = np.array([mu - 0.5, mu + 0.5, mu - 0.5, mu + 0.5])
        lz = m[None, :] * u_0
        lp = d1 - m[None, :] / np.tan(th) * u_0      # L_+ u per component
        lm = -d1 - m[None, :] / np.tan(th) * u_0     # L_- u per component
        sl = np.empty_like(u_0)
        for base in (0, 2):                          # upper and lower 2-spinors
            sl[:, base] = lz[:, base] + lm[:, base + 1]
            sl[:, base + 1] = lp[:, base] - lz[:, base + 1]
        ku = u_0 + sl
        ku[:, 2:] *= -1.0                            # beta
        out = ku if out is None else out + ku
    return out


def apply_front_operator(field, snapshot: int, theta_deg: float,
                         operator: str) -> np.ndarray:
    """Amplitude profile |Op u|(r) along a ray at the snapshot center time.

    Operators: "id"; "R" ((t-r0) D_t + r D_r by centered differences, tangent
    to D); "lap" and "K" (angular operators by local theta stencils); their
    "_spectral" variants (exact per channel but subject to truncation-tail
    leakage from distant fronts); "dr" (radial derivative, the transverse
    control).
    """
    ct = np.array([np.cos(np.deg2rad(theta_deg))])
    i_m, i_c, i_p = field.triple(snapshot)
    if operator == "id":
        u = field.sample(i_c, ct)[:, 0, :]
    elif operator == "R":
        t = float(field.slice_times[i_c])
        dt = float(field.slice_times[i_p] - field.slice_times[i_m]) / 2.0
        u_c = field.sample(i_c, ct)[:, 0, :]
        u_t = (field.sample(i_p, ct)[:, 0, :] - field.sample(i_m, ct)[:, 0, :]) \
            / (2.0 * dt)
        u_r = radial_derivative(u_c, field.r, axis=0)
        u = -1j * ((t - field.r0) * u_t + field.r[:, None] * u_r)
    elif operator == "dr":
        u_c = field.sample(i_c, ct)[:, 0, :]
        u = -1j * radial_derivative(u_c, field.r, axis=0)
    elif operator == "lap":
        u = _lap_local(field, i_c, theta_deg)
    elif operator == "K":
        u = _K_local(field, i_c, theta_deg)
    elif operator in ("lap_spectral", "K_spectral"):
        from .angular import apply_K, apply_angular_laplacian, reconstruct
        coeffs = field.coefficients(i_c)
        coeffs = apply_K(coeffs) if operator == "K_spectral" \
            else apply_angular_laplacian(coeffs, 1)
        u = reconstruct(coeffs, ct, 0.0)[:, 0, :]
    else:
        raise ValueError(f"unknown operator {operator!r}")
    return np.sqrt(np.sum(np.abs(u) ** 2, axis=-1))


CONORMAL_WIDTH_FACTOR = 3.0


def conormal_test(fields, t_probe: float, theta_degs,
                  operators=("R", "lap", "dr"),
                  width_factor: float = CONORMAL_WIDTH_FACTOR) -> dict:
    """Slope change of the D front under tangent and transverse operators.

    Returns {operator: {theta: (s_D_op, s_D_op - s_D_id)}}; tangent operators
    should leave the slope within tolerance, d_r should cost about one order.
    The default tube is half the front-report width: the D peak sits within
    one h of r = t - r0, and wide tubes at the largest h pick up the
    angularly band-limited skirt of the antipodal merge point, which the
    angular operators amplify.
    """
    fields = _check_family(fields)
    geo = FrontGeometry(fields[0].r0)
    snaps = [_resolve_snapshot(f, t_probe) for f in fields]
    i_cs = [int(f.center_indices()[s_]) for f, s_ in zip(fields, snaps)]
    t = float(fields[0].slice_times[i_cs[0]])
    rd = geo.diffracted_radius(t)
    if rd is None:
        raise ValueError("diffracted front not yet born at the chosen snapshot")

    out = {}
    base = {}
    for theta in theta_degs:
        amps = [tube_amplitude(f, i, theta, rd, width_factor)[0]
                for f, i in zip(fields, i_cs)]
        base[theta] = _fit_loglog([f.h for f in fields], amps, "D", theta).slope
    for op in operators:
        per_theta = {}
        for theta in theta_degs:
            amps = []
            for f, snap, ic in zip(fields, snaps, i_cs):
                prof = apply_front_operator(f, snap, theta, op)
                a, _, _ = tube_amplitude(f, ic, theta, rd, width_factor,
                                         profile=prof)
                amps.append(a)
            s_op = _fit_loglog([f.h for f in fields], amps, "D", theta).slope
            per_theta[float(theta)] = (s_op, s_op - base[theta])
        out[op] = per_theta
    return out


def channel_tail_fraction(field, slice_idx: int, kappa_abs: int) -> float:
    """Mass fraction carried by channels with |kappa| = kappa_abs."""
    mass = field.channel_mass[slice_idx]
    total = float(np.sum(mass))
    sel = [i for i, ch in enumerate(field.channels) if abs(ch.kappa) == kappa_abs]
    return float(np.sum(mass[sel])) / total if total > 0 else 0.0
