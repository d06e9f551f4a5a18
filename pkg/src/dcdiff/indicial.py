"""Boundary spectrum of the scaled radial operator and self-adjointness.

The Mellin (indicial) roots of r*B in channel kappa are

    sigma = i +- i sqrt(kappa^2 - Z^2),

purely imaginary for |Z| <= |kappa|.  The generator is essentially
self-adjoint exactly when no Im sigma falls in the closed window
[1/2, 3/2]; the binding channel is kappa = +-1, which gives the coupling
threshold |Z| < sqrt(3)/2.  Above the threshold a self-adjoint extension
must be chosen and the simulator refuses to evolve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import PrecisionError
from .quadrature import radial_derivative, simpson_weights

__all__ = [
    "SELFADJOINT_THRESHOLD",
    "IM_WINDOW",
    "PhysicalParams",
    "IndicialRootSet",
    "SelfAdjointnessReport",
    "boundary_spectrum",
    "selfadjointness_check",
    "hardy_check",
]

SELFADJOINT_THRESHOLD = np.sqrt(3.0) / 2.0
IM_WINDOW = (0.5, 1.5)


@dataclass(frozen=True)
class PhysicalParams:
    """Coupling Z, mass m, and a smooth radial potential V(r) (natural units)."""

    Z: float
    m: float = 0.0
    V: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"mass must be nonnegative, got {self.m}")

    def a0(self, r: np.ndarray) -> np.ndarray:
        """Electric potential A_0(r) = Z/r + V(r)."""
        r = np.asarray(r, dtype=float)
        out = self.Z / r
        if self.V is not None:
            out = out + self.V(r)
        return out

    def v_only(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.V(r) if self.V is not None else np.zeros_like(r)

    def check_potential(self, r_max: float, n: int = 512) -> None:
        """Sample V on (0, r_max] and require finite values."""
        if self.V is None:
            return
        r = np.linspace(r_max / n, r_max, n)
        v = np.asarray(self.V(r), dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("potential V(r) is not finite on the grid")


@dataclass(frozen=True)
class IndicialRootSet:
    """Roots sigma_+- per kappa of the boundary spectrum."""

    Z: float
    roots: dict  # kappa -> (sigma_plus, sigma_minus)

    def im_parts(self, kappa: int) -> tuple[float, float]:
        sp, sm = self.roots[kappa]
        return tuple(sorted((sp.imag, sm.imag)))

    def is_imaginary(self, kappa: int) -> bool:
        sp, sm = self.roots[kappa]
        return abs(sp.real) < 1e-14 and abs(sm.real) < 1e-14

    def in_window(self, kappa: int) -> bool:
        lo, hi = IM_WINDOW
        return any(lo <= s.imag <= hi for s in self.roots[kappa])


def boundary_spectrum(Z: float, kappa_max: int) -> IndicialRootSet:
    """Closed-form indicial roots i +- i sqrt(kappa^2 - Z^2) for 1 <= |kappa| <= kappa_max."""
    if kappa_max < 1:
        raise ValueError("kappa_max must be >= 1")
    roots = {}
    for ak in range(1, kappa_max + 1):
        for kappa in (-ak, ak):
            disc = np.sqrt(complex(kappa * kappa - Z * Z))
            roots[kappa] = (1j + 1j * disc, 1j - 1j * disc)
    return IndicialRootSet(Z, roots)


@dataclass(frozen=True)
class SelfAdjointnessReport:
    Z: float
    essentially_selfadjoint: bool
    witnesses: tuple  # (kappa, sigma) pairs with Im sigma in the window

    @property
    def classification(self) -> str:
        return "essentially_selfadjoint" if self.essentially_selfadjoint \
            else "extension_needed"


def selfadjointness_check(Z: float, kappa_max: int = 8) -> SelfAdjointnessReport:
    """Classify by scanning Im spec for intersections with [1/2, 3/2].

    kappa = +-1 is the binding case (sqrt(kappa^2 - Z^2) only grows with
    |kappa|), but the sweep up to kappa_max verifies rather than assumes it.
    The window is closed, so |Z| = sqrt(3)/2 itself is classified as
    extension_needed.
    """
    rootset = boundary_spectrum(Z, max(kappa_max, 1))
    witnesses = []
    lo, hi = IM_WINDOW
    for kappa in sorted(rootset.roots):
        for sigma in rootset.roots[kappa]:
            if lo <= sigma.imag <= hi:
                witnesses.append((kappa, sigma))
    return SelfAdjointnessReport(Z, not witnesses, tuple(witnesses))


def hardy_check(u: np.ndarray, r: np.ndarray,
                tol_factor: float = 1e-8) -> tuple[float, float, bool]:
    """Numerically verify ||u/r|| <= 2 ||d_r u|| in L^2_g for a radial profile.

    Norms use the measure 4 pi r^2 dr via composite Simpson on the given grid;
    the left side simplifies since |u/r|^2 r^2 = |u|^2.  The profile must be
    supported inside the grid (vanish at the outer end); no condition is
    needed at r = 0, where the metric measure tames the 1/r weight.  Returns
    (lhs, rhs, holds) with holds = lhs <= rhs + tol_factor * rhs.
    """
    u = np.asarray(u, dtype=complex)
    r = np.asarray(r, dtype=float)
    if u.shape != r.shape:
        raise ValueError("profile and grid must have matching shapes")
    scale = np.max(np.abs(u))
    if scale == 0.0:
        return 0.0, 0.0, True
    if abs(u[-1]) > 1e-6 * scale:
        raise ValueError("profile must vanish at the outer grid end")

    def norms(rr, uu):
        w = simpson_weights(rr)
        du = radial_derivative(uu, rr)
        lhs2 = 4.0 * np.pi * np.sum(w * np.abs(uu) ** 2)
        rhs2 = 4.0 * np.pi * np.sum(w * np.abs(du) ** 2 * rr * rr)
        return np.sqrt(lhs2), 2.0 * np.sqrt(rhs2)

    lhs, rhs = norms(r, u)
    lhs_c, rhs_c = norms(r[::2], u[::2])
    # second-order differencing dominates the coarse/fine mismatch; 0.1%
    # agreement still flags genuinely unresolved profiles loudly
    if abs(lhs_c - lhs) > 1e-3 * max(lhs, rhs) or abs(rhs_c - rhs) > 1e-3 * rhs:
        raise PrecisionError(
            "grid does not resolve the profile (coarse/fine quadrature disagree)")
    return float(lhs), float(rhs), bool(lhs <= rhs + tol_factor * rhs)
