"""Spinor spherical harmonics and angular channel decomposition.

A channel is labeled by (kappa, mu) with kappa a nonzero integer and mu a
half-integer, |mu| <= |kappa| - 1/2.  The two-spinor harmonic

    Omega_{kappa mu} = ( sgn(-kappa) sqrt((kappa+1/2-mu)/(2kappa+1)) Y_{l, mu-1/2},
                         sqrt((kappa+1/2+mu)/(2kappa+1)) Y_{l, mu+1/2} )

with l = |kappa + 1/2| - 1/2 spans, together with its partner at -kappa in the
lower spinor slot, the eigenspace of Dirac's K operator with eigenvalue
-kappa.  Scalar harmonics Y_{lm} are orthonormal with the Condon-Shortley
phase, evaluated by a stable three-term recurrence on normalized associated
Legendre functions.

Sampled 4-spinor fields on the quadrature grid are projected onto finitely
many channels and reconstructed; K and the angular Laplacian act spectrally
on the coefficients (upper block uses l(kappa), lower block uses l(-kappa)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import roots_legendre

from .errors import ConfigurationError

__all__ = [
    "ChannelIndex",
    "AngularGrid",
    "ChannelCoefficients",
    "norm_legendre",
    "ylm",
    "spherical_spinor",
    "spinor_coefficients",
    "channel_list",
    "project",
    "reconstruct",
    "apply_K",
    "apply_beta",
    "apply_angular_laplacian",
]


# ---------------------------------------------------------------------------
# scalar spherical harmonics
# ---------------------------------------------------------------------------

def norm_legendre(l_max: int, m: int, x: np.ndarray) -> np.ndarray:
    """Normalized associated Legendre functions Ptilde_{lm}(x) for l = m..l_max.

    Normalization is such that Y_{lm} = Ptilde_{lm}(cos theta) exp(i m phi)
    is orthonormal on S^2; the Condon-Shortley (-1)^m is included.  Returns
    an array of shape (l_max - m + 1,) + x.shape.
    """
    if m < 0:
        raise ValueError("norm_legendre requires m >= 0")
    if l_max < m:
        raise ValueError("l_max must be >= m")
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, 1.0))
    out = np.empty((l_max - m + 1,) + x.shape)

    pmm = np.full(x.shape, 1.0 / np.sqrt(4.0 * np.pi))
    for k in range(1, m + 1):
        pmm = -np.sqrt((2.0 * k + 1.0) / (2.0 * k)) * s * pmm
    out[0] = pmm
    if l_max == m:
        return out
    out[1] = np.sqrt(2.0 * m + 3.0) * x * pmm
    for l in range(m + 2, l_max + 1):
        a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
        b = np.sqrt(((2.0 * l + 1.0) * (l - 1.0 - m) * (l - 1.0 + m))
                    / ((2.0 * l - 3.0) * (l * l - m * m)))
        out[l - m] = a * x * out[l - m - 1] - b * out[l - m - 2]
    return out


def ylm(l: int, m: int, cos_theta, phi) -> np.ndarray:
    """Orthonormal scalar spherical harmonic Y_{lm}(theta, phi)."""
    if abs(m) > l:
        raise ValueError(f"|m| = {abs(m)} exceeds l = {l}")
    ct = np.asarray(cos_theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    p = norm_legendre(l, abs(m), ct)[-1]
    y = p * np.exp(1j * abs(m) * ph)
    if m < 0:
        y = (-1.0) ** m * np.conj(y)
    return y


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ChannelIndex:
    """Angular channel label (kappa, mu); mu is half-integer."""

    kappa: int
    mu: float

    def __post_init__(self):
        if self.kappa == 0 or int(self.kappa) != self.kappa:
            raise ValueError(f"kappa must be a nonzero integer, got {self.kappa!r}")
        two_mu = Fraction(self.mu).limit_denominator(4) * 2
        if two_mu.denominator != 1 or two_mu.numerator % 2 == 0:
            raise ValueError(f"mu must be half-integer, got {self.mu!r}")
        if abs(self.mu) > abs(self.kappa) - 0.5:
            raise ValueError(
                f"|mu| = {abs(self.mu)} exceeds |kappa| - 1/2 for kappa = {self.kappa}")
        object.__setattr__(self, "kappa", int(self.kappa))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def l(self) -> int:
        """Orbital degree of the upper two-spinor block."""
        return int(abs(self.kappa + 0.5) - 0.5)

    @property
    def l_lower(self) -> int:
        """Orbital degree of the lower (partner -kappa) block."""
        return int(abs(-self.kappa + 0.5) - 0.5)


def degree_of_kappa(kappa: int) -> int:
    return kappa if kappa > 0 else -kappa - 1


def spinor_coefficients(ch: ChannelIndex) -> tuple[float, float]:
    """Clebsch-Gordan weights (c1, c2) of Omega's two components."""
    k, mu = ch.kappa, ch.mu
    c1 = np.sign(-k) * np.sqrt((k + 0.5 - mu) / (2.0 * k + 1.0))
    c2 = np.sqrt((k + 0.5 + mu) / (2.0 * k + 1.0))
    return float(c1), float(c2)


def spherical_spinor(ch: ChannelIndex, cos_theta, phi) -> np.ndarray:
    """Evaluate Omega_{kappa mu}; returns shape (2,) + broadcast shape."""
    c1, c2 = spinor_coefficients(ch)
    l = ch.l
    m1 = int(ch.mu - 0.5)
    m2 = int(ch.mu + 0.5)
    ct = np.asarray(cos_theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    shape = np.broadcast(ct, ph).shape
    out = np.zeros((2,) + shape, dtype=complex)
    if c1 != 0.0:
        out[0] = c1 * ylm(l, m1, ct, ph)
    if c2 != 0.0:
        out[1] = c2 * ylm(l, m2, ct, ph)
    return out


def channel_list(k_max: int, mus: str = "all") -> list[ChannelIndex]:
    """All channels with 1 <= |kappa| <= k_max.

    ``mus='axis'`` keeps only mu = +-1/2, the channels excited by sources on
    the polar axis.
    """
    out = []
    for ak in range(1, k_max + 1):
        for kappa in (-ak, ak):
            if mus == "axis":
                mu_vals = (-0.5, 0.5)
            else:
                mu_vals = [m + 0.5 for m in range(-ak, ak)]
            for mu in mu_vals:
                out.append(ChannelIndex(kappa, mu))
    return sorted(out)


# ---------------------------------------------------------------------------
# quadrature grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AngularGrid:
    """Product quadrature on S^2: Gauss-Legendre in cos(theta), uniform in phi.

    Exactly integrates Y_{lm} Ybar_{l'm'} for l + l' <= 2 L_max.
    """

    cos_theta: np.ndarray
    gl_weights: np.ndarray
    phi: np.ndarray
    l_max: int

    @classmethod
    def build(cls, n_theta: int, n_phi: int) -> "AngularGrid":
        x, w = roots_legendre(n_theta)
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        l_max = min(n_theta - 1, (n_phi - 1) // 2)
        return cls(x, w, phi, l_max)

    @classmethod
    def for_kmax(cls, k_max: int) -> "AngularGrid":
        return cls.build(2 * k_max + 2, 4 * k_max + 4)

    @property
    def n_nodes(self) -> int:
        return self.cos_theta.size * self.phi.size

    def nodes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened (cos_theta, phi, weight) arrays; weights sum to 4 pi."""
        ct = np.repeat(self.cos_theta, self.phi.size)
        ph = np.tile(self.phi, self.cos_theta.size)
        w = np.repeat(self.gl_weights, self.phi.size) * (2.0 * np.pi / self.phi.size)
        return ct, ph, w

    def unit_vectors(self) -> np.ndarray:
        """Cartesian unit vectors of the nodes, shape (n_nodes, 3)."""
        ct, ph, _ = self.nodes()
        st = np.sqrt(1.0 - ct * ct)
        return np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1)


# ---------------------------------------------------------------------------
# coefficients container and spectral operators
# ---------------------------------------------------------------------------

@dataclass
class ChannelCoefficients:
    """Map from ChannelIndex to stacked (a, b) coefficient arrays.

    Each value has shape (2,) + profile_shape; row 0 multiplies
    (Omega_{kappa mu}; 0), row 1 multiplies (0; Omega_{-kappa mu}).
    """

    data: dict = field(default_factory=dict)

    def channels(self) -> list[ChannelIndex]:
        return sorted(self.data.keys())

    def copy(self) -> "ChannelCoefficients":
        return ChannelCoefficients({ch: v.copy() for ch, v in self.data.items()})

    def norm_sq(self, weights=None) -> float:
        """Sum over channels of integral (|a|^2 + |b|^2) against ``weights``.

        With weights = r^2 dr quadrature weights this is the squared L^2_g
        norm of the reconstructed field (Parseval).  ``weights=None`` treats
        profiles as scalars.
        """
        total = 0.0
        for ch in self.channels():
            v = self.data[ch]
            dens = (np.abs(v) ** 2).sum(axis=0)
            total += float(np.sum(dens if weights is None else dens * weights))
        return total

    def scale_blockwise(self, upper, lower) -> "ChannelCoefficients":
        """Multiply each channel's rows by per-channel scalars."""
        out = {}
        for ch, v in self.data.items():
            w = v.copy()
            w[0] *= upper(ch)
            w[1] *= lower(ch)
            out[ch] = w
        return ChannelCoefficients(out)


def apply_K(coeffs: ChannelCoefficients) -> ChannelCoefficients:
    """Dirac K operator: multiplies every channel by its eigenvalue -kappa."""
    return coeffs.scale_blockwise(lambda ch: -ch.kappa, lambda ch: -ch.kappa)


def apply_beta(coeffs: ChannelCoefficients) -> ChannelCoefficients:
    """beta = gamma^0: +1 on the upper block, -1 on the lower block."""
    return coeffs.scale_blockwise(lambda ch: 1.0, lambda ch: -1.0)


def apply_angular_laplacian(coeffs: ChannelCoefficients, power: int,
                            regularized: bool | None = None) -> ChannelCoefficients:
    """Spectral powers of the angular Laplacian.

    For power >= 0 multiplies blockwise by (l(l+1))^power; negative powers use
    the smoothing family (1 + l(l+1))^power.  Pass ``regularized=True`` to use
    (1 + l(l+1))^power for positive powers too (the exact inverse of the
    smoothing).
    """
    if int(power) != power:
        raise ValueError("power must be an integer")
    reg = regularized if regularized is not None else power < 0

    def mult(l: int) -> float:
        base = 1.0 + l * (l + 1.0) if reg else float(l * (l + 1.0))
        return base ** power

    return coeffs.scale_blockwise(lambda ch: mult(ch.l), lambda ch: mult(ch.l_lower))


# ---------------------------------------------------------------------------
# projection / reconstruction
# ---------------------------------------------------------------------------

def _basis_matrix(channels, grid: AngularGrid) -> np.ndarray:
    """Stacked conjugated basis rows, shape (n_ch, 2, 2, n_nodes).

    Axis 1 selects the (upper, lower) slot: slot 0 holds Omega_{kappa mu},
    slot 1 holds Omega_{-kappa mu}.
    """
    ct, ph, _ = grid.nodes()
    rows = np.empty((len(channels), 2, 2, ct.size), dtype=complex)
    for i, ch in enumerate(channels):
        rows[i, 0] = spherical_spinor(ch, ct, ph)
        rows[i, 1] = spherical_spinor(ChannelIndex(-ch.kappa, ch.mu), ct, ph)
    return rows


def project(samples: np.ndarray, k_max: int, grid: AngularGrid,
            mus: str = "all") -> ChannelCoefficients:
    """Project 4-spinor samples on the grid nodes onto channels |kappa| <= k_max.

    ``samples`` has shape (n_nodes, 4) for a single radius or (n_r, n_nodes, 4)
    for a radial stack; coefficients come out scalar or shape (n_r,).
    """
    if 2 * k_max > grid.l_max:
        raise ConfigurationError(
            f"k_max = {k_max} exceeds quadrature resolution (L_max = {grid.l_max})")
    arr = np.asarray(samples, dtype=complex)
    single = arr.ndim == 2
    if single:
        arr = arr[None]
    if arr.shape[-2] != grid.n_nodes or arr.shape[-1] != 4:
        raise ValueError(f"samples shape {arr.shape} does not match grid "
                         f"({grid.n_nodes} nodes x 4 components)")
    channels = channel_list(k_max, mus)
    basis = _basis_matrix(channels, grid)
    _, _, w = grid.nodes()
    upper = arr[..., :2]
    lower = arr[..., 2:]
    coeffs = {}
    for i, ch in enumerate(channels):
        a = np.einsum("q,sq,rqs->r", w, np.conj(basis[i, 0]), upper)
        b = np.einsum("q,sq,rqs->r", w, np.conj(basis[i, 1]), lower)
        v = np.stack([a, b])
        coeffs[ch] = v[:, 0] if single else v
    return ChannelCoefficients(coeffs)


def reconstruct(coeffs: ChannelCoefficients, cos_theta, phi) -> np.ndarray:
    """Evaluate the channel sum at directions; returns (..., n_dirs, 4).

    Leading profile axes of the coefficients are preserved.
    """
    ct = np.atleast_1d(np.asarray(cos_theta, dtype=float))
    ph = np.broadcast_to(np.asarray(phi, dtype=float), ct.shape)
    channels = coeffs.channels()
    if not channels:
        raise ValueError("no channels to reconstruct")
    lead = coeffs.data[channels[0]].shape[1:]
    out = np.zeros(lead + (ct.size, 4), dtype=complex)
    for ch in channels:
        v = coeffs.data[ch]
        om_up = spherical_spinor(ch, ct, ph)
        om_lo = spherical_spinor(ChannelIndex(-ch.kappa, ch.mu), ct, ph)
        out[..., :2] += v[0][..., None, None] * om_up.T
        out[..., 2:] += v[1][..., None, None] * om_lo.T
    return out
