"""Constant matrices of the 3+1d Dirac formalism and their radial combinations.

Conventions: mostly-plus Minkowski metric eta = diag(-1, 1, 1, 1), Dirac
representation with gamma^0 = diag(I, -I).  The anticommutator identity is

    gamma^a gamma^b + gamma^b gamma^a = -2 eta^{ab} Id_4,

so (gamma^0)^2 = +Id and (gamma^j)^2 = -Id.  All entries are exact small
complex numbers (0, +-1, +-i) or components of a unit direction vector.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ETA",
    "ID2",
    "ID4",
    "PAULI",
    "GAMMA",
    "BETA",
    "ALPHA",
    "SIGMA",
    "GAMMA5",
    "gamma",
    "pauli",
    "as_direction",
    "radial_matrix",
]

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]])


_Z2 = np.zeros((2, 2), dtype=complex)

GAMMA = (
    _block(ID2, _Z2, _Z2, -ID2),
    _block(_Z2, PAULI[0], -PAULI[0], _Z2),
    _block(_Z2, PAULI[1], -PAULI[1], _Z2),
    _block(_Z2, PAULI[2], -PAULI[2], _Z2),
)

BETA = GAMMA[0]

# alpha_j = gamma^0 gamma^j = offdiag(sigma_j, sigma_j)
ALPHA = tuple(BETA @ GAMMA[j] for j in (1, 2, 3))

# Sigma_j = diag(sigma_j, sigma_j)
SIGMA = tuple(_block(PAULI[j], _Z2, _Z2, PAULI[j]) for j in range(3))

GAMMA5 = 1j * GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3]

for _m in GAMMA + ALPHA + SIGMA + (GAMMA5,):
    _m.setflags(write=False)
ID2.setflags(write=False)
ID4.setflags(write=False)
for _m in PAULI:
    _m.setflags(write=False)


def gamma(index: int) -> np.ndarray:
    """Return gamma^index for index in {0, 1, 2, 3}."""
    if index not in (0, 1, 2, 3):
        raise ValueError(f"gamma index must be 0..3, got {index!r}")
    return GAMMA[index]


def pauli(j: int) -> np.ndarray:
    """Return sigma_j for j in {1, 2, 3}."""
    if j not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1..3, got {j!r}")
    return PAULI[j - 1]


def as_direction(vec, tol: float = 1e-14) -> np.ndarray:
    """Validate and return a unit 3-vector."""
    d = np.asarray(vec, dtype=float)
    if d.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {d.shape}")
    if abs(np.dot(d, d) - 1.0) > 3.0 * tol:
        raise ValueError(f"direction must be unit length, |v|^2 = {np.dot(d, d)!r}")
    return d


def radial_matrix(kind: str, direction) -> np.ndarray:
    """Direction-dependent radial matrix: sum_j n_j M_j for M in {sigma, alpha, Sigma}.

    ``sigma_r`` is 2x2; ``alpha_r`` and ``Sigma_r`` are 4x4.  Each squares to
    the identity for unit directions.
    """
    n = as_direction(direction)
    if kind == "sigma_r":
        mats = PAULI
    elif kind == "alpha_r":
        mats = ALPHA
    elif kind == "Sigma_r":
        mats = SIGMA
    else:
        raise ValueError(f"unknown radial matrix kind {kind!r}")
    return n[0] * mats[0] + n[1] * mats[1] + n[2] * mats[2]
