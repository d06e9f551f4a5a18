"""Quadrature and finite differences on non-uniform radial grids."""

from __future__ import annotations

import numpy as np

__all__ = ["simpson_weights", "derivative_matrix_apply", "radial_derivative"]


def simpson_weights(x: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on an arbitrary strictly increasing grid.

    Integrates the quadratic through each consecutive node triple over its
    two intervals; a trailing odd interval uses the quadratic through the
    last three nodes.  Returns w with sum(w * f) ~ integral of f dx.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 3:
        raise ValueError("need at least 3 nodes for Simpson weights")
    w = np.zeros(n)
    npairs = (n - 1) // 2
    i0 = 2 * np.arange(npairs)
    h0 = x[i0 + 1] - x[i0]
    h1 = x[i0 + 2] - x[i0 + 1]
    tot = h0 + h1
    np.add.at(w, i0, tot / 6.0 * (2.0 - h1 / h0))
    np.add.at(w, i0 + 1, tot / 6.0 * tot * tot / (h0 * h1))
    np.add.at(w, i0 + 2, tot / 6.0 * (2.0 - h0 / h1))
    if (n - 1) % 2 == 1:
        # integrate the quadratic through the last three nodes over [x_{n-2}, x_{n-1}]
        a, b, c = x[-3], x[-2], x[-1]
        ha, hb = b - a, c - b
        alpha = (2.0 * hb * hb + 3.0 * ha * hb) / (6.0 * (ha + hb))
        beta = (hb * hb + 3.0 * ha * hb) / (6.0 * ha)
        gamma = hb * hb * hb / (6.0 * ha * (ha + hb))
        w[-1] += alpha
        w[-2] += beta
        w[-3] -= gamma
    return w


def radial_derivative(f: np.ndarray, x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Second-order first derivative on a non-uniform grid (centered interior,
    one-sided ends)."""
    f = np.asarray(f)
    x = np.asarray(x, dtype=float)
    f = np.moveaxis(f, axis, -1)
    out = np.empty_like(f)
    hm = x[1:-1] - x[:-2]
    hp = x[2:] - x[1:-1]
    out[..., 1:-1] = (f[..., :-2] * (-hp / (hm * (hm + hp)))
                      + f[..., 1:-1] * ((hp - hm) / (hm * hp))
                      + f[..., 2:] * (hm / (hp * (hm + hp))))
    h0, h1 = x[1] - x[0], x[2] - x[1]
    out[..., 0] = (f[..., 0] * (-(2 * h0 + h1) / (h0 * (h0 + h1)))
                   + f[..., 1] * ((h0 + h1) / (h0 * h1))
                   + f[..., 2] * (-h0 / (h1 * (h0 + h1))))
    hn, hn1 = x[-1] - x[-2], x[-2] - x[-3]
    out[..., -1] = (f[..., -1] * ((2 * hn + hn1) / (hn * (hn + hn1)))
                    + f[..., -2] * (-(hn + hn1) / (hn * hn1))
                    + f[..., -3] * (hn / (hn1 * (hn + hn1))))
    return np.moveaxis(out, -1, axis)


def derivative_matrix_apply(f, x, order: int, axis: int = -1):
    """Apply d/dx ``order`` times by repeated second-order differencing."""
    out = f
    for _ in range(order):
        out = radial_derivative(out, x, axis=axis)
    return out
