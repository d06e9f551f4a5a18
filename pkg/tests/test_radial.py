"""Channel Hamiltonian assembly, unitary evolution, and bound-state spectra."""

import numpy as np
import pytest

from dcdiff import spinor
from dcdiff.angular import ChannelIndex, spherical_spinor
from dcdiff.errors import DomainError
from dcdiff.indicial import PhysicalParams
from dcdiff.radial import (
    ChannelEvolver,
    RadialChannelState,
    RadialGrid,
    bound_states,
    build_hamiltonian,
    evolve_cn,
    evolve_exact,
)


def sommerfeld_energy(Z, kappa, n_r, m=1.0):
    """Independent closed-form oracle for Dirac-Coulomb levels (|Z| attractive)."""
    gam = np.sqrt(kappa * kappa - Z * Z)
    return m * (1.0 + (Z / (n_r + gam)) ** 2) ** -0.5


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(ValueError):
        RadialGrid(32, 10.0, 2.0)
    with pytest.raises(ValueError):
        RadialGrid(128, 10.0, 1.0)
    g = RadialGrid(128, 10.0, 2.0)
    assert g.r_int[0] <= 10.0 * (1.0 / 128) ** 2 + 1e-15
    assert np.all(np.diff(g.r_int) > 0)
    assert g.dim == 255
    # staggering: half nodes interleave integer nodes
    assert np.all(g.r_half[:-1] < g.r_int) and np.all(g.r_int < g.r_half[1:])


def test_grid_weights_partition_interval():
    g = RadialGrid(256, 8.0, 2.0)
    assert abs(np.sum(g.w_half) - 8.0) < 1e-12


# ---------------------------------------------------------------------------
# symbolic consistency: Cartesian operator vs channel reduction
# ---------------------------------------------------------------------------

def _sample_field(x, ch, f, g):
    r = np.linalg.norm(x)
    ct, ph = x[2] / r, np.arctan2(x[1], x[0])
    out = np.zeros(4, dtype=complex)
    out[:2] = f(r) * spherical_spinor(ch, ct, ph)
    out[2:] = 1j * g(r) * spherical_spinor(ChannelIndex(-ch.kappa, ch.mu), ct, ph)
    return out


def _cartesian_B(x, ch, f, g, params, delta):
    out = params.a0(np.array([np.linalg.norm(x)]))[0] * _sample_field(x, ch, f, g)
    out = out + params.m * (spinor.BETA @ _sample_field(x, ch, f, g))
    for j in range(3):
        ej = np.zeros(3)
        ej[j] = delta
        du = (_sample_field(x + ej, ch, f, g) - _sample_field(x - ej, ch, f, g)) / (2 * delta)
        out = out + spinor.ALPHA[j] @ (-1j * du)
    return out


def _channel_B(x, ch, f, g, fp, gp, params):
    r = np.linalg.norm(x)
    ct, ph = x[2] / r, np.arctan2(x[1], x[0])
    F, G = r * f(r), r * g(r)
    Fp, Gp = f(r) + r * fp(r), g(r) + r * gp(r)
    a0 = params.a0(np.array([r]))[0]
    EF = (a0 + params.m) * F - Gp + ch.kappa / r * G
    EG = Fp + ch.kappa / r * F + (a0 - params.m) * G
    out = np.zeros(4, dtype=complex)
    out[:2] = EF / r * spherical_spinor(ch, ct, ph)
    out[2:] = 1j * EG / r * spherical_spinor(ChannelIndex(-ch.kappa, ch.mu), ct, ph)
    return out


@pytest.mark.parametrize("kappa,Z,m", [(1, 0.3, 1.0), (-1, 0.3, 1.0), (2, 0.5, 0.0)])
def test_channel_reduction_matches_cartesian_operator(kappa, Z, m):
    ch = ChannelIndex(kappa, 0.5)
    params = PhysicalParams(Z=Z, m=m)
    f = lambda r: np.exp(-((r - 2.0) ** 2))
    fp = lambda r: -2.0 * (r - 2.0) * f(r)
    g = lambda r: 0.7 * r * np.exp(-((r - 2.0) ** 2))
    gp = lambda r: 0.7 * (1.0 - 2.0 * r * (r - 2.0)) * np.exp(-((r - 2.0) ** 2))

    rng = np.random.RandomState(5)
    points = []
    for _ in range(8):
        x = rng.normal(size=3)
        points.append(x * (1.6 + 0.8 * rng.rand()) / np.linalg.norm(x))

    errs = []
    for delta in (1e-2, 5e-3):
        worst = 0.0
        for x in points:
            ref = _channel_B(x, ch, f, g, fp, gp, params)
            got = _cartesian_B(x, ch, f, g, params, delta)
            worst = max(worst, np.linalg.norm(got - ref) / np.linalg.norm(ref))
        errs.append(worst)
    # second order in the stencil spacing
    assert errs[0] < 5e-4
    assert errs[1] < errs[0]
    assert 2.8 < errs[0] / errs[1] < 5.5


# ---------------------------------------------------------------------------
# Hamiltonian properties
# ---------------------------------------------------------------------------

def test_hermiticity_random_pairs():
    g = RadialGrid(256, 10.0, 2.0)
    H = build_hamiltonian(ChannelIndex(-2, 0.5), PhysicalParams(Z=0.4, m=1.0), g)
    rng = np.random.RandomState(0)
    hnorm = H.norm_estimate()
    for _ in range(20):
        x = rng.normal(size=g.dim) + 1j * rng.normal(size=g.dim)
        y = rng.normal(size=g.dim) + 1j * rng.normal(size=g.dim)
        lhs = np.vdot(H.matvec(x), y)
        rhs = np.vdot(x, H.matvec(y))
        assert abs(lhs - rhs) <= 1e-12 * hnorm * np.linalg.norm(x) * np.linalg.norm(y)


def test_refuses_supercritical_Z():
    g = RadialGrid(128, 10.0, 2.0)
    with pytest.raises(DomainError):
        build_hamiltonian(ChannelIndex(1, 0.5), PhysicalParams(Z=np.sqrt(3) / 2, m=0.0), g)


def test_warns_on_weakly_resolved_indicial_exponent():
    g = RadialGrid(128, 10.0, 2.0)
    with pytest.warns(RuntimeWarning):
        build_hamiltonian(ChannelIndex(1, 0.5), PhysicalParams(Z=0.8, m=0.0), g)


def test_free_squared_acts_as_radial_wave_operator():
    # H^2 on (F, 0) should approximate -F'' + kappa(kappa+1)/r^2 F at 2nd order
    kappa = 2
    errs = []
    for n in (512, 1024):
        g = RadialGrid(n, 10.0, 2.0)
        H = build_hamiltonian(ChannelIndex(kappa, 0.5), PhysicalParams(Z=0.0, m=0.0), g)
        r = g.r_int
        F = np.exp(-((r - 5.0) ** 2))
        state = RadialChannelState(F.astype(complex), np.zeros(g.n, dtype=complex),
                                  ChannelIndex(kappa, 0.5), g)
        w = H.matvec(H.matvec(state.to_vector()))
        out = RadialChannelState.from_vector(w, state.channel, g)
        Fpp = (4.0 * (r - 5.0) ** 2 - 2.0) * F
        expect = -Fpp + kappa * (kappa + 1) / r ** 2 * F
        window = (r > 3.0) & (r < 7.0)
        scale = np.max(np.abs(expect[window]))
        errs.append(np.max(np.abs(out.F[window] - expect[window])) / scale)
        assert np.max(np.abs(out.G)) < 1e-12 * scale
    assert errs[1] < errs[0] / 3.0


def test_massless_free_spectrum_symmetric():
    from scipy.linalg import eigvalsh_tridiagonal
    g = RadialGrid(128, 10.0, 2.0)
    for kappa in (1, -2):
        H = build_hamiltonian(ChannelIndex(kappa, 0.5), PhysicalParams(Z=0.0, m=0.0), g)
        ev = eigvalsh_tridiagonal(H.diag, H.offdiag)
        assert np.max(np.abs(np.sort(ev) + np.sort(-ev)[::-1])) < 1e-11 * H.norm_estimate()


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def _bump_state(g, ch, center=5.0, width=0.6):
    r = g.r_int
    F = np.exp(-((r - center) / width) ** 2).astype(complex)
    G = np.zeros(g.n, dtype=complex)
    return RadialChannelState(F, G, ch, g)


def test_cn_norm_preservation_1000_steps():
    g = RadialGrid(256, 10.0, 2.0)
    rng = np.random.RandomState(1)
    for kappa in (1, -1, 3):
        ch = ChannelIndex(kappa, 0.5)
        H = build_hamiltonian(ch, PhysicalParams(Z=0.4, m=0.0), g)
        v = rng.normal(size=g.dim) + 1j * rng.normal(size=g.dim)
        v /= np.linalg.norm(v)
        w = ChannelEvolver(H, g.uniform_spacing).run(v, 1000)
        assert abs(np.linalg.norm(w) - 1.0) < 1e-10


def test_cn_zero_state_stays_zero():
    g = RadialGrid(128, 10.0, 2.0)
    ch = ChannelIndex(1, 0.5)
    H = build_hamiltonian(ch, PhysicalParams(Z=0.3, m=0.0), g)
    state = RadialChannelState(np.zeros(g.n - 1, dtype=complex),
                               np.zeros(g.n, dtype=complex), ch, g)
    out = evolve_cn(state, H, g.uniform_spacing, 50)
    assert out.norm_sq() == 0.0


def test_cn_second_order_in_dt_against_exact():
    g = RadialGrid(128, 10.0, 2.0)
    ch = ChannelIndex(-1, 0.5)
    H = build_hamiltonian(ch, PhysicalParams(Z=0.3, m=1.0), g)
    state = _bump_state(g, ch)
    t_final = 0.48
    ref = evolve_exact(state, H, t_final)
    errs = []
    for dt in (0.04, 0.02):
        out = evolve_cn(state, H, dt, int(round(t_final / dt)))
        errs.append(np.sqrt(RadialChannelState(out.F - ref.F, out.G - ref.G,
                                               ch, g).norm_sq()))
    ratio = errs[0] / errs[1]
    assert 3.2 <= ratio <= 4.8


def test_cn_rejects_oversized_dt():
    g = RadialGrid(128, 10.0, 2.0)
    H = build_hamiltonian(ChannelIndex(1, 0.5), PhysicalParams(Z=0.0, m=0.0), g)
    with pytest.raises(ValueError):
        ChannelEvolver(H, 10.0 / 128 * 4)


def test_exact_identity_at_t0_and_group_property():
    g = RadialGrid(128, 10.0, 2.0)
    ch = ChannelIndex(2, 0.5)
    H = build_hamiltonian(ch, PhysicalParams(Z=0.2, m=0.5), g)
    state = _bump_state(g, ch)
    out0 = evolve_exact(state, H, 0.0)
    assert np.allclose(out0.F, state.F, atol=1e-12)
    assert np.allclose(out0.G, state.G, atol=1e-12)
    a = evolve_exact(evolve_exact(state, H, 0.3), H, 0.7)
    b = evolve_exact(state, H, 1.0)
    diff = np.sqrt(RadialChannelState(a.F - b.F, a.G - b.G, ch, g).norm_sq())
    assert diff < 1e-10
    assert abs(np.sqrt(b.norm_sq() / state.norm_sq())) - 1.0 < 1e-12


# ---------------------------------------------------------------------------
# bound states
# ---------------------------------------------------------------------------

def test_bound_states_sommerfeld_anchor():
    # attractive coupling of magnitude 0.5 (A0 = -0.5/r in the operator's sign
    # convention); oracle values computed from the closed form
    params = PhysicalParams(Z=-0.5, m=1.0)
    grid = RadialGrid(1024, 40.0, 2.0)
    levels = bound_states(ChannelIndex(-1, 0.5), params, grid, n_levels=2)
    e0 = sommerfeld_energy(0.5, -1, 0)
    e1 = sommerfeld_energy(0.5, -1, 1)
    assert abs(e0 - 0.8660254037844386) < 1e-15
    assert abs(e1 - 0.9659258262890683) < 1e-15
    assert abs(levels[0].extrapolated - e0) / e0 < 1e-6
    assert abs(levels[1].extrapolated - e1) / e1 < 1e-5
    assert levels[0].order > 1.5


def test_free_case_has_no_gap_eigenvalues():
    grid = RadialGrid(512, 40.0, 2.0)
    for kappa in (-1, 1, 2):
        levels = bound_states(ChannelIndex(kappa, 0.5), PhysicalParams(Z=0.0, m=1.0),
                              grid, n_levels=3)
        assert levels == []


def test_charge_conjugation_mirror():
    # spec(H_{-kappa, -Z}) = -spec(H_{kappa, Z}): the repulsive sign binds the
    # mirrored family near -m
    grid = RadialGrid(1024, 40.0, 2.0)
    plus = bound_states(ChannelIndex(1, 0.5), PhysicalParams(Z=0.5, m=1.0), grid,
                        n_levels=8)
    minus = bound_states(ChannelIndex(-1, 0.5), PhysicalParams(Z=-0.5, m=1.0), grid,
                         n_levels=3)
    target = -minus[1].extrapolated
    assert min(abs(lv.extrapolated - target) for lv in plus) < 1e-5
