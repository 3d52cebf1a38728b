import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from conftest import random_real_field
from kdvlab.errors import ContractViolation, TemporalAliasing, WindowClipped
from kdvlab.norms import (
    SpaceTimeField,
    Window,
    XsbSpec,
    bump,
    cubic_integral,
    energy_original,
    energy_rescaled,
    l3_norm,
    linear_flow_field,
    sobolev_norm,
    spacetime_l2_norm,
    window_time_grid,
    xsb_mode_energy,
    xsb_norm,
)
from kdvlab.solvers import BoussinesqState, SolverConfig, evolve_boussinesq_direct, theorem_initial_data
from kdvlab.spectral import Grid, SpectralField, project_leq
from kdvlab.symbols import cutoff_N, s_airy, s_eps


def test_sobolev_zero_and_l2(grid):
    assert sobolev_norm(SpectralField.zeros(grid), 3.0) == 0.0
    f = random_real_field(grid, 0)
    assert sobolev_norm(f, 0.0) == pytest.approx(f.l2_norm(), rel=1e-12)


def test_sobolev_single_mode():
    g = Grid(64, 4 * np.pi)  # xi_k = k / 4
    f = SpectralField.from_function(g, lambda x: np.cos(2.0 * x))
    assert sobolev_norm(f, 1.0) == pytest.approx(np.sqrt(5.0) * f.l2_norm(), rel=1e-12)


@given(st.integers(0, 10**6), st.floats(-2, 3), st.floats(0, 2))
def test_sobolev_monotone_in_s(seed, s, ds):
    f = random_real_field(Grid(32, 6.0), seed)
    assert sobolev_norm(f, s + ds) >= sobolev_norm(f, s) * (1 - 1e-14)


def test_cubic_and_l3(grid):
    L = grid.half_length
    f = SpectralField.from_function(grid, lambda x: 0.7 * np.cos(np.pi * x / L))
    assert abs(cubic_integral(f)) < 1e-12
    # int |cos|^3 over a period of length 2L is 8L/(3 pi)
    assert l3_norm(f) == pytest.approx(0.7 * (8 * L / (3 * np.pi)) ** (1 / 3), rel=1e-4)


def test_energy_of_zero(grid):
    z = SpectralField.zeros(grid)
    assert energy_original(z, z) == 0.0
    assert energy_rescaled(BoussinesqState(z, z), 0.3) == 0.0


def test_energy_of_cosine(grid):
    L, a = grid.half_length, 0.8
    u = SpectralField.from_function(grid, lambda x: a * np.cos(np.pi * x / L))
    want = 0.5 * a**2 * L * (np.pi / L) ** 2 + 0.5 * a**2 * L
    assert energy_original(u, SpectralField.zeros(grid)) == pytest.approx(want, rel=1e-12)


def test_rescaled_energy_matches_original_variables():
    # u(X) = eps^2 u_eps(eps X) and d_T u(X) = eps^5 d_t u_eps(eps X); the energies differ by eps^3
    eps, n, L = 0.3, 256, 30.0
    rescaled = Grid(n, L)
    original = Grid(n, L / eps)
    f = lambda x: x * np.exp(-0.5 * x**2)
    w = lambda x: (1 - x**2) * np.exp(-0.5 * x**2) * 0.7  # a mean-zero velocity variable
    wx = lambda x: 0.7 * (x**3 - 3 * x) * np.exp(-0.5 * x**2)
    state = BoussinesqState(SpectralField.from_function(rescaled, f), SpectralField.from_function(rescaled, w))
    u = SpectralField(original, np.fft.fft(eps**2 * f(rescaled.x)))
    dtu = SpectralField(original, np.fft.fft(eps**3 * wx(rescaled.x)))
    assert energy_original(u, dtu) == pytest.approx(eps**3 * energy_rescaled(state, eps), rel=1e-10)


def test_energy_conserved_along_direct_run():
    g = Grid(128, 20.0)
    eps = 0.2
    h = lambda s, a: SpectralField.from_function(g, lambda x: a * (x - s) * np.exp(-0.5 * (x - s) ** 2))
    traj = evolve_boussinesq_direct(theorem_initial_data(h(2, 1.0), h(-2, 0.5), eps), SolverConfig(eps, 1.0, g, n_output=9))
    E = np.array([energy_rescaled(s, eps) for s in traj.snapshots])
    assert np.max(np.abs(E - E[0])) / abs(E[0]) <= 1e-6


# --- windows and space-time norms ---------------------------------------------------------


def test_bump_shape():
    t = np.linspace(-3, 3, 601)
    b = bump(t)
    assert np.all(b[np.abs(t) <= 1] == 1.0)
    assert np.all(b[np.abs(t) >= 2] == 0.0)
    assert np.all((b >= 0) & (b <= 1))
    right = b[t >= 0]
    assert np.all(np.diff(right) <= 0)
    assert np.allclose(b, b[::-1])


def _eta_l2(tw):
    return np.sqrt(integrate.quad(lambda t: bump(t / tw) ** 2, -2 * tw, 2 * tw, points=[-tw, tw])[0])


def test_space_time_field_validation(grid):
    t = np.linspace(0, 1, 16)
    with pytest.raises(ContractViolation):
        SpaceTimeField(grid, t[:8], np.zeros((8, grid.n_points)))
    with pytest.raises(ContractViolation):
        SpaceTimeField(grid, t**2, np.zeros((16, grid.n_points)))
    with pytest.raises(ContractViolation):
        SpaceTimeField(grid, t, np.zeros((16, 3)))
    with pytest.raises(ContractViolation):
        SpaceTimeField(grid, t, np.zeros((16, grid.n_points)), window_scale=0.0)


@pytest.mark.parametrize("kw", [dict(b=1.5), dict(b=-1.0), dict(phase="boussinesq_plus"),
                                dict(phase="convex_plus", epsilon=0.1), dict(phase="convex_plus", epsilon=0.1, theta=2.0)])
def test_xsb_spec_validation(kw):
    base = dict(s=0.0, b=0.6, phase="airy_plus")
    base.update(kw)
    with pytest.raises(ContractViolation):
        XsbSpec(**base)


def test_window_must_fit_in_time_span(grid):
    F = SpaceTimeField(grid, np.linspace(-1, 1, 32), np.zeros((32, grid.n_points)), window_scale=1.0)
    with pytest.raises(WindowClipped):
        xsb_norm(F, XsbSpec(0, 0.5, "airy_plus"))
    assert xsb_norm(F, XsbSpec(0, 0.5, "airy_plus"), Window.NONE) == 0.0


def test_zero_field_has_zero_norm(grid):
    F = SpaceTimeField(grid, np.linspace(-2, 2, 32), np.zeros((32, grid.n_points)))
    assert xsb_norm(F, XsbSpec(1.0, 0.7, "boussinesq_minus", epsilon=0.2)) == 0.0


def test_temporal_aliasing_is_refused():
    g = Grid(64, 10.0)
    u0 = random_real_field(g, 1)
    spec = XsbSpec(0, 0.6, "airy_plus")
    F = linear_flow_field(u0, spec, np.linspace(-2, 2, 32))
    with pytest.raises(TemporalAliasing):
        xsb_norm(F, spec)


@pytest.mark.parametrize("phase,eps", [("airy_plus", None), ("airy_minus", None), ("boussinesq_plus", 0.3), ("boussinesq_minus", 0.1)])
def test_free_wave_with_b_zero_separates(phase, eps):
    g = Grid(64, 10.0)
    u0 = project_leq(random_real_field(g, 2), 3.0)
    spec = XsbSpec(1.0, 0.0, phase, epsilon=eps)
    tw = 0.5
    times = window_time_grid(tw, float(np.max(np.abs(spec.phase_values(g.xi[u0.coeffs != 0])))))
    F = linear_flow_field(u0, spec, times, tw)
    want = _eta_l2(tw) * sobolev_norm(u0, 1.0)
    assert xsb_norm(F, spec) == pytest.approx(want, rel=0.02)


def test_free_wave_sits_on_its_own_surface():
    # with b > 0, the norm on the matching surface is the b = 0 norm up to the window's tails
    g = Grid(64, 10.0)
    u0 = project_leq(random_real_field(g, 3), 2.0)
    plus = XsbSpec(0.0, 0.6, "airy_plus")
    minus = XsbSpec(0.0, 0.6, "airy_minus")
    times = window_time_grid(1.0, 4.0 * float(s_airy(2.0)))
    F = linear_flow_field(u0, plus, times)
    on, off = xsb_norm(F, plus), xsb_norm(F, minus)
    assert on < 1.5 * xsb_norm(F, XsbSpec(0.0, 0.0, "airy_plus"))
    assert off > 1.2 * on


@given(st.integers(0, 10**6))
def test_xsb_with_zero_exponents_is_space_time_l2(seed):
    g = Grid(32, 5.0)
    rng = np.random.default_rng(seed)
    times = np.linspace(-2, 2, 40)
    coeffs = np.stack([random_real_field(g, int(rng.integers(1 << 30))).coeffs for _ in times])
    F = SpaceTimeField(g, times, coeffs)
    for w in (Window.BUMP, Window.NONE):
        assert xsb_norm(F, XsbSpec(0, 0, "airy_plus"), w) == pytest.approx(spacetime_l2_norm(F, w), rel=1e-10)


def _modulated_localized_field(seed, eps, b, tw=0.5):
    g = Grid(256, 25.0)
    N = float(cutoff_N(eps))
    u0 = project_leq(random_real_field(g, seed), N)
    rng = np.random.default_rng(seed)
    times = window_time_grid(tw, float(s_eps(eps, N)) + 10.0)
    # a free wave on a convex-combination surface, with a slow random modulation
    theta = rng.uniform()
    q = theta * s_eps(eps, g.xi) + (1 - theta) * s_airy(g.xi)
    mod = 1 + 0.5 * np.cos(rng.uniform(0, 10) * times + rng.uniform(0, 2 * np.pi))
    coeffs = mod[:, None] * np.exp(-1j * times[:, None] * q[None, :]) * u0.coeffs[None, :]
    return SpaceTimeField(g, times, coeffs, tw)


@pytest.mark.parametrize("eps", [0.2, 0.05, 0.01])
def test_airy_and_boussinesq_norms_are_equivalent_below_cutoff(eps):
    b = 0.6
    for seed in range(3):
        F = _modulated_localized_field(seed, eps, b)
        airy = xsb_norm(F, XsbSpec(0.0, b, "airy_plus"))
        bous = xsb_norm(F, XsbSpec(0.0, b, "boussinesq_plus", epsilon=eps))
        assert 0.5 <= airy / bous <= 2.0
        # the weights differ pointwise by at most (1 + 2^-8)^b, so the norms do too
        delta = 2 * 2.0**-8 * (2 * b)
        for theta in (0.0, 0.5, 1.0):
            conv = xsb_norm(F, XsbSpec(0.0, b, "convex_plus", epsilon=eps, theta=theta))
            assert 1 - delta <= conv / bous <= 1 + delta


def test_carrier_shifts_the_surface():
    g = Grid(32, 5.0)
    u0 = project_leq(random_real_field(g, 4), 2.0)
    spec = XsbSpec(0.0, 0.7, "airy_plus")
    times = window_time_grid(1.0, 40.0)
    rate = 3.0 * g.xi
    plain = linear_flow_field(u0, spec, times)
    modulated = SpaceTimeField(g, times, plain.coeffs * np.exp(1j * times[:, None] * rate[None, :]))
    carried = SpaceTimeField(g, times, plain.coeffs, carrier=rate)
    # the two are different Riemann sums in tau of the same integral, so they agree to quadrature accuracy
    assert xsb_norm(carried, spec) == pytest.approx(xsb_norm(modulated, spec), rel=1e-4)


def test_mode_energies_sum_to_norm(grid):
    F = _modulated_localized_field(5, 0.1, 0.6)
    spec = XsbSpec(0.5, 0.6, "boussinesq_minus", epsilon=0.1)
    E = xsb_mode_energy(F, spec)
    assert np.all(E >= 0)
    assert np.sqrt(E.sum()) == pytest.approx(xsb_norm(F, spec))
