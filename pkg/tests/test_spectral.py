import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_real_field
from kdvlab.errors import ContractViolation, MeanNotZero
from kdvlab.spectral import (
    Grid,
    SpectralField,
    WavePair,
    antiderivative,
    apply_multiplier,
    dealias_product,
    derivative,
    forward_transform,
    inner,
    inverse_transform,
    project_gt,
    project_leq,
    translation_multiplier,
)
from kdvlab.symbols import cutoff_N

seeds = st.integers(0, 2**31 - 1)


def test_grid_lattice(grid):
    assert grid.dx == pytest.approx(20.0 / 64)
    assert grid.dxi == pytest.approx(np.pi / 10.0)
    assert sorted(grid.k) == list(range(-32, 32))
    assert grid.x[0] == -10.0 and grid.x[-1] < 10.0
    # symmetric except the single Nyquist mode
    nonnyq = np.delete(grid.xi, grid.nyquist_index)
    assert np.allclose(np.sort(nonnyq), -np.sort(nonnyq)[::-1])


@pytest.mark.parametrize("n", [6, 7, 9, 0])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ContractViolation):
        Grid(n, 1.0)


def test_grid_rejects_bad_length():
    with pytest.raises(ContractViolation):
        Grid(16, -1.0)


def test_constant_maps_to_mean_only(grid):
    f = forward_transform(np.ones(grid.n_points), grid)
    assert f.coeffs[0] == pytest.approx(grid.n_points)
    assert np.max(np.abs(f.coeffs[1:])) < 1e-12


def test_cosine_has_two_equal_coefficients(grid):
    f = SpectralField.from_function(grid, lambda x: np.cos(np.pi * x / grid.half_length))
    mags = np.abs(f.coeffs)
    one, minus_one = np.flatnonzero(grid.k == 1)[0], np.flatnonzero(grid.k == -1)[0]
    assert mags[one] == pytest.approx(mags[minus_one]) == pytest.approx(grid.n_points / 2)
    mags[[one, minus_one]] = 0
    assert mags.max() < 1e-10


def test_forward_rejects_complex_and_wrong_shape(grid):
    with pytest.raises(ContractViolation):
        forward_transform(np.ones(grid.n_points) * 1j, grid)
    with pytest.raises(ContractViolation):
        forward_transform(np.ones(grid.n_points + 2), grid)


@given(seeds)
def test_round_trip(seed):
    g = Grid(64, 7.0)
    u = np.random.default_rng(seed).standard_normal(g.n_points)
    assert np.max(np.abs(inverse_transform(forward_transform(u, g)) - u)) <= 1e-12 * max(1, np.abs(u).max())


@given(seeds, st.sampled_from([8, 32, 128]), st.floats(0.5, 100.0))
def test_parseval(seed, n, L):
    g = Grid(n, L)
    u = np.random.default_rng(seed).standard_normal(n)
    f = forward_transform(u, g)
    physical = np.sqrt(np.sum(u**2) * g.dx)
    assert f.l2_norm() == pytest.approx(physical, rel=1e-12)


@given(seeds)
def test_conjugate_symmetry_of_real_data(seed):
    g = Grid(32, 3.0)
    f = forward_transform(np.random.default_rng(seed).standard_normal(32), g)
    assert f.conjugate_symmetry_defect() < 1e-12 * np.abs(f.coeffs).max()


def test_identity_multiplier(grid):
    f = random_real_field(grid, 1)
    assert np.array_equal(apply_multiplier(f, 1.0).coeffs, f.coeffs)


def test_derivative_multiplier_on_sine(grid):
    L = grid.half_length
    f = SpectralField.from_function(grid, lambda x: np.sin(np.pi * x / L))
    df = apply_multiplier(f, lambda xi: 1j * xi)
    assert np.allclose(df.samples(), (np.pi / L) * np.cos(np.pi * grid.x / L), atol=1e-12)
    assert np.allclose(derivative(f).samples(), df.samples(), atol=1e-12)


@given(seeds, st.floats(0.0, 8.0))
def test_projection_idempotent_and_self_adjoint(seed, N):
    g = Grid(64, 10.0)
    f, h = random_real_field(g, seed), random_real_field(g, seed + 1)
    once = project_leq(f, N)
    assert np.array_equal(project_leq(once, N).coeffs, once.coeffs)
    assert inner(project_leq(f, N), h) == pytest.approx(inner(f, project_leq(h, N)), abs=1e-12)
    # complementary pieces add back up and are orthogonal
    assert np.allclose((once + project_gt(f, N)).coeffs, f.coeffs)
    assert abs(inner(once, project_gt(f, N))) < 1e-12


def test_projection_limits(grid):
    f = random_real_field(grid, 2, mean_zero=False)
    assert np.array_equal(project_leq(f, grid.xi_max).coeffs, f.coeffs)
    p0 = project_leq(f, 0.0)
    assert p0.coeffs[0] == f.coeffs[0]
    assert np.count_nonzero(p0.coeffs) == 1


def test_projection_at_cutoff_for_eps_1_32():
    g = Grid(64, 4 * np.pi)  # xi_k = k/4, so |xi| <= 2 keeps |k| <= 8
    N = cutoff_N(1 / 32)
    assert N == pytest.approx(2.0, rel=1e-15)
    f = SpectralField(g, np.ones(64, dtype=complex))
    kept = np.flatnonzero(project_leq(f, N).coeffs)
    assert set(np.abs(g.k[kept])) == set(range(9))


def test_antiderivative_of_sine(grid):
    L = grid.half_length
    f = SpectralField.from_function(grid, lambda x: np.sin(np.pi * x / L))
    F = antiderivative(f)
    assert np.allclose(F.samples(), -(L / np.pi) * np.cos(np.pi * grid.x / L), atol=1e-12)


def test_antiderivative_of_zero(grid):
    assert not np.any(antiderivative(SpectralField.zeros(grid)).coeffs)


def test_antiderivative_requires_mean_zero(grid):
    with pytest.raises(MeanNotZero):
        antiderivative(SpectralField.from_function(grid, lambda x: 1.0 + 0 * x))


@given(seeds)
def test_derivative_undoes_antiderivative(seed):
    g = Grid(64, 10.0)
    f = random_real_field(g, seed)
    back = derivative(antiderivative(f))
    assert np.max(np.abs(back.coeffs - f.coeffs)) <= 1e-10 * np.abs(f.coeffs).max()


def test_square_of_cosine(grid):
    L = grid.half_length
    f = SpectralField.from_function(grid, lambda x: np.cos(np.pi * x / L))
    p = dealias_product(f, f).samples()
    assert np.allclose(p, 0.5 + 0.5 * np.cos(2 * np.pi * grid.x / L), atol=1e-12)


def test_product_with_zero(grid):
    f = random_real_field(grid, 3)
    assert not np.any(dealias_product(f, SpectralField.zeros(grid)).coeffs)


def _brute_convolution(a, b, grid):
    # product coefficients of the samples: (1/n) sum_j a_j b_{m-j}, indices mod n
    n = grid.n_points
    out = np.zeros(n, dtype=complex)
    for i in range(n):
        for j in range(n):
            out[(i + j) % n] += a[i] * b[j]
    return out / n


@pytest.mark.parametrize("n", [16, 32, 64])
@pytest.mark.parametrize("trial", range(34))  # 3 x 34 seeded trials
def test_dealiased_product_equals_convolution(n, trial):
    g = Grid(n, 5.0)
    band = n // 6 + 1  # factors in |k| <= n/6, product inside the 2/3 mask
    f = random_real_field(g, 1000 * n + trial, band=band, mean_zero=False)
    h = random_real_field(g, 2000 * n + trial, band=band, mean_zero=False)
    got = dealias_product(f, h).coeffs
    want = _brute_convolution(f.coeffs, h.coeffs, g)
    assert np.max(np.abs(got - want)) <= 1e-12 * max(1.0, np.abs(want).max())


def test_translation_is_unit_modulus_and_shifts(grid):
    m = translation_multiplier(grid, 1.7)
    mod = np.abs(np.delete(m, grid.nyquist_index))
    assert np.all(mod == 1.0) or np.allclose(mod, 1.0, rtol=0, atol=1e-15)
    f = SpectralField.from_function(grid, lambda x: np.exp(-x**2))
    shifted = apply_multiplier(f, m).samples()
    assert np.allclose(shifted, np.exp(-(grid.x + 1.7) ** 2), atol=1e-10)


def test_fields_on_different_grids_do_not_mix():
    a = SpectralField.zeros(Grid(16, 1.0))
    b = SpectralField.zeros(Grid(16, 2.0))
    with pytest.raises(ContractViolation):
        a + b
    with pytest.raises(ContractViolation):
        WavePair(a, b)


def test_wrong_coefficient_length():
    with pytest.raises(ContractViolation):
        SpectralField(Grid(16, 1.0), np.zeros(8))
