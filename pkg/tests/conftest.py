import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kdvlab.spectral import Grid, SpectralField

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def grid():
    return Grid(64, 10.0)


def random_real_field(grid, seed, band=None, mean_zero=True):
    """Real field with random coefficients in ``|k| < band`` (Nyquist and, optionally, mean removed)."""
    rng = np.random.default_rng(seed)
    band = grid.n_points // 2 if band is None else band
    u = np.fft.ifft(rng.standard_normal(grid.n_points) + 1j * rng.standard_normal(grid.n_points)).real
    c = np.fft.fft(u)
    c[np.abs(grid.k) >= band] = 0.0
    c[grid.nyquist_index] = 0.0
    if mean_zero:
        c[0] = 0.0
    return SpectralField(grid, c)
