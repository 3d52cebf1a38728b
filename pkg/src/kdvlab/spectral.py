"""Periodic grid and Fourier-coefficient fields.

Every solver in the package stores its state as the DFT of real samples on
``[-L, L)``.  Coefficients are kept in numpy FFT order, so index ``k`` of a
coefficient array corresponds to the lattice frequency ``xi_k = pi*k/L`` with
``k`` taken from ``numpy.fft.fftfreq``.  The forward transform is the plain DFT
sum and the inverse carries the ``1/n`` factor; all norms put the ``dx`` and
``dxi`` weights in explicitly so they approximate their continuum values.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .errors import ContractViolation, MeanNotZero

Multiplier = Union[np.ndarray, Callable[[np.ndarray], np.ndarray], complex, float]

#: relative mean tolerance used by :func:`antiderivative` and the solvers
MEAN_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L, L)`` with ``n_points`` samples."""

    n_points: int
    half_length: float

    def __post_init__(self):
        n = self.n_points
        if int(n) != n or n < 8 or n % 2:
            raise ContractViolation(f"n_points must be an even integer >= 8, got {n!r}")
        if not self.half_length > 0:
            raise ContractViolation(f"half_length must be positive, got {self.half_length!r}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.n_points

    @property
    def dxi(self) -> float:
        return np.pi / self.half_length

    @cached_property
    def x(self) -> np.ndarray:
        return -self.half_length + self.dx * np.arange(self.n_points)

    @cached_property
    def k(self) -> np.ndarray:
        """Integer wavenumbers in FFT order (the Nyquist index is ``-n/2``)."""
        return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points).astype(int)

    @cached_property
    def xi(self) -> np.ndarray:
        return self.dxi * self.k

    @property
    def xi_max(self) -> float:
        return self.dxi * (self.n_points // 2)

    @property
    def nyquist_index(self) -> int:
        return self.n_points // 2

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Modes kept by the 2/3 rule: ``3|k| < n``."""
        return 3 * np.abs(self.k) < self.n_points

    @property
    def dealias_cutoff(self) -> float:
        """Largest frequency for which :func:`dealias_product` is alias free."""
        return self.dxi * self.n_points / 3.0

    def parseval_weight(self) -> float:
        """Weight turning ``sum |c_k|^2`` into the continuum ``L^2`` norm squared."""
        return 2.0 * self.half_length / self.n_points**2


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients of a real periodic function on ``grid``."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.grid.n_points,):
            raise ContractViolation(
                f"coefficient array has shape {c.shape}, expected ({self.grid.n_points},)"
            )
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_points, dtype=complex))

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[np.ndarray], np.ndarray]) -> "SpectralField":
        return forward_transform(func(grid.x), grid)

    def samples(self) -> np.ndarray:
        return inverse_transform(self)

    @property
    def mean_coeff(self) -> complex:
        return self.coeffs[0]

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.parseval_weight() * np.sum(np.abs(self.coeffs) ** 2)))

    def conjugate_symmetry_defect(self) -> float:
        """Largest ``|c(-xi) - conj(c(xi))|`` over paired modes (Nyquist excluded)."""
        c = self.coeffs
        mirrored = np.roll(c[::-1], 1)  # index k -> -k
        defect = np.abs(mirrored - np.conj(c))
        defect[self.grid.nyquist_index] = abs(c[self.grid.nyquist_index].imag)
        return float(defect.max())

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)


@dataclass(frozen=True, eq=False)
class WavePair:
    """Left/right moving components ``(u+, u-)`` at a common time."""

    plus: SpectralField
    minus: SpectralField
    time: float = 0.0

    def __post_init__(self):
        _check_same_grid(self.plus, self.minus)

    @property
    def grid(self) -> Grid:
        return self.plus.grid

    def component(self, sign: int) -> SpectralField:
        return self.plus if sign > 0 else self.minus


def _check_same_grid(f: SpectralField, g: SpectralField) -> None:
    if f.grid != g.grid:
        raise ContractViolation("fields live on different grids")


def forward_transform(samples, grid: Grid) -> SpectralField:
    """Plain DFT of real samples taken at ``grid.x``."""
    samples = np.asarray(samples)
    if samples.shape != (grid.n_points,):
        raise ContractViolation(
            f"expected {grid.n_points} samples, got array of shape {samples.shape}"
        )
    if np.iscomplexobj(samples):
        raise ContractViolation("samples must be real")
    return SpectralField(grid, np.fft.fft(samples))


def inverse_transform(f: SpectralField) -> np.ndarray:
    return np.fft.ifft(f.coeffs).real


def multiplier_values(grid: Grid, m: Multiplier) -> np.ndarray:
    """Evaluate ``m`` on the frequency lattice (arrays and scalars pass through)."""
    if callable(m):
        return np.broadcast_to(np.asarray(m(grid.xi)), (grid.n_points,))
    return np.broadcast_to(np.asarray(m), (grid.n_points,))


def apply_multiplier(f: SpectralField, m: Multiplier) -> SpectralField:
    """Return the field with coefficients ``m(xi_k) * f(xi_k)``."""
    return SpectralField(f.grid, multiplier_values(f.grid, m) * f.coeffs)


def project_leq(f: SpectralField, cutoff: float) -> SpectralField:
    """Sharp truncation to ``|xi| <= cutoff``."""
    mask = np.abs(f.grid.xi) <= cutoff
    return SpectralField(f.grid, np.where(mask, f.coeffs, 0.0))


def project_gt(f: SpectralField, cutoff: float) -> SpectralField:
    """Complementary truncation ``(1 - P_{<=N}) f``."""
    mask = np.abs(f.grid.xi) > cutoff
    return SpectralField(f.grid, np.where(mask, f.coeffs, 0.0))


def derivative(f: SpectralField, order: int = 1) -> SpectralField:
    d = (1j * f.grid.xi) ** order
    if order % 2:
        d[f.grid.nyquist_index] = 0.0
    return SpectralField(f.grid, d * f.coeffs)


def check_mean_zero(f: SpectralField, what: str = "field") -> None:
    scale = max(f.l2_norm(), np.finfo(float).tiny)
    mean_l2 = abs(f.mean_coeff) * np.sqrt(f.grid.parseval_weight())
    if mean_l2 > MEAN_TOL * scale:
        raise MeanNotZero(f"{what} has mean mode {f.mean_coeff:.3e}; a mean-zero field is required")


def antiderivative(f: SpectralField) -> SpectralField:
    """Mean-zero antiderivative: coefficients divided by ``i xi``, mean set to 0."""
    check_mean_zero(f)
    xi = f.grid.xi
    out = np.zeros_like(f.coeffs)
    nz = xi != 0
    out[nz] = f.coeffs[nz] / (1j * xi[nz])
    out[f.grid.nyquist_index] = 0.0
    return SpectralField(f.grid, out)


def dealias_product_coeffs(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Array-level kernel of :func:`dealias_product` (used by the solvers)."""
    prod = np.fft.ifft(a).real * np.fft.ifft(b).real
    return np.fft.fft(prod) * mask


def dealias_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise product truncated by the 2/3 rule.

    Exact whenever both factors are supported in ``|xi| <= grid.dealias_cutoff``.
    """
    _check_same_grid(f, g)
    return SpectralField(f.grid, dealias_product_coeffs(f.coeffs, g.coeffs, f.grid.dealias_mask))


def inner(f: SpectralField, g: SpectralField) -> complex:
    """Discrete ``L^2`` inner product ``sum f conj(g) dx`` computed in Fourier space."""
    _check_same_grid(f, g)
    return complex(f.grid.parseval_weight() * np.vdot(g.coeffs, f.coeffs))


def translation_multiplier(grid: Grid, shift: float) -> np.ndarray:
    """Symbol of ``f(x) -> f(x + shift)`` (that is ``exp(shift * d/dx)``), Nyquist zeroed."""
    m = np.exp(1j * shift * grid.xi)
    m[grid.nyquist_index] = 0.0
    return m
