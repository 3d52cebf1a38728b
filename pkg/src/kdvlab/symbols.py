"""Dispersion symbols of the rescaled Boussinesq and Airy flows.

All evaluations use cancellation-free forms: ``s_eps`` as ``xi^3/(1+<eps xi>)``
and ``1 - 1/<eps xi>`` through its rationalized expression, since the defining
forms subtract nearly equal numbers exactly in the small ``eps*xi`` regime.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractViolation, OutOfCutoff
from .spectral import Grid


def japanese(x):
    """``<x> = sqrt(1 + x^2)``."""
    return np.sqrt(1.0 + np.square(x))


def _check_eps(epsilon):
    if not 0.0 < np.min(epsilon) or np.max(epsilon) > 1.0:
        raise ContractViolation(f"epsilon must lie in (0, 1], got {epsilon!r}")


def s_eps(epsilon, xi):
    """Boussinesq phase ``xi (<eps xi> - 1) / eps^2`` evaluated as ``xi^3 / (1 + <eps xi>)``."""
    _check_eps(epsilon)
    xi = np.asarray(xi, dtype=float)
    return xi * xi * xi / (1.0 + japanese(epsilon * xi))


def s_airy(xi):
    """Airy phase ``xi^3 / 2``."""
    xi = np.asarray(xi, dtype=float)
    return 0.5 * (xi * xi * xi)


def s_eps_derivatives(epsilon, xi):
    """First three derivatives of :func:`s_eps` in ``xi``.

    ``s' = xi^2/(1+<eps xi>) + xi^2/<eps xi>``, ``s'' = xi (1 + 2<eps xi>^2)/<eps xi>^3``
    and ``s''' = 3/<eps xi>^5``.
    """
    _check_eps(epsilon)
    xi = np.asarray(xi, dtype=float)
    g = japanese(epsilon * xi)
    d1 = xi**2 / (1.0 + g) + xi**2 / g
    d2 = xi * (1.0 + 2.0 * g**2) / g**3
    d3 = 3.0 / g**5
    return d1, d2, d3


def cutoff_N(epsilon):
    """Sharp frequency cutoff ``N(eps) = eps^(-2/5) / 2``."""
    _check_eps(epsilon)
    return 0.5 * np.asarray(epsilon, dtype=float) ** (-0.4)


def symbol_gap_bound(epsilon, xi, *, check_cutoff=True):
    """Return ``(s_eps - s, eps^2 |xi|^5 / 8)``.

    The gap is evaluated as ``-eps^2 xi^5 / (2 (1 + <eps xi>)^2)``, which shares
    its numerator with the bound, so ``|gap| <= bound`` holds in floating point.
    """
    _check_eps(epsilon)
    xi = np.asarray(xi, dtype=float)
    if check_cutoff and np.any(np.abs(xi) > cutoff_N(epsilon)):
        raise OutOfCutoff("symbol_gap_bound requires |xi| <= N(eps)")
    numer = np.asarray(epsilon, dtype=float) ** 2 * np.abs(xi) ** 5
    denom = 2.0 * (1.0 + japanese(epsilon * xi)) ** 2
    gap = -np.sign(xi) * (numer / denom)
    return gap, numer / 8.0


def low_pass_multiplier_gap(epsilon, xi):
    """``1 - 1/<eps xi>`` computed as ``eps^2 xi^2 / (<eps xi> (1 + <eps xi>))``."""
    _check_eps(epsilon)
    xi = np.asarray(xi, dtype=float)
    g = japanese(epsilon * xi)
    return (epsilon * xi) ** 2 / (g * (1.0 + g))


class SymbolKind(str, Enum):
    BOUSSINESQ_PLUS = "boussinesq_plus"
    BOUSSINESQ_MINUS = "boussinesq_minus"
    AIRY_PLUS = "airy_plus"
    AIRY_MINUS = "airy_minus"
    HALF_WAVE_TRANSLATION = "half_wave_translation"


@dataclass(frozen=True, eq=False)
class DispersionSymbol:
    """Tabulated multiplier values on a grid's frequency lattice.

    For the four flow kinds ``values`` holds the real phase ``p(xi)`` of the
    propagator ``exp(-i t p(xi))``, i.e. ``+-s_eps`` or ``+-s``.  For
    ``half_wave_translation`` it holds the real rate ``2 xi / eps^2`` of the
    unit-modulus multiplier ``exp(+-2 i t xi / eps^2)``.
    """

    epsilon: float
    kind: SymbolKind
    values: np.ndarray

    @classmethod
    def tabulate(cls, grid: Grid, kind, epsilon: float = 1.0) -> "DispersionSymbol":
        kind = SymbolKind(kind)
        xi = grid.xi
        if kind is SymbolKind.BOUSSINESQ_PLUS:
            vals = s_eps(epsilon, xi)
        elif kind is SymbolKind.BOUSSINESQ_MINUS:
            vals = -s_eps(epsilon, xi)
        elif kind is SymbolKind.AIRY_PLUS:
            vals = s_airy(xi)
        elif kind is SymbolKind.AIRY_MINUS:
            vals = -s_airy(xi)
        else:
            _check_eps(epsilon)
            vals = 2.0 * xi / epsilon**2
        vals = np.array(vals, dtype=float)
        vals.setflags(write=False)
        return cls(float(epsilon), kind, vals)

    def propagator(self, t: float, sign: int = 1) -> np.ndarray:
        """``exp(-i t p)`` for the flows; ``exp(sign * i t rate)`` for the translation."""
        if self.kind is SymbolKind.HALF_WAVE_TRANSLATION:
            return np.exp(1j * sign * t * self.values)
        return np.exp(-1j * t * self.values)


def boussinesq_propagator(grid: Grid, epsilon: float, sign: int, t: float) -> np.ndarray:
    """Symbol of ``S_eps^{sign}(t) = exp(-sign i t s_eps(xi))``."""
    return np.exp(-1j * sign * t * s_eps(epsilon, grid.xi))


def airy_propagator(grid: Grid, sign: int, t: float) -> np.ndarray:
    """Symbol of ``S^{sign}(t) = exp(-sign i t xi^3 / 2)``."""
    return np.exp(-1j * sign * t * s_airy(grid.xi))
