"""Time evolution of the rescaled Boussinesq equation and its KdV limit.

Four models share one grid and one stepping machinery:

* the rescaled Boussinesq equation as a first-order system in ``(u, w)`` with
  ``w = eps^2 d_x^{-1} d_t u`` (``evolve_boussinesq_direct``),
* the coupled system for the right/left movers ``(u+, u-)`` whose linear flows
  are ``S_eps^{+-}(t) = exp(-+ i t s_eps(xi))`` (``evolve_coupled_system``),
* the frequency-localized decoupled equation (``evolve_decoupled_localized``),
* the two KdV equations ``2 w_t -+ w_xxx -+ (w^2)_x = 0`` (``evolve_kdv``).

Every linear part is propagated exactly by Fourier multipliers; only the
quadratic terms are discretized in time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional

import numpy as np

from .errors import ContractViolation
from .integrators import DiagonalLinear, WaveBlockLinear, make_stepper, march
from .spectral import (
    Grid,
    SpectralField,
    WavePair,
    apply_multiplier,
    check_mean_zero,
    project_leq,
)
from .symbols import cutoff_N, japanese, s_airy, s_eps

MODELS = ("boussinesq", "coupled", "localized", "kdv")


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters shared by all solvers.

    ``dt`` is an upper bound on the step; the step actually used is the largest
    value not exceeding it that divides the output spacing.  When ``dt`` is
    None it is chosen from the oscillation budget: the fastest nonlinear phase
    may advance at most ``dt_budget`` radians per step.
    """

    epsilon: float
    t_final: float
    grid: Grid
    dt: Optional[float] = None
    scheme: str = "lawson_rk4"
    dealias: bool = True
    nonlinear: bool = True
    dt_budget: float = 0.5
    n_output: int = 64
    dt_cap: float = 1e-2

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ContractViolation(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not self.t_final > 0:
            raise ContractViolation("t_final must be positive")
        if self.dt is not None and not 0 < self.dt <= self.t_final:
            raise ContractViolation("dt must satisfy 0 < dt <= t_final")
        if self.n_output < 2:
            raise ContractViolation("n_output must be at least 2")

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    @property
    def output_times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, self.n_output)

    def phase_rate(self, model: str) -> float:
        """Fastest interaction phase (rad per unit time) on the lattice for ``model``."""
        xi = np.abs(self.grid.xi)
        if model in ("boussinesq", "coupled"):
            return float(np.max(2.0 * xi / self.epsilon**2 + np.abs(s_eps(self.epsilon, xi))))
        if model == "localized":
            kept = xi[xi <= cutoff_N(self.epsilon)]
            return float(np.max(np.abs(s_eps(self.epsilon, kept)))) if kept.size else 0.0
        if model == "kdv":
            return float(np.max(np.abs(s_airy(xi))))
        raise ValueError(f"unknown model {model!r}")

    def steps(self, model: str):
        """Return ``(dt, steps_per_output_interval)`` for ``model``."""
        interval = self.t_final / (self.n_output - 1)
        rate = self.phase_rate(model)
        if self.dt is None:
            dt_max = min(self.dt_budget / rate if rate > 0 else math.inf, self.dt_cap)
        else:
            if self.nonlinear and self.dt * rate > self.dt_budget * (1 + 1e-12):
                raise ContractViolation(
                    f"dt={self.dt:g} advances the fastest phase by {self.dt * rate:.3g} rad, "
                    f"above the budget {self.dt_budget:g}"
                )
            dt_max = self.dt
        n = max(1, math.ceil(interval / dt_max - 1e-9))
        return interval / n, n


@dataclass(frozen=True, eq=False)
class BoussinesqState:
    """Rescaled displacement ``u`` and auxiliary velocity ``w = eps^2 d_x^{-1} d_t u``."""

    u: SpectralField
    w: SpectralField
    time: float = 0.0

    def __post_init__(self):
        if self.u.grid != self.w.grid:
            raise ContractViolation("u and w live on different grids")

    @property
    def grid(self) -> Grid:
        return self.u.grid


@dataclass(frozen=True, eq=False)
class InitialData:
    """Pair of initial profiles with the Sobolev bound they are meant to satisfy."""

    u0_plus: SpectralField
    u0_minus: SpectralField
    sobolev_index: float
    norm_bound: float

    def __post_init__(self):
        from .norms import sobolev_norm

        for f in (self.u0_plus, self.u0_minus):
            if sobolev_norm(f, self.sobolev_index) > self.norm_bound * (1 + 1e-12):
                raise ContractViolation("initial datum exceeds the stated H^s bound")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Snapshots of a solver run at uniformly spaced output times."""

    times: np.ndarray
    snapshots: list
    dt: float
    model: str

    def __len__(self):
        return len(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]

    @property
    def final(self):
        return self.snapshots[-1]


def _zero_nyquist(c: np.ndarray, grid: Grid) -> np.ndarray:
    c = np.array(c, dtype=complex)
    c[..., grid.nyquist_index] = 0.0
    return c


def _product_mask(cfg: SolverConfig) -> np.ndarray:
    g = cfg.grid
    if cfg.dealias:
        return g.dealias_mask.astype(float)
    m = np.ones(g.n_points)
    m[g.nyquist_index] = 0.0
    return m


def theorem_initial_data(u0_plus: SpectralField, u0_minus: SpectralField, epsilon: float) -> BoussinesqState:
    """Rescaled Boussinesq data whose right/left split is ``(u0_plus, u0_minus)``.

    ``u(0) = u0+ + u0-`` and ``eps^2 d_x^{-1} d_t u(0) = <eps d_x>(u0- - u0+)``.
    """
    if u0_plus.grid != u0_minus.grid:
        raise ContractViolation("u0_plus and u0_minus live on different grids")
    check_mean_zero(u0_plus, "u0_plus")
    check_mean_zero(u0_minus, "u0_minus")
    g = japanese(epsilon * u0_plus.grid.xi)
    u = u0_plus + u0_minus
    w = apply_multiplier(u0_minus - u0_plus, g)
    return BoussinesqState(u, w, 0.0)


def split_initial_data(state: BoussinesqState, epsilon: float):
    """Right/left split ``u0+- = (u -+ w / <eps d_x>) / 2`` of a Boussinesq state."""
    check_mean_zero(state.u, "u")
    check_mean_zero(state.w, "w")
    g = japanese(epsilon * state.grid.xi)
    w_over_g = apply_multiplier(state.w, 1.0 / g)
    plus = 0.5 * (state.u - w_over_g)
    minus = 0.5 * (state.u + w_over_g)
    return plus, minus


def reconstruct_full_solution(pair: WavePair, epsilon: float, t: Optional[float] = None) -> SpectralField:
    """``u(t, x) = u+(t, x - t/eps^2) + u-(t, x + t/eps^2)``; translations are exact phases on the torus."""
    t = pair.time if t is None else t
    grid = pair.grid
    phase = np.exp(1j * t * grid.xi / epsilon**2)
    c = np.conj(phase) * pair.plus.coeffs + phase * pair.minus.coeffs
    if t != 0:
        c[grid.nyquist_index] = 0.0
    return SpectralField(grid, c)


StepCallback = Optional[Callable[[float, np.ndarray], None]]


def evolve_boussinesq_direct(state: BoussinesqState, cfg: SolverConfig, step_callback: StepCallback = None) -> Trajectory:
    """Integrate ``u_t = eps^-2 (w)_x``, ``w_t = eps^-2 (1 - eps^2 d_x^2) u_x - (u^2)_x``.

    The linear part is the exact cos/sin propagator of the 2x2 system.
    """
    grid, eps = cfg.grid, cfg.epsilon
    _check_grid(state.grid, cfg)
    xi = grid.xi
    g = japanese(eps * xi)
    linear = WaveBlockLinear(xi * g / eps**2, g)
    dmask = -1j * xi * _product_mask(cfg)

    if cfg.nonlinear:
        def nonlinear(t, y):
            u = np.fft.ifft(y[0]).real
            return np.stack((np.zeros_like(y[0]), dmask * np.fft.fft(u * u)))
    else:
        def nonlinear(t, y):
            return np.zeros_like(y)

    dt, nsteps = cfg.steps("boussinesq")
    stepper = make_stepper(cfg.scheme, linear, nonlinear, dt)
    y0 = _zero_nyquist(np.stack((state.u.coeffs, state.w.coeffs)), grid)
    times = cfg.output_times + state.time
    ys = march(stepper, y0, times, nsteps, step_callback)
    snaps = [BoussinesqState(SpectralField(grid, y[0]), SpectralField(grid, y[1]), float(t)) for t, y in zip(times, ys)]
    return Trajectory(times, snaps, dt, "boussinesq")


def evolve_coupled_system(pair: WavePair, cfg: SolverConfig, coupling: bool = True, step_callback: StepCallback = None) -> Trajectory:
    """Integrate the coupled right/left mover system.

    ``d_t u+- = -+ i s_eps u+- +- (1/2) d_x <eps d_x>^{-1} (u+- + e^{+-2t d_x/eps^2} u-+)^2``.
    ``coupling=False`` drops the translated partner from each square.
    """
    grid, eps = cfg.grid, cfg.epsilon
    _check_grid(pair.grid, cfg)
    xi = grid.xi
    s = s_eps(eps, xi)
    linear = DiagonalLinear(np.stack((-1j * s, 1j * s)))
    dop = 0.5j * xi / japanese(eps * xi) * _product_mask(cfg)
    rate = 2.0 * xi / eps**2

    if not cfg.nonlinear:
        def nonlinear(t, y):
            return np.zeros_like(y)
    elif coupling:
        def nonlinear(t, y):
            shift = np.exp(1j * t * rate)
            fp = np.fft.ifft(y[0] + shift * y[1]).real
            fm = np.fft.ifft(y[1] + np.conj(shift) * y[0]).real
            return np.stack((dop * np.fft.fft(fp * fp), -dop * np.fft.fft(fm * fm)))
    else:
        def nonlinear(t, y):
            fp = np.fft.ifft(y[0]).real
            fm = np.fft.ifft(y[1]).real
            return np.stack((dop * np.fft.fft(fp * fp), -dop * np.fft.fft(fm * fm)))

    dt, nsteps = cfg.steps("coupled")
    stepper = make_stepper(cfg.scheme, linear, nonlinear, dt)
    y0 = _zero_nyquist(np.stack((pair.plus.coeffs, pair.minus.coeffs)), grid)
    times = cfg.output_times + pair.time
    ys = march(stepper, y0, times, nsteps, step_callback)
    snaps = [WavePair(SpectralField(grid, y[0]), SpectralField(grid, y[1]), float(t)) for t, y in zip(times, ys)]
    return Trajectory(times, snaps, dt, "coupled")


def evolve_decoupled_localized(v0: SpectralField, cfg: SolverConfig, sign: int = 1, step_callback: StepCallback = None) -> Trajectory:
    """Frequency-localized decoupled equation for one sign.

    ``d_t v = -+ i s_eps v +- (1/2) P_N d_x <eps d_x>^{-1} (P_N v)^2`` started from ``P_N v0``,
    with ``N = N(eps)``.  Every snapshot is supported in ``|xi| <= N``.
    """
    grid, eps = cfg.grid, cfg.epsilon
    _check_grid(v0.grid, cfg)
    sign = _sign(sign)
    xi = grid.xi
    keep = (np.abs(xi) <= cutoff_N(eps)).astype(float)
    keep[grid.nyquist_index] = 0.0
    linear = DiagonalLinear(-1j * sign * s_eps(eps, xi))
    dop = sign * 0.5j * xi / japanese(eps * xi) * _product_mask(cfg) * keep

    if cfg.nonlinear:
        def nonlinear(t, y):
            v = np.fft.ifft(keep * y).real
            return dop * np.fft.fft(v * v)
    else:
        def nonlinear(t, y):
            return np.zeros_like(y)

    dt, nsteps = cfg.steps("localized")
    stepper = make_stepper(cfg.scheme, linear, nonlinear, dt)
    y0 = keep * v0.coeffs
    times = cfg.output_times
    ys = march(stepper, y0, times, nsteps, step_callback)
    return Trajectory(times, [SpectralField(grid, y) for y in ys], dt, "localized")


def evolve_kdv(w0: SpectralField, sign: int, cfg: SolverConfig, step_callback: StepCallback = None) -> Trajectory:
    """KdV equation ``2 w_t -+ w_xxx -+ (w^2)_x = 0`` with exact Airy propagation."""
    grid = cfg.grid
    _check_grid(w0.grid, cfg)
    sign = _sign(sign)
    xi = grid.xi
    linear = DiagonalLinear(-1j * sign * s_airy(xi))
    dop = sign * 0.5j * xi * _product_mask(cfg)

    if cfg.nonlinear:
        def nonlinear(t, y):
            w = np.fft.ifft(y).real
            return dop * np.fft.fft(w * w)
    else:
        def nonlinear(t, y):
            return np.zeros_like(y)

    dt, nsteps = cfg.steps("kdv")
    stepper = make_stepper(cfg.scheme, linear, nonlinear, dt)
    y0 = _zero_nyquist(w0.coeffs, grid)
    times = cfg.output_times
    ys = march(stepper, y0, times, nsteps, step_callback)
    return Trajectory(times, [SpectralField(grid, y) for y in ys], dt, "kdv")


def _sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def _check_grid(grid: Grid, cfg: SolverConfig) -> None:
    if grid != cfg.grid:
        raise ContractViolation("initial data and SolverConfig use different grids")


def linear_boussinesq_exact(state: BoussinesqState, epsilon: float, t: float) -> BoussinesqState:
    """Closed-form linear evolution of ``(u, w)`` (cos/sin of ``t xi <eps xi>/eps^2``)."""
    xi = state.grid.xi
    g = japanese(epsilon * xi)
    theta = t * xi * g / epsilon**2
    c, sn = np.cos(theta), np.sin(theta)
    u = c * state.u.coeffs + 1j * sn / g * state.w.coeffs
    w = 1j * g * sn * state.u.coeffs + c * state.w.coeffs
    return BoussinesqState(SpectralField(state.grid, u), SpectralField(state.grid, w), state.time + t)


def project_to_cutoff(f: SpectralField, epsilon: float) -> SpectralField:
    return project_leq(f, float(cutoff_N(epsilon)))
