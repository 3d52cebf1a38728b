"""Exponential Runge-Kutta steppers for ``y' = L y + N(t, y)`` with exact linear part.

``L`` is either diagonal in Fourier space (:class:`DiagonalLinear`) or the 2x2
wave block of the first-order Boussinesq system (:class:`WaveBlockLinear`).
Both expose ``operator(h, fn)``, returning a callable that applies ``fn(h L)``.
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .errors import SolutionBlowup

_CONTOUR_POINTS = 32
_CONTOUR = np.exp(2j * np.pi * (np.arange(_CONTOUR_POINTS) + 0.5) / _CONTOUR_POINTS)


def _contour_mean(z, direct):
    # phi functions are entire, so the mean over a unit circle around z is exact
    # up to trapezoid error, and avoids the cancellation of the direct formulas near 0
    z = np.asarray(z, dtype=complex)
    pts = z[..., None] + _CONTOUR
    return direct(pts).mean(axis=-1)


def phi1(z):
    return _contour_mean(z, lambda w: (np.exp(w) - 1.0) / w)


def phi2(z):
    return _contour_mean(z, lambda w: (np.exp(w) - 1.0 - w) / w**2)


def phi3(z):
    return _contour_mean(z, lambda w: (np.exp(w) - 1.0 - w - 0.5 * w**2) / w**3)


class DiagonalLinear:
    """Linear part acting mode by mode: ``(L y)_k = symbol_k y_k``."""

    def __init__(self, symbol):
        self.symbol = np.asarray(symbol, dtype=complex)

    def operator(self, h: float, fn=np.exp) -> Callable[[np.ndarray], np.ndarray]:
        vals = fn(h * self.symbol)
        return lambda y: vals * y


class WaveBlockLinear:
    """Per-mode block ``[[0, i xi/eps^2], [i xi <eps xi>^2/eps^2, 0]]`` on ``(u, w)``.

    The exponential is applied in cos/sin form; other functions of ``hL`` go
    through the eigenvectors ``(1, +-g)`` with eigenvalues ``+-i omega``.
    """

    def __init__(self, omega, g):
        self.omega = np.asarray(omega, dtype=float)
        self.g = np.asarray(g, dtype=float)

    def operator(self, h: float, fn=np.exp) -> Callable[[np.ndarray], np.ndarray]:
        g = self.g
        if fn is np.exp:
            c = np.cos(self.omega * h)
            sn = np.sin(self.omega * h)

            def apply(y):
                u, w = y
                return np.stack((c * u + 1j * sn / g * w, 1j * g * sn * u + c * w))

            return apply
        fp = fn(1j * self.omega * h)
        fm = fn(-1j * self.omega * h)

        def apply(y):
            u, w = y
            a = 0.5 * (u + w / g)
            b = 0.5 * (u - w / g)
            a, b = fp * a, fm * b
            return np.stack((a + b, g * (a - b)))

        return apply


NonlinearFn = Callable[[float, np.ndarray], np.ndarray]


class LawsonRK4:
    """Classical RK4 in the interaction picture (integrating-factor RK4)."""

    def __init__(self, linear, nonlinear: NonlinearFn, dt: float):
        self.dt = dt
        self.nonlinear = nonlinear
        self.full = linear.operator(dt)
        self.half = linear.operator(0.5 * dt)

    def step(self, t: float, y: np.ndarray) -> np.ndarray:
        h, N, E, E2 = self.dt, self.nonlinear, self.full, self.half
        k1 = N(t, y)
        y_half = E2(y)
        k2 = N(t + 0.5 * h, y_half + 0.5 * h * E2(k1))
        k3 = N(t + 0.5 * h, y_half + 0.5 * h * k2)
        Ey = E(y)
        k4 = N(t + h, Ey + h * E2(k3))
        return Ey + (h / 6.0) * (E(k1) + 2.0 * E2(k2 + k3) + k4)


class ETDRK4:
    """Cox-Matthews exponential time differencing RK4."""

    def __init__(self, linear, nonlinear: NonlinearFn, dt: float):
        h = dt
        self.dt = dt
        self.nonlinear = nonlinear
        self.full = linear.operator(h)
        self.half = linear.operator(0.5 * h)
        self.q = linear.operator(0.5 * h, lambda z: 0.5 * h * phi1(z))
        self.f1 = linear.operator(h, lambda z: h * (phi1(z) - 3 * phi2(z) + 4 * phi3(z)))
        self.f2 = linear.operator(h, lambda z: h * (phi2(z) - 2 * phi3(z)))
        self.f3 = linear.operator(h, lambda z: h * (4 * phi3(z) - phi2(z)))

    def step(self, t: float, y: np.ndarray) -> np.ndarray:
        h, N = self.dt, self.nonlinear
        nu = N(t, y)
        e2y = self.half(y)
        a = e2y + self.q(nu)
        na = N(t + 0.5 * h, a)
        b = e2y + self.q(na)
        nb = N(t + 0.5 * h, b)
        c = self.half(a) + self.q(2.0 * nb - nu)
        nc = N(t + h, c)
        return self.full(y) + self.f1(nu) + 2.0 * self.f2(na + nb) + self.f3(nc)


SCHEMES = {"lawson_rk4": LawsonRK4, "etd_rk4": ETDRK4}


def make_stepper(scheme: str, linear, nonlinear: NonlinearFn, dt: float):
    try:
        cls = SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {sorted(SCHEMES)}") from None
    return cls(linear, nonlinear, dt)


def march(
    stepper,
    y0: np.ndarray,
    output_times: Sequence[float],
    steps_per_interval: int,
    step_callback: Optional[Callable[[float, np.ndarray], None]] = None,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> list:
    """Advance ``y0`` from ``output_times[0]`` and collect the state at every output time.

    Raises :class:`SolutionBlowup` as soon as a non-finite value appears.
    """
    y = np.array(y0, dtype=complex)
    out = [y.copy()]
    t = float(output_times[0])
    dt = stepper.dt
    n_step = 0
    for t_next in output_times[1:]:
        for _ in range(steps_per_interval):
            y_new = stepper.step(t, y)
            if project is not None:
                y_new = project(y_new)
            if not np.isfinite(y_new).all():
                raise SolutionBlowup(f"non-finite state after step {n_step + 1}", last_good_time=t)
            y = y_new
            n_step += 1
            t = float(output_times[0]) + n_step * dt
            if step_callback is not None:
                step_callback(t, y)
        t = float(t_next)
        out.append(y.copy())
    return out
