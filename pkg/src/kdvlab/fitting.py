"""Log-log least-squares rate fits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import DegenerateFit, ZeroError


@dataclass(frozen=True)
class RateFit:
    """``log err = slope * log eps + intercept`` fitted by ordinary least squares."""

    slope: float
    intercept: float
    residual_rms: float
    points: Tuple[Tuple[float, float], ...]

    def predict(self, epsilon):
        return np.exp(self.intercept) * np.asarray(epsilon, dtype=float) ** self.slope

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual_rms": self.residual_rms,
            "points": [list(p) for p in self.points],
        }


def fit_rate(points: Iterable[Tuple[float, float]]) -> RateFit:
    """Fit ``err ~ C eps^slope`` to at least three ``(eps, err)`` pairs."""
    pts = tuple((float(e), float(r)) for e, r in points)
    if len(pts) < 3:
        raise DegenerateFit(f"need at least 3 points, got {len(pts)}")
    eps = np.array([p[0] for p in pts])
    err = np.array([p[1] for p in pts])
    if np.any(~np.isfinite(err)) or np.any(err <= 0):
        raise ZeroError("every error must be positive and finite for a log-log fit")
    if np.any(eps <= 0):
        raise DegenerateFit("epsilon values must be positive")
    x, y = np.log(eps), np.log(err)
    if np.ptp(x) == 0:
        raise DegenerateFit("all epsilon values are equal")
    A = np.column_stack((x, np.ones_like(x)))
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    return RateFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))), pts)
