"""Experiment drivers: eps-sweeps for the KdV limit, difference decompositions, energy audits.

All drivers take an :class:`ExperimentConfig`, return plain result objects with
``rows()`` for CSV output and ``summary()`` for JSON, and never touch the file
system themselves; :func:`write_outputs` does that.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ContractViolation, FitError, SolutionBlowup
from .fitting import RateFit, fit_rate
from .norms import energy_rescaled, sobolev_norm
from .spectral import Grid, SpectralField, WavePair, project_gt
from .solvers import (
    SolverConfig,
    evolve_boussinesq_direct,
    evolve_coupled_system,
    evolve_decoupled_localized,
    evolve_kdv,
    reconstruct_full_solution,
    theorem_initial_data,
)
from .symbols import airy_propagator, boussinesq_propagator, cutoff_N

__all__ = [
    "DEFAULT_SWEEP",
    "ExperimentConfig",
    "RateFit",
    "fit_rate",
    "initial_pair",
    "run_kdv_limit_sweep",
    "run_three_flow_decomposition",
    "run_energy_audit",
    "write_outputs",
    "config_hash",
]

#: default sweep eps_j = 0.2 * 2^(-j/2), j = 0..4
DEFAULT_SWEEP = tuple(0.2 * 2.0 ** (-j / 2) for j in range(5))

DATA_SOURCES = ("gaussian", "soliton_seed", "random_hs")
_DATA_ALIASES = {"random-hs": "random_hs", "soliton": "soliton_seed", "soliton-seed": "soliton_seed"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines an experiment's output.

    ``R`` is the ``H^s`` bound used by the uniform-bound monitor; when None it
    is taken as the larger ``H^s`` norm of the two initial profiles.
    """

    epsilon_list: Tuple[float, ...] = DEFAULT_SWEEP
    s: float = 1.0
    R: Optional[float] = None
    T: float = 1.0
    n: int = 256
    L: float = 30.0
    dt_budget: float = 0.5
    data: str = "gaussian"
    seed: int = 0
    amplitude: float = 1.0
    n_output: int = 64
    scheme: str = "lawson_rk4"
    out_dir: str = "results"
    cross_check: bool = False
    epsilon: float = 0.2
    model: str = "coupled"

    def __post_init__(self):
        object.__setattr__(self, "epsilon_list", tuple(float(e) for e in self.epsilon_list))
        object.__setattr__(self, "data", _DATA_ALIASES.get(self.data, self.data))
        if self.data not in DATA_SOURCES:
            raise ContractViolation(f"data must be one of {DATA_SOURCES}, got {self.data!r}")
        if not self.epsilon_list or not all(0 < e <= 1 for e in self.epsilon_list):
            raise ContractViolation("every epsilon must lie in (0, 1]")
        if not 0 < self.epsilon <= 1:
            raise ContractViolation("epsilon must lie in (0, 1]")
        if not self.T > 0:
            raise ContractViolation("T must be positive")
        if self.s < 0:
            raise ContractViolation("s must be nonnegative")

    @property
    def grid(self) -> Grid:
        return Grid(self.n, self.L)

    def solver_config(self, epsilon: float, **overrides) -> SolverConfig:
        kw = dict(
            epsilon=epsilon, t_final=self.T, grid=self.grid, scheme=self.scheme,
            dt_budget=self.dt_budget, n_output=self.n_output,
        )
        kw.update(overrides)
        return SolverConfig(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["epsilon_list"] = list(self.epsilon_list)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ContractViolation(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def canonical_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def config_hash(cfg: ExperimentConfig) -> str:
    """Git blob hash (sha1 of ``"blob <len>\\0" + bytes``) of the canonical config JSON."""
    data = canonical_json(cfg.to_dict()).encode()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


# --- initial data --------------------------------------------------------------


def _odd_gaussian(x):
    return x * np.exp(-0.5 * x * x)


def _sech2(x, c=0.5):
    return 3 * c / np.cosh(np.sqrt(c / 2) * x) ** 2


def initial_pair(cfg: ExperimentConfig) -> Tuple[SpectralField, SpectralField]:
    """Right/left initial profiles ``(u0+, u0-)`` for the configured data source.

    * ``gaussian``: ``A h(x - 2)`` and ``A/2 h(x + 2)`` with ``h = x exp(-x^2/2)``,
    * ``soliton_seed``: a sech^2 hump and dip pair ``A (p(x - 4) - p(x + 4))`` and its half mirror,
    * ``random_hs``: rough fields of ``H^s`` norm ``R`` (default 1) and ``R/2``.

    The profiles are mean-zero; the mean mode is removed explicitly.
    """
    grid = cfg.grid
    A = cfg.amplitude
    if cfg.data == "gaussian":
        plus = SpectralField.from_function(grid, lambda x: A * _odd_gaussian(x - 2.0))
        minus = SpectralField.from_function(grid, lambda x: 0.5 * A * _odd_gaussian(x + 2.0))
    elif cfg.data == "soliton_seed":
        plus = SpectralField.from_function(grid, lambda x: A * (_sech2(x - 4.0) - _sech2(x + 4.0)))
        minus = SpectralField.from_function(grid, lambda x: 0.5 * A * (_sech2(x + 4.0) - _sech2(x - 4.0)))
    else:
        from .estimates import random_hs_field

        R = 1.0 if cfg.R is None else cfg.R
        plus = random_hs_field(cfg.seed, cfg.s, R, grid)
        minus = random_hs_field(cfg.seed + 1, cfg.s, 0.5 * R, grid)
    out = []
    for f in (plus, minus):
        c = f.coeffs.copy()
        c[0] = 0.0
        c[grid.nyquist_index] = 0.0
        out.append(SpectralField(grid, c))
    return out[0], out[1]


def _bound_R(cfg: ExperimentConfig, plus, minus) -> float:
    if cfg.R is not None and cfg.data != "random_hs":
        return cfg.R
    return max(sobolev_norm(plus, cfg.s), sobolev_norm(minus, cfg.s))


# --- results -------------------------------------------------------------------


@dataclass
class ExperimentResult:
    kind: str
    config: ExperimentConfig
    records: List[dict]
    checks: Dict[str, bool]
    fit: Optional[RateFit] = None
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def rows(self) -> List[dict]:
        return self.records

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "checks": dict(self.checks),
            "fit": None if self.fit is None else self.fit.to_dict(),
            "extra": self.extra,
            "config": self.config.to_dict(),
            "config_hash": config_hash(self.config),
        }


def _max_l2(a: Sequence[SpectralField], b: Sequence[SpectralField]):
    vals = [(x - y).l2_norm() for x, y in zip(a, b)]
    i = int(np.argmax(vals))
    return float(vals[i]), i


# --- the main sweep --------------------------------------------------------------

#: pass thresholds of the main sweep
SWEEP_MIN_SLOPE = 0.45
SWEEP_MAX_RESIDUAL = 0.15
UNIFORM_BOUND_FACTOR = 4.0
CROSS_CHECK_TOL = 1e-6


def run_kdv_limit_sweep(cfg: ExperimentConfig, progress: Optional[Callable[[str], None]] = None) -> ExperimentResult:
    """``err(eps) = max_{t, +-} ||u_eps^+-(t) - w_eps^+-(t)||_{L^2}`` over the sweep, with a log-log fit.

    Each eps runs the coupled system and both KdV equations from the same
    ``(u0+, u0-)``.  With ``cfg.cross_check`` the direct Boussinesq solver also
    runs and the reconstruction discrepancy is recorded.
    """
    plus, minus = initial_pair(cfg)
    R = _bound_R(cfg, plus, minus)
    records = []
    for eps in sorted(cfg.epsilon_list, reverse=True):
        scfg = cfg.solver_config(eps)
        rec = {"epsilon": eps, "status": "ok", "err": math.nan, "err_plus": math.nan, "err_minus": math.nan,
               "t_at_max": math.nan, "dt": math.nan, "hs_over_R": math.nan, "cross_check_l2": math.nan,
               "last_good_time": math.nan}
        try:
            coupled = evolve_coupled_system(WavePair(plus, minus), scfg)
            kp = evolve_kdv(plus, 1, scfg)
            km = evolve_kdv(minus, -1, scfg)
        except SolutionBlowup as exc:
            rec.update(status="blowup", last_good_time=exc.last_good_time)
            records.append(rec)
            continue
        ep, ip = _max_l2([p.plus for p in coupled.snapshots], kp.snapshots)
        em, im = _max_l2([p.minus for p in coupled.snapshots], km.snapshots)
        rec.update(err_plus=ep, err_minus=em, err=max(ep, em), dt=coupled.dt,
                   t_at_max=float(coupled.times[ip if ep >= em else im]), last_good_time=cfg.T)
        hs = max(max(sobolev_norm(p.plus, cfg.s), sobolev_norm(p.minus, cfg.s)) for p in coupled.snapshots)
        rec["hs_over_R"] = hs / R if R > 0 else (0.0 if hs == 0 else math.inf)
        if cfg.cross_check:
            direct = evolve_boussinesq_direct(theorem_initial_data(plus, minus, eps), scfg)
            rec["cross_check_l2"] = max(
                (reconstruct_full_solution(p, eps) - st.u).l2_norm() for p, st in zip(coupled.snapshots, direct.snapshots)
            )
        records.append(rec)
        if progress:
            progress(f"eps={eps:.4g} err={rec['err']:.4e} dt={rec['dt']:.3g}")

    ok = [r for r in records if r["status"] == "ok"]
    checks: Dict[str, bool] = {"no_blowup": len(ok) == len(records)}
    fit, extra = None, {"R": R}
    try:
        fit = fit_rate((r["epsilon"], r["err"]) for r in ok)
        checks["slope"] = fit.slope >= SWEEP_MIN_SLOPE
        checks["residual"] = fit.residual_rms <= SWEEP_MAX_RESIDUAL
    except FitError as exc:
        extra["fit_error"] = f"{type(exc).__name__}: {exc}"
        checks["fit"] = False
    asc = sorted(ok, key=lambda r: r["epsilon"])
    checks["err_shrinks_with_eps"] = all(a["err"] <= b["err"] for a, b in zip(asc, asc[1:]))
    checks["uniform_bound"] = all(r["hs_over_R"] <= UNIFORM_BOUND_FACTOR for r in ok)
    if cfg.cross_check:
        checks["cross_check"] = all(r["cross_check_l2"] <= CROSS_CHECK_TOL for r in ok)
    return ExperimentResult("sweep", cfg, records, checks, fit, extra)


# --- three-flow decomposition -----------------------------------------------------


def run_three_flow_decomposition(cfg: ExperimentConfig, progress: Optional[Callable[[str], None]] = None) -> ExperimentResult:
    """Split ``u - w`` through the frequency-localized flow ``v`` for every eps and sign.

    Records ``sup_t ||u - v||``, ``sup_t ||v - w||``, the high-frequency pieces
    ``||(1 - P_N) u0||`` and ``sup_t ||(1 - P_N) w(t)||``, the linear low-frequency
    error ``||(S_eps - S)(T) P_N u0||``, and the largest coefficient of ``v``
    above ``N`` seen at any step.
    """
    plus, minus = initial_pair(cfg)
    grid = cfg.grid
    records = []
    for eps in sorted(cfg.epsilon_list, reverse=True):
        scfg = cfg.solver_config(eps)
        N = float(cutoff_N(eps))
        above = np.abs(grid.xi) > N
        try:
            coupled = evolve_coupled_system(WavePair(plus, minus), scfg)
        except SolutionBlowup as exc:
            records.append({"epsilon": eps, "sign": 0, "status": "blowup", "last_good_time": exc.last_good_time})
            continue
        for sign, u0 in ((1, plus), (-1, minus)):
            worst = [0.0]

            def watch(t, y, worst=worst):
                worst[0] = max(worst[0], float(np.max(np.abs(y[above]), initial=0.0)))

            try:
                v = evolve_decoupled_localized(u0, scfg, sign=sign, step_callback=watch)
                w = evolve_kdv(u0, sign, scfg)
            except SolutionBlowup as exc:
                records.append({"epsilon": eps, "sign": sign, "status": "blowup", "last_good_time": exc.last_good_time})
                continue
            u = [p.component(sign) for p in coupled.snapshots]
            uv = np.array([(a - b).l2_norm() for a, b in zip(u, v.snapshots)])
            vw = np.array([(a - b).l2_norm() for a, b in zip(v.snapshots, w.snapshots)])
            uw = np.array([(a - b).l2_norm() for a, b in zip(u, w.snapshots)])
            low = np.where(above, 0.0, u0.coeffs)
            lin = (boussinesq_propagator(grid, eps, sign, cfg.T) - airy_propagator(grid, sign, cfg.T)) * low
            hf_data = project_gt(u0, N).l2_norm()
            rec = {
                "epsilon": eps,
                "sign": sign,
                "status": "ok",
                "N": N,
                "u_minus_v": float(uv.max()),
                "v_minus_w": float(vw.max()),
                "u_minus_w": float(uw.max()),
                "high_freq_data": hf_data,
                "high_freq_kdv": max(project_gt(f, N).l2_norm() for f in w.snapshots),
                "linear_low_freq": SpectralField(grid, lin).l2_norm(),
                "data_in_band": bool(not np.any(u0.coeffs[above])),
                "support_max_above_N": worst[0],
                "triangle_ok": bool(np.all(uw <= (uv + vw) * (1 + 1e-12) + 1e-15)),
                "bernstein_ok": bool(hf_data <= N ** (-cfg.s) * sobolev_norm(u0, cfg.s) * (1 + 1e-12)),
            }
            records.append(rec)
            if progress:
                progress(f"eps={eps:.4g} sign={sign:+d} |u-v|={rec['u_minus_v']:.3e} |v-w|={rec['v_minus_w']:.3e}")

    ok = [r for r in records if r["status"] == "ok"]
    checks = {
        "no_blowup": len(ok) == len(records),
        "triangle": all(r["triangle_ok"] for r in ok),
        "bernstein": all(r["bernstein_ok"] for r in ok),
        "support_exactly_zero": all(r["support_max_above_N"] == 0.0 for r in ok),
        "in_band_data_has_no_high_freq_terms": all(r["high_freq_data"] == 0.0 for r in ok if r["data_in_band"]),
    }
    for col in ("u_minus_v", "v_minus_w"):
        for sign in (1, -1):
            asc = sorted((r for r in ok if r["sign"] == sign), key=lambda r: r["epsilon"])
            checks[f"{col}_{'plus' if sign > 0 else 'minus'}_shrinks"] = all(a[col] <= b[col] for a, b in zip(asc, asc[1:]))
    return ExperimentResult("decompose", cfg, records, checks)


# --- energy audit ---------------------------------------------------------------

#: allowed relative energy drift per unit time at the reference step
ENERGY_DRIFT_TOL = 1e-6
#: smallest acceptable observed order under dt halving
MIN_ORDER = 3.7
#: phase advance per step (rad) at the coarsest step of the refinement triplet
REFINEMENT_PHASE = 8.0


def _relative_drift(energies: np.ndarray) -> np.ndarray:
    e0 = energies[0]
    scale = abs(e0) if e0 != 0 else 1.0
    return np.abs(energies - e0) / scale


def run_energy_audit(cfg: ExperimentConfig, epsilons: Optional[Sequence[float]] = None,
                     progress: Optional[Callable[[str], None]] = None) -> ExperimentResult:
    """Relative drift of the rescaled energy along direct Boussinesq runs.

    For each eps: the drift time series at the reference step (oscillation
    budget ``cfg.dt_budget``), and a refinement triplet ``dt0, dt0/2, dt0/4``
    with ``dt0`` advancing the fastest phase by about ``REFINEMENT_PHASE``
    radians, from which the observed order is computed.
    """
    plus, minus = initial_pair(cfg)
    epsilons = cfg.epsilon_list if epsilons is None else epsilons
    records = []
    refinement = []
    checks: Dict[str, bool] = {}
    for eps in sorted(epsilons, reverse=True):
        state = theorem_initial_data(plus, minus, eps)
        scfg = cfg.solver_config(eps)
        traj = evolve_boussinesq_direct(state, scfg)
        E = np.array([energy_rescaled(st, eps) for st in traj.snapshots])
        drift = _relative_drift(E)
        for t, e, d in zip(traj.times, E, drift):
            records.append({"epsilon": eps, "time": float(t), "energy": float(e), "relative_drift": float(d)})
        ref = float(drift.max())
        checks[f"reference_drift_eps_{eps:.4g}"] = ref <= ENERGY_DRIFT_TOL * cfg.T

        # refinement triplet on an output grid whose spacing the three steps divide exactly
        n_out = 17
        interval = cfg.T / (n_out - 1)
        rate = scfg.phase_rate("boussinesq")
        k = max(1, math.ceil(interval * rate / REFINEMENT_PHASE))
        drifts = []
        for level in range(3):
            dt = interval / (k * 2**level)
            rcfg = cfg.solver_config(eps, dt=dt, n_output=n_out, dt_budget=REFINEMENT_PHASE * 1.000001, dt_cap=math.inf)
            tr = evolve_boussinesq_direct(state, rcfg)
            d = float(_relative_drift(np.array([energy_rescaled(st, eps) for st in tr.snapshots])).max())
            drifts.append(d)
            refinement.append({"epsilon": eps, "dt": dt, "phase_per_step": dt * rate, "max_relative_drift": d})
        if drifts[-1] == 0.0:
            orders = [math.nan, math.nan]
            checks[f"order_eps_{eps:.4g}"] = all(d == 0.0 for d in drifts)
        else:
            orders = [math.log2(a / b) if b > 0 else math.inf for a, b in zip(drifts, drifts[1:])]
            checks[f"order_eps_{eps:.4g}"] = min(orders) >= MIN_ORDER
        refinement[-1]["observed_orders"] = orders
        if progress:
            progress(f"eps={eps:.4g} reference drift={ref:.3e} orders={orders}")
    return ExperimentResult("energy_audit", cfg, records, checks, extra={"refinement": refinement})


# --- snapshot dumps ----------------------------------------------------------------


def snapshot_rows(times, fields_: Sequence[SpectralField], label: str = "u") -> List[dict]:
    """Long-format rows: one per (time, grid index) with sample and coefficient magnitude."""
    rows = []
    for t, f in zip(times, fields_):
        g = f.grid
        samples = f.samples()
        mags = np.abs(f.coeffs)
        for j in range(g.n_points):
            rows.append({
                "field": label, "time": float(t), "index": j, "x": float(g.x[j]), "sample": float(samples[j]),
                "xi": float(g.xi[j]), "coeff_abs": float(mags[j]),
            })
    return rows


def snapshot_records(times, fields_: Sequence[SpectralField], label: str = "u") -> List[dict]:
    """One JSON record per output time."""
    return [
        {"field": label, "time": float(t), "samples": f.samples().tolist(), "coeff_abs": np.abs(f.coeffs).tolist()}
        for t, f in zip(times, fields_)
    ]


# --- file output -------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_csv(path: str, rows: Sequence[dict], columns: Optional[Sequence[str]] = None) -> str:
    """RFC 4180 CSV with a header row; columns default to the keys of the first row."""
    if columns is None:
        columns = []
        for r in rows:
            columns += [k for k in r if k not in columns]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_value(r.get(k, "")) for k in columns})
    return path


def _csv_value(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return json.dumps(_jsonable(v))
    return v


def write_json(path: str, payload) -> str:
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def plot_rate_svg(path: str, fit: Optional[RateFit], points: Sequence[Tuple[float, float]], title: str,
                  ylabel: str = "error", anchor: Optional[float] = None, xlabel: str = "epsilon") -> str:
    """Static log-log plot of ``points`` with the fitted line (and an anchor slope, if given)."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "kdvlab"
    import matplotlib.pyplot as plt

    pts = [(e, r) for e, r in points if r is not None and math.isfinite(r) and r > 0]
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if pts:
        e, r = np.array(pts).T
        ax.loglog(e, r, "o", label="measured")
        grid = np.geomspace(e.min(), e.max(), 50)
        if fit is not None:
            ax.loglog(grid, fit.predict(grid), "-", label=f"fit slope {fit.slope:.3f}")
        if anchor is not None:
            ax.loglog(grid, r.max() * (grid / e.max()) ** anchor, "--", label=f"slope {anchor:g}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def write_outputs(result: ExperimentResult, out_dir: str, formats: Iterable[str] = ("csv", "json", "svg")) -> List[str]:
    """Write ``<kind>.csv``, ``<kind>.json`` and, for rate results, ``<kind>.svg``."""
    os.makedirs(out_dir, exist_ok=True)
    formats = set(formats)
    written = []
    stem = os.path.join(out_dir, result.kind)
    if "csv" in formats:
        written.append(write_csv(stem + ".csv", result.rows()))
        refinement = result.extra.get("refinement")
        if refinement:
            written.append(write_csv(stem + "_refinement.csv", refinement))
    if "json" in formats:
        written.append(write_json(stem + ".json", result.summary()))
    if "svg" in formats:
        if result.kind == "sweep":
            pts = [(r["epsilon"], r["err"]) for r in result.records if r["status"] == "ok"]
            written.append(plot_rate_svg(stem + ".svg", result.fit, pts, "KdV limit error",
                                         "max_t |u - w|_L2", anchor=0.5))
        elif result.kind == "decompose":
            pts_uv = [(r["epsilon"], r["u_minus_v"]) for r in result.records if r.get("status") == "ok" and r["sign"] == 1]
            written.append(plot_rate_svg(stem + ".svg", None, pts_uv, "coupled vs localized (+)", "sup_t |u - v|_L2"))
        elif result.kind == "energy_audit":
            ref = result.extra.get("refinement", [])
            pts = [(r["dt"], r["max_relative_drift"]) for r in ref]
            written.append(plot_rate_svg(stem + ".svg", None, pts, "energy drift vs dt", "relative drift",
                                         anchor=4.0, xlabel="dt"))
    return written
