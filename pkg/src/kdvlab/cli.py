"""Command line entry point: ``kdvlab {simulate,sweep,decompose,estimates,energy-audit}``.

Settings come from the built-in defaults, then an optional JSON config file,
then explicit flags.  The exit status is 0 only when every enabled check passes.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional

import numpy as np

from . import estimates as est
from .errors import ContractViolation, FitError, KdvLabError, SolutionBlowup
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    initial_pair,
    plot_rate_svg,
    run_energy_audit,
    run_kdv_limit_sweep,
    run_three_flow_decomposition,
    snapshot_records,
    snapshot_rows,
    write_csv,
    write_json,
    write_outputs,
)
from .norms import energy_rescaled
from .solvers import (
    MODELS,
    evolve_boussinesq_direct,
    evolve_coupled_system,
    evolve_decoupled_localized,
    evolve_kdv,
    project_to_cutoff,
    reconstruct_full_solution,
    theorem_initial_data,
)
from .spectral import WavePair
from .symbols import cutoff_N

FORMATS = ("csv", "json", "svg")
ESTIMATE_SUITES = ("symbols", "tau", "linear", "bilinear")

# config-file keys that follow the flag names rather than the field names
_KEY_ALIASES = {
    "eps_list": "epsilon_list",
    "grid_n": "n",
    "box_l": "L",
    "t_final": "T",
    "out": "out_dir",
}
# keys that steer the command line rather than the experiment
_RUN_KEYS = ("format", "which", "trials")


def _eps_list(text: str):
    try:
        vals = tuple(float(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty epsilon list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("experiment settings")
    g.add_argument("--config", help="JSON file with settings; flags given here override it")
    g.add_argument("--epsilon", type=float, help="single epsilon (simulate)")
    g.add_argument("--eps-list", type=_eps_list, help="comma-separated epsilons, e.g. 0.2,0.1,0.05")
    g.add_argument("--s", type=float, help="Sobolev index of the data")
    g.add_argument("--R", type=float, help="H^s bound for the uniform-bound monitor")
    g.add_argument("--grid-n", type=int, help="number of grid points")
    g.add_argument("--box-l", type=float, help="half length L of the periodic box [-L, L)")
    g.add_argument("--t-final", type=float, help="horizon T in rescaled time")
    g.add_argument("--dt-budget", type=float, help="largest phase advance per step (radians)")
    g.add_argument("--n-output", type=int, help="number of output intervals")
    g.add_argument("--scheme", choices=("lawson_rk4", "etd_rk4"))
    g.add_argument("--amplitude", type=float, help="scale of the deterministic data")
    g.add_argument("--seed", type=int)
    g.add_argument("--data", choices=("gaussian", "random-hs", "soliton"))
    g.add_argument("--out", help="output directory")
    g.add_argument("--format", action="append", choices=FORMATS,
                   help="output format (repeatable; default all)")
    g.add_argument("-q", "--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="kdvlab", description="Boussinesq to KdV limit experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", parents=[common], help="one epsilon, one model, snapshot dumps")
    sp.add_argument("--model", choices=MODELS)

    sp = sub.add_parser("sweep", parents=[common], help="KdV limit error over an epsilon sweep")
    sp.add_argument("--cross-check", action="store_true", default=None,
                    help="also compare the coupled reconstruction with the direct solver")

    sub.add_parser("decompose", parents=[common], help="three-flow difference decomposition")

    sp = sub.add_parser("estimates", parents=[common], help="symbol, quadrature and X^{s,b} ratio suites")
    sp.add_argument("--which", choices=ESTIMATE_SUITES + ("all",))
    sp.add_argument("--trials", type=int, help="random trials per ensemble")

    sub.add_parser("energy-audit", parents=[common], help="energy drift and dt refinement")
    return p


def _load_config_file(path: str) -> Dict:
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ContractViolation(f"{path}: config must be a JSON object")
    return {_KEY_ALIASES.get(k.replace("-", "_"), k.replace("-", "_")): v for k, v in raw.items()}


def resolve_settings(args: argparse.Namespace):
    """Merge defaults, config file and flags into ``(ExperimentConfig, run options)``."""
    settings = _load_config_file(args.config) if args.config else {}
    flags = {
        "epsilon": args.epsilon, "epsilon_list": args.eps_list, "s": args.s, "R": args.R,
        "n": args.grid_n, "L": args.box_l, "T": args.t_final, "dt_budget": args.dt_budget,
        "n_output": args.n_output, "scheme": args.scheme, "amplitude": args.amplitude,
        "seed": args.seed, "data": args.data, "out_dir": args.out,
        "model": getattr(args, "model", None), "cross_check": getattr(args, "cross_check", None),
        "format": args.format, "which": getattr(args, "which", None), "trials": getattr(args, "trials", None),
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    run = {k: settings.pop(k) for k in _RUN_KEYS if k in settings}
    if isinstance(run.get("format"), str):
        run["format"] = [run["format"]]
    run.setdefault("format", list(FORMATS))
    bad = set(run["format"]) - set(FORMATS)
    if bad:
        raise ContractViolation(f"unknown formats {sorted(bad)}")
    run.setdefault("which", "all")
    run.setdefault("trials", 30)
    return ExperimentConfig.from_dict(settings), run


# --- subcommands -----------------------------------------------------------------


def _simulate(cfg: ExperimentConfig, log) -> ExperimentResult:
    eps = cfg.epsilon
    scfg = cfg.solver_config(eps)
    plus, minus = initial_pair(cfg)
    times = scfg.output_times
    fields_, checks, extra = {}, {}, {"epsilon": eps, "model": cfg.model}
    try:
        if cfg.model == "boussinesq":
            traj = evolve_boussinesq_direct(theorem_initial_data(plus, minus, eps), scfg)
            fields_["u"] = [st.u for st in traj.snapshots]
            fields_["w"] = [st.w for st in traj.snapshots]
            energy = np.array([energy_rescaled(st, eps) for st in traj.snapshots])
            drift = float(np.max(np.abs(energy - energy[0])) / max(abs(energy[0]), 1e-300))
            extra["relative_energy_drift"] = drift
            checks["energy_drift"] = drift <= 1e-6 * cfg.T
        elif cfg.model == "coupled":
            traj = evolve_coupled_system(WavePair(plus, minus), scfg)
            fields_["u_plus"] = [p.plus for p in traj.snapshots]
            fields_["u_minus"] = [p.minus for p in traj.snapshots]
            fields_["u"] = [reconstruct_full_solution(p, eps, t) for p, t in zip(traj.snapshots, traj.times)]
        else:
            above = np.abs(cfg.grid.xi) > cutoff_N(eps)
            for sign, label, f0 in ((1, "plus", plus), (-1, "minus", minus)):
                if cfg.model == "kdv":
                    traj = evolve_kdv(f0, sign, scfg)
                else:
                    traj = evolve_decoupled_localized(project_to_cutoff(f0, eps), scfg, sign=sign)
                    worst = max(float(np.max(np.abs(f.coeffs[above]), initial=0.0)) for f in traj.snapshots)
                    extra[f"support_max_above_N_{label}"] = worst
                    checks[f"support_{label}"] = worst == 0.0
                fields_[f"{cfg.model}_{label}"] = list(traj.snapshots)
        checks["no_blowup"] = True
    except SolutionBlowup as exc:
        checks["no_blowup"] = False
        extra["last_good_time"] = exc.last_good_time
        log(f"blow-up: {exc}")
    records = []
    for label, snaps in fields_.items():
        records += snapshot_rows(times, snaps, label)
    extra["snapshots"] = [r for label, snaps in fields_.items() for r in snapshot_records(times, snaps, label)]
    return ExperimentResult("simulate", cfg, records, checks, extra=extra)


def _write_simulate(result: ExperimentResult, formats) -> List[str]:
    out = result.config.out_dir
    os.makedirs(out, exist_ok=True)
    written = []
    stem = os.path.join(out, "simulate")
    if "csv" in formats:
        written.append(write_csv(stem + "_snapshots.csv", result.records))
    if "json" in formats:
        written.append(write_json(stem + ".json", result.summary()))
    if "svg" in formats and result.records:
        written.append(_profile_svg(stem + ".svg", result))
    return written


def _profile_svg(path: str, result: ExperimentResult) -> str:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "kdvlab"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    snaps = result.extra["snapshots"]
    x = result.config.grid.x
    for label in dict.fromkeys(r["field"] for r in snaps):
        mine = [r for r in snaps if r["field"] == label]
        for r, style in ((mine[0], ":"), (mine[-1], "-")):
            ax.plot(x, r["samples"], style, lw=1.0, label=f"{label} t={r['time']:.3g}")
    ax.set_xlabel("x")
    ax.set_title(f"{result.config.model}, eps={result.config.epsilon:g}")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _estimates(cfg: ExperimentConfig, which: str, trials: int, log) -> ExperimentResult:
    suites = ESTIMATE_SUITES if which == "all" else (which,)
    records, checks, extra = [], {}, {}
    reports = []
    if "symbols" in suites:
        res = est.symbol_bound_suite(seed=cfg.seed)
        extra["symbols"] = res
        checks["symbol_bound"] = res["passed"]
        log(f"symbol bound: {res['violations']} violations in {res['samples']} samples")
    if "tau" in suites:
        extra["tau"] = []
        for rep in est.tau_integral_suite():
            extra["tau"].append(rep.summary())
            checks[f"tau_b{rep.b:g}_bp{rep.b_prime:g}"] = rep.passed
            log(f"tau integrals b={rep.b:g} b'={rep.b_prime:g}: {'pass' if rep.passed else 'FAIL'}")
    if "linear" in suites:
        p = est.LINEAR_SUITE
        reports.append(est.linear_difference_ensemble(cfg.seed, trials, cfg.s, p["b"], p["epsilon_list"], p["grid"]))
    if "bilinear" in suites:
        reports += est.bilinear_suite(trials=trials, seed=cfg.seed)
    extra["ratio_reports"] = []
    for rep in reports:
        tag = rep.lemma if "s_prime" not in rep.params else f"{rep.lemma}_sp{rep.params['s_prime']:g}"
        checks[tag] = rep.passed
        extra["ratio_reports"].append(rep.summary())
        for row in rep.rows():
            records.append(dict(row, report=tag))
        log(f"{tag}: slope {rep.slope:.3f} anchor {rep.anchor} {'pass' if rep.passed else 'FAIL'}")
    result = ExperimentResult("estimates", cfg, records, checks, extra=extra)
    result.extra["_reports"] = reports
    return result


def _write_estimates(result: ExperimentResult, formats) -> List[str]:
    out = result.config.out_dir
    os.makedirs(out, exist_ok=True)
    reports = result.extra.pop("_reports", [])
    written = []
    stem = os.path.join(out, "estimates")
    if "csv" in formats and result.records:
        written.append(write_csv(stem + ".csv", result.records, ["report", "lemma", "epsilon", "trial", "ratio"]))
    if "json" in formats:
        written.append(write_json(stem + ".json", result.summary()))
    if "svg" in formats:
        for rep in reports:
            tag = rep.lemma if "s_prime" not in rep.params else f"{rep.lemma}_sp{rep.params['s_prime']:g}"
            pts = list(zip(rep.epsilons, rep.maxima))
            written.append(plot_rate_svg(f"{stem}_{tag}.svg", rep.fit, pts, tag, "max ratio over trials",
                                         anchor=rep.anchor))
    return written


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    log = (lambda msg: None) if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    try:
        cfg, run = resolve_settings(args)
        if args.command == "simulate":
            result = _simulate(cfg, log)
            written = _write_simulate(result, run["format"])
        elif args.command == "estimates":
            result = _estimates(cfg, run["which"], run["trials"], log)
            written = _write_estimates(result, run["format"])
        else:
            driver = {"sweep": run_kdv_limit_sweep, "decompose": run_three_flow_decomposition,
                      "energy-audit": run_energy_audit}[args.command]
            result = driver(cfg, progress=log)
            written = write_outputs(result, cfg.out_dir, run["format"])
    except (ContractViolation, FitError, OSError, json.JSONDecodeError) as exc:
        print(f"kdvlab: error: {exc}", file=sys.stderr)
        return 2
    except KdvLabError as exc:
        print(f"kdvlab: error: {exc}", file=sys.stderr)
        return 1
    for name, ok in result.checks.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    for path in written:
        log(f"wrote {path}")
    return 0 if result.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
