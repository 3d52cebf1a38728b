import json
import os
import subprocess
import sys

import pytest

from kdvlab.cli import build_parser, main, resolve_settings

SMALL = ["--grid-n", "256", "--box-l", "30", "--t-final", "0.25", "--n-output", "8", "-q"]


def _files(path):
    return sorted(os.listdir(path))


def test_subcommands_exist():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == {"simulate", "sweep", "decompose", "estimates", "energy-audit"}


def test_flags_override_config_file(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"eps-list": [0.2, 0.1, 0.05], "grid_n": 64, "seed": 3, "format": "json"}))
    args = build_parser().parse_args(["sweep", "--config", str(cfg_path), "--grid-n", "128"])
    cfg, run = resolve_settings(args)
    assert cfg.n == 128 and cfg.seed == 3 and cfg.epsilon_list == (0.2, 0.1, 0.05)
    assert run == {"format": ["json"], "which": "all", "trials": 30}


@pytest.mark.parametrize("model", ["boussinesq", "coupled", "kdv", "localized"])
def test_simulate_models(tmp_path, model, capsys):
    rc = main(["simulate", "--model", model, "--epsilon", "0.2", "--out", str(tmp_path)] + SMALL)
    assert rc == 0
    assert _files(tmp_path) == ["simulate.json", "simulate.svg", "simulate_snapshots.csv"]
    out = capsys.readouterr().out
    assert out and all(line.startswith("PASS  ") for line in out.splitlines())


def test_sweep_writes_requested_formats(tmp_path, capsys):
    rc = main(["sweep", "--eps-list", "0.2,0.1414,0.1", "--format", "csv", "--format", "json",
               "--out", str(tmp_path)] + SMALL)
    assert rc == 0
    assert _files(tmp_path) == ["sweep.csv", "sweep.json"]
    assert "PASS  slope" in capsys.readouterr().out


def test_failed_check_exits_one(tmp_path, capsys):
    rc = main(["sweep", "--eps-list", "0.2,0.1414,0.1", "--amplitude", "0", "--format", "json",
               "--out", str(tmp_path)] + SMALL)
    assert rc == 1
    assert "FAIL  fit" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["sweep", "--eps-list", "0.2,2.0"],
    ["sweep", "--t-final", "-1"],
    ["energy-audit", "--config", "/nonexistent/cfg.json"],
])
def test_bad_input_exits_two(tmp_path, argv, capsys):
    assert main(argv + ["--out", str(tmp_path), "-q"]) == 2
    assert "kdvlab: error:" in capsys.readouterr().err


def test_unknown_config_key_exits_two(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"epsilon_lst": [0.1]}))
    assert main(["decompose", "--config", str(p), "--out", str(tmp_path), "-q"]) == 2


def test_bad_eps_list_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--eps-list", "a,b"])
    assert exc.value.code == 2


def test_estimates_symbols_and_tau(tmp_path, capsys):
    rc = main(["estimates", "--which", "symbols", "--out", str(tmp_path), "--format", "json", "-q"])
    assert rc == 0
    assert "PASS  symbol_bound" in capsys.readouterr().out
    rc = main(["estimates", "--which", "tau", "--out", str(tmp_path), "--format", "json", "-q"])
    assert rc == 0
    summary = json.load(open(tmp_path / "estimates.json"))
    assert len(summary["extra"]["tau"]) == 4 and summary["passed"]


def test_decompose_and_energy_audit(tmp_path, capsys):
    assert main(["decompose", "--eps-list", "0.2,0.1414,0.1", "--format", "json", "--out", str(tmp_path)] + SMALL) == 0
    assert "PASS  support_exactly_zero" in capsys.readouterr().out
    assert main(["energy-audit", "--eps-list", "0.2", "--grid-n", "256", "--t-final", "0.5", "--format", "csv",
                 "--out", str(tmp_path), "-q"]) == 0
    assert {"energy_audit.csv", "energy_audit_refinement.csv"} <= set(_files(tmp_path))


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kdvlab", "estimates", "--which", "tau", "--format", "json",
                           "--out", str(tmp_path), "-q"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.count("PASS") == len(proc.stdout.splitlines())
