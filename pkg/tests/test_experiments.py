import csv
import json
import math

import numpy as np
import pytest

from kdvlab import experiments as ex
from kdvlab.errors import ContractViolation
from kdvlab.experiments import (
    DEFAULT_SWEEP,
    ExperimentConfig,
    config_hash,
    initial_pair,
    run_energy_audit,
    run_kdv_limit_sweep,
    run_three_flow_decomposition,
    write_outputs,
)
from kdvlab.spectral import SpectralField
from kdvlab.symbols import cutoff_N

SMALL = dict(n=128, L=30.0, T=0.25, n_output=17, epsilon_list=(0.2, 0.1414, 0.1))


def test_default_sweep():
    assert DEFAULT_SWEEP == pytest.approx((0.2, 0.1414, 0.1, 0.0707, 0.05), abs=1e-4)


@pytest.mark.parametrize("kw", [dict(epsilon_list=(0.2, 1.5)), dict(epsilon_list=()), dict(T=0.0), dict(s=-1.0),
                                dict(data="noise"), dict(epsilon=0.0)])
def test_config_validation(kw):
    with pytest.raises(ContractViolation):
        ExperimentConfig(**kw)


def test_config_round_trip_and_hash():
    cfg = ExperimentConfig(data="random-hs", seed=4)
    assert cfg.data == "random_hs"
    again = ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg and config_hash(again) == config_hash(cfg)
    assert config_hash(cfg.with_(seed=5)) != config_hash(cfg)
    assert len(config_hash(cfg)) == 40
    with pytest.raises(ContractViolation):
        ExperimentConfig.from_dict({"epsilon_lst": [0.1]})


def test_config_hash_is_a_git_blob_hash():
    import hashlib

    cfg = ExperimentConfig()
    body = ex.canonical_json(cfg.to_dict()).encode()
    assert config_hash(cfg) == hashlib.sha1(b"blob " + str(len(body)).encode() + b"\0" + body).hexdigest()


@pytest.mark.parametrize("data", ["gaussian", "soliton", "random-hs"])
def test_initial_pairs_are_real_and_mean_zero(data):
    plus, minus = initial_pair(ExperimentConfig(data=data, n=128))
    for f in (plus, minus):
        assert f.mean_coeff == 0 and f.coeffs[f.grid.nyquist_index] == 0
        assert f.conjugate_symmetry_defect() < 1e-12 * np.abs(f.coeffs).max()
        assert f.l2_norm() > 0


def test_zero_data_sweep_refuses_fit():
    res = run_kdv_limit_sweep(ExperimentConfig(amplitude=0.0, **SMALL))
    assert all(r["err"] == 0.0 for r in res.records)
    assert res.fit is None and res.extra["fit_error"].startswith("ZeroError")
    assert not res.passed


def test_small_sweep_decays():
    res = run_kdv_limit_sweep(ExperimentConfig(cross_check=True, **SMALL))
    assert res.checks["no_blowup"] and res.checks["err_shrinks_with_eps"] and res.checks["cross_check"]
    assert res.fit.slope >= 0.45
    assert [r["epsilon"] for r in res.records] == sorted(SMALL["epsilon_list"], reverse=True)
    for r in res.records:
        assert r["err"] == max(r["err_plus"], r["err_minus"])
        assert r["cross_check_l2"] <= 1e-6


def test_decomposition_with_gaussian_data():
    res = run_three_flow_decomposition(ExperimentConfig(**SMALL))
    assert len(res.records) == 2 * len(SMALL["epsilon_list"])
    for key in ("no_blowup", "triangle", "bernstein", "support_exactly_zero"):
        assert res.checks[key], key
    for r in res.records:
        assert r["support_max_above_N"] == 0.0
        assert r["N"] == pytest.approx(float(cutoff_N(r["epsilon"])))


def test_decomposition_with_in_band_data(monkeypatch):
    cfg = ExperimentConfig(**SMALL)
    g = cfg.grid
    band = np.abs(g.xi) <= 0.9 * cutoff_N(max(cfg.epsilon_list))

    def in_band(_cfg):
        out = []
        for f in ex.initial_pair.__wrapped__(_cfg):
            out.append(SpectralField(g, np.where(band, f.coeffs, 0.0)))
        return tuple(out)

    in_band.__wrapped__ = ex.initial_pair
    monkeypatch.setattr(ex, "initial_pair", in_band)
    res = run_three_flow_decomposition(cfg)
    assert all(r["data_in_band"] and r["high_freq_data"] == 0.0 for r in res.records)
    assert res.checks["in_band_data_has_no_high_freq_terms"]


def test_energy_audit_zero_data():
    res = run_energy_audit(ExperimentConfig(amplitude=0.0, T=0.25, n=64), epsilons=[0.2])
    assert all(r["relative_drift"] == 0.0 for r in res.records)
    assert res.passed


def test_energy_audit_order_and_determinism():
    cfg = ExperimentConfig(T=0.5, n=256)
    a = run_energy_audit(cfg, epsilons=[0.2])
    b = run_energy_audit(cfg.with_(seed=99), epsilons=[0.2])
    assert a.passed
    assert [r["relative_drift"] for r in a.records] == [r["relative_drift"] for r in b.records]
    orders = a.extra["refinement"][-1]["observed_orders"]
    assert min(orders) >= 3.7
    drifts = [r["max_relative_drift"] for r in a.extra["refinement"]]
    assert drifts[0] / drifts[1] > 12 and drifts[1] / drifts[2] > 12


def test_outputs_are_byte_identical(tmp_path):
    cfg = ExperimentConfig(**SMALL)
    paths = []
    for name in ("a", "b"):
        res = run_kdv_limit_sweep(cfg)
        paths.append(write_outputs(res, str(tmp_path / name)))
    for p, q in zip(*paths):
        assert open(p, "rb").read() == open(q, "rb").read(), p
    names = sorted(x.rsplit("/", 1)[1] for x in paths[0])
    assert names == ["sweep.csv", "sweep.json", "sweep.svg"]


def test_csv_and_json_content(tmp_path):
    res = run_energy_audit(ExperimentConfig(T=0.25, n=64), epsilons=[0.2])
    written = write_outputs(res, str(tmp_path), ["csv", "json"])
    assert sorted(p.rsplit("/", 1)[1] for p in written) == ["energy_audit.csv", "energy_audit.json", "energy_audit_refinement.csv"]
    rows = list(csv.DictReader(open(tmp_path / "energy_audit.csv")))
    assert set(rows[0]) == {"epsilon", "time", "energy", "relative_drift"}
    assert float(rows[0]["relative_drift"]) == 0.0
    summary = json.load(open(tmp_path / "energy_audit.json"))
    assert summary["config_hash"] == config_hash(res.config)
    assert summary["passed"] == res.passed
    ref = list(csv.DictReader(open(tmp_path / "energy_audit_refinement.csv")))
    assert len(ref) == 3 and len(json.loads(ref[-1]["observed_orders"])) == 2


def test_json_replaces_non_finite_values(tmp_path):
    p = ex.write_json(str(tmp_path / "x.json"), {"a": math.nan, "b": [np.float64(1.5), np.inf], "c": np.int64(3)})
    assert json.load(open(p)) == {"a": None, "b": [1.5, None], "c": 3}
