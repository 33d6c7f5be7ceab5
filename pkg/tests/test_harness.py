import csv
import io
import json

import numpy as np
import pytest

from vqc_privacy import circuits as cz
from vqc_privacy.errors import ConfigError
from vqc_privacy.harness import (
    AttackReport,
    ExperimentConfig,
    LandscapeConfig,
    emit_report,
    landscape_record,
    mean_r_by_n,
    run_attack_pipeline,
)
from vqc_privacy.harness.landscape import min_gap
from vqc_privacy.harness.pipeline import RECORD_FIELDS
from vqc_privacy.pauli import HermitianPauliSum


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json_obj({"qubits": [2], "bogus": 1})


@pytest.mark.parametrize(
    "bad",
    [{"method": "magic"}, {"qubits": []}, {"gradient_rounds": 0}, {"tolerances": {"nope": 1}}, {"ansatz": {}}],
)
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        ExperimentConfig(**bad)


def test_config_hash_stable_and_sensitive():
    a = ExperimentConfig(qubits=[2, 3])
    b = ExperimentConfig.from_json_obj(json.loads(a.dumps()))
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != ExperimentConfig(qubits=[2, 4]).config_hash()


def test_pauli_product_scenario_succeeds():
    rep = run_attack_pipeline(ExperimentConfig(qubits=[4], seeds=[0, 1, 2]))
    assert rep.aggregate()["success_rate"] == 1.0
    assert all(r["error_metric"] < 1e-6 for r in rep.records)
    assert all(r["config_hash"] == rep.config_hash for r in rep.records)


def test_exponential_dla_hits_budget():
    cfg = ExperimentConfig(scenario="exponential", ansatz={"kind": "universal"}, qubits=[3], seeds=[0, 1], max_dim=40)
    rep = run_attack_pipeline(cfg)
    assert rep.aggregate()["success_rate"] == 0.0
    assert {r["reason"] for r in rep.records} == {"dim_budget_exceeded"}


def test_failures_are_recorded_not_raised():
    cfg = ExperimentConfig(ansatz={"kind": "tfim"}, qubits=[3], seeds=[0])
    rec = run_attack_pipeline(cfg).records[0]
    assert rec["success"] is False and rec["reason"] == "failure"


def test_replay_is_byte_identical(tmp_path):
    cfg = ExperimentConfig(qubits=[2, 3], seeds=[0, 1])
    a = json.dumps(run_attack_pipeline(cfg).body(), sort_keys=True)
    b = json.dumps(run_attack_pipeline(cfg).body(), sort_keys=True)
    assert a == b


def test_workers_do_not_change_results():
    cfg = ExperimentConfig(qubits=[2, 3], seeds=[0, 1])
    par = ExperimentConfig(qubits=[2, 3], seeds=[0, 1], workers=2)
    assert cfg.config_hash() == par.config_hash()
    assert run_attack_pipeline(cfg).records == run_attack_pipeline(par).records


def test_artifacts_persisted(tmp_path):
    cfg = ExperimentConfig(qubits=[2], seeds=[0], output_dir=str(tmp_path))
    run_attack_pipeline(cfg)
    obj = json.loads((tmp_path / "instance_n2_s0.json").read_text())
    assert {"gradients", "snapshot_recovered", "thetas", "basis"} <= set(obj["artifacts"])


def test_empty_report_csv_is_header_only():
    files = emit_report(AttackReport("0" * 16, {}), "csv")
    assert files["report.csv"].strip() == ",".join(RECORD_FIELDS)


def test_report_json_roundtrip(tmp_path):
    rep = run_attack_pipeline(ExperimentConfig(qubits=[2], seeds=[0]))
    files = emit_report(rep, "json", tmp_path)
    back = json.loads((tmp_path / "report.json").read_text())
    assert back == json.loads(json.dumps(rep.to_json_obj()))
    assert files["report.json"] == (tmp_path / "report.json").read_text()


def test_landscape_csv_schema():
    enc = cz.dressed_rotation_encoder(2, seed=0)
    recs = [landscape_record(enc, HermitianPauliSum.from_pauli("ZI"), (0, 2 * np.pi), 256, n=2, seed=0,
                             period=2 * np.pi)]
    files = emit_report(recs, "csv")
    rows = list(csv.DictReader(io.StringIO(files["landscape.csv"])))
    # the sampler never goes below 4096 points per period
    assert list(rows[0]) == ["n", "seed", "x", "value"] and len(rows) == 4096
    summary = list(csv.DictReader(io.StringIO(files["landscape_summary.csv"])))
    assert list(summary[0]) == ["n", "mean_r"]


def test_constant_landscape_is_degenerate():
    enc = cz.dressed_rotation_encoder(2, seed=0)
    rec = landscape_record(enc, HermitianPauliSum.from_pauli("II"), (0, 2 * np.pi), 256, n=2, seed=0,
                           period=2 * np.pi)
    assert rec.degenerate and len(rec.stationary) == 0 and rec.r is None
    assert mean_r_by_n([rec]) == {}


def test_min_gap_cyclic():
    assert min_gap(np.array([0.1, 6.2]), 2 * np.pi) == pytest.approx(2 * np.pi - 6.1)
    assert min_gap(np.array([0.1, 6.2]), None) == pytest.approx(6.1)


def test_single_rotation_spacing_is_pi():
    enc = cz.dressed_rotation_encoder(3, seed=4)
    rec = landscape_record(enc, HermitianPauliSum.from_pauli("ZII"), (0, 2 * np.pi), 4096, n=3, seed=4,
                           period=2 * np.pi)
    assert abs(rec.r - np.pi) < 1e-6


def test_landscape_config_validation():
    with pytest.raises(ConfigError):
        LandscapeConfig(encoder="weird")
