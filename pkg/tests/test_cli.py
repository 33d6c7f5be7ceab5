import json

import numpy as np
import pytest

from vqc_privacy import circuits as cz
from vqc_privacy.cli import main
from vqc_privacy.oracle import vqc_gradients
from vqc_privacy.pauli import HermitianPauliSum
from vqc_privacy.recovery import direction_angle


@pytest.fixture
def workspace(tmp_path):
    enc = cz.pauli_product_map(2)
    ans = cz.ansatz_with_params(cz.su2_block_generators(2), 7)
    (tmp_path / "enc.json").write_text(cz.render(enc))
    (tmp_path / "ans.json").write_text(cz.render(ans))
    rng = np.random.default_rng(0)
    thetas = [rng.uniform(0, 6, 7) for _ in range(2)]
    x = [0.7, 2.5]
    obs = HermitianPauliSum.from_terms([("ZI", 1.0), ("IZ", 1.0)])
    (tmp_path / "theta.json").write_text(json.dumps([t.tolist() for t in thetas]))
    (tmp_path / "grads.json").write_text(json.dumps([vqc_gradients(enc, ans, t, obs, x).tolist() for t in thetas]))
    (tmp_path / "x.json").write_text(json.dumps(x))
    return tmp_path


def test_recover_then_invert(workspace):
    w = workspace
    assert main(["dla", "--circuit", str(w / "ans.json"), "--out", str(w / "basis.json")]) == 0
    assert main(["recover", "--ansatz", str(w / "ans.json"), "--theta", str(w / "theta.json"), "--gradients",
                 str(w / "grads.json"), "--observable", "ZI,IZ", "--basis", str(w / "basis.json"),
                 "--out", str(w / "rec.json")]) == 0
    e = json.loads((w / "rec.json").read_text())["snapshot"]
    (w / "e.json").write_text(json.dumps(e))
    assert main(["invert", "--method", "pauli-product", "--snapshot", str(w / "e.json"), "--circuit",
                 str(w / "enc.json"), "--basis", str(w / "basis.json"), "--out", str(w / "inv.json")]) == 0
    x = json.loads((w / "inv.json").read_text())["x_recovered"]
    assert np.allclose(x, [0.7, 2.5], atol=1e-9)


def test_recover_unknown_cost(workspace):
    w = workspace
    main(["dla", "--circuit", str(w / "ans.json"), "--out", str(w / "basis.json")])
    common = ["--ansatz", str(w / "ans.json"), "--theta", str(w / "theta.json"), "--observable", "ZI,IZ",
              "--basis", str(w / "basis.json")]
    assert main(["recover", *common, "--gradients", str(w / "grads.json"), "--out", str(w / "lin.json")]) == 0
    scaled = [(-1.7 - k) * np.asarray(g) for k, g in enumerate(json.loads((w / "grads.json").read_text()))]
    (w / "scaled.json").write_text(json.dumps([g.tolist() for g in scaled]))
    assert main(["recover", *common, "--gradients", str(w / "scaled.json"), "--unknown-cost",
                 "--out", str(w / "ratio.json")]) == 0
    lin = json.loads((w / "lin.json").read_text())["snapshot"]
    ratio = json.loads((w / "ratio.json").read_text())["snapshot"]
    assert direction_angle(lin, ratio) < 1e-6


def test_gsim_subcommand(workspace, capsys):
    w = workspace
    theta = json.loads((w / "theta.json").read_text())[0]
    (w / "t0.json").write_text(json.dumps(theta))
    assert main(["gsim", "--circuit", str(w / "enc.json"), "--ansatz", str(w / "ans.json"), "--theta",
                 str(w / "t0.json"), "--x", str(w / "x.json"), "--observable", "ZI,IZ"]) == 0
    out = json.loads(capsys.readouterr().out)
    grads = json.loads((w / "grads.json").read_text())[0]
    assert np.allclose(out["gradients"], grads, atol=1e-8)


def test_attack_and_config_errors(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"qubits": [2], "seeds": [0]}))
    assert main(["attack", "--config", str(cfg), "--format", "csv", "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "report.csv").exists()
    cfg.write_text(json.dumps({"qubits": [2], "method": "nope"}))
    assert main(["attack", "--config", str(cfg)]) == 2
    assert main(["attack", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["attack"]) == 2
    assert main(["no-such-command"]) == 2


def test_operation_error_exit_code(workspace):
    w = workspace
    (w / "one.json").write_text(json.dumps(json.loads((w / "theta.json").read_text())[0]))
    (w / "g1.json").write_text(json.dumps(json.loads((w / "grads.json").read_text())[0]))
    # one round is rank deficient: a library error, not a config error
    assert main(["recover", "--ansatz", str(w / "ans.json"), "--theta", str(w / "one.json"), "--gradients",
                 str(w / "g1.json"), "--observable", "ZI,IZ"]) == 1


def test_classical_trig_subcommand(tmp_path, capsys):
    from vqc_privacy.inversion import classical_gradients

    om = [1.0, 2.0]
    (tmp_path / "c.json").write_text(json.dumps(classical_gradients(np.array([0.1, 0.2, 0.3, 0.4]), 2.0, 1.3, om).tolist()))
    (tmp_path / "om.json").write_text(json.dumps(om))
    assert main(["invert", "--method", "classical-trig", "--gradients", str(tmp_path / "c.json"), "--omegas",
                 str(tmp_path / "om.json")]) == 0
    assert abs(json.loads(capsys.readouterr().out)["x_recovered"][0] - 1.3) < 1e-10
