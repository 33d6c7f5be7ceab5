"""End-to-end attack: gradients -> snapshot -> input, one record per instance."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import circuits as cz
from ..dla import DlaBasis, compute_dla_basis, structure_constants
from ..errors import ConfigError, RankDeficient, VqcPrivacyError
from ..gsim import chi_matrix, observable_coeffs
from ..inversion import (
    direct_input_recovery,
    grid_search_invert,
    invert_general_pauli,
    invert_pauli_product_all,
    perturbed_gd_invert,
)
from ..inversion.common import InversionResult, Status, encoding_periods, periodic_error
from ..oracle import ExpectationOracle, snapshot_of, vqc_gradients
from ..pauli import HermitianPauliSum, PauliString
from ..recovery import recover_snapshot_rounds
from .config import ExperimentConfig

# -- instance builders ----------------------------------------------------


def build_encoding(spec: dict, n: int) -> cz.EncodingCircuit:
    kind = spec["kind"]
    if kind == "pauli_product":
        return cz.pauli_product_map(n, spec.get("axis", "X"))
    if kind == "fourier_tower":
        m = int(spec.get("m", 1))
        if n % m:
            raise ConfigError(f"fourier_tower with m={m} needs n divisible by m, got {n}")
        return cz.fourier_tower_map(n // m, m, float(spec.get("base", 5.0)))
    if kind == "separable_block":
        if n % 2:
            raise ConfigError("separable_block needs an even qubit count")
        return cz.separable_block_encoder(n // 2, int(spec.get("inputs_per_block", 2)), int(spec.get("reps", 1)),
                                          int(spec.get("seed", 0)))
    if kind == "random_hermitian":
        return cz.random_hermitian_encoder(n, int(spec.get("n_inputs", 1)), int(spec.get("seed", 0)))
    if kind == "file":
        return _load_circuit(spec["path"], cz.EncodingCircuit)
    raise ConfigError(f"unknown encoding kind {kind!r}")


def build_generators(spec: dict, n: int) -> list[HermitianPauliSum]:
    kind = spec["kind"]
    if kind == "su2_block":
        return cz.su2_block_generators(n)
    if kind == "tfim":
        return cz.tfim_generators(n)
    if kind == "block_su4":
        if n % 2:
            raise ConfigError("block_su4 needs an even qubit count")
        return cz.block_su4_generators(n // 2)
    if kind == "universal":
        # X, Y on every qubit plus nearest-neighbour ZZ: the closure is su(2^n)
        return cz.su2_block_generators(n) + cz.tfim_generators(n)[: n - 1]
    if kind == "file":
        return _load_circuit(spec["path"], cz.AnsatzCircuit).generators
    raise ConfigError(f"unknown ansatz kind {kind!r}")


def default_observable(spec: dict, n: int) -> HermitianPauliSum:
    """``sum_i Z_i`` for local ansatze, ``X_0`` for the TFIM chain."""
    if spec["kind"] == "tfim":
        return HermitianPauliSum.from_pauli(PauliString.single(n, 0, "X"))
    acc = HermitianPauliSum.zero(n)
    for q in range(n):
        acc = acc + HermitianPauliSum.from_pauli(PauliString.single(n, q, "Z"))
    return acc


def _load_circuit(path, cls):
    try:
        circ = cz.parse(Path(path).read_text())
    except (OSError, json.JSONDecodeError, KeyError) as err:
        raise ConfigError(f"cannot read circuit {path}: {err}") from None
    if not isinstance(circ, cls):
        raise ConfigError(f"{path} does not hold a {cls.__name__}")
    return circ


def _observable(cfg: ExperimentConfig, n: int) -> HermitianPauliSum:
    if cfg.observable is None:
        return default_observable(cfg.ansatz, n)
    terms = [(t, 1.0) if isinstance(t, str) else (t["string"], t["coeff"]) for t in cfg.observable]
    return HermitianPauliSum.from_terms(terms, n_qubits=n)


# -- report ---------------------------------------------------------------


@dataclass
class AttackReport:
    config_hash: str
    config: dict
    records: list[dict] = field(default_factory=list)
    timings: list[dict] = field(default_factory=list)

    def aggregate(self) -> dict:
        errs = [r["error_metric"] for r in self.records if r["error_metric"] is not None]
        ok = [bool(r["success"]) for r in self.records]
        return {
            "instances": len(self.records),
            "success_rate": float(np.mean(ok)) if ok else 0.0,
            "mean_error": float(np.mean(errs)) if errs else None,
            "median_error": float(np.median(errs)) if errs else None,
        }

    def body(self) -> dict:
        """Everything except wall-clock timings; identical across replays."""
        return {
            "config_hash": self.config_hash,
            "config": self.config,
            "records": self.records,
            "aggregate": self.aggregate(),
        }

    def to_json_obj(self) -> dict:
        out = self.body()
        out["timings"] = self.timings
        return out


RECORD_FIELDS = (
    "config_hash", "n", "seed", "dim_g", "D", "rounds", "method", "success", "error_metric",
    "snapshot_error", "oracle_calls", "reason",
)

# -- pipeline -------------------------------------------------------------


def _rounds_until_full_rank(mu, ans, basis, sc, rng, cfg) -> list[np.ndarray]:
    """Parameter settings the attacker watches; 'auto' stops at full stacked rank."""
    fixed = cfg.gradient_rounds if cfg.gradient_rounds != "auto" else None
    limit = fixed or cfg.max_rounds
    thetas, rows = [], []
    for _ in range(limit):
        thetas.append(rng.uniform(0, 2 * np.pi, ans.n_params))
        rows.append(chi_matrix(mu, ans, thetas[-1], basis, sc).A)
        if fixed is None:
            s = np.linalg.svd(np.vstack(rows), compute_uv=False)
            if np.sum(s > cfg.tol("rank") * s[0]) == basis.dim:
                break
    return thetas


def _invert(cfg, e, basis, enc, ans, thetas, grads, obs, x_true, oracle) -> InversionResult:
    p = dict(cfg.method_params)
    if cfg.method == "pauli-product":
        return invert_pauli_product_all(e, basis, enc, x_true)
    if cfg.method == "general-pauli":
        if enc.partition is None:
            raise ConfigError("general-pauli needs an encoding with a declared partition")
        xs = np.full(enc.input_dim, np.nan)
        status = [Status.NOT_ATTEMPTED] * enc.input_dim
        details = {}
        for b, blk in enumerate(enc.partition):
            if not blk.inputs:
                continue
            r = invert_general_pauli(e, basis, enc, blk, oracle, seed=int(p.get("probe_seed", 0)))
            for k, i in enumerate(blk.inputs):
                xs[i] = r.x_recovered[k]
                status[i] = r.per_index_status[k]
            details[b] = {"ambiguity": r.details.get("ambiguity"), "S_J": r.details.get("S_J")}
        err = None
        if all(s == Status.RECOVERED for s in status):
            err = periodic_error(xs, x_true, encoding_periods(enc))
        return InversionResult(xs, tuple(status), err, oracle.calls, details)
    if cfg.method == "grid":
        return grid_search_invert(e, enc, basis, float(p.get("eps", 1e-3)), oracle=oracle, x_true=x_true,
                                  budget=int(p.get("budget", 10**7)))
    if cfg.method == "pgd":
        return perturbed_gd_invert(e, enc, basis, oracle=oracle, x_true=x_true, seed=int(p.get("seed", 0)),
                                   **{k: v for k, v in p.items() if k in ("step", "noise_radius", "iters", "restarts")})
    if cfg.method == "direct":
        return direct_input_recovery(grads[0], enc, ans, thetas[0], obs, x_true=x_true, seed=int(p.get("seed", 0)),
                                     **{k: v for k, v in p.items() if k in ("step", "noise_radius", "iters", "restarts")})
    raise ConfigError(f"unknown method {cfg.method!r}")


def run_instance(cfg: ExperimentConfig, n: int, seed: int) -> tuple[dict, dict]:
    """One ``(n, seed)`` instance; errors become a failed record with a reason code."""
    t0 = time.perf_counter()
    rec = {k: None for k in RECORD_FIELDS}
    rec.update(config_hash=cfg.config_hash(), n=n, seed=seed, method=cfg.method, success=False, oracle_calls=0)
    artifacts: dict = {}
    try:
        rng = np.random.default_rng([seed, n])
        enc = build_encoding(cfg.encoding, n)
        gens = build_generators(cfg.ansatz, enc.n_qubits)
        basis = compute_dla_basis(gens, max_dim=cfg.budget_for(enc.n_qubits))
        sc = structure_constants(basis)
        rec["dim_g"] = basis.dim
        n_params = cfg.ansatz.get("n_params", basis.dim + 1)
        ans = cz.ansatz_with_params(gens, int(n_params))
        rec["D"] = ans.n_params
        obs = _observable(cfg, enc.n_qubits)
        mu = observable_coeffs(obs, basis)
        x_true = np.array([rng.uniform(0, p if p else 2 * np.pi) for p in encoding_periods(enc)])

        thetas = _rounds_until_full_rank(mu, ans, basis, sc, rng, cfg)
        rec["rounds"] = len(thetas)
        # the victim's shared gradients, from the dense simulator
        grads = [vqc_gradients(enc, ans, t, obs, x_true) for t in thetas]
        rec["oracle_calls"] = 0
        e_true = snapshot_of(enc, x_true, basis).values
        result = recover_snapshot_rounds(grads, ans, thetas, obs, basis, sc)
        e = result.values
        rec["snapshot_error"] = float(np.max(np.abs(e - e_true)))
        oracle = ExpectationOracle(enc)
        inv = _invert(cfg, e, basis, enc, ans, thetas, grads, obs, x_true, oracle)
        rec["oracle_calls"] = int(inv.oracle_calls)
        rec["error_metric"] = inv.error_metric
        if not inv.success:
            rec["reason"] = "failure"
        rec["success"] = bool(inv.success and inv.error_metric is not None and inv.error_metric < cfg.tol("success"))
        artifacts = {
            "x_true": x_true.tolist(),
            "thetas": [t.tolist() for t in thetas],
            "gradients": [g.tolist() for g in grads],
            "snapshot_true": e_true.tolist(),
            "snapshot_recovered": e.tolist(),
            "recovery": result.to_json_obj(),
            "inversion": inv.to_json_obj(),
            "basis": basis.to_json_obj(),
        }
    except RankDeficient as err:
        rec["reason"] = err.code
        artifacts["error"] = str(err)
    except VqcPrivacyError as err:
        if isinstance(err, ConfigError):
            raise
        rec["reason"] = err.code
        artifacts["error"] = str(err)
    except ValueError as err:
        rec["reason"] = "value_error"
        artifacts["error"] = str(err)
    seconds = time.perf_counter() - t0
    if cfg.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"instance_n{n}_s{seed}.json").write_text(json.dumps({"record": rec, "artifacts": artifacts}))
    return rec, {"n": n, "seed": seed, "seconds": seconds}


def _run_pair(args):
    cfg_obj, n, seed = args
    return run_instance(ExperimentConfig.from_json_obj(cfg_obj), n, seed)


def run_attack_pipeline(cfg: ExperimentConfig) -> AttackReport:
    """Run every ``(n, seed)`` instance; a failing instance never stops the batch."""
    pairs = [(n, s) for n in cfg.qubits for s in cfg.seeds]
    report = AttackReport(cfg.config_hash(), cfg.to_json_obj())
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_pair, [(cfg.to_json_obj(), n, s) for n, s in pairs]))
    else:
        results = [run_instance(cfg, n, s) for n, s in pairs]
    for rec, timing in results:
        report.records.append(rec)
        report.timings.append(timing)
    return report


def exact_basis(cfg: ExperimentConfig, n: int) -> DlaBasis:
    return compute_dla_basis(build_generators(cfg.ansatz, n), max_dim=cfg.budget_for(n))
