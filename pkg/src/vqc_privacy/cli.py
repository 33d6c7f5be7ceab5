"""Command-line entry point: ``vqc-privacy <subcommand> ...``.

Circuits travel between subcommands as circuit JSON (see
:func:`vqc_privacy.circuits.render`). Exit status is 0 when the command
completed, 1 when the requested operation raised a library error, and 2 on
a configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import circuits as cz
from .dla import DlaBasis, compute_dla_basis, structure_constants
from .errors import ConfigError, VqcPrivacyError
from .gsim import gsim_gradients, gsim_output, observable_coeffs
from .harness.config import ExperimentConfig, LandscapeConfig
from .harness.landscape import landscape_sweep
from .harness.pipeline import run_attack_pipeline
from .harness.report import emit_report
from .inversion import (
    classical_trig_recover,
    direct_input_recovery,
    grid_search_invert,
    invert_general_pauli,
    invert_pauli_product_all,
    perturbed_gd_invert,
)
from .inversion.common import InversionResult, Status, to_jsonable
from .oracle import ExpectationOracle, snapshot_of
from .pauli import HermitianPauliSum
from .recovery import recover_snapshot_ratio_rounds, recover_snapshot_rounds

INVERT_METHODS = ("pauli-product", "general-pauli", "grid", "pgd", "direct", "classical-trig")


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read {path}: {err}") from None


def _circuit(path, cls):
    try:
        circ = cz.circuit_from_obj(_read_json(path))
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(f"{path}: malformed circuit ({err})") from None
    if not isinstance(circ, cls):
        raise ConfigError(f"{path} does not hold a {cls.__name__}")
    return circ


def _observable(arg, n: int) -> HermitianPauliSum:
    """A JSON file with ``[{"string", "coeff"}, ...]`` or comma-separated labels."""
    if arg is None:
        raise ConfigError("--observable is required")
    if Path(arg).is_file():
        return HermitianPauliSum.from_json_obj(_read_json(arg), n)
    try:
        return HermitianPauliSum.from_terms(((s.strip(), 1.0) for s in arg.split(",")), n_qubits=n)
    except ValueError as err:
        raise ConfigError(f"bad observable {arg!r}: {err}") from None


def _rounds(obj) -> list[np.ndarray]:
    arr = [np.asarray(obj, dtype=float)] if obj and np.isscalar(obj[0]) else [np.asarray(r, dtype=float) for r in obj]
    return arr


def _basis(args, n: int) -> DlaBasis:
    if args.basis:
        return DlaBasis.from_json_obj(_read_json(args.basis))
    if args.ansatz:
        ans = _circuit(args.ansatz, cz.AnsatzCircuit)
        return compute_dla_basis(ans.generators, max_dim=args.max_dim or 64 * n * n)
    raise ConfigError("need --basis or --ansatz")


def _emit(obj, out):
    text = json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- subcommands ------------------------------------------------------


def cmd_dla(args):
    circ = _circuit(args.circuit, cz.AnsatzCircuit)
    n = circ.n_qubits
    basis = compute_dla_basis(circ.generators, max_dim=args.max_dim or 64 * n * n)
    obj = {"dim": basis.dim, **basis.to_json_obj()}
    if args.structure_constants:
        obj["structure_constants"] = structure_constants(basis).to_json_obj()
    _emit(obj, args.out)


def cmd_gsim(args):
    enc = _circuit(args.circuit, cz.EncodingCircuit)
    ans = _circuit(args.ansatz, cz.AnsatzCircuit)
    basis = _basis(args, ans.n_qubits)
    sc = structure_constants(basis)
    obs = _observable(args.observable, ans.n_qubits)
    mu = observable_coeffs(obs, basis)
    theta = np.asarray(_read_json(args.theta), dtype=float)
    x = np.asarray(_read_json(args.x), dtype=float)
    e = snapshot_of(enc, x, basis)
    _emit({
        "snapshot": e.values,
        "output": gsim_output(mu, ans, theta, basis, sc, e),
        "gradients": gsim_gradients(mu, ans, theta, basis, sc, e),
    }, args.out)


def cmd_recover(args):
    ans = _circuit(args.ansatz, cz.AnsatzCircuit)
    basis = _basis(args, ans.n_qubits)
    sc = structure_constants(basis)
    obs = _observable(args.observable, ans.n_qubits)
    thetas = _rounds(_read_json(args.theta))
    grads = _rounds(_read_json(args.gradients))
    if len(thetas) != len(grads):
        raise ConfigError(f"{len(thetas)} parameter settings but {len(grads)} gradient vectors")
    solve = recover_snapshot_ratio_rounds if args.unknown_cost else recover_snapshot_rounds
    res = solve(grads, ans, thetas, obs, basis, sc)
    _emit(res.to_json_obj(), args.out)


def cmd_invert(args):
    if args.method == "classical-trig":
        if not (args.gradients and args.omegas):
            raise ConfigError("classical-trig needs --gradients and --omegas")
        phi, x = classical_trig_recover(np.asarray(_read_json(args.gradients), float),
                                        np.asarray(_read_json(args.omegas), float))
        _emit({"phi": phi, "x_recovered": [x]}, args.out)
        return
    enc = _circuit(args.circuit, cz.EncodingCircuit)
    basis = _basis(args, enc.n_qubits)
    e = np.asarray(_read_json(args.snapshot), dtype=float)
    if e.shape != (basis.dim,):
        raise ConfigError(f"snapshot has {e.size} entries, basis has {basis.dim}")
    oracle = ExpectationOracle(enc)
    if args.method == "pauli-product":
        res = invert_pauli_product_all(e, basis, enc)
    elif args.method == "general-pauli":
        if enc.partition is None:
            raise ConfigError("general-pauli needs a circuit with a partition")
        xs, status, details = np.full(enc.input_dim, np.nan), [Status.NOT_ATTEMPTED] * enc.input_dim, {}
        for b, blk in enumerate(enc.partition):
            if not blk.inputs:
                continue
            r = invert_general_pauli(e, basis, enc, blk, oracle, seed=args.seed)
            for k, i in enumerate(blk.inputs):
                xs[i], status[i] = r.x_recovered[k], r.per_index_status[k]
            details[str(b)] = r.details
        res = InversionResult(xs, tuple(status), None, oracle.calls, details)
    elif args.method == "grid":
        res = grid_search_invert(e, enc, basis, args.eps, oracle=oracle)
    elif args.method == "pgd":
        res = perturbed_gd_invert(e, enc, basis, oracle=oracle, seed=args.seed)
    else:
        ans = _circuit(args.ansatz, cz.AnsatzCircuit) if args.ansatz else None
        if ans is None or not (args.gradients and args.theta):
            raise ConfigError("direct needs --ansatz, --theta and --gradients")
        obs = _observable(args.observable, enc.n_qubits)
        C = np.asarray(_read_json(args.gradients), float)
        res = direct_input_recovery(C, enc, ans, np.asarray(_read_json(args.theta), float), obs, seed=args.seed)
    _emit(res.to_json_obj(), args.out)


def _batch_out(args, default_dir):
    return args.out if args.out else default_dir


def cmd_landscape(args):
    obj = _read_json(args.config) if args.config else {}
    cfg = LandscapeConfig.from_json_obj(obj)
    if args.seed is not None:
        cfg.seeds = [args.seed]
    recs = landscape_sweep(cfg.encoder, cfg.qubits, cfg.seeds, tuple(cfg.x_range), cfg.samples, cfg.observable_qubit)
    files = emit_report(recs, args.format, _batch_out(args, cfg.output_dir))
    if not (args.out or cfg.output_dir):
        for text in files.values():
            sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_attack(args):
    if not args.config:
        raise ConfigError("attack needs --config")
    cfg = ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg.seeds = [args.seed]
    report = run_attack_pipeline(cfg)
    files = emit_report(report, args.format, _batch_out(args, cfg.output_dir))
    if not (args.out or cfg.output_dir):
        for text in files.values():
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
    agg = report.aggregate()
    print(f"{agg['instances']} instances, success rate {agg['success_rate']:.3f}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config (landscape, attack)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", help="output file (or directory for batch commands)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="vqc-privacy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dla", parents=[common], help="Lie closure of an ansatz")
    s.add_argument("--circuit", required=True, help="ansatz circuit JSON")
    s.add_argument("--max-dim", type=int)
    s.add_argument("--structure-constants", action="store_true")
    s.set_defaults(func=cmd_dla)

    s = sub.add_parser("gsim", parents=[common], help="g-sim output and gradients")
    s.add_argument("--circuit", required=True, help="encoding circuit JSON")
    s.add_argument("--ansatz", required=True)
    s.add_argument("--theta", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--observable")
    s.add_argument("--basis")
    s.add_argument("--max-dim", type=int)
    s.set_defaults(func=cmd_gsim)

    s = sub.add_parser("recover", parents=[common], help="snapshot from gradients")
    s.add_argument("--circuit", help="encoding circuit JSON (unused by the solve)")
    s.add_argument("--ansatz", required=True)
    s.add_argument("--theta", required=True, help="one parameter vector or a list of rounds")
    s.add_argument("--gradients", required=True, help="matching gradient vector(s)")
    s.add_argument("--unknown-cost", action="store_true", help="gradients of an unknown cost f(y); solve the ratio system")
    s.add_argument("--observable")
    s.add_argument("--basis")
    s.add_argument("--max-dim", type=int)
    s.set_defaults(func=cmd_recover)

    s = sub.add_parser("invert", parents=[common], help="input from a snapshot")
    s.add_argument("--method", choices=INVERT_METHODS, required=True)
    s.add_argument("--snapshot")
    s.add_argument("--circuit")
    s.add_argument("--basis")
    s.add_argument("--ansatz")
    s.add_argument("--theta")
    s.add_argument("--gradients")
    s.add_argument("--observable")
    s.add_argument("--omegas")
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--max-dim", type=int)
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("landscape", parents=[common], help="stationary-point spacing sweep")
    s.set_defaults(func=cmd_landscape)

    s = sub.add_parser("attack", parents=[common], help="end-to-end attack batch")
    s.set_defaults(func=cmd_attack)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.command == "invert" and args.method != "classical-trig" and not (args.snapshot and args.circuit):
        print("error: invert needs --snapshot and --circuit", file=sys.stderr)
        return 2
    if args.seed is None and args.command in ("invert",):
        args.seed = 0
    try:
        args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except VqcPrivacyError as err:
        print(f"{err.code}: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
