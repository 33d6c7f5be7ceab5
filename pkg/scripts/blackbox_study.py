"""Success rates of the black-box attacks.

``pgd`` runs perturbed descent on snapshots of the GUE encoder for growing n.
``direct`` compares gradient-matching input recovery with snapshot inversion
on the Fourier tower.
"""

import argparse

import numpy as np

from vqc_privacy import circuits as cz
from vqc_privacy.dla import compute_dla_basis
from vqc_privacy.inversion import direct_input_recovery, invert_pauli_product, perturbed_gd_invert
from vqc_privacy.inversion.common import periodic_error
from vqc_privacy.oracle import snapshot_of, vqc_gradients
from vqc_privacy.pauli import HermitianPauliSum, PauliString


def pgd_rates(qubits, seeds, tol):
    for n in qubits:
        basis = compute_dla_basis(cz.su2_block_generators(n))
        wins = 0
        for s in seeds:
            enc = cz.random_hermitian_encoder(n, 1, seed=s)
            x = np.random.default_rng([s, n]).uniform(0, 2 * np.pi, 1)
            res = perturbed_gd_invert(snapshot_of(enc, x, basis), enc, basis, seed=s, x_true=x)
            wins += res.error_metric < tol
        print(f"pgd  n={n}  success {wins}/{len(seeds)}")


def direct_vs_snapshot(m, seeds, tol, iters):
    enc = cz.fourier_tower_map(1, m)
    gens = cz.su2_block_generators(m)
    basis = compute_dla_basis(gens)
    ans = cz.ansatz_with_params(gens, basis.dim + 1)
    obs = sum((HermitianPauliSum.from_pauli(PauliString.single(m, q, "Z")) for q in range(m)),
              HermitianPauliSum.zero(m))
    direct = snap = 0
    for s in seeds:
        rng = np.random.default_rng([s, m])
        x = rng.uniform(0, 2 * np.pi, 1)
        theta = rng.uniform(0, 2 * np.pi, ans.n_params)
        C = vqc_gradients(enc, ans, theta, obs, x)
        r = direct_input_recovery(C, enc, ans, theta, obs, iters=iters, seed=s, x_true=x)
        direct += r.error_metric < tol
        xs = invert_pauli_product(snapshot_of(enc, x, basis), basis, enc, 0)
        snap += periodic_error([xs], x, [2 * np.pi]) < tol
    print(f"fourier_tower m={m}: direct {direct}/{len(seeds)}  snapshot {snap}/{len(seeds)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("study", choices=["pgd", "direct"])
    ap.add_argument("--qubits", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--iters", type=int, default=100)
    ap.add_argument("--tol", type=float, default=1e-4)
    args = ap.parse_args()
    seeds = range(args.seeds)
    if args.study == "pgd":
        pgd_rates(args.qubits, seeds, args.tol)
    else:
        direct_vs_snapshot(args.m, seeds, args.tol, args.iters)


if __name__ == "__main__":
    main()
