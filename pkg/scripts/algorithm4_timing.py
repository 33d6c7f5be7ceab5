"""Wall time of the separable-block inversion against the trig order R."""

import argparse
import time

import numpy as np

from vqc_privacy import circuits as cz
from vqc_privacy.dla import compute_dla_basis
from vqc_privacy.inversion import invert_general_pauli
from vqc_privacy.oracle import snapshot_of


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-R", type=int, default=3)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    basis = compute_dla_basis(cz.block_su4_generators(1))
    Rs = list(range(1, args.max_R + 1))
    for q in (1, 2):
        times = []
        for R in Rs:
            enc = cz.separable_block_encoder(1, q, R, seed=11)
            x = np.random.default_rng(R).uniform(0, 2 * np.pi, q)
            e = snapshot_of(enc, x, basis)
            best = np.inf
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                res = invert_general_pauli(e, basis, enc, enc.partition[0], x_true=x)
                best = min(best, time.perf_counter() - t0)
            times.append(best)
            gb = res.details["groebner"][0]
            print(f"q={q} R={R}  {best:8.4f} s  error {res.error_metric:.1e}  "
                  f"ambiguity {res.details['ambiguity']}  lex degree {gb['max_degree']}")
        if len(Rs) > 1:
            slope = np.polyfit(np.log(Rs), np.log(times), 1)[0]
            print(f"q={q} log-log slope {slope:.2f}")


if __name__ == "__main__":
    main()
