"""Stationary-point spacing for the dressed single rotation and the GUE encoder.

Writes long-format curves and per-n summaries under ``--out`` and prints the
mean spacing table.
"""

import argparse
from pathlib import Path

import numpy as np

from vqc_privacy.harness import emit_report, landscape_sweep, mean_r_by_n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--samples", type=int, default=4096)
    ap.add_argument("--out", default="results/landscape")
    args = ap.parse_args()
    for encoder in ("dressed_rotation", "gue"):
        recs = landscape_sweep(encoder, args.qubits, range(args.seeds), (0.0, 2 * np.pi), args.samples, 0)
        emit_report(recs, "csv", Path(args.out) / encoder)
        means = mean_r_by_n(recs)
        print(encoder)
        for n, r in means.items():
            print(f"  n={n}  mean r = {r:.4f}")


if __name__ == "__main__":
    main()
