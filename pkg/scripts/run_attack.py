"""Run one attack batch from a JSON config and write the report.

    python scripts/run_attack.py scripts/configs/pauli_product.json --out results/pauli_product
"""

import argparse
import json
import sys

from vqc_privacy.harness import ExperimentConfig, emit_report, run_attack_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--out", default=None)
    ap.add_argument("--format", choices=("json", "csv"), default="csv")
    args = ap.parse_args()
    cfg = ExperimentConfig.load(args.config)
    report = run_attack_pipeline(cfg)
    files = emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(next(iter(files.values())))
    print(json.dumps(report.aggregate()), file=sys.stderr)


if __name__ == "__main__":
    main()
