"""CSV and JSON emission for attack reports and landscape sweeps."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .landscape import LandscapeRecord, mean_r_by_n
from .pipeline import RECORD_FIELDS, AttackReport

LANDSCAPE_FIELDS = ("n", "seed", "x", "value")
SUMMARY_FIELDS = ("n", "mean_r")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(header), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k) for k in header})
    return buf.getvalue()


def attack_csv(report: AttackReport) -> str:
    return _csv(report.records, RECORD_FIELDS)


def landscape_csv(records: list[LandscapeRecord]) -> tuple[str, str]:
    """Long-format curve table and the per-``n`` summary table."""
    rows = []
    for rec in records:
        for x, v in zip(rec.x, rec.values):
            rows.append({"n": rec.n, "seed": rec.seed, "x": repr(float(x)), "value": repr(float(v))})
    summary = [{"n": n, "mean_r": repr(r)} for n, r in mean_r_by_n(records).items()]
    return _csv(rows, LANDSCAPE_FIELDS), _csv(summary, SUMMARY_FIELDS)


def emit_report(report, fmt: str = "json", out=None) -> dict[str, str]:
    """Serialize an :class:`AttackReport` or a list of landscape records.

    Returns ``{filename: text}``; when ``out`` is a directory the files are
    written there as well.
    """
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    files: dict[str, str] = {}
    if isinstance(report, AttackReport):
        if fmt == "json":
            files["report.json"] = json.dumps(report.to_json_obj(), indent=2, sort_keys=True)
        else:
            files["report.csv"] = attack_csv(report)
    else:
        records = list(report)
        if fmt == "json":
            obj = {
                "records": [r.to_json_obj() for r in records],
                "summary": {str(n): r for n, r in mean_r_by_n(records).items()},
            }
            files["landscape.json"] = json.dumps(obj, indent=2, sort_keys=True)
        else:
            curve, summary = landscape_csv(records)
            files["landscape.csv"] = curve
            files["landscape_summary.csv"] = summary
    if out is not None:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (d / name).write_text(text)
    return files
