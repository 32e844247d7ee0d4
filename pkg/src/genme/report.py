"""Run reports: a JSON document and a plain-text table view of the same data."""

from __future__ import annotations

import json

from .explanation import render_explanation
from .parser import RunConfig
from .search import NearMissFamily

SCHEMA_VERSION = 1


def _hist(counts: dict[int, int]) -> dict[str, int]:
    return {str(d): n for d, n in counts.items()}


def build_report(family: NearMissFamily, config: RunConfig,
                 timing: dict[str, float] | None = None) -> dict:
    """Assemble the report dictionary; key order is fixed for stable output."""
    degrees = range(1, family.report_degrees + 1)
    report = {
        "schema": SCHEMA_VERSION,
        "target": str(family.target),
        "candidates": len(family.candidates),
        "degrees": family.report_degrees,
        "local_explanations": [
            {"clause": str(le.clause), "theta": le.theta.to_dict(), "ground": str(le.ground_clause)}
            for le in family.local
        ],
        "pairs": [
            {"label": f"{fs[0].from_symbol}/{fs[0].to_symbol}",
             "filters": [f.to_dict() for f in fs],
             "histogram": _hist(family.histogram(fs, degrees))}
            for fs in family.pairs().values()
        ],
        "filters": [
            {**f.to_dict(), "histogram": _hist(family.histogram(f, degrees))}
            for f in family.filters
        ],
        "explanations": [e.to_dict() for e in family.explanations],
        "config": config.to_dict(),
    }
    if timing is not None:
        report["timing"] = {k: round(v, 6) for k, v in timing.items()}
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def to_text(report: dict, family: NearMissFamily | None = None, templates=None) -> str:
    """Tables-style histogram per filter pair and filter, then every explanation."""
    k = report["degrees"]
    out = [
        f"target: {report['target']}",
        f"candidates: {report['candidates']}",
        f"local explanations: {len(report['local_explanations'])}",
    ]
    out += [f"  {le['ground']}" for le in report["local_explanations"]]
    out.append(f"histogram (E1..E{k}):")
    for p in report["pairs"]:
        out.append(f"  {p['label']}: " + ",".join(str(p["histogram"][str(d)]) for d in range(1, k + 1)))
    out.append("per filter:")
    for f in report["filters"]:
        counts = ",".join(str(f["histogram"][str(d)]) for d in range(1, k + 1))
        out.append(f"  {f['from']}->{f['to']} ({f['mode']}): {counts}")
    out.append(f"explanations: {len(report['explanations'])}")
    for i, e in enumerate(report["explanations"]):
        fl = e["filter"]
        out.append(f"  [d={e['degree']}] {fl['from']}->{fl['to']} {e['clause']}")
        if templates and family is not None:
            out.append(f"      {render_explanation(family.explanations[i], templates)}")
    if "timing" in report:
        out.append("timing: " + ", ".join(f"{k}={v:.3f}s" for k, v in report["timing"].items()))
    return "\n".join(out) + "\n"
