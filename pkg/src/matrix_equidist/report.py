"""JSON reports and plot-data files."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
TIMING_KEY = "wall_clock_s"

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "name", "parameters", "records", "verdicts", "passed", TIMING_KEY],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "parameters": {"type": "object"},
        "records": {"type": "array", "items": {"type": "object"}},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check", "status"],
                "properties": {
                    "check": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "not_asserted"]},
                    "detail": {"type": "string"},
                },
            },
        },
        "passed": {"type": "boolean"},
        TIMING_KEY: {"type": "number", "minimum": 0},
    },
}


def verdict(check: str, ok: bool | None, detail: str = "") -> dict:
    status = "not_asserted" if ok is None else ("pass" if ok else "fail")
    out = {"check": check, "status": status}
    if detail:
        out["detail"] = detail
    return out


def make_report(name: str, parameters: dict, records: list, verdicts: list, wall: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "parameters": parameters,
        "records": records,
        "verdicts": verdicts,
        "passed": all(v["status"] != "fail" for v in verdicts),
        TIMING_KEY: round(wall, 6),
    }


def _default(obj):
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, default=_default, sort_keys=True, indent=2, allow_nan=False)


def without_timing(report: dict) -> dict:
    """Copy of a report with every wall-clock field removed (for determinism checks)."""
    if isinstance(report, dict):
        return {k: without_timing(v) for k, v in report.items() if k != TIMING_KEY}
    if isinstance(report, list):
        return [without_timing(v) for v in report]
    return report


def write_report(report: dict, path) -> None:
    Path(path).write_text(dumps(report) + "\n")


def write_plot_data(path, columns: tuple[str, str], rows) -> None:
    """Two-column whitespace-separated data with a ``#`` header line."""
    lines = [f"# {columns[0]} {columns[1]}"]
    for x, y in rows:
        lines.append(f"{x} {y!r}" if isinstance(y, float) and math.isfinite(y) else f"{x} {y}")
    Path(path).write_text("\n".join(lines) + "\n")
