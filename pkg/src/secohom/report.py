"""Machine-readable reports.

A report is a JSON object::

    {
      "schema": "secohom-report",
      "version": 1,
      "task": {"command": ..., "file": ..., "params": {...}},
      "field": "rationals" | "fp:P",
      "verdict": "pass" | "fail",
      "exit_code": int,
      "result": {...},
      "timing": {"seconds": float}
    }

Scalars are written as strings (``"3"``, ``"-1/2"``) so that no precision is
lost. Keys are sorted and everything except ``timing`` depends only on the
input, so two runs on the same file give identical bytes outside that
section.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

__all__ = ["SCHEMA", "VERSION", "Report", "ReportError", "dumps", "load_report", "loads", "deterministic_part"]

SCHEMA = "secohom-report"
VERSION = 1
_REQUIRED = ("schema", "version", "task", "field", "verdict", "exit_code", "result", "timing")


class ReportError(ValueError):
    pass


@dataclass
class Report:
    command: str
    file: str
    params: dict
    field: str
    verdict: str
    exit_code: int
    result: dict
    seconds: float = 0.0
    table: list = dc_field(default_factory=list)  # (key, value) rows for the human table

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": VERSION,
            "task": {"command": self.command, "file": self.file, "params": self.params},
            "field": self.field,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "result": self.result,
            "timing": {"seconds": round(self.seconds, 6)},
        }

    def human(self) -> str:
        rows = [("command", self.command), ("file", self.file), ("field", self.field)]
        rows += [(k, _fmt(v)) for k, v in self.table]
        rows.append(("verdict", self.verdict.upper()))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return ", ".join(str(x) for x in v)
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def dumps(report: Report | dict) -> str:
    data = report.to_dict() if isinstance(report, Report) else report
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"not JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ReportError("a report is a JSON object")
    missing = [k for k in _REQUIRED if k not in data]
    if missing:
        raise ReportError(f"missing keys: {', '.join(missing)}")
    if data["schema"] != SCHEMA:
        raise ReportError(f"unknown schema {data['schema']!r}")
    if data["version"] != VERSION:
        raise ReportError(f"unsupported version {data['version']!r}")
    if data["verdict"] not in ("pass", "fail"):
        raise ReportError(f"bad verdict {data['verdict']!r}")
    return data


def load_report(path: str | Path) -> dict:
    return loads(Path(path).read_text())


def deterministic_part(data: dict) -> dict:
    """The report without its timing section."""
    return {k: v for k, v in data.items() if k != "timing"}
