"""Sweep-file parsing and CSV/JSON table emission.

Sweep files hold one record per line, ``A B l n_max [key=value ...]``,
with ``#`` comments, or a JSON list of objects using the same names.
Tables are written with 17 significant digits so they round-trip exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .model import DomainError, RadialProblem, validate

OVERRIDE_KEYS = {"R": float, "M": int, "N_b": int, "lambda": float, "mu": float, "nu": float}


@dataclass(frozen=True)
class SweepRecord:
    A: float
    B: float
    l: int
    n_max: int
    overrides: dict = field(default_factory=dict)

    @property
    def problem(self) -> RadialProblem:
        return RadialProblem.from_params(self.A, self.B, self.l)

    def to_dict(self) -> dict:
        out = {"A": self.A, "B": self.B, "l": self.l, "n_max": self.n_max}
        out.update(self.overrides)
        return out


def _record(A, B, l, n_max, overrides, where: str) -> SweepRecord:
    bad = set(overrides) - set(OVERRIDE_KEYS)
    if bad:
        raise ValueError(f"{where}: unknown override(s) {sorted(bad)}")
    try:
        ov = {k: OVERRIDE_KEYS[k](v) for k, v in overrides.items()}
        rec = SweepRecord(float(A), float(B), int(l), int(n_max), ov)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: {exc}") from exc
    if rec.l < 0 or rec.n_max < 0:
        raise ValueError(f"{where}: l and n_max must be non-negative")
    report = validate(rec.problem)
    if not report.valid:
        raise DomainError(f"{where}: invalid record, violated {', '.join(report.violations())}",
                          boundary=report.boundary)
    return rec


def parse_sweep_text(text: str) -> list[SweepRecord]:
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("records", [])
        out = []
        for i, obj in enumerate(data):
            obj = dict(obj)
            base = [obj.pop(k) for k in ("A", "B", "l", "n_max")]
            out.append(_record(*base, obj, f"record {i}"))
        return out
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 4:
            raise ValueError(f"line {lineno}: expected 'A B l n_max [key=value ...]'")
        overrides = {}
        for item in parts[4:]:
            if "=" not in item:
                raise ValueError(f"line {lineno}: override {item!r} is not key=value")
            key, val = item.split("=", 1)
            overrides[key] = val
        out.append(_record(*parts[:4], overrides, f"line {lineno}"))
    return out


def read_sweep(path) -> list[SweepRecord]:
    return parse_sweep_text(Path(path).read_text())


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else format(v, ".17g")
    if hasattr(v, "item"):
        return format_value(v.item())
    return str(v)


def parse_value(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def to_csv(rows: list[dict], columns: list[str], header: list[str] | None = None) -> str:
    buf = io.StringIO()
    for line in header or []:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def read_csv_table(text: str) -> list[dict]:
    """Inverse of to_csv: typed dicts, comment lines skipped."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return [{k: parse_value(v) for k, v in row.items()} for row in reader]


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):
        return _json_safe(v.item())
    return v


def to_json(rows: list[dict], meta: dict | None = None, **extra) -> str:
    doc = {"rows": [{k: _json_safe(v) for k, v in r.items()} for r in rows]}
    doc.update(extra)
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=2) + "\n"


