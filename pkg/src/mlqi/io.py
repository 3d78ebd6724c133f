"""Text formats: command output records and cosine-series files.

Command output is CSV (default) or JSON. CSV starts with the line
``# mlqi v1 <command>``, then a header row, then one row per record, with
floats in scientific notation to 6 significant digits and LF endings;
warnings follow as ``# warning: ...`` lines. JSON is a single object
``{"command", "params", "rows", "warnings"}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import CosineSeries

__all__ = [
    "FORMAT_VERSION",
    "OutputRecord",
    "format_value",
    "series_from_csv",
    "series_from_json",
    "series_to_csv",
    "series_to_json",
]

FORMAT_VERSION = "v1"


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return str(float(value))
        return f"{float(value):.5e}"
    return str(value)


def _jsonable(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class OutputRecord:
    command: str
    params: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def columns(self) -> list:
        cols = []
        for row in self.rows:
            for key in row:
                if key not in cols:
                    cols.append(key)
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# mlqi {FORMAT_VERSION} {self.command}\n")
        cols = self.columns()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in self.rows:
            writer.writerow([format_value(row.get(c)) for c in cols])
        for w in self.warnings:
            buf.write(f"# warning: {w}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        obj = {
            "command": self.command,
            "params": _jsonable(self.params),
            "rows": _jsonable(self.rows),
            "warnings": list(self.warnings),
        }
        return json.dumps(obj, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def series_to_csv(f: CosineSeries) -> str:
    """Nonzero terms as ``frequency,coefficient`` rows (17 significant digits)."""
    idx, vals = f.nonzero()
    lines = [f"# mlqi {FORMAT_VERSION} series", "frequency,coefficient"]
    lines += [f"{k},{v:.16e}" for k, v in zip(idx, vals)]
    return "\n".join(lines) + "\n"


def series_from_csv(text: str) -> CosineSeries:
    """Parse a ``frequency,coefficient`` block; comments and a header are skipped."""
    pairs = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) < 2:
            raise ValueError(f"expected two columns, got {row!r}")
        try:
            k = int(row[0])
        except ValueError:
            if not pairs and not row[0].strip().lstrip("-").isdigit():
                continue  # header
            raise
        pairs.append((k, float(row[1])))
    return CosineSeries.from_pairs(pairs)


def series_to_json(f: CosineSeries) -> str:
    return json.dumps({"coeffs": [float(v) for v in f.coeffs]})


def series_from_json(text: str) -> CosineSeries:
    obj = json.loads(text)
    return CosineSeries(np.asarray(obj["coeffs"], dtype=float))
