"""Tabular input/output and run reports.

CSV is the table format and JSON holds scalars.  Output is byte-stable:
floats are written with ``repr`` precision, JSON keys are sorted and no
timestamps are recorded.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_TAG = "parampkit.report/1"

EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2


class TableError(ValueError):
    pass


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def read_table(path, columns) -> dict:
    """Read a CSV with a header containing ``columns``; returns float arrays."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise TableError(f"{path}: empty table")
    header = [h.strip() for h in rows[0]]
    missing = [c for c in columns if c not in header]
    if missing:
        raise TableError(f"{path}: missing column(s) {', '.join(missing)}; header is {header}")
    idx = [header.index(c) for c in columns]
    out = {c: [] for c in columns}
    for line, row in enumerate(rows[1:], start=2):
        try:
            for c, i in zip(columns, idx):
                out[c].append(float(row[i]))
        except (ValueError, IndexError) as exc:
            raise TableError(f"{path}: line {line}: {exc}") from exc
    if not out[columns[0]]:
        raise TableError(f"{path}: no data rows")
    return {c: np.array(v) for c, v in out.items()}


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def table_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def write_table(path, columns, rows) -> Path:
    path = Path(path)
    path.write_text(table_text(columns, rows))
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan; keep them readable and round-trippable
        return x if math.isfinite(x) else str(x)
    return obj


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


@dataclass
class RunReport:
    """Everything a subcommand produced."""

    command: str
    argv: list
    inputs: dict = field(default_factory=dict)  # name -> sha256
    summary: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)  # name -> (columns, rows)
    warnings: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def add_input(self, name, path):
        self.inputs[name] = file_digest(path)

    def add_table(self, name, columns, rows):
        self.tables[name] = (list(columns), [list(r) for r in rows])

    @property
    def exit_code(self) -> int:
        if self.errors:
            return EXIT_ERROR
        return EXIT_WARN if self.warnings else EXIT_OK

    def document(self, with_tables=False) -> dict:
        doc = {
            "schema": SCHEMA_TAG,
            "command": self.command,
            "argv": list(self.argv),
            "inputs": dict(sorted(self.inputs.items())),
            "summary": self.summary,
            "warnings": list(self.warnings),
            "errors": list(self.errors),
            "exit_code": self.exit_code,
        }
        if with_tables:
            doc["tables"] = {k: {"columns": c, "rows": r} for k, (c, r) in self.tables.items()}
        return doc

    def emit(self, out_dir, fmt="csv") -> list:
        """Write ``<command>.json`` (and one CSV per table when ``fmt='csv'``)."""
        out = Path(out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"output directory {out} is not writable: {exc}") from exc
        written = []
        if fmt == "csv":
            for name, (cols, rows) in self.tables.items():
                written.append(write_table(out / f"{name}.csv", cols, rows))
        elif fmt != "json":
            raise ValueError(f"unknown format {fmt!r}")
        path = out / f"{self.command}.json"
        path.write_text(json_text(self.document(with_tables=fmt == "json")))
        written.append(path)
        return written
