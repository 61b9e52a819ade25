"""Trace export to CSV and JSON-lines, and the matching readers.

Floats are written with ``repr`` so every value round-trips exactly, and
identical traces give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import PipeClimbError
from .transmission import TRACKS
from .traversal import Trace

COLUMNS = (
    "t", "s", "segment",
    "vA", "vB", "vC",
    "reqA", "reqB", "reqC",
    "slipA", "slipB", "slipC",
    "springA", "springB", "springC",
)
_GROUPS = (("v", "commanded"), ("req", "required"), ("slip", "slip"), ("spring", "spring"))


class TelemetryIOError(PipeClimbError, OSError):
    pass


def _format_for(path: Path, format: str | None) -> str:
    if format is None:
        format = "jsonl" if path.suffix in (".jsonl", ".json") else "csv"
    if format not in ("csv", "jsonl"):
        raise ValueError(f"unknown trace format {format!r}; use csv or jsonl")
    return format


def _rows(trace: Trace):
    for k in range(len(trace)):
        row = {"t": float(trace.t[k]), "s": float(trace.s[k]), "segment": int(trace.segment[k])}
        for prefix, attr in _GROUPS:
            values = getattr(trace, attr)[k]
            for i, tr in enumerate(TRACKS):
                row[prefix + tr] = float(values[i])
        yield row


def export_trace(trace: Trace, path, format: str | None = None) -> Path:
    """Write ``trace`` to ``path`` as ``csv`` or ``jsonl`` (default: by suffix)."""
    path = Path(path)
    fmt = _format_for(path, format)
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "csv":
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(COLUMNS)
                for row in _rows(trace):
                    writer.writerow([repr(row[c]) for c in COLUMNS])
            else:
                for row in _rows(trace):
                    fh.write(json.dumps(row) + "\n")
    except OSError as exc:
        raise TelemetryIOError(f"cannot write trace to {path}: {exc.strerror or exc}") from exc
    return path


def read_trace(path, format: str | None = None) -> Trace:
    path = Path(path)
    fmt = _format_for(path, format)
    try:
        with open(path, newline="") as fh:
            if fmt == "csv":
                reader = csv.reader(fh)
                header = tuple(next(reader))
                if header != COLUMNS:
                    raise TelemetryIOError(f"{path}: unexpected CSV header {header}")
                rows = [dict(zip(COLUMNS, r)) for r in reader]
            else:
                rows = [json.loads(line) for line in fh if line.strip()]
    except OSError as exc:
        raise TelemetryIOError(f"cannot read trace from {path}: {exc.strerror or exc}") from exc

    def col(name, dtype=float):
        return np.array([dtype(r[name]) for r in rows], dtype=dtype)

    def block(prefix):
        return np.column_stack([col(prefix + tr) for tr in TRACKS]) if rows else np.empty((0, 3))

    return Trace(
        t=col("t"),
        s=col("s"),
        segment=np.array([int(r["segment"]) for r in rows], dtype=np.int64),
        commanded=block("v"),
        required=block("req"),
        slip=block("slip"),
        spring=block("spring"),
    )
