"""CSV and JSON serialization of orbit traces and reports.

CSV is the plot-friendly format: one row per step with a fixed column set
per trace type. JSON carries the full structure, including extreme-point
lists. Floats are written with ``repr`` so identical runs give identical
bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .geometry import FGCS, IntervalCredal

ORBIT_COLUMNS_INTERVAL = ("n", "d_prev", "d_fix", "lo", "hi")
ORBIT_COLUMNS_FGCS = ("n", "d_prev", "d_fix", "extreme_count")


def fmt(x) -> str:
    """Deterministic text for one CSV cell."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def to_csv(columns, rows, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def jsonable(obj):
    """Convert numpy scalars/arrays and domain sets to plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (FGCS, IntervalCredal)):
        return set_summary(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def set_summary(s) -> dict:
    if isinstance(s, IntervalCredal):
        return {"type": "interval", "lo": s.lo, "hi": s.hi}
    return {"type": "fgcs", "dim": s.dim, "extremes": s.tolist()}


def orbit_columns(trace) -> tuple:
    first = trace.steps[0].set
    return ORBIT_COLUMNS_INTERVAL if isinstance(first, IntervalCredal) else ORBIT_COLUMNS_FGCS


def orbit_rows(trace) -> list:
    rows = []
    for s in trace.steps:
        if isinstance(s.set, IntervalCredal):
            rows.append((s.n, s.d_prev, s.d_fix, s.set.lo, s.set.hi))
        else:
            rows.append((s.n, s.d_prev, s.d_fix, len(s.set.extremes)))
    return rows


def orbit_to_dict(trace, include_sets: bool = True) -> dict:
    out = {
        "converged": trace.converged,
        "iterations": trace.iterations,
        "metric": trace.metric_name,
        "tol": trace.tol,
        "start": set_summary(trace.steps[0].set),
        "final": set_summary(trace.final),
        "d_fix": trace.d_fix,
        "d_prev": trace.d_prev,
    }
    if include_sets:
        out["sets"] = [set_summary(s.set) for s in trace.steps]
    return out


def orbit_csv(trace, comment: str | None = None) -> str:
    return to_csv(orbit_columns(trace), orbit_rows(trace), comment)
