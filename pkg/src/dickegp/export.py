"""CSV / JSON serialization of result tables and scaling reports.

CSV floats are written with 17 significant digits, which round-trips every
IEEE double exactly.  Metadata goes into leading ``# key=value`` lines that
:func:`read_table` skips and returns separately.
"""

import csv
import io
import json

import numpy as np

from .crit import ScalingFit

SWEEP_COLUMNS = (
    "n_atoms",
    "omega",
    "omega0",
    "lambda",
    "sector",
    "e0_per_atom_ed",
    "gp_per_atom_ed",
    "e0_per_atom_analytic",
    "gp_per_atom_analytic",
)

ANALYTIC_COLUMNS = ("lambda", "lambda_c", "alpha", "beta", "E0_per_atom", "gp_per_atom", "gp_slope")


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _parse_value(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


def table_to_csv(columns, rows, meta=None):
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}={format_value(value) if not isinstance(value, str) else value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def table_to_json(columns, rows, meta=None):
    doc = {"meta": meta or {}, "columns": list(columns), "rows": [[row[c] for c in columns] for row in rows]}
    return json.dumps(doc, indent=1, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def render_table(columns, rows, fmt, meta=None):
    if fmt == "csv":
        return table_to_csv(columns, rows, meta)
    if fmt == "json":
        return table_to_json(columns, rows, meta)
    raise ValueError(f"unknown format {fmt!r}")


def read_table(text, fmt="csv"):
    """Inverse of :func:`render_table`: returns ``(meta, rows)`` with rows as dicts."""
    if fmt == "json":
        doc = json.loads(text)
        return doc["meta"], [dict(zip(doc["columns"], r)) for r in doc["rows"]]
    meta = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            try:
                meta[key] = _parse_value(value)
            except ValueError:
                meta[key] = value
        elif line:
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    return meta, [{k: _parse_value(v) for k, v in zip(header, r)} for r in reader]


def scaling_report_json(fit):
    doc = {
        "n_ladder": list(fit.n_ladder),
        "peak_slopes": fit.peak_slopes.tolist(),
        "peak_locations": fit.peak_locations.tolist(),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "target": fit.target,
        "relative_deviation": fit.relative_deviation,
    }
    return json.dumps(doc, indent=1) + "\n"


def read_scaling_report(text):
    doc = json.loads(text)
    return ScalingFit(
        n_ladder=tuple(doc["n_ladder"]),
        peak_slopes=np.array(doc["peak_slopes"], dtype=float),
        peak_locations=np.array(doc["peak_locations"], dtype=float),
        slope=doc["slope"],
        intercept=doc["intercept"],
        r_squared=doc["r_squared"],
        target=doc["target"],
    )
