"""CSV and JSON serialisation of sweep tables, fits and circuit runs.

Sweep CSV columns, in order::

    family, n, p_c, resolution, min_eig_lo, min_eig_hi, iterations, status,
    config_hash, tool_version

Floats are written with ``repr`` so files round-trip exactly and identical
inputs give byte-identical output.
"""
import csv
import hashlib
import io
import json
import math

from . import __version__
from .criticality import SweepRecord

SCHEMA_VERSION = 1
SWEEP_COLUMNS = (
    "family", "n", "p_c", "resolution", "min_eig_lo", "min_eig_hi",
    "iterations", "status", "config_hash", "tool_version",
)


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _fmt(x):
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def sweep_to_csv(records, config):
    h = config_hash(config)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in records:
        writer.writerow([
            r.family, r.n, _fmt(r.p_c), _fmt(r.resolution), _fmt(r.min_eig_lo), _fmt(r.min_eig_hi),
            r.iterations, r.status, h, __version__,
        ])
    return buf.getvalue()


def sweep_from_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    missing = {"family", "n", "p_c"} - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"sweep file lacks columns {sorted(missing)}")
    records = []
    for row in reader:
        try:
            records.append(SweepRecord(
                family=row["family"],
                n=int(row["n"]),
                p_c=float(row["p_c"]),
                resolution=float(row.get("resolution") or "nan"),
                iterations=int(row.get("iterations") or 0),
                min_eig_lo=float(row.get("min_eig_lo") or "nan"),
                min_eig_hi=float(row.get("min_eig_hi") or "nan"),
                status=row.get("status") or "ok",
            ))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed sweep row {row}: {exc}") from exc
    return records


def sweep_record_dict(r):
    return {
        "family": r.family, "n": r.n, "p_c": r.p_c, "resolution": r.resolution,
        "iterations": r.iterations, "min_eig_lo": r.min_eig_lo, "min_eig_hi": r.min_eig_hi,
        "status": r.status, "message": r.message,
    }


def sweep_from_json(text):
    doc = json.loads(text)
    rows = doc["records"] if isinstance(doc, dict) else doc
    return [SweepRecord(**{k: v for k, v in row.items() if k in SweepRecord.__dataclass_fields__}) for row in rows]


def read_sweep(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith(("{", "[")):
        return sweep_from_json(text)
    return sweep_from_csv(text)


def plot_table(records):
    """Two-column ``n p_c`` text for plotting."""
    lines = ["n p_c"]
    lines += [f"{r.n} {_fmt(r.p_c)}" for r in records if r.ok]
    return "\n".join(lines) + "\n"


def envelope(kind, payload, config):
    """Wrap ``payload`` with schema version, tool version and config hash."""
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "tool_version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        **payload,
    }


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=True) + "\n"
