"""CSV / JSON emission with full round-trip float precision."""

from __future__ import annotations

import csv
import json
import os


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def emit_report(records: list[dict], fmt: str, path: str, config_hash: str | None = None) -> None:
    """Write records as CSV (one row each) or JSON (object of arrays).

    CSV values are written with 17 significant digits so downstream tooling
    reads back the exact binary values.  A config-hash comment line precedes
    the CSV header when a hash is given.
    """
    if not records:
        raise ValueError("no records to emit")
    if fmt == "csv":
        fields = list(records[0].keys())
        with open(path, "w", newline="") as f:
            if config_hash is not None:
                f.write(f"# config_hash={config_hash}\n")
            writer = csv.writer(f)
            writer.writerow(fields)
            for rec in records:
                writer.writerow([_fmt(rec[k]) for k in fields])
    elif fmt == "json":
        obj = {k: [rec[k] for rec in records] for k in records[0].keys()}
        if config_hash is not None:
            obj["config_hash"] = config_hash
        with open(path, "w") as f:
            json.dump(obj, f, indent=2)
            f.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def write_json_atomic(obj: dict, path: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")
    os.replace(tmp, path)


def _parse(x: str):
    if x == "true":
        return True
    if x == "false":
        return False
    try:
        f = float(x)
    except ValueError:
        return x
    return int(f) if f.is_integer() and "." not in x and "e" not in x.lower() else f


def read_csv(path: str) -> list[dict]:
    """Read back an emitted CSV, skipping comment lines and parsing numbers."""
    with open(path) as f:
        lines = [ln for ln in f if not ln.startswith("#")]
    return [{k: _parse(v) for k, v in row.items()} for row in csv.DictReader(lines)]
