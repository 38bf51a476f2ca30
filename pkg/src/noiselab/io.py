"""Persistence: field files, result CSVs and the run manifest.

All writes go to a temporary file in the target directory and are renamed
into place, so a reader never sees a partial file.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError
from .randfield import SpectralField

__all__ = [
    "MANIFEST_NAME",
    "SCHEMA_VERSION",
    "SchemaError",
    "atomic_write",
    "csv_text",
    "field_to_json",
    "load_field",
    "read_manifest",
    "save_field",
    "sha256_file",
    "write_results",
]

SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"


class SchemaError(ConfigurationError):
    """A file does not follow the documented layout."""


def atomic_write(path: Path, data: str | bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": "", "encoding": "utf-8"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    return str(v)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# fields


def field_to_json(field: SpectralField) -> dict:
    out = {
        "d": field.d,
        "N": field.N,
        "coefficients": [
            [[int(x) for x in k], float(c.real), float(c.imag)]
            for k, c in zip(field.indices, field.coefficients)
            if c != 0
        ],
    }
    if field.is_random:
        out["provenance"] = field.provenance
    return out


def save_field(field: SpectralField, path: Path) -> None:
    atomic_write(Path(path), json.dumps(field_to_json(field)))


def load_field(source) -> SpectralField:
    """Read a field from a path or an already-parsed JSON object."""
    if isinstance(source, dict):
        data = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{source}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict) or set(data) - {"d", "N", "coefficients", "provenance"} or not {"d", "coefficients"} <= set(data):
        raise SchemaError("field file must be an object with keys d, N (optional), coefficients")
    d, N = data["d"], data.get("N")
    if not isinstance(d, int) or (N is not None and (not isinstance(N, int) or N < 0)):
        raise SchemaError("d and N must be integers")
    mapping = {}
    for entry in data["coefficients"]:
        try:
            k, re, im = entry
            k = tuple(int(x) for x in k)
            val = complex(float(re), float(im))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad coefficient entry {entry!r}; expected [[k...], re, im]") from exc
        if len(k) != d:
            raise SchemaError(f"index {k} does not have dimension {d}")
        mapping[k] = mapping.get(k, 0) + val
    from .randfield import field_from_coefficients

    try:
        field = field_from_coefficients(d, mapping, N)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    prov = data.get("provenance")
    if prov is not None:
        if not isinstance(prov, dict):
            raise SchemaError("provenance must be an object")
        field.provenance = prov
    return field


# ---------------------------------------------------------------------------
# experiment outputs


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_results(summary, out_root: Path, started: str | None = None) -> Path:
    """Write CSVs and the manifest of ``summary`` under ``out_root/<run id>``.

    The run id is the experiment name plus a prefix of the configuration
    hash, so identical configurations land in the same directory and must
    reproduce identical files.
    """
    run_dir = Path(out_root) / f"{summary.name}-{summary.config_hash[:12]}"
    run_dir.mkdir(parents=True, exist_ok=True)
    inventory = {}
    for name, (columns, rows) in sorted(summary.tables.items()):
        path = run_dir / f"{name}.csv"
        atomic_write(path, csv_text(columns, rows))
        inventory[path.name] = sha256_file(path)
    for name, rows in sorted(summary.plots.items()):
        path = run_dir / f"plot_{name}.csv"
        atomic_write(path, csv_text(["x", "y", "y_lo", "y_hi"], rows))
        inventory[path.name] = sha256_file(path)
    from .experiments.summary import _plain

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "experiment": summary.name,
        "version": __version__,
        "seed": summary.config.get("seed"),
        "config_hash": summary.config_hash,
        "config": summary.config,
        "started": started or _now(),
        "finished": _now(),
        "status": summary.status,
        "verdicts": [v.to_dict() for v in summary.verdicts],
        "stats": _plain(summary.stats),
        "files": inventory,
    }
    atomic_write(run_dir / MANIFEST_NAME, json.dumps(manifest, indent=2, sort_keys=True, default=_default))
    return run_dir


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    return str(o)


def read_manifest(run_dir: Path, verify: bool = True) -> dict:
    path = Path(run_dir) / MANIFEST_NAME
    if not path.exists():
        raise FileNotFoundError(path)
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON") from exc
    for key in ("schema_version", "verdicts", "files", "config"):
        if key not in manifest:
            raise SchemaError(f"{path}: missing key {key!r}")
    if verify:
        for name, digest in manifest["files"].items():
            f = Path(run_dir) / name
            if not f.exists() or sha256_file(f) != digest:
                raise SchemaError(f"{f}: missing or checksum mismatch")
    return manifest
