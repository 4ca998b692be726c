"""Result writers. Every file carries the tool version, config hash and seed."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__


def provenance(config_hash: str, seed: int, command: str | None = None, options: dict | None = None) -> dict:
    meta = {"tool": "uavrot", "version": __version__, "config_sha256": config_hash, "seed": seed}
    if command is not None:
        meta["command"] = command
    if options:
        # compact JSON keeps the CSV provenance line free of spaces
        meta["options"] = json.dumps(options, sort_keys=True, separators=(",", ":"))
    return meta


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(path: Path, payload: dict, meta: dict) -> Path:
    # json emits the shortest repr of each float, which round-trips exactly
    doc = {"provenance": meta, **_plain(payload)}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    return path


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence], meta: dict) -> Path:
    """One ``#`` provenance line, one header row, then data rows."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path
