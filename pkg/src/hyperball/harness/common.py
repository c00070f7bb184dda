"""Config loading, hashing and CSV output shared by the harness tasks."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
from pathlib import Path

from ..errors import ContractViolation


def config_hash(config) -> str:
    """sha256 of the canonical JSON form of a config dataclass or dict."""
    d = dataclasses.asdict(config) if dataclasses.is_dataclass(config) else dict(config)
    blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def from_dict(cls, d: dict | None):
    """Build config dataclass ``cls`` from ``d``, rejecting unknown keys."""
    d = dict(d or {})
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(d) - names)
    if unknown:
        raise ContractViolation(f"unknown {cls.__name__} keys: {unknown}")
    return cls(**d)


def load_config(path) -> dict:
    if path is None:
        return {}
    d = json.loads(Path(path).read_text())
    if not isinstance(d, dict):
        raise ContractViolation("config file must hold a JSON object")
    return d


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True))
