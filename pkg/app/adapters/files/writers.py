"""Output files and the run manifest."""
from __future__ import annotations

import hashlib
import json
import logging
from importlib import metadata
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd
from pydantic import BaseModel

from ..db.schemas import Manifest

logger = logging.getLogger(__name__)

TRACKED_PACKAGES = ("pydantic", "pandas", "sympy", "SQLAlchemy", "PyYAML", "python-dotenv")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _dump(row: BaseModel | dict) -> dict:
    return row.model_dump(mode="json") if isinstance(row, BaseModel) else row


def write_jsonl(path: str | Path, rows: Iterable[BaseModel | dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(_dump(row), sort_keys=True) + "\n")
    return path


def write_json(path: str | Path, payload: BaseModel | dict | list) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, list):
        payload = [_dump(p) for p in payload]
    else:
        payload = _dump(payload)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_csv(path: str | Path, rows: Sequence[BaseModel | dict], columns: Sequence[str]) -> Path:
    """CSV with a fixed column order; an empty row list still writes the header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame([_dump(r) for r in rows], columns=list(columns))
    df.to_csv(path, index=False, lineterminator="\n")
    return path


def package_versions() -> dict[str, str]:
    out = {}
    for name in TRACKED_PACKAGES:
        try:
            out[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            out[name] = "not installed"
    return out


def manifest_path(out: str | Path) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


def write_manifest(
    out: str | Path,
    command: str,
    parameters: dict,
    outputs: Sequence[str | Path],
    inputs: dict[str, str] | None = None,
    exit_code: int = 0,
    notes: Sequence[str] = (),
) -> Path:
    manifest = Manifest(
        command=command,
        parameters={k: v for k, v in sorted(parameters.items()) if v is not None},
        inputs=inputs or {},
        outputs={Path(p).name: sha256_file(p) for p in outputs if Path(p).exists()},
        versions=package_versions(),
        exit_code=exit_code,
        notes=list(notes),
    )
    path = write_json(manifest_path(out), manifest)
    logger.info("manifest written to %s", path)
    return path
