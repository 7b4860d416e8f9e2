"""Atomic file writes, content digests, JSONL helpers, run manifests."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def read_jsonl(path: Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_jsonl(path: Path, records: Iterable[dict]) -> None:
    text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    atomic_write_text(path, text)


def build_manifest(
    command: str,
    config: dict,
    inputs: Iterable[Path],
    outputs: Iterable[Path],
    version: str,
    notes: list[str] | None = None,
) -> dict:
    return {
        "tool": "poda",
        "version": version,
        "command": command,
        "config": config,
        "inputs": {str(p): sha256_file(Path(p)) for p in inputs},
        "outputs": {str(p): sha256_file(Path(p)) for p in outputs},
        "notes": notes or [],
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
