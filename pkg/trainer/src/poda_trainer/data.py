"""Loading and integrity checks for the pipeline's file contracts."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

REQUIRED_FIELDS = {
    "example_id", "sentence_id", "instruction_kind", "permutation", "source", "target",
}


class DataContractError(ValueError):
    pass


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise DataContractError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    return records


def verify_manifest(train_path: Path, manifest_path: Path) -> None:
    """Assert the manifest's digest for train.jsonl matches the file on disk."""
    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    outputs = manifest.get("outputs", {})
    expected = None
    for name, digest in outputs.items():
        if Path(name).name == Path(train_path).name:
            expected = digest
            break
    if expected is None:
        raise DataContractError(
            f"manifest {manifest_path} lists no digest for {Path(train_path).name}"
        )
    actual = sha256_file(Path(train_path))
    if actual != expected:
        raise DataContractError(
            f"{train_path} digest {actual} does not match manifest ({expected}); "
            "the training file changed after augmentation"
        )


def load_training_records(train_path: Path, manifest_path: Path | None = None) -> list[dict]:
    if manifest_path is not None:
        verify_manifest(train_path, manifest_path)
    records = read_jsonl(Path(train_path))
    for i, record in enumerate(records):
        missing = REQUIRED_FIELDS - set(record)
        if missing:
            raise DataContractError(
                f"{train_path}: record {i} missing fields {sorted(missing)}"
            )
    return records


def load_corpus_records(path: Path) -> list[dict]:
    """Read the normalized corpus schema: {id, tokens, entities} per line."""
    records = read_jsonl(Path(path))
    for i, record in enumerate(records):
        if "id" not in record or "tokens" not in record:
            raise DataContractError(f"{path}: record {i} lacks id/tokens")
    return records
