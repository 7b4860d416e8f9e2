"""Training configuration with the pinned per-K batch size ladder."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

# K-shot size -> batch size, unless the caller overrides it.
BATCH_SIZE_BY_K = {5: 2, 10: 2, 20: 4, 50: 8}
DEFAULT_BATCH_SIZE = 4

LEARNING_RATE_PRESETS = {"low": 2e-5, "high": 5e-5}


def batch_size_for_k(k: Optional[int]) -> int:
    if k is None:
        return DEFAULT_BATCH_SIZE
    return BATCH_SIZE_BY_K.get(k, DEFAULT_BATCH_SIZE)


@dataclass
class TrainConfig:
    checkpoint: str
    epochs: int = 40
    batch_size: Optional[int] = None  # None: derive from the manifest's K
    learning_rate: float = LEARNING_RATE_PRESETS["low"]
    max_source_len: int = 160
    max_target_len: int = 160
    seed: int = 0

    def resolved_batch_size(self, k: Optional[int]) -> int:
        return self.batch_size if self.batch_size is not None else batch_size_for_k(k)
