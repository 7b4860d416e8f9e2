"""Source-string templates, byte-compatible with the augmentation pipeline.

The harness never invents its own prompt format; these strings must stay
identical to what the pipeline writes into ``train.jsonl`` (a golden-file
test enforces the parity).
"""

from __future__ import annotations

from typing import Sequence

LEFT_TO_RIGHT_PREFIX = "Following the order: from left to right."


def render_left_to_right_source(tokens: Sequence[str]) -> str:
    return (LEFT_TO_RIGHT_PREFIX + " " + " ".join(tokens)).rstrip()
