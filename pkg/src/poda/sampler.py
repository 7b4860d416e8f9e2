"""Greedy K-shot few-shot split sampling.

Labels are visited in ascending corpus frequency; for each label, seeded
uniform draws add unselected sentences containing that label until the
split holds at least K entities of it.  A selected sentence contributes
all of its entities to every label's count, so later labels are often
already satisfied.  The full selection trace is kept for auditing.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus
from .rng import Xoshiro256StarStar


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class FewShotConfig:
    k: int
    seed: int
    split_index: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise SamplerError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class SelectionStep:
    """One greedy pick: which label demanded it and the count it had then."""

    label: str
    sentence_id: str
    count_before: int


@dataclass
class FewShotSplit:
    sentence_ids: list[str]
    per_type_counts: dict[str, int]
    config: FewShotConfig
    shortfalls: dict[str, int] = field(default_factory=dict)  # label -> final count < K
    trace: list[SelectionStep] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "k": self.config.k,
            "seed": self.config.seed,
            "split_index": self.config.split_index,
            "sentence_ids": self.sentence_ids,
            "per_type_counts": self.per_type_counts,
            "shortfalls": self.shortfalls,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FewShotSplit":
        data = json.loads(text)
        return cls(
            sentence_ids=list(data["sentence_ids"]),
            per_type_counts={k: int(v) for k, v in data["per_type_counts"].items()},
            config=FewShotConfig(
                k=int(data["k"]),
                seed=int(data["seed"]),
                split_index=int(data.get("split_index", 0)),
            ),
            shortfalls={k: int(v) for k, v in data.get("shortfalls", {}).items()},
        )


def sample_k_shot(corpus: Corpus, config: FewShotConfig) -> FewShotSplit:
    """Draw a K-shot split; deterministic given (corpus, k, seed)."""
    if not corpus.sentences:
        raise SamplerError("cannot sample from an empty corpus")

    totals: Counter[str] = Counter()
    for sent in corpus.sentences:
        for ent in sent.entities:
            totals[ent.etype] += 1
    # Ascending frequency, lexicographic tie-break, so the visit order is pinned.
    labels = sorted(totals, key=lambda lab: (totals[lab], lab))

    rng = Xoshiro256StarStar(config.seed)
    selected: set[str] = set()
    order: list[str] = []
    counts: Counter[str] = Counter()
    trace: list[SelectionStep] = []
    shortfalls: dict[str, int] = {}

    for label in labels:
        candidates = [
            s.id
            for s in corpus.sentences
            if s.id not in selected and any(e.etype == label for e in s.entities)
        ]
        while counts[label] < config.k and candidates:
            idx = rng.randbelow(len(candidates))
            sid = candidates.pop(idx)
            trace.append(SelectionStep(label, sid, counts[label]))
            selected.add(sid)
            order.append(sid)
            for ent in corpus.sentence_by_id(sid).entities:
                counts[ent.etype] += 1
        if counts[label] < config.k:
            shortfalls[label] = counts[label]

    return FewShotSplit(
        sentence_ids=order,
        per_type_counts={lab: counts[lab] for lab in sorted(counts)},
        config=config,
        shortfalls=shortfalls,
        trace=trace,
    )


def split_report(split: FewShotSplit, corpus: Corpus) -> str:
    """Human-readable per-type table for a split."""
    index = corpus.id_index()
    for sid in split.sentence_ids:
        if sid not in index:
            raise SamplerError(f"split references unknown sentence id {sid!r}")

    k = split.config.k
    lines = [
        f"k={k} seed={split.config.seed} split_index={split.config.split_index}",
        f"sentences selected: {len(split.sentence_ids)}",
    ]
    if not split.sentence_ids:
        lines.append("WARNING: empty split")
        return "\n".join(lines) + "\n"

    lines.append(f"{'type':<16}{'count':>8}{'overshoot':>12}")
    for label in sorted(split.per_type_counts):
        count = split.per_type_counts[label]
        row = f"{label:<16}{count:>8}{count - k:>12}"
        if label in split.shortfalls:
            row += "  insufficient corpus support"
        lines.append(row)
    return "\n".join(lines) + "\n"
