"""Micro precision/recall/F1 over (mention, type) multisets, run aggregation,
and the one-to-many ambiguity audit."""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .linearize import AugmentedExample, instruction_text

Key = tuple[str, str]  # (mention, etype)


class ScoringError(ValueError):
    pass


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


@dataclass
class TypeScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return _prf(self.tp, self.fp, self.fn)[0]

    @property
    def recall(self) -> float:
        return _prf(self.tp, self.fp, self.fn)[1]

    @property
    def f1(self) -> float:
        return _prf(self.tp, self.fp, self.fn)[2]


@dataclass
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    per_type: dict[str, TypeScore] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "per_type": {
                label: {
                    "tp": s.tp,
                    "fp": s.fp,
                    "fn": s.fn,
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                }
                for label, s in sorted(self.per_type.items())
            },
        }


def score_micro(
    predicted: Mapping[str, Iterable[Key]], gold: Mapping[str, Iterable[Key]]
) -> EvalReport:
    """Multiset-matching micro scores.

    ``predicted`` and ``gold`` map sentence id to (mention, type) pairs;
    repeated identical pairs are separately creditable.  Gold sentences
    with no prediction entry count as all-missed.
    """
    unknown = set(predicted) - set(gold)
    if unknown:
        raise ScoringError(f"predictions for unknown sentence ids: {sorted(unknown)}")

    per_type: dict[str, TypeScore] = {}
    for sid, gold_keys in gold.items():
        gold_counts = Counter(gold_keys)
        pred_counts = Counter(predicted.get(sid, ()))
        hits = gold_counts & pred_counts
        for key, count in hits.items():
            per_type.setdefault(key[1], TypeScore()).tp += count
        for key, count in (pred_counts - hits).items():
            per_type.setdefault(key[1], TypeScore()).fp += count
        for key, count in (gold_counts - hits).items():
            per_type.setdefault(key[1], TypeScore()).fn += count

    tp = sum(s.tp for s in per_type.values())
    fp = sum(s.fp for s in per_type.values())
    fn = sum(s.fn for s in per_type.values())
    precision, recall, f1 = _prf(tp, fp, fn)
    return EvalReport(
        tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f1=f1,
        per_type=per_type,
    )


@dataclass
class AggregateReport:
    mean_f1: float
    std_f1: float  # population (divide-by-n) standard deviation
    run_f1s: list[float]

    def to_record(self) -> dict:
        return {
            "mean_f1": self.mean_f1,
            "std_f1": self.std_f1,
            "std_estimator": "population",
            "run_f1s": self.run_f1s,
        }


def aggregate_runs(reports: Sequence[EvalReport]) -> AggregateReport:
    if not reports:
        raise ScoringError("no reports to aggregate")
    f1s = [r.f1 for r in reports]
    return AggregateReport(
        mean_f1=statistics.fmean(f1s),
        std_f1=statistics.pstdev(f1s),
        run_f1s=f1s,
    )


@dataclass
class AmbiguityReport:
    total_sources: int
    ambiguous_sources: int
    max_fanout: int

    def to_record(self) -> dict:
        return {
            "total_sources": self.total_sources,
            "ambiguous_sources": self.ambiguous_sources,
            "max_fanout": self.max_fanout,
        }


def ambiguity_report(
    examples: Iterable[Union[AugmentedExample, Mapping]],
    strip_instructions: bool = False,
) -> AmbiguityReport:
    """Count sources mapping to more than one distinct target.

    With ``strip_instructions`` the instruction prefix is removed before
    grouping, exposing the one-to-many mapping the instructions prevent.
    Accepts in-memory examples or raw JSONL records.
    """
    targets_by_source: dict[str, set[str]] = {}
    for example in examples:
        if isinstance(example, AugmentedExample):
            source = example.source_text
            prefix = instruction_text(example.instruction)
            target = example.target_text
        else:
            source = example["source"]
            target = example["target"]
            prefix = _prefix_from_record(example)
        if strip_instructions and source.startswith(prefix):
            source = source[len(prefix):].lstrip()
        targets_by_source.setdefault(source, set()).add(target)

    fanouts = [len(v) for v in targets_by_source.values()]
    return AmbiguityReport(
        total_sources=len(targets_by_source),
        ambiguous_sources=sum(1 for f in fanouts if f > 1),
        max_fanout=max(fanouts, default=0),
    )


def _prefix_from_record(record: Mapping) -> str:
    from .linearize import INSTRUCTION_TEMPLATE, LEFT_TO_RIGHT_TEXT

    if record.get("instruction_kind") == "left-to-right":
        return INSTRUCTION_TEMPLATE.format(order=LEFT_TO_RIGHT_TEXT)
    return INSTRUCTION_TEMPLATE.format(order=record["permutation"])
