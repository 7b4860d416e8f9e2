"""Build re-ordered target strings and instruction-prefixed sources."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .corpus import Entity, Sentence, TypeRegistry
from .delinearize import parse_target
from .ordering import LEFT_TO_RIGHT, OrderInstruction, TypePermutation

INSTRUCTION_TEMPLATE = "Following the order: {order}."
LEFT_TO_RIGHT_TEXT = "from left to right"


class LinearizeError(ValueError):
    pass


@dataclass(frozen=True)
class ReorderedTarget:
    """Entities grouped by type in permutation order, or the flat l-to-r list.

    Exactly one of ``groups``/``flat`` is set; empty groups are omitted.
    """

    groups: Optional[tuple[tuple[str, tuple[Entity, ...]], ...]] = None
    flat: Optional[tuple[Entity, ...]] = None

    def __post_init__(self) -> None:
        if (self.groups is None) == (self.flat is None):
            raise LinearizeError("exactly one of groups/flat must be set")

    def entity_keys(self) -> list[tuple[str, str]]:
        """Sorted (mention, type) multiset over all entities."""
        if self.flat is not None:
            ents: Iterable[Entity] = self.flat
        else:
            ents = (e for _, group in self.groups for e in group)
        return sorted(e.key for e in ents)


def reorder_entities(
    entities: Iterable[Entity], permutation: TypePermutation
) -> ReorderedTarget:
    """Bucket entities by type and emit buckets in permutation order.

    Grouping is stable: inside each bucket the original left-to-right
    order is preserved.  Empty buckets are omitted.
    """
    buckets: dict[str, list[Entity]] = {}
    for ent in entities:
        if ent.etype not in permutation.registry:
            raise LinearizeError(f"entity type {ent.etype!r} not in registry")
        buckets.setdefault(ent.etype, []).append(ent)
    groups = tuple(
        (label, tuple(buckets[label]))
        for label in permutation.order
        if label in buckets
    )
    return ReorderedTarget(groups=groups)


def left_to_right_target(entities: Iterable[Entity]) -> ReorderedTarget:
    return ReorderedTarget(flat=tuple(entities))


def _render_tuple(entity: Entity) -> str:
    return f"({entity.mention}, {entity.etype})"


def render_target(target: ReorderedTarget) -> str:
    if target.flat is not None:
        return "[" + ", ".join(_render_tuple(e) for e in target.flat) + "]"
    if not target.groups:
        return "[]"
    rendered_groups = (
        "[" + ", ".join(_render_tuple(e) for e in group) + "]"
        for _, group in target.groups
    )
    return "[" + ", ".join(rendered_groups) + "]"


def instruction_text(instruction: OrderInstruction) -> str:
    if instruction.permutation is None:
        return INSTRUCTION_TEMPLATE.format(order=LEFT_TO_RIGHT_TEXT)
    return INSTRUCTION_TEMPLATE.format(order=instruction.permutation.render())


def render_source(sentence: Sentence, instruction: OrderInstruction) -> str:
    return (instruction_text(instruction) + " " + " ".join(sentence.tokens)).rstrip()


def target_for(sentence: Sentence, instruction: OrderInstruction) -> ReorderedTarget:
    if instruction.permutation is None:
        return left_to_right_target(sentence.entities)
    return reorder_entities(sentence.entities, instruction.permutation)


@dataclass(frozen=True)
class AugmentedExample:
    example_id: str
    sentence_id: str
    instruction: OrderInstruction
    source_text: str
    target_text: str

    def to_record(self) -> dict:
        perm = self.instruction.permutation
        return {
            "example_id": self.example_id,
            "sentence_id": self.sentence_id,
            "instruction_kind": self.instruction.kind,
            "permutation": perm.render() if perm is not None else None,
            "source": self.source_text,
            "target": self.target_text,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), ensure_ascii=False)


def build_training_set(
    sentences: Iterable[Sentence],
    instructions: list[OrderInstruction],
    registry: TypeRegistry,
) -> list[AugmentedExample]:
    """Cross sentences with instructions into the augmented training set.

    The left-to-right instruction is always present (prepended if absent)
    so evaluation-time prompting stays in-distribution.  Every target is
    round-trip checked through the parser before emission.
    """
    if not instructions:
        raise LinearizeError("instruction list is empty")
    keys = [ins.key() for ins in instructions]
    dupes = [k for k, c in Counter(keys).items() if c > 1]
    if dupes:
        raise LinearizeError(f"duplicate instructions: {dupes}")
    if LEFT_TO_RIGHT.key() not in keys:
        instructions = [LEFT_TO_RIGHT, *instructions]

    examples: list[AugmentedExample] = []
    for sentence in sentences:
        for idx, instruction in enumerate(instructions):
            target = target_for(sentence, instruction)
            target_text = render_target(target)
            outcome = parse_target(target_text, registry)
            if not outcome.clean or outcome.key_multiset() != target.entity_keys():
                raise LinearizeError(
                    f"sentence {sentence.id}: target {target_text!r} does not "
                    "survive the parse round-trip"
                )
            examples.append(
                AugmentedExample(
                    example_id=f"{sentence.id}#{idx}",
                    sentence_id=sentence.id,
                    instruction=instruction,
                    source_text=render_source(sentence, instruction),
                    target_text=target_text,
                )
            )
    return examples
