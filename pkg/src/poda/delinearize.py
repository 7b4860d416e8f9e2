"""Parse model-generated target strings back into entity tuples.

The grammar is the bracketed tuple scheme the linearizer emits.  Tuple
boundaries are found by type anchoring: a tuple ends at the first
``, LABEL)`` whose LABEL is in the registry and whose next non-space
character is ``,``, ``]`` or end of input.  Everything between the opening
``(`` and that anchor is the mention, so mentions may contain commas and
parentheses.  Tolerant mode salvages what it can from arbitrary model
output; strict mode raises at the first violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .corpus import Entity, Sentence, TypeRegistry, make_entity


class TargetParseError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class ParsedTuple:
    mention: str
    etype: str
    group_index: Optional[int] = None


@dataclass
class ParseOutcome:
    tuples: list[ParsedTuple] = field(default_factory=list)
    malformed_segments: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.malformed_segments

    def key_multiset(self) -> list[tuple[str, str]]:
        return sorted((t.mention, t.etype) for t in self.tuples)


def _scan_tuple(
    text: str, start: int, labels: tuple[str, ...]
) -> Optional[tuple[str, str, int]]:
    """From '(' at ``start``, find the first valid ``, LABEL)`` anchor.

    Returns (mention, label, position after the anchor's ')') or None.
    """
    n = len(text)
    i = start + 1
    while i < n:
        i = text.find(", ", i)
        if i == -1:
            return None
        for label in labels:
            anchor = ", " + label + ")"
            if text.startswith(anchor, i):
                after = i + len(anchor)
                j = after
                while j < n and text[j] == " ":
                    j += 1
                if j >= n or text[j] in ",]":
                    return text[start + 1 : i], label, after
        i += 1
    return None


def parse_target(
    text: str, registry: TypeRegistry, strict: bool = False
) -> ParseOutcome:
    """Parse a (possibly malformed) target string into entity tuples.

    Tolerant mode never raises: unparseable residue is collected into
    ``malformed_segments`` and scanning resumes after the next ``)``.
    """
    labels = registry.labels
    outcome = ParseOutcome()
    n = len(text)

    def violation(message: str, offset: int, segment: str) -> None:
        if strict:
            raise TargetParseError(message, offset)
        stripped = segment.strip()
        if stripped:
            outcome.malformed_segments.append(stripped)

    pos = 0
    while pos < n and text[pos].isspace():
        pos += 1
    if pos >= n:
        if strict:
            raise TargetParseError("empty target", 0)
        return outcome
    if text[pos] != "[":
        violation("expected '['", pos, text[pos:])
        return outcome
    pos += 1

    in_group = False
    group_index = -1
    closed = False
    while pos < n:
        ch = text[pos]
        if ch.isspace() or ch == ",":
            pos += 1
            continue
        if ch == "[":
            if in_group:
                violation("unexpected '[' inside group", pos, "[")
                pos += 1
                continue
            in_group = True
            group_index += 1
            pos += 1
            continue
        if ch == "]":
            if in_group:
                in_group = False
                pos += 1
                continue
            closed = True
            pos += 1
            break
        if ch == "(":
            found = _scan_tuple(text, pos, labels)
            if found is None:
                end = text.find(")", pos)
                seg_end = end + 1 if end != -1 else n
                violation("unparseable tuple", pos, text[pos:seg_end])
                pos = seg_end
                continue
            mention, label, after = found
            outcome.tuples.append(
                ParsedTuple(
                    mention=mention,
                    etype=label,
                    group_index=group_index if in_group else None,
                )
            )
            pos = after
            continue
        # Stray content: swallow up to the next structural character.
        run_end = pos
        while run_end < n and text[run_end] not in "([]":
            run_end += 1
        violation("unexpected content", pos, text[pos:run_end])
        pos = run_end

    if closed:
        rest = text[pos:]
        if rest.strip():
            violation("trailing content after ']'", pos, rest)
    elif strict:
        raise TargetParseError("unclosed '['", n)
    return outcome


@dataclass
class GroundingResult:
    entities: list[Entity] = field(default_factory=list)
    dropped: list[ParsedTuple] = field(default_factory=list)

    @property
    def drop_count(self) -> int:
        return len(self.dropped)


def ground_mentions(tuples: list[ParsedTuple], sentence: Sentence) -> GroundingResult:
    """Map (mention, type) tuples to token spans.

    Each tuple takes the leftmost span whose space-joined tokens equal the
    mention and which no earlier tuple of the same type has consumed.
    Unmatched tuples are dropped and reported.
    """
    tokens = sentence.tokens
    result = GroundingResult()
    consumed: dict[str, set[tuple[int, int]]] = {}
    for tup in tuples:
        taken = consumed.setdefault(tup.etype, set())
        span = _find_span(tokens, tup.mention, taken)
        if span is None:
            result.dropped.append(tup)
            continue
        taken.add(span)
        result.entities.append(
            make_entity(tokens, span[0], span[1], tup.etype)
        )
    return result


def _find_span(
    tokens: tuple[str, ...], mention: str, taken: set[tuple[int, int]]
) -> Optional[tuple[int, int]]:
    for start in range(len(tokens)):
        joined = ""
        for end in range(start + 1, len(tokens) + 1):
            joined = " ".join(tokens[start:end])
            if len(joined) > len(mention):
                break
            if joined == mention and (start, end) not in taken:
                return (start, end)
    return None
