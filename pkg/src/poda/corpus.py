"""NER data model plus ingestion of CoNLL BIO files and nested JSONL records."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, TextIO

# Characters that may not appear in entity type labels because the target
# grammar uses them as structure.
RESERVED_LABEL_CHARS = frozenset("()[],")


class CorpusError(ValueError):
    """Raised on malformed input files or inconsistent corpus construction."""


@dataclass(frozen=True)
class TypeRegistry:
    """Ordered set of distinct entity-type labels."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        # An empty registry is legal only for an empty corpus; parsers emit it
        # when the input stream holds no sentences.
        if len(set(self.labels)) != len(self.labels):
            raise CorpusError(f"duplicate labels in registry: {self.labels}")
        for label in self.labels:
            if not label:
                raise CorpusError("empty label in registry")
            bad = RESERVED_LABEL_CHARS.intersection(label)
            if bad:
                raise CorpusError(
                    f"label {label!r} contains reserved characters {sorted(bad)}"
                )

    @property
    def size(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels


@dataclass(frozen=True)
class Entity:
    """One labeled mention: token span [start, end) plus its type."""

    start: int
    end: int
    mention: str
    etype: str

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise CorpusError(f"bad span [{self.start}, {self.end})")

    @property
    def key(self) -> tuple[str, str]:
        """Identity used for scoring: (mention, type)."""
        return (self.mention, self.etype)


@dataclass(frozen=True)
class Sentence:
    """Tokenized sentence with its gold entities in left-to-right order."""

    id: str
    tokens: tuple[str, ...]
    entities: tuple[Entity, ...]

    def __post_init__(self) -> None:
        n = len(self.tokens)
        for ent in self.entities:
            if ent.end > n:
                raise CorpusError(
                    f"sentence {self.id}: span [{ent.start}, {ent.end}) "
                    f"out of bounds for {n} tokens"
                )
            expected = " ".join(self.tokens[ent.start : ent.end])
            if ent.mention != expected:
                raise CorpusError(
                    f"sentence {self.id}: mention {ent.mention!r} does not "
                    f"match token slice {expected!r}"
                )
        order = [(e.start, e.end) for e in self.entities]
        if order != sorted(order):
            raise CorpusError(f"sentence {self.id}: entities not in (start, end) order")


def make_entity(tokens: Iterable[str], start: int, end: int, etype: str) -> Entity:
    """Build an Entity with its mention derived from the token slice."""
    toks = tuple(tokens)
    if not (0 <= start < end <= len(toks)):
        raise CorpusError(f"span [{start}, {end}) out of bounds for {len(toks)} tokens")
    return Entity(start=start, end=end, mention=" ".join(toks[start:end]), etype=etype)


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    registry: TypeRegistry
    kind: str  # "flat" | "nested"

    def __post_init__(self) -> None:
        if self.kind not in ("flat", "nested"):
            raise CorpusError(f"unknown corpus kind {self.kind!r}")
        seen_ids: set[str] = set()
        for sent in self.sentences:
            if sent.id in seen_ids:
                raise CorpusError(f"duplicate sentence id {sent.id!r}")
            seen_ids.add(sent.id)
            for ent in sent.entities:
                if ent.etype not in self.registry:
                    raise CorpusError(
                        f"sentence {sent.id}: type {ent.etype!r} not in registry"
                    )

    def sentence_by_id(self, sid: str) -> Sentence:
        for sent in self.sentences:
            if sent.id == sid:
                return sent
        raise KeyError(sid)

    def id_index(self) -> dict[str, Sentence]:
        return {s.id: s for s in self.sentences}


def _registry_from_types(types: Iterable[str]) -> TypeRegistry:
    # Lexicographic ingest order; permutations impose their own orders later.
    return TypeRegistry(labels=tuple(sorted(set(types))))


def parse_conll(
    reader: TextIO | Iterable[str],
    scheme: str = "BIO",
    repair_log: list[tuple[int, str]] | None = None,
) -> Corpus:
    """Parse a CoNLL-style BIO file into a flat Corpus.

    One ``token<whitespace>tag`` pair per line, blank lines separate
    sentences, ``-DOCSTART-`` lines are skipped.  Dangling ``I-X`` tags
    (no preceding ``B-X``/``I-X`` of the same type) are repaired to ``B-X``;
    each repair is appended to ``repair_log`` as ``(line_number, tag)``.
    """
    if scheme != "BIO":
        raise CorpusError(f"unsupported tagging scheme {scheme!r}")

    sentences: list[Sentence] = []
    types: set[str] = set()
    tokens: list[str] = []
    tags: list[str] = []

    def flush() -> None:
        if not tokens:
            return
        entities = _bio_to_entities(tokens, tags)
        types.update(e.etype for e in entities)
        sid = f"s{len(sentences):06d}"
        sentences.append(
            Sentence(id=sid, tokens=tuple(tokens), entities=tuple(entities))
        )
        tokens.clear()
        tags.clear()

    for lineno, raw in enumerate(reader, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("-DOCSTART-"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise CorpusError(
                f"line {lineno}: expected 2 fields (token, tag), got {len(fields)}"
            )
        token, tag = fields
        if tag != "O":
            if len(tag) < 3 or tag[0] not in "BI" or tag[1] != "-":
                raise CorpusError(f"line {lineno}: unknown tag {tag!r}")
            # IOB1 tolerance: a dangling I-X opens an entity as if it were B-X.
            if tag[0] == "I":
                prev = tags[-1] if tags else "O"
                prev_type = prev[2:] if prev != "O" else None
                if prev_type != tag[2:]:
                    if repair_log is not None:
                        repair_log.append((lineno, tag))
                    tag = "B-" + tag[2:]
        tokens.append(token)
        tags.append(tag)
    flush()

    return Corpus(
        sentences=tuple(sentences), registry=_registry_from_types(types), kind="flat"
    )


def empty_corpus(kind: str) -> Corpus:
    return Corpus(sentences=(), registry=TypeRegistry(()), kind=kind)


def _bio_to_entities(tokens: list[str], tags: list[str]) -> list[Entity]:
    entities: list[Entity] = []
    start = None
    etype = None
    for i, tag in enumerate(tags):
        if tag == "O" or tag.startswith("B-"):
            if start is not None:
                entities.append(make_entity(tokens, start, i, etype))
                start, etype = None, None
            if tag.startswith("B-"):
                start, etype = i, tag[2:]
        else:  # I-X continuing the open entity (repair already applied)
            pass
    if start is not None:
        entities.append(make_entity(tokens, start, len(tokens), etype))
    return entities


def parse_nested_records(reader: TextIO | Iterable[str]) -> Corpus:
    """Parse one-JSON-object-per-line records into a nested Corpus.

    Each record: ``{id, tokens: [..], entities: [{start, end, type}, ..]}``
    with exclusive end offsets.  Unknown fields are ignored.  Entities are
    re-sorted into (start, end) order and mentions recomputed from tokens.
    """
    sentences: list[Sentence] = []
    types: set[str] = set()
    for lineno, raw in enumerate(reader, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: invalid JSON: {exc}") from exc
        try:
            sid = str(rec["id"])
            tokens = tuple(str(t) for t in rec["tokens"])
            raw_ents = rec["entities"]
        except KeyError as exc:
            raise CorpusError(f"line {lineno}: missing field {exc}") from exc
        seen: set[tuple[int, int, str]] = set()
        entities: list[Entity] = []
        for ent in raw_ents:
            start, end, etype = int(ent["start"]), int(ent["end"]), str(ent["type"])
            if not (0 <= start < end <= len(tokens)):
                raise CorpusError(
                    f"record {sid}: span [{start}, {end}) out of bounds "
                    f"for {len(tokens)} tokens"
                )
            key = (start, end, etype)
            if key in seen:
                raise CorpusError(f"record {sid}: duplicate entity {key}")
            seen.add(key)
            entities.append(make_entity(tokens, start, end, etype))
        entities.sort(key=lambda e: (e.start, e.end))
        types.update(e.etype for e in entities)
        sentences.append(
            Sentence(id=sid, tokens=tokens, entities=tuple(entities))
        )
    if not sentences:
        return empty_corpus("nested")
    return Corpus(
        sentences=tuple(sentences), registry=_registry_from_types(types), kind="nested"
    )


def render_conll(corpus: Corpus) -> str:
    """Serialize a flat Corpus back to BIO lines (round-trip inverse of parse)."""
    if corpus.kind != "flat":
        raise CorpusError("only flat corpora can be rendered as BIO")
    out: list[str] = []
    for sent in corpus.sentences:
        tags = ["O"] * len(sent.tokens)
        for ent in sent.entities:
            tags[ent.start] = "B-" + ent.etype
            for i in range(ent.start + 1, ent.end):
                tags[i] = "I-" + ent.etype
        out.extend(f"{tok} {tag}" for tok, tag in zip(sent.tokens, tags))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def render_records(corpus: Corpus) -> str:
    """Serialize any Corpus to the nested-record JSONL schema."""
    lines = []
    for sent in corpus.sentences:
        lines.append(
            json.dumps(
                {
                    "id": sent.id,
                    "tokens": list(sent.tokens),
                    "entities": [
                        {"start": e.start, "end": e.end, "type": e.etype}
                        for e in sent.entities
                    ],
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class ValidationReport:
    per_type_counts: dict[str, int] = field(default_factory=dict)
    overlap_violations: list[tuple[str, Entity, Entity]] = field(default_factory=list)
    empty_mentions: list[tuple[str, Entity]] = field(default_factory=list)
    reserved_label_violations: list[str] = field(default_factory=list)
    sentence_count: int = 0
    valid: bool = True

    def render(self) -> str:
        lines = [f"sentences: {self.sentence_count}"]
        for label in sorted(self.per_type_counts):
            lines.append(f"  {label}: {self.per_type_counts[label]}")
        for sid, a, b in self.overlap_violations:
            lines.append(
                f"OVERLAP {sid}: [{a.start},{a.end}) {a.etype} vs "
                f"[{b.start},{b.end}) {b.etype}"
            )
        for sid, ent in self.empty_mentions:
            lines.append(f"EMPTY MENTION {sid}: [{ent.start},{ent.end}) {ent.etype}")
        for label in self.reserved_label_violations:
            lines.append(f"RESERVED CHARS IN LABEL: {label!r}")
        lines.append("valid" if self.valid else "INVALID")
        return "\n".join(lines)


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Audit a corpus; report-only, the corpus is never modified."""
    report = ValidationReport(sentence_count=len(corpus.sentences))
    counts: Counter[str] = Counter()
    for sent in corpus.sentences:
        for ent in sent.entities:
            counts[ent.etype] += 1
            if not ent.mention.strip():
                report.empty_mentions.append((sent.id, ent))
        if corpus.kind == "flat":
            for i, a in enumerate(sent.entities):
                for b in sent.entities[i + 1 :]:
                    if a.start < b.end and b.start < a.end:
                        report.overlap_violations.append((sent.id, a, b))
    for label in corpus.registry.labels:
        if RESERVED_LABEL_CHARS.intersection(label):
            report.reserved_label_violations.append(label)
    report.per_type_counts = dict(counts)
    report.valid = not (
        report.overlap_violations
        or report.empty_mentions
        or report.reserved_label_violations
    )
    return report
