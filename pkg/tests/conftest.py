import io

import pytest

from poda.corpus import Corpus, Sentence, TypeRegistry, make_entity, parse_conll


def sent(sid, tokens, spans):
    """spans: list of (start, end, etype)."""
    toks = tuple(tokens)
    ents = tuple(
        make_entity(toks, s, e, t) for s, e, t in sorted(spans, key=lambda x: (x[0], x[1]))
    )
    return Sentence(id=sid, tokens=toks, entities=ents)


@pytest.fixture
def registry4():
    return TypeRegistry(labels=("LOC", "MISC", "ORG", "PER"))


@pytest.fixture
def eu_sentence(registry4):
    # Tokens chosen so the gold entities are EU (MISC), Britain (LOC), BSE (MISC).
    tokens = "EU rejects German call to boycott British lamb after Britain confirmed BSE".split()
    return sent(
        "s000000",
        tokens,
        [(0, 1, "MISC"), (9, 10, "LOC"), (11, 12, "MISC")],
    )


@pytest.fixture
def small_corpus(registry4, eu_sentence):
    other = sent(
        "s000001",
        "John Smith visited London for the EU summit".split(),
        [(0, 2, "PER"), (3, 4, "LOC"), (6, 7, "MISC")],
    )
    return Corpus(sentences=(eu_sentence, other), registry=registry4, kind="flat")


def conll(text):
    return parse_conll(io.StringIO(text))
