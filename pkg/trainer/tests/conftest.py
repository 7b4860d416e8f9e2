import subprocess
from pathlib import Path

import pytest

NAMES = [
    "alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi", "ivan",
    "judy", "ken", "laura", "mike", "nina", "oscar", "peggy", "quinn", "rita",
    "sam", "tina", "ursula", "victor", "wendy", "xavier", "yves",
]
CITIES = [
    "paris", "london", "berlin", "madrid", "rome", "oslo", "vienna", "dublin",
    "lisbon", "prague", "sofia", "riga", "bern", "athens", "warsaw", "tallinn",
    "vilnius", "minsk", "kyiv", "zagreb", "tirana", "skopje", "belgrade",
    "bratislava", "ljubljana",
]
ORGS = [
    "acme", "globex", "initech", "umbrella", "stark", "wayne", "cyberdyne",
    "tyrell", "aperture", "hooli", "massive", "pied", "oceanic", "dharma",
    "weyland", "soylent", "omni", "vandelay", "wonka", "duff", "monarch",
    "sirius", "blue", "gringotts", "macmillan",
]


def write_toy_conll(path: Path, n: int) -> None:
    lines = []
    for i in range(n):
        lines += [
            f"{NAMES[i]} B-PER", "works O", "for O", f"{ORGS[i]} B-ORG",
            "in O", f"{CITIES[i]} B-LOC", "",
        ]
    path.write_text("\n".join(lines), encoding="utf-8")


def run_pipeline_cli(*args) -> subprocess.CompletedProcess:
    """The augmentation pipeline is consumed only through its CLI."""
    return subprocess.run(
        ["poda", *map(str, args)], capture_output=True, text=True, check=True
    )


@pytest.fixture(scope="session")
def toy_workspace(tmp_path_factory):
    """25-sentence corpus, augmented training file, normalized records."""
    root = tmp_path_factory.mktemp("toy")
    corpus = root / "corpus.conll"
    write_toy_conll(corpus, 25)
    run_pipeline_cli(
        "augment", corpus, "--format", "conll", "--k", "25", "--seed", "3",
        "--perms", "all", "--out", root / "run",
    )
    run_pipeline_cli("ingest", corpus, "--format", "conll", "--out", root / "records.jsonl")
    return root
