"""Command-line pipeline: ingest, validate, sample, augment, score, audit, stats.

Exit codes: 0 success, 1 validation/processing failure, 2 usage error.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import __version__
from .corpus import Corpus, CorpusError, parse_conll, parse_nested_records, render_records, validate_corpus
from .delinearize import parse_target
from .iohelpers import atomic_write_text, build_manifest, read_jsonl
from .linearize import build_training_set
from .ordering import OrderInstruction, OrderingError, enumerate_type_permutations, sample_type_permutations
from .report import save_score_figure, save_type_count_figure, score_table, type_count_rows, write_tsv
from .sampler import FewShotConfig, sample_k_shot, split_report
from .scoring import ScoringError, aggregate_runs, ambiguity_report, score_micro


def _load_corpus(path: Path, fmt: str, repair_log: list | None = None) -> Corpus:
    try:
        with open(path, encoding="utf-8") as handle:
            if fmt == "conll":
                return parse_conll(handle, repair_log=repair_log)
            return parse_nested_records(handle)
    except CorpusError as exc:
        raise click.ClickException(str(exc)) from exc


format_option = click.option(
    "--format", "fmt", type=click.Choice(["conll", "nested"]), required=True,
    help="Input corpus format.",
)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Prompt-ordering data augmentation pipeline for generative NER."""


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, path_type=Path))
@format_option
@click.option("--out", type=click.Path(path_type=Path), required=True,
              help="Normalized record-JSONL output path.")
def ingest(corpus_path: Path, fmt: str, out: Path) -> None:
    """Parse a corpus and write it in the normalized record schema."""
    repairs: list = []
    corpus = _load_corpus(corpus_path, fmt, repair_log=repairs)
    atomic_write_text(out, render_records(corpus))
    click.echo(
        f"{len(corpus.sentences)} sentences, "
        f"{sum(len(s.entities) for s in corpus.sentences)} entities, "
        f"{corpus.registry.size} types, {len(repairs)} tag repairs"
    )


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, path_type=Path))
@format_option
def validate(corpus_path: Path, fmt: str) -> None:
    """Audit a corpus; exits 1 if any violation is found."""
    corpus = _load_corpus(corpus_path, fmt)
    report = validate_corpus(corpus)
    click.echo(report.render())
    if not report.valid:
        raise click.ClickException("corpus failed validation")


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, path_type=Path))
@format_option
@click.option("--k", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--split-index", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
def sample(corpus_path: Path, fmt: str, k: int, seed: int, split_index: int, out: Path) -> None:
    """Draw a K-shot split and persist it as JSON."""
    corpus = _load_corpus(corpus_path, fmt)
    split = sample_k_shot(corpus, FewShotConfig(k=k, seed=seed, split_index=split_index))
    atomic_write_text(out, split.to_json())
    click.echo(split_report(split, corpus))
    if split.shortfalls:
        click.echo(f"WARNING: shortfalls for {sorted(split.shortfalls)}")


def _instructions_for(corpus: Corpus, perms: str, seed: int) -> list[OrderInstruction]:
    try:
        if perms == "all":
            permutations = enumerate_type_permutations(corpus.registry)
        else:
            permutations = sample_type_permutations(corpus.registry, int(perms), seed)
    except OrderingError as exc:
        raise click.ClickException(str(exc)) from exc
    return [OrderInstruction(permutation=p) for p in permutations]


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, path_type=Path))
@format_option
@click.option("--k", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--split-index", type=int, default=0, show_default=True)
@click.option("--perms", default="all", show_default=True,
              help="'all' to enumerate every type permutation, or a count to sample.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True,
              help="Output directory for train.jsonl, split.json, manifest.json.")
def augment(corpus_path: Path, fmt: str, k: int, seed: int, split_index: int,
            perms: str, out_dir: Path) -> None:
    """Run the full pipeline: ingest, validate, sample, order, linearize."""
    if perms != "all" and not perms.isdigit():
        raise click.UsageError("--perms must be 'all' or a positive integer")
    corpus = _load_corpus(corpus_path, fmt)
    report = validate_corpus(corpus)
    if not report.valid:
        click.echo(report.render(), err=True)
        raise click.ClickException("corpus failed validation")

    split = sample_k_shot(corpus, FewShotConfig(k=k, seed=seed, split_index=split_index))
    instructions = _instructions_for(corpus, perms, seed)
    chosen = set(split.sentence_ids)
    sentences = [s for s in corpus.sentences if s.id in chosen]
    examples = build_training_set(sentences, instructions, corpus.registry)

    out_dir.mkdir(parents=True, exist_ok=True)
    train_path = out_dir / "train.jsonl"
    split_path = out_dir / "split.json"
    manifest_path = out_dir / "manifest.json"
    atomic_write_text(train_path, "".join(e.to_json() + "\n" for e in examples))
    atomic_write_text(split_path, split.to_json())

    notes = [
        f"shortfall: {label} has only {count} < k={k} entities in the corpus"
        for label, count in sorted(split.shortfalls.items())
    ]
    manifest = build_manifest(
        command="augment",
        config={
            "format": fmt, "k": k, "seed": seed, "split_index": split_index,
            "perms": perms, "instruction_template_id": "following-the-order-v1",
            "instruction_count": len(examples) // max(len(sentences), 1),
        },
        inputs=[corpus_path],
        outputs=[train_path, split_path],
        version=__version__,
        notes=notes,
    )
    atomic_write_text(manifest_path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    click.echo(
        f"wrote {len(examples)} examples "
        f"({len(sentences)} sentences x {len(examples) // max(len(sentences), 1)} instructions) "
        f"to {train_path}"
    )
    for note in notes:
        click.echo(f"WARNING: {note}")


@main.command()
@click.argument("gold_path", type=click.Path(exists=True, path_type=Path))
@format_option
@click.option("--pred", "pred_paths", type=click.Path(exists=True, path_type=Path),
              multiple=True, required=True, help="Prediction JSONL, one per run.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
def score(gold_path: Path, fmt: str, pred_paths: tuple[Path, ...], out_dir: Path) -> None:
    """Score prediction runs against gold; writes JSON, TSV and a figure."""
    corpus = _load_corpus(gold_path, fmt)
    gold = {s.id: [e.key for e in s.entities] for s in corpus.sentences}

    reports = []
    run_stats = []
    for pred_path in pred_paths:
        predicted: dict[str, list] = {}
        malformed_lines = 0
        malformed_segments = 0
        for record in read_jsonl(pred_path):
            outcome = parse_target(record["generated"], corpus.registry)
            if not outcome.clean:
                malformed_lines += 1
                malformed_segments += len(outcome.malformed_segments)
            predicted.setdefault(record["sentence_id"], []).extend(
                (t.mention, t.etype) for t in outcome.tuples
            )
        try:
            report = score_micro(predicted, gold)
        except ScoringError as exc:
            raise click.ClickException(str(exc)) from exc
        reports.append(report)
        run_stats.append(
            {"path": str(pred_path), "lines_with_salvage": malformed_lines,
             "malformed_segments": malformed_segments}
        )

    aggregate = aggregate_runs(reports)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "runs": [r.to_record() for r in reports],
        "run_inputs": run_stats,
        "aggregate": aggregate.to_record(),
    }
    atomic_write_text(out_dir / "report.json", json.dumps(payload, indent=2) + "\n")

    rows = []
    for i, report in enumerate(reports):
        rows.append([i, "micro", f"{report.precision * 100:.2f}",
                     f"{report.recall * 100:.2f}", f"{report.f1 * 100:.2f}",
                     report.tp, report.fp, report.fn])
        for label in sorted(report.per_type):
            s = report.per_type[label]
            rows.append([i, label, f"{s.precision * 100:.2f}", f"{s.recall * 100:.2f}",
                         f"{s.f1 * 100:.2f}", s.tp, s.fp, s.fn])
    write_tsv(out_dir / "report.tsv",
              ["run", "label", "precision", "recall", "f1", "tp", "fp", "fn"], rows)
    save_score_figure(reports, aggregate, out_dir / "report.png")

    for i, (report, stats) in enumerate(zip(reports, run_stats)):
        click.echo(f"--- run {i}: {stats['path']} "
                   f"(lines with salvage: {stats['lines_with_salvage']})")
        click.echo(score_table(report))
    click.echo(
        f"aggregate micro F1: {aggregate.mean_f1 * 100:.2f} "
        f"+/- {aggregate.std_f1 * 100:.2f} over {len(reports)} run(s)"
    )


@main.command()
@click.argument("train_path", type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Optional JSON report path.")
def audit(train_path: Path, out: Path | None) -> None:
    """Contrast source/target ambiguity with and without instruction prefixes."""
    records = list(read_jsonl(train_path))
    kept = ambiguity_report(records, strip_instructions=False)
    stripped = ambiguity_report(records, strip_instructions=True)
    click.echo(f"{'':<24}{'sources':>10}{'ambiguous':>12}{'max fanout':>12}")
    click.echo(f"{'with instructions':<24}{kept.total_sources:>10}"
               f"{kept.ambiguous_sources:>12}{kept.max_fanout:>12}")
    click.echo(f"{'instructions stripped':<24}{stripped.total_sources:>10}"
               f"{stripped.ambiguous_sources:>12}{stripped.max_fanout:>12}")
    if out is not None:
        atomic_write_text(out, json.dumps(
            {"with_instructions": kept.to_record(),
             "instructions_stripped": stripped.to_record()}, indent=2) + "\n")


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True, path_type=Path))
@format_option
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
def stats(corpus_path: Path, fmt: str, out_dir: Path) -> None:
    """Per-type entity counts as TSV plus a bar figure."""
    corpus = _load_corpus(corpus_path, fmt)
    report = validate_corpus(corpus)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_tsv(out_dir / "type_counts.tsv", ["label", "count"],
              type_count_rows(report.per_type_counts))
    save_type_count_figure(report.per_type_counts, out_dir / "type_counts.png")
    click.echo(report.render())


if __name__ == "__main__":
    main()
