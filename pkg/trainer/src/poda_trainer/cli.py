"""Trainer CLI: build a tiny checkpoint, fine-tune, generate predictions."""

from __future__ import annotations

from pathlib import Path

import click

from .config import TrainConfig
from .data import DataContractError


@click.group()
def main() -> None:
    """Seq2seq fine-tuning harness for augmented NER training files."""


@main.command("make-tiny")
@click.option("--train", "train_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--corpus", "corpus_paths", type=click.Path(exists=True, path_type=Path), multiple=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--d-model", type=int, default=128, show_default=True)
@click.option("--layers", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def make_tiny(train_path, corpus_paths, out_dir, d_model, layers, seed) -> None:
    """Build a small word-level checkpoint for offline environments."""
    from .tiny import make_tiny_checkpoint

    path = make_tiny_checkpoint(
        train_path, out_dir, corpus_paths=corpus_paths,
        d_model=d_model, num_layers=layers, seed=seed,
    )
    click.echo(f"tiny checkpoint written to {path}")


@main.command()
@click.option("--train", "train_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--manifest", "manifest_path", type=click.Path(exists=True, path_type=Path))
@click.option("--checkpoint", required=True, help="Hub name or local checkpoint dir.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--epochs", type=int, default=40, show_default=True)
@click.option("--batch-size", type=int, default=None, help="Override the per-K ladder.")
@click.option("--lr", type=float, default=2e-5, show_default=True)
@click.option("--max-source-len", type=int, default=160, show_default=True)
@click.option("--max-target-len", type=int, default=160, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train(train_path, manifest_path, checkpoint, out_dir, epochs, batch_size, lr,
          max_source_len, max_target_len, seed) -> None:
    """Fine-tune a checkpoint on train.jsonl (manifest digest is verified)."""
    from .train import fine_tune

    config = TrainConfig(
        checkpoint=checkpoint, epochs=epochs, batch_size=batch_size,
        learning_rate=lr, max_source_len=max_source_len,
        max_target_len=max_target_len, seed=seed,
    )
    try:
        log = fine_tune(train_path, config, out_dir, manifest_path=manifest_path)
    except DataContractError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(
        f"trained {log['epochs']} epochs on {log['examples']} examples "
        f"(truncated: {log['truncated_examples']}); "
        f"loss {log['epoch_losses'][0]:.4f} -> {log['epoch_losses'][-1]:.4f}"
    )


@main.command()
@click.option("--model", "model_dir", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="Normalized corpus records ({id, tokens, ...} per line).")
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--max-new-tokens", type=int, default=160, show_default=True)
def generate(model_dir, corpus_path, out_path, max_new_tokens) -> None:
    """Greedy left-to-right-instructed generation over a corpus."""
    from .generate import generate_predictions

    count = generate_predictions(model_dir, corpus_path, out_path, max_new_tokens=max_new_tokens)
    click.echo(f"wrote {count} predictions to {out_path}")


if __name__ == "__main__":
    main()
