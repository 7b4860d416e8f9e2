"""Desk-scale smoke: memorize a 25-sentence augmented file and score it.

Prints one line per acceptance criterion it covers.  Runs in a few
minutes on CPU.
"""

import json
import subprocess

import pytest

from poda_trainer.config import TrainConfig
from poda_trainer.generate import generate_predictions
from poda_trainer.tiny import make_tiny_checkpoint
from poda_trainer.train import fine_tune
from tests.conftest import run_pipeline_cli, write_toy_conll


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


@pytest.fixture(scope="session")
def trained(toy_workspace, tmp_path_factory):
    work = tmp_path_factory.mktemp("train")
    checkpoint = make_tiny_checkpoint(
        toy_workspace / "run" / "train.jsonl",
        work / "tiny",
        corpus_paths=[toy_workspace / "records.jsonl"],
        seed=0,
    )
    config = TrainConfig(
        checkpoint=str(checkpoint), epochs=40, batch_size=8,
        learning_rate=1e-3, seed=1,
    )
    log = fine_tune(
        toy_workspace / "run" / "train.jsonl", config, work / "model",
        manifest_path=toy_workspace / "run" / "manifest.json",
    )
    return work, log


class TestDeskScaleSmoke:
    def test_loss_decreases_monotonically_over_first_5_epochs(self, trained):
        _, log = trained
        losses = log["epoch_losses"]
        assert len(losses) == 40
        for i in range(4):
            assert losses[i + 1] < losses[i], losses[:5]
        assert losses[-1] < losses[0]
        ok("40-epoch fine-tune, loss monotonically decreasing over epochs 1-5")

    def test_memorization_bound(self, trained, toy_workspace):
        work, _ = trained
        predictions = work / "predictions.jsonl"
        count = generate_predictions(
            work / "model", toy_workspace / "records.jsonl", predictions
        )
        assert count == 25

        targets = {}
        for line in (toy_workspace / "run" / "train.jsonl").read_text().splitlines():
            record = json.loads(line)
            if record["instruction_kind"] == "left-to-right":
                targets[record["sentence_id"]] = record["target"]
        exact = sum(
            1
            for line in predictions.read_text().splitlines()
            if (r := json.loads(line))["generated"] == targets[r["sentence_id"]]
        )
        # exact reproduction implies a clean parse and per-sentence F1 = 1
        assert exact >= 0.8 * count, f"only {exact}/{count} sentences memorized"

        score_dir = work / "score"
        run_pipeline_cli(
            "score", toy_workspace / "records.jsonl", "--format", "nested",
            "--pred", predictions, "--out", score_dir,
        )
        report = json.loads((score_dir / "report.json").read_text())
        assert report["aggregate"]["mean_f1"] >= 0.9
        ok(
            f"left-to-right generation memorized {exact}/{count} sentences, "
            f"micro F1 {report['aggregate']['mean_f1'] * 100:.2f} >= 90"
        )


class TestTemplateParity:
    def test_sources_byte_identical_on_shared_corpus(self, tmp_path):
        corpus = tmp_path / "shared.conll"
        write_toy_conll(corpus, 10)
        run_pipeline_cli(
            "augment", corpus, "--format", "conll", "--k", "10",
            "--perms", "1", "--seed", "0", "--out", tmp_path / "run",
        )
        run_pipeline_cli(
            "ingest", corpus, "--format", "conll", "--out", tmp_path / "records.jsonl"
        )
        pipeline_sources = {}
        for line in (tmp_path / "run" / "train.jsonl").read_text().splitlines():
            record = json.loads(line)
            if record["instruction_kind"] == "left-to-right":
                pipeline_sources[record["sentence_id"]] = record["source"]
        assert len(pipeline_sources) == 10

        from poda_trainer.templates import render_left_to_right_source

        for line in (tmp_path / "records.jsonl").read_text().splitlines():
            record = json.loads(line)
            assert (
                render_left_to_right_source(record["tokens"])
                == pipeline_sources[record["id"]]
            )
        ok("trainer source rendering byte-identical to pipeline fixtures")


class TestTruncationAccounting:
    def test_oversized_target_counted(self, toy_workspace, tmp_path):
        records = [
            json.loads(line)
            for line in (toy_workspace / "run" / "train.jsonl").read_text().splitlines()
        ][:4]
        small = tmp_path / "small.jsonl"
        small.write_text("".join(json.dumps(r) + "\n" for r in records))
        checkpoint = make_tiny_checkpoint(small, tmp_path / "tiny")
        config = TrainConfig(
            checkpoint=str(checkpoint), epochs=1, batch_size=4,
            max_target_len=4, seed=0,
        )
        log = fine_tune(small, config, tmp_path / "model")
        assert log["truncated_examples"] == 4
