import json

import pytest

from poda_trainer.config import TrainConfig, batch_size_for_k
from poda_trainer.data import (
    DataContractError,
    load_training_records,
    verify_manifest,
)
from poda_trainer.templates import render_left_to_right_source


class TestTemplates:
    def test_left_to_right_rendering(self):
        assert render_left_to_right_source(["a", "b"]) == (
            "Following the order: from left to right. a b"
        )

    def test_empty_tokens_trimmed(self):
        assert render_left_to_right_source([]) == "Following the order: from left to right."


class TestBatchSizeLadder:
    @pytest.mark.parametrize("k,expected", [(5, 2), (10, 2), (20, 4), (50, 8)])
    def test_pinned_ladder(self, k, expected):
        assert batch_size_for_k(k) == expected

    def test_override_wins(self):
        config = TrainConfig(checkpoint="x", batch_size=16)
        assert config.resolved_batch_size(5) == 16

    def test_ladder_applies_without_override(self):
        config = TrainConfig(checkpoint="x")
        assert config.resolved_batch_size(50) == 8


class TestDataContract:
    def test_loads_valid_file(self, toy_workspace):
        records = load_training_records(
            toy_workspace / "run" / "train.jsonl",
            toy_workspace / "run" / "manifest.json",
        )
        assert len(records) == 175  # 25 sentences x (3! + left-to-right)
        assert {"source", "target"} <= set(records[0])

    def test_digest_mismatch_aborts(self, toy_workspace, tmp_path):
        tampered = tmp_path / "train.jsonl"
        original = (toy_workspace / "run" / "train.jsonl").read_text()
        tampered.write_text(original + original.splitlines()[0] + "\n")
        with pytest.raises(DataContractError, match="digest"):
            verify_manifest(tampered, toy_workspace / "run" / "manifest.json")

    def test_missing_field_rejected(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text(json.dumps({"source": "x", "target": "y"}) + "\n")
        with pytest.raises(DataContractError, match="missing fields"):
            load_training_records(bad)

    def test_manifest_without_entry_rejected(self, toy_workspace, tmp_path):
        stray = tmp_path / "other.jsonl"
        stray.write_text("{}\n")
        with pytest.raises(DataContractError, match="no digest"):
            verify_manifest(stray, toy_workspace / "run" / "manifest.json")
