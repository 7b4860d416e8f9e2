"""Fine-tune a pretrained seq2seq checkpoint on an augmented training file."""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Optional

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

from .config import TrainConfig
from .data import load_training_records


def _encode(tokenizer, text: str, max_len: int) -> tuple[list[int], bool]:
    """Token ids with a guaranteed trailing EOS; True when truncated."""
    ids = tokenizer(text, add_special_tokens=True).input_ids
    if not ids or ids[-1] != tokenizer.eos_token_id:
        ids = ids + [tokenizer.eos_token_id]
    truncated = len(ids) > max_len
    if truncated:
        ids = ids[: max_len - 1] + [tokenizer.eos_token_id]
    return ids, truncated


def _pad_batch(seqs: list[list[int]], pad_id: int) -> torch.Tensor:
    width = max(len(s) for s in seqs)
    return torch.tensor([s + [pad_id] * (width - len(s)) for s in seqs])


def fine_tune(
    train_path: Path,
    config: TrainConfig,
    out_dir: Path,
    manifest_path: Optional[Path] = None,
) -> dict:
    """Train and save a checkpoint; returns the training log.

    The manifest (when given) must carry a matching digest for the
    training file, otherwise training aborts before it starts.
    """
    records = load_training_records(Path(train_path), manifest_path)
    k = None
    if manifest_path is not None:
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
        k = manifest.get("config", {}).get("k")
    batch_size = config.resolved_batch_size(k)

    torch.manual_seed(config.seed)
    tokenizer = AutoTokenizer.from_pretrained(config.checkpoint)
    model = AutoModelForSeq2SeqLM.from_pretrained(config.checkpoint)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)

    sources, targets = [], []
    truncated = 0
    for record in records:
        src, src_trunc = _encode(tokenizer, record["source"], config.max_source_len)
        tgt, tgt_trunc = _encode(tokenizer, record["target"], config.max_target_len)
        truncated += int(src_trunc or tgt_trunc)
        sources.append(src)
        targets.append(tgt)

    pad_id = tokenizer.pad_token_id
    rng = random.Random(config.seed)
    order = list(range(len(records)))
    epoch_losses: list[float] = []
    for _ in range(config.epochs):
        rng.shuffle(order)
        total, batches = 0.0, 0
        for i in range(0, len(order), batch_size):
            idx = order[i : i + batch_size]
            input_ids = _pad_batch([sources[j] for j in idx], pad_id)
            labels = _pad_batch([targets[j] for j in idx], pad_id)
            labels[labels == pad_id] = -100
            outputs = model(
                input_ids=input_ids,
                attention_mask=(input_ids != pad_id).long(),
                labels=labels,
            )
            optimizer.zero_grad()
            outputs.loss.backward()
            optimizer.step()
            total += outputs.loss.item()
            batches += 1
        epoch_losses.append(total / batches)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    log = {
        "checkpoint": config.checkpoint,
        "epochs": config.epochs,
        "batch_size": batch_size,
        "learning_rate": config.learning_rate,
        "seed": config.seed,
        "examples": len(records),
        "truncated_examples": truncated,
        "epoch_losses": epoch_losses,
    }
    (out_dir / "training_log.json").write_text(
        json.dumps(log, indent=2) + "\n", encoding="utf-8"
    )
    return log
