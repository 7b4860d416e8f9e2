"""Greedy generation with the left-to-right instruction."""

from __future__ import annotations

import json
from pathlib import Path

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

from .data import load_corpus_records
from .templates import render_left_to_right_source


def _decode_words(tokenizer, ids: list[int]) -> str:
    """Join generated word-level tokens with single spaces.

    Subword checkpoints decode through the tokenizer; word-level vocabularies
    have no decoder, so reconstruct by joining tokens.
    """
    special = set(tokenizer.all_special_ids)
    tokens = tokenizer.convert_ids_to_tokens([i for i in ids if i not in special])
    if getattr(tokenizer, "is_fast", False) and tokenizer.backend_tokenizer.decoder is None:
        return " ".join(tokens)
    return tokenizer.decode([i for i in ids if i not in special])


def generate_predictions(
    model_dir: Path,
    corpus_records_path: Path,
    out_path: Path,
    max_new_tokens: int = 160,
    batch_size: int = 16,
) -> int:
    """Write one prediction line per corpus sentence; returns the line count."""
    tokenizer = AutoTokenizer.from_pretrained(model_dir)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_dir)
    model.eval()
    records = load_corpus_records(Path(corpus_records_path))

    lines = []
    with torch.no_grad():
        for start in range(0, len(records), batch_size):
            batch = records[start : start + batch_size]
            sources = [render_left_to_right_source(r["tokens"]) for r in batch]
            encoded = tokenizer(
                sources, return_tensors="pt", padding=True, add_special_tokens=True
            )
            generated = model.generate(
                input_ids=encoded.input_ids,
                attention_mask=encoded.attention_mask,
                max_new_tokens=max_new_tokens,
                do_sample=False,
                num_beams=1,
            )
            for record, ids in zip(batch, generated.tolist()):
                lines.append(
                    json.dumps(
                        {
                            "example_id": f"{record['id']}#gen",
                            "sentence_id": record["id"],
                            "generated": _decode_words(tokenizer, ids),
                        },
                        ensure_ascii=False,
                    )
                )
    Path(out_path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return len(lines)
