"""Build a tiny word-level seq2seq checkpoint from a training file.

Stand-in for hub checkpoints in offline environments: a small
randomly-initialized T5 with a closed word-level vocabulary drawn from the
training file (plus optional extra corpora), saved in the standard
``save_pretrained`` layout so the training loop treats it like any other
checkpoint name.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from tokenizers import Tokenizer
from tokenizers.models import WordLevel
from tokenizers.pre_tokenizers import WhitespaceSplit
from transformers import PreTrainedTokenizerFast, T5Config, T5ForConditionalGeneration

from .data import load_corpus_records, read_jsonl
from .templates import render_left_to_right_source

PAD, EOS, UNK = "<pad>", "</s>", "<unk>"


def build_word_vocab(texts: Iterable[str]) -> dict[str, int]:
    vocab = {PAD: 0, EOS: 1, UNK: 2}
    for text in texts:
        for word in text.split():
            if word not in vocab:
                vocab[word] = len(vocab)
    return vocab


def make_tiny_checkpoint(
    train_path: Path,
    out_dir: Path,
    corpus_paths: Iterable[Path] = (),
    d_model: int = 128,
    num_layers: int = 3,
    num_heads: int = 4,
    seed: int = 0,
) -> Path:
    texts: list[str] = []
    for record in read_jsonl(Path(train_path)):
        texts.append(record["source"])
        texts.append(record["target"])
    for corpus_path in corpus_paths:
        for record in load_corpus_records(Path(corpus_path)):
            texts.append(render_left_to_right_source(record["tokens"]))
    vocab = build_word_vocab(texts)

    core = Tokenizer(WordLevel(vocab, unk_token=UNK))
    core.pre_tokenizer = WhitespaceSplit()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=core, pad_token=PAD, eos_token=EOS, unk_token=UNK
    )

    import torch

    torch.manual_seed(seed)
    config = T5Config(
        vocab_size=len(vocab),
        d_model=d_model,
        d_ff=d_model * 4,
        d_kv=d_model // num_heads,
        num_layers=num_layers,
        num_decoder_layers=num_layers,
        num_heads=num_heads,
        decoder_start_token_id=vocab[PAD],
        pad_token_id=vocab[PAD],
        eos_token_id=vocab[EOS],
    )
    model = T5ForConditionalGeneration(config)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return out_dir
