"""Prompt-ordering data augmentation toolkit for generation-style NER.

Pipeline: ingest labeled corpora, draw K-shot splits, build permutation
re-ordered target sequences with order-instruction prompts, emit seq2seq
training files, parse generations back into entity sets, and score them.
"""

__version__ = "0.1.0"
