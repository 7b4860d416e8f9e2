"""Fine-tuning and generation harness for augmented NER training files.

Pure consumer/producer of the pipeline's file contracts: reads
``train.jsonl`` + ``manifest.json``, writes ``predictions.jsonl``.
"""

__version__ = "0.1.0"
