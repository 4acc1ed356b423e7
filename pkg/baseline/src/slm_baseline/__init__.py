"""Encoder-classifier baseline: fine-tune a compact transformer on labeled
claims (optionally paired with their articles) and emit predictions on the
harness's shared 0-100 score scale."""

from .data import BaselineMode, LabeledExample, read_labeled_dataset
from .model import EncoderClassifier
from .predict import predict, score_from_probability, write_predictions
from .synthetic import make_separable_corpus
from .training import BaselineConfig, TrainedBaseline, ValidationReport, finetune, load_checkpoint
from .vocab import Vocab

__all__ = [
    "BaselineConfig",
    "BaselineMode",
    "EncoderClassifier",
    "LabeledExample",
    "TrainedBaseline",
    "ValidationReport",
    "Vocab",
    "finetune",
    "load_checkpoint",
    "make_separable_corpus",
    "predict",
    "read_labeled_dataset",
    "score_from_probability",
    "write_predictions",
]
