"""Fine-tuning the encoder classifier: cross-entropy loss, AdamW, three
epochs by default, with a stratified validation split and a report that
records the hyperparameters actually used."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import BaselineMode, LabeledExample
from .model import EncoderClassifier
from .vocab import PAD, Vocab, encode_pair


@dataclass(frozen=True)
class BaselineConfig:
    mode: BaselineMode = BaselineMode.CLAIM_ONLY
    max_tokens: int = 512
    epochs: int = 3
    learning_rate: float = 3e-3
    batch_size: int = 16
    weight_decay: float = 0.01
    val_fraction: float = 0.2
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "max_tokens": self.max_tokens,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "weight_decay": self.weight_decay,
            "val_fraction": self.val_fraction,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BaselineConfig":
        data = dict(data)
        data["mode"] = BaselineMode(data["mode"])
        return cls(**data)


@dataclass
class ValidationReport:
    accuracy: float
    per_class: dict[str, dict[str, float | None]]
    n_train: int
    n_val: int
    config: BaselineConfig

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": self.per_class,
            "n_train": self.n_train,
            "n_val": self.n_val,
            "config": self.config.to_dict(),
        }


@dataclass
class TrainedBaseline:
    model: EncoderClassifier
    vocab: Vocab
    config: BaselineConfig

    def save(self, directory: str | Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        torch.save(self.model.state_dict(), directory / "model.pt")
        (directory / "vocab.json").write_text(json.dumps(self.vocab.to_dict()), encoding="utf-8")
        (directory / "config.json").write_text(json.dumps(self.config.to_dict()), encoding="utf-8")
        return directory


def load_checkpoint(directory: str | Path) -> TrainedBaseline:
    directory = Path(directory)
    config = BaselineConfig.from_dict(json.loads((directory / "config.json").read_text("utf-8")))
    vocab = Vocab.from_dict(json.loads((directory / "vocab.json").read_text("utf-8")))
    model = EncoderClassifier(vocab_size=len(vocab), max_tokens=config.max_tokens)
    model.load_state_dict(torch.load(directory / "model.pt", weights_only=True))
    model.eval()
    return TrainedBaseline(model=model, vocab=vocab, config=config)


def _encode(example: LabeledExample, vocab: Vocab, config: BaselineConfig) -> list[int]:
    article = example.article_text if config.mode is BaselineMode.CLAIM_PLUS_ARTICLE else None
    return encode_pair(vocab, example.claim_text, article, config.max_tokens)


def _pad_batch(batch: list[tuple[list[int], int]]) -> tuple[torch.Tensor, torch.Tensor]:
    width = max(len(ids) for ids, _ in batch)
    padded = [ids + [PAD] * (width - len(ids)) for ids, _ in batch]
    labels = [label for _, label in batch]
    return torch.tensor(padded, dtype=torch.long), torch.tensor(labels, dtype=torch.long)


def _stratified_split(
    examples: list[LabeledExample], val_fraction: float, seed: int
) -> tuple[list[LabeledExample], list[LabeledExample]]:
    rng = random.Random(seed)
    train: list[LabeledExample] = []
    val: list[LabeledExample] = []
    for cls in (0, 1):
        pool = [e for e in examples if e.label == cls]
        rng.shuffle(pool)
        n_val = round(len(pool) * val_fraction)
        val.extend(pool[:n_val])
        train.extend(pool[n_val:])
    rng.shuffle(train)
    rng.shuffle(val)
    return train, val


def finetune(
    examples: list[LabeledExample], config: BaselineConfig | None = None
) -> tuple[TrainedBaseline, ValidationReport]:
    """Train the classifier and report validation metrics.

    In claim-plus-article mode every example must carry article text. A
    single-class dataset is an error: there is nothing to separate.
    """
    config = config or BaselineConfig()
    labels = {e.label for e in examples}
    if labels != {0, 1}:
        raise ValueError("training data must contain both classes")
    if config.mode is BaselineMode.CLAIM_PLUS_ARTICLE:
        missing = [e.claim_id for e in examples if not (e.article_text or "").strip()]
        if missing:
            raise ValueError(f"claim-plus-article mode needs article_text; missing for {missing[:5]}")

    torch.manual_seed(config.seed)
    train_set, val_set = _stratified_split(examples, config.val_fraction, config.seed)
    texts = [e.claim_text for e in examples]
    if config.mode is BaselineMode.CLAIM_PLUS_ARTICLE:
        texts += [e.article_text or "" for e in examples]
    vocab = Vocab.build(texts)
    model = EncoderClassifier(vocab_size=len(vocab), max_tokens=config.max_tokens)

    encoded_train = [(_encode(e, vocab, config), e.label) for e in train_set]
    loader = DataLoader(
        encoded_train,
        batch_size=config.batch_size,
        shuffle=True,
        collate_fn=_pad_batch,
        generator=torch.Generator().manual_seed(config.seed),
    )
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )
    loss_fn = nn.CrossEntropyLoss()
    model.train()
    for _epoch in range(config.epochs):
        for token_ids, batch_labels in loader:
            optimizer.zero_grad()
            logits = model(token_ids)
            loss = loss_fn(logits, batch_labels)
            loss.backward()
            optimizer.step()
    model.eval()

    trained = TrainedBaseline(model=model, vocab=vocab, config=config)
    report = _validate(trained, val_set if val_set else train_set, len(train_set), len(val_set))
    return trained, report


@torch.no_grad()
def _validate(
    trained: TrainedBaseline, examples: list[LabeledExample], n_train: int, n_val: int
) -> ValidationReport:
    predictions = [int(p > 0.5) for p in predict_probabilities(trained, examples)]
    golds = [e.label for e in examples]
    correct = sum(1 for p, g in zip(predictions, golds) if p == g)
    per_class: dict[str, dict[str, float | None]] = {}
    for cls, name in ((1, "positive"), (0, "negative")):
        tp = sum(1 for p, g in zip(predictions, golds) if p == cls and g == cls)
        pred_n = sum(1 for p in predictions if p == cls)
        gold_n = sum(1 for g in golds if g == cls)
        precision = tp / pred_n if pred_n else None
        recall = tp / gold_n if gold_n else None
        f1 = None
        if precision is not None and recall is not None and precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        per_class[name] = {"precision": precision, "recall": recall, "f1": f1}
    return ValidationReport(
        accuracy=correct / len(examples) if examples else 0.0,
        per_class=per_class,
        n_train=n_train,
        n_val=n_val,
        config=trained.config,
    )


@torch.no_grad()
def predict_probabilities(trained: TrainedBaseline, examples: list[LabeledExample]) -> list[float]:
    """P(True) per example, batched."""
    trained.model.eval()
    probabilities: list[float] = []
    batch_size = max(trained.config.batch_size, 1)
    for start in range(0, len(examples), batch_size):
        batch = examples[start : start + batch_size]
        encoded = [(_encode(e, trained.vocab, trained.config), e.label) for e in batch]
        token_ids, _ = _pad_batch(encoded)
        logits = trained.model(token_ids)
        probabilities.extend(torch.softmax(logits, dim=-1)[:, 1].tolist())
    return probabilities
