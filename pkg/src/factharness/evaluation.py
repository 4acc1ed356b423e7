"""Classification metrics over extracted verdicts: per-class precision,
recall, F1, accuracy, rank-based ROC AUC, fault rates, and temporal splits.

Faults (predictions with no usable label) are excluded from the confusion
counts and reported separately; zero-denominator metrics are absent (None),
never silently zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Any, Sequence

from .corpus.records import ClaimRecord, VerdictLabel
from .verdict_extraction import VerdictResponse

PERIOD_BOUNDARY = date(2024, 1, 1)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int
    faults: int

    @property
    def classified(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def total(self) -> int:
        return self.classified + self.faults

    def to_dict(self) -> dict[str, int]:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "faults": self.faults,
            "total": self.total,
        }


@dataclass(frozen=True)
class ClassMetrics:
    precision: float | None
    recall: float | None
    f1: float | None

    def to_dict(self) -> dict[str, float | None]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


@dataclass(frozen=True)
class EvalReport:
    counts: ConfusionCounts
    positive: ClassMetrics
    negative: ClassMetrics
    accuracy: float | None
    roc_auc: float | None
    fault_rate: float | None
    splits: dict[str, "EvalReport"] | None = None

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "counts": self.counts.to_dict(),
            "per_class": {
                "positive": self.positive.to_dict(),
                "negative": self.negative.to_dict(),
            },
            "accuracy": self.accuracy,
            "roc_auc": self.roc_auc,
            "fault_rate": self.fault_rate,
        }
        if self.splits is not None:
            payload["splits"] = {name: report.to_dict() for name, report in self.splits.items()}
        return payload


def confusion(predictions: Sequence[VerdictResponse], golds: Sequence[VerdictLabel]) -> ConfusionCounts:
    """Count the confusion cells with True as the positive class. Predictions
    without a label are faults and stay out of the four cells."""
    if len(predictions) != len(golds):
        raise ValueError(f"length mismatch: {len(predictions)} predictions vs {len(golds)} golds")
    tp = fp = tn = fn = faults = 0
    for pred, gold in zip(predictions, golds):
        if pred.label is None:
            faults += 1
        elif pred.label is VerdictLabel.TRUE:
            if gold is VerdictLabel.TRUE:
                tp += 1
            else:
                fp += 1
        else:
            if gold is VerdictLabel.FALSE:
                tn += 1
            else:
                fn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn, faults=faults)


def _ratio(numerator: int, denominator: int) -> float | None:
    return numerator / denominator if denominator else None


def _f1(precision: float | None, recall: float | None) -> float | None:
    if precision is None or recall is None:
        return None
    if precision + recall == 0:
        return None
    return 2 * precision * recall / (precision + recall)


def per_class_metrics(counts: ConfusionCounts) -> tuple[ClassMetrics, ClassMetrics, float | None]:
    """(positive metrics, negative metrics, accuracy). The negative class is
    scored with roles swapped, i.e. tn acts as its true-positive count."""
    pos = ClassMetrics(
        precision=_ratio(counts.tp, counts.tp + counts.fp),
        recall=_ratio(counts.tp, counts.tp + counts.fn),
        f1=None,
    )
    pos = ClassMetrics(pos.precision, pos.recall, _f1(pos.precision, pos.recall))
    neg = ClassMetrics(
        precision=_ratio(counts.tn, counts.tn + counts.fn),
        recall=_ratio(counts.tn, counts.tn + counts.fp),
        f1=None,
    )
    neg = ClassMetrics(neg.precision, neg.recall, _f1(neg.precision, neg.recall))
    accuracy = _ratio(counts.tp + counts.tn, counts.classified)
    return pos, neg, accuracy


def roc_auc(scores: Sequence[int], golds: Sequence[VerdictLabel]) -> float:
    """Rank-based AUC with ties counted one half: the probability that a
    uniformly chosen positive outscores a uniformly chosen negative."""
    if len(scores) != len(golds):
        raise ValueError("length mismatch")
    positives = [s for s, g in zip(scores, golds) if g is VerdictLabel.TRUE]
    negatives = [s for s, g in zip(scores, golds) if g is VerdictLabel.FALSE]
    if not positives or not negatives:
        raise ValueError("roc_auc needs at least one positive and one negative gold")
    ranked = sorted(zip(scores, golds), key=lambda pair: pair[0])
    ranks: dict[int, float] = {}
    i = 0
    while i < len(ranked):
        j = i
        while j < len(ranked) and ranked[j][0] == ranked[i][0]:
            j += 1
        average_rank = (i + 1 + j) / 2  # ranks are 1-based; ties share the mean
        ranks[ranked[i][0]] = average_rank
        i = j
    rank_sum = sum(ranks[s] for s in positives)
    n_pos, n_neg = len(positives), len(negatives)
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def fault_rate(predictions: Sequence[VerdictResponse]) -> float:
    if not predictions:
        raise ValueError("fault_rate of empty input")
    return sum(1 for p in predictions if p.label is None) / len(predictions)


def build_report(
    predictions: Sequence[VerdictResponse],
    golds: Sequence[VerdictLabel],
    records: Sequence[ClaimRecord] | None = None,
    with_splits: bool = False,
) -> EvalReport:
    """Assemble the full report; optionally attach pre-2024/2024 splits keyed
    on each record's review date."""
    counts = confusion(predictions, golds)
    positive, negative, accuracy = per_class_metrics(counts)
    auc = _safe_auc(predictions, golds)
    rate = counts.faults / counts.total if counts.total else None
    splits = None
    if with_splits:
        if records is None:
            raise ValueError("splits need records with review dates")
        splits = split_by_period(records, predictions, golds)
    return EvalReport(counts, positive, negative, accuracy, auc, rate, splits)


def _safe_auc(predictions: Sequence[VerdictResponse], golds: Sequence[VerdictLabel]) -> float | None:
    pairs = [
        (p.score, g) for p, g in zip(predictions, golds) if p.label is not None and p.score is not None
    ]
    if not pairs:
        return None
    scores = [s for s, _ in pairs]
    kept_golds = [g for _, g in pairs]
    try:
        return roc_auc(scores, kept_golds)
    except ValueError:
        return None


def split_by_period(
    records: Sequence[ClaimRecord],
    predictions: Sequence[VerdictResponse],
    golds: Sequence[VerdictLabel] | None = None,
) -> dict[str, EvalReport]:
    """Reports for claims reviewed before 2024 and from 2024 onward (the
    boundary date 2024-01-01 belongs to the later split)."""
    if golds is None:
        golds = [r.label for r in records]  # type: ignore[misc]
    if not (len(records) == len(predictions) == len(golds)):
        raise ValueError("length mismatch")
    for record in records:
        if record.review_date is None:
            raise ValueError(f"record {record.id} has no review_date")
    buckets: dict[str, list[int]] = {"pre2024": [], "from2024": []}
    for i, record in enumerate(records):
        name = "pre2024" if record.review_date < PERIOD_BOUNDARY else "from2024"
        buckets[name].append(i)
    out: dict[str, EvalReport] = {}
    for name, indices in buckets.items():
        out[name] = build_report(
            [predictions[i] for i in indices], [golds[i] for i in indices]
        )
    return out
