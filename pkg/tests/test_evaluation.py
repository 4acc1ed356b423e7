"""Metrics against hand counts and a brute-force pairwise AUC oracle."""

from __future__ import annotations

import random
from datetime import date

import pytest

from factharness.corpus import VerdictLabel
from factharness.evaluation import (
    ConfusionCounts,
    build_report,
    confusion,
    fault_rate,
    per_class_metrics,
    roc_auc,
    split_by_period,
)
from factharness.verdict_extraction import FaultReason, VerdictResponse

from conftest import make_record

T, F = VerdictLabel.TRUE, VerdictLabel.FALSE


def pred(label: VerdictLabel | None, score: int | None = None) -> VerdictResponse:
    if label is None:
        return VerdictResponse(raw_text="", fault_reason=FaultReason.NO_JSON)
    if score is None:
        score = 80 if label is T else 20
    return VerdictResponse(raw_text="", score=score, label=label)


def pairwise_auc_oracle(scores, golds):
    """Brute force: P(random positive outscores random negative), ties half."""
    positives = [s for s, g in zip(scores, golds) if g is T]
    negatives = [s for s, g in zip(scores, golds) if g is F]
    total = 0.0
    for p in positives:
        for n in negatives:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(positives) * len(negatives))


class TestConfusion:
    def test_hand_count_with_fault(self):
        preds = [pred(T), pred(F), pred(None)]
        golds = [T, F, T]
        counts = confusion(preds, golds)
        assert (counts.tp, counts.tn, counts.fp, counts.fn, counts.faults) == (1, 1, 0, 0, 1)
        assert counts.total == 3

    def test_perfect_run(self):
        preds = [pred(T), pred(T), pred(F)]
        counts = confusion(preds, [T, T, F])
        assert counts.fp == counts.fn == counts.faults == 0

    def test_empty(self):
        counts = confusion([], [])
        assert counts.total == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            confusion([pred(T)], [T, F])

    def test_conservation_property(self):
        rng = random.Random(13)
        labels = [T, F, None]
        for _ in range(100):
            n = rng.randrange(0, 30)
            preds = [pred(rng.choice(labels)) for _ in range(n)]
            golds = [rng.choice([T, F]) for _ in range(n)]
            counts = confusion(preds, golds)
            assert counts.tp + counts.fp + counts.tn + counts.fn + counts.faults == n


class TestPerClassMetrics:
    def test_worked_example(self):
        counts = ConfusionCounts(tp=2, fp=1, tn=6, fn=1, faults=0)
        pos, neg, accuracy = per_class_metrics(counts)
        assert pos.precision == pytest.approx(2 / 3, abs=1e-12)
        assert pos.recall == pytest.approx(2 / 3, abs=1e-12)
        assert pos.f1 == pytest.approx(2 / 3, abs=1e-12)
        assert neg.precision == pytest.approx(6 / 7, abs=1e-12)
        assert neg.recall == pytest.approx(6 / 7, abs=1e-12)
        assert accuracy == pytest.approx(0.8, abs=1e-12)

    def test_perfect_classifier(self):
        pos, neg, accuracy = per_class_metrics(ConfusionCounts(5, 0, 5, 0, 0))
        assert pos.precision == pos.recall == pos.f1 == 1.0
        assert neg.precision == neg.recall == neg.f1 == 1.0
        assert accuracy == 1.0

    def test_zero_denominator_absent(self):
        pos, neg, accuracy = per_class_metrics(ConfusionCounts(0, 0, 3, 2, 0))
        assert pos.precision is None  # no positive predictions
        assert pos.recall == 0.0
        assert pos.f1 is None

    def test_f1_harmonic_identity(self):
        rng = random.Random(3)
        for _ in range(200):
            counts = ConfusionCounts(
                tp=rng.randrange(0, 10),
                fp=rng.randrange(0, 10),
                tn=rng.randrange(0, 10),
                fn=rng.randrange(0, 10),
                faults=rng.randrange(0, 4),
            )
            pos, neg, _ = per_class_metrics(counts)
            for metrics in (pos, neg):
                if metrics.precision is None or metrics.recall is None:
                    assert metrics.f1 is None
                elif metrics.precision + metrics.recall == 0:
                    assert metrics.f1 is None
                else:
                    expected = (
                        2 * metrics.precision * metrics.recall / (metrics.precision + metrics.recall)
                    )
                    assert metrics.f1 == pytest.approx(expected, abs=1e-12)
                    assert (metrics.f1 == 0) == (metrics.precision == 0 or metrics.recall == 0)


class TestRocAuc:
    def test_perfect_separation(self):
        assert roc_auc([90, 60, 40, 10], [T, T, F, F]) == pytest.approx(1.0)

    def test_inverted(self):
        assert roc_auc([10, 90], [T, F]) == pytest.approx(0.0)

    def test_all_ties(self):
        assert roc_auc([50, 50, 50, 50], [T, T, F, F]) == pytest.approx(0.5)

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            roc_auc([10, 20], [T, T])

    def test_against_pairwise_oracle(self):
        rng = random.Random(2024)
        for _ in range(1000):
            n = rng.randrange(2, 9)
            while True:
                golds = [rng.choice([T, F]) for _ in range(n)]
                if any(g is T for g in golds) and any(g is F for g in golds):
                    break
            scores = [rng.randrange(0, 101) for _ in range(n)]
            assert roc_auc(scores, golds) == pytest.approx(
                pairwise_auc_oracle(scores, golds), abs=1e-9
            )

    def test_complement_symmetry(self):
        rng = random.Random(77)
        for _ in range(300):
            n = rng.randrange(2, 9)
            while True:
                golds = [rng.choice([T, F]) for _ in range(n)]
                if any(g is T for g in golds) and any(g is F for g in golds):
                    break
            scores = [rng.randrange(0, 101) for _ in range(n)]
            flipped = [F if g is T else T for g in golds]
            assert roc_auc(scores, golds) == pytest.approx(
                1 - roc_auc(scores, flipped), abs=1e-9
            )


class TestFaultRate:
    def test_quarter(self):
        preds = [pred(T), pred(F), pred(T), pred(None)]
        assert fault_rate(preds) == 0.25

    def test_zero_and_one(self):
        assert fault_rate([pred(T)]) == 0.0
        assert fault_rate([pred(None), pred(None)]) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fault_rate([])


class TestSplitByPeriod:
    def test_all_pre_2024(self):
        records = [make_record(i, T, year=2019) for i in range(3)]
        preds = [pred(T) for _ in records]
        splits = split_by_period(records, preds, [T, T, T])
        assert splits["from2024"].counts.total == 0
        assert splits["pre2024"].counts.total == 3

    def test_partition_conservation(self):
        records = [make_record(i, T, year=2019 + (i % 6)) for i in range(12)]
        preds = [pred(T) for _ in records]
        splits = split_by_period(records, preds, [T] * 12)
        assert splits["pre2024"].counts.total + splits["from2024"].counts.total == 12

    def test_boundary_date_belongs_to_from2024(self):
        record = make_record(1, T).with_values(review_date=date(2024, 1, 1))
        splits = split_by_period([record], [pred(T)], [T])
        assert splits["from2024"].counts.total == 1
        assert splits["pre2024"].counts.total == 0

    def test_empty_partition_has_absent_metrics(self):
        records = [make_record(1, T, year=2020)]
        splits = split_by_period(records, [pred(T)], [T])
        empty = splits["from2024"]
        assert empty.accuracy is None
        assert empty.fault_rate is None


class TestBuildReport:
    def test_report_shape(self):
        records = [make_record(i, T if i % 2 == 0 else F, year=2023 + (i % 2)) for i in range(6)]
        golds = [r.label for r in records]
        preds = [pred(g, score=85 if g is T else 15) for g in golds]
        report = build_report(preds, golds, records=records, with_splits=True)
        payload = report.to_dict()
        assert payload["accuracy"] == 1.0
        assert payload["roc_auc"] == 1.0
        assert payload["fault_rate"] == 0.0
        assert set(payload["splits"]) == {"pre2024", "from2024"}

    def test_auc_excludes_faults(self):
        golds = [T, F, T]
        preds = [pred(T, 90), pred(F, 10), pred(None)]
        report = build_report(preds, golds)
        assert report.roc_auc == pytest.approx(1.0)
