"""End-to-end train/predict through the baseline CLI."""

from __future__ import annotations

import json

from slm_baseline import make_separable_corpus
from slm_baseline.cli import main

from test_harness_integration import write_harness_dataset


def test_train_then_predict(tmp_path, capsys):
    corpus = make_separable_corpus(120, seed=4)
    dataset = tmp_path / "dataset.jsonl"
    write_harness_dataset(corpus, dataset)
    checkpoint = tmp_path / "ckpt"

    assert main(["train", "--data", str(dataset), "--out", str(checkpoint), "--seed", "4"]) == 0
    assert (checkpoint / "model.pt").exists()
    validation = json.loads((checkpoint / "validation.json").read_text())
    assert validation["accuracy"] >= 0.95
    assert validation["config"]["epochs"] == 3

    predictions = tmp_path / "preds.jsonl"
    assert main([
        "predict", "--checkpoint", str(checkpoint), "--data", str(dataset), "--out", str(predictions)
    ]) == 0
    rows = [json.loads(line) for line in predictions.read_text().splitlines()]
    assert len(rows) == 120
    assert all(set(r) == {"claim_id", "score", "label"} for r in rows)


def test_train_single_class_fails_cleanly(tmp_path, capsys):
    corpus = [e for e in make_separable_corpus(40, seed=0) if e.label == 0]
    dataset = tmp_path / "dataset.jsonl"
    write_harness_dataset(corpus, dataset)
    assert main(["train", "--data", str(dataset), "--out", str(tmp_path / "ckpt")]) == 2
    assert "both classes" in capsys.readouterr().err
