"""Secondary acceptance: the predictions file feeds the harness `report`
command with zero parse faults, over the CLI surfaces only."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from slm_baseline import BaselineConfig, finetune, make_separable_corpus, predict, write_predictions


def write_harness_dataset(corpus, path):
    """Write the toy corpus in the harness's dataset JSON-lines schema."""
    with path.open("w", encoding="utf-8") as handle:
        for i, example in enumerate(corpus):
            handle.write(
                json.dumps(
                    {
                        "id": example.claim_id,
                        "claim_text": example.claim_text,
                        "review_date": f"202{3 + (i % 2)}-05-01",
                        "claim_author": None,
                        "fact_check_url": "https://www.politifact.com/x/",
                        "raw_verdict": "true" if example.label == 1 else "false",
                        "label": "True" if example.label == 1 else "False",
                        "language": "en",
                        "fact_checker": "toy",
                        "article_text": example.article_text,
                    }
                )
                + "\n"
            )


@pytest.fixture(scope="module")
def trained_and_corpus():
    corpus = make_separable_corpus(200, seed=0)
    trained, report = finetune(corpus, BaselineConfig())
    assert report.accuracy >= 0.95
    return trained, corpus


def run_harness_report(dataset, predictions, out):
    return subprocess.run(
        [
            sys.executable,
            "-m",
            "factharness.runner.cli",
            "report",
            "--dataset",
            str(dataset),
            "--predictions",
            str(predictions),
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )


class TestHarnessConsumesPredictions:
    def test_report_zero_parse_faults(self, tmp_path, trained_and_corpus):
        trained, corpus = trained_and_corpus
        dataset = tmp_path / "dataset.jsonl"
        write_harness_dataset(corpus, dataset)
        predictions = tmp_path / "predictions.jsonl"
        write_predictions(predict(trained, corpus), predictions)

        out = tmp_path / "report.json"
        completed = run_harness_report(dataset, predictions, out)
        assert completed.returncode == 0, completed.stderr
        payload = json.loads(out.read_text())
        counts = payload["aggregate"]["counts"]
        assert counts["faults"] == 0
        assert counts["total"] == len(corpus)
        assert payload["aggregate"]["fault_rate"] == 0.0
        # A >=0.95-accurate classifier should look accurate through the
        # harness's metrics too.
        assert payload["aggregate"]["accuracy"] >= 0.95

    def test_shared_threshold_at_probability_half(self, tmp_path, trained_and_corpus):
        _, corpus = trained_and_corpus
        dataset = tmp_path / "dataset.jsonl"
        write_harness_dataset(corpus[:2], dataset)
        # Probability 0.50 -> score 50; the harness must label it False.
        predictions = tmp_path / "predictions.jsonl"
        predictions.write_text(
            json.dumps({"claim_id": corpus[0].claim_id, "score": 50}) + "\n"
            + json.dumps({"claim_id": corpus[1].claim_id, "score": 51}) + "\n",
            encoding="utf-8",
        )
        out = tmp_path / "report.json"
        completed = run_harness_report(dataset, predictions, out)
        assert completed.returncode == 0, completed.stderr
        counts = json.loads(out.read_text())["aggregate"]["counts"]
        assert counts["faults"] == 0
        # Exactly one row crosses the threshold: score 51. Score 50 must land
        # in a predicted-False cell.
        predicted_true = counts["tp"] + counts["fp"]
        assert predicted_true == 1
