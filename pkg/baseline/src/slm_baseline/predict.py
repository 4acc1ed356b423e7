"""Prediction output on the harness's shared scale: score = round(P(True) *
100), label True iff score > 50. The file is JSON-lines the harness `report`
command consumes directly."""

from __future__ import annotations

import json
from pathlib import Path

from .data import BaselineMode, LabeledExample
from .training import TrainedBaseline, predict_probabilities


def score_from_probability(p_true: float) -> int:
    score = round(p_true * 100)
    return min(100, max(0, score))


def predict(trained: TrainedBaseline, examples: list[LabeledExample]) -> list[dict]:
    """Predictions as {claim_id, score, label} rows."""
    if trained.config.mode is BaselineMode.CLAIM_PLUS_ARTICLE:
        missing = [e.claim_id for e in examples if not (e.article_text or "").strip()]
        if missing:
            raise ValueError(
                f"checkpoint was trained in claim-plus-article mode but article_text "
                f"is missing for {missing[:5]}"
            )
    rows = []
    for example, p_true in zip(examples, predict_probabilities(trained, examples)):
        score = score_from_probability(p_true)
        rows.append(
            {
                "claim_id": example.claim_id,
                "score": score,
                "label": "True" if score > 50 else "False",
            }
        )
    return rows


def write_predictions(rows: list[dict], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")
    return path
