"""Reading the harness dataset schema (JSON-lines of claim records)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class BaselineMode(Enum):
    CLAIM_ONLY = "claim-only"
    CLAIM_PLUS_ARTICLE = "claim-plus-article"


@dataclass(frozen=True)
class LabeledExample:
    claim_id: str
    claim_text: str
    label: int  # 1 = True, 0 = False
    article_text: str | None = None


def read_labeled_dataset(path: str | Path, require_labels: bool = True) -> list[LabeledExample]:
    """Load JSON-lines rows with id, claim_text, label, and optional
    article_text — the harness's dataset schema."""
    examples: list[LabeledExample] = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        row = json.loads(line)
        label_text = row.get("label")
        if label_text is None:
            if require_labels:
                raise ValueError(f"{path}:{lineno}: row without a label")
            label = 0
        else:
            label = 1 if str(label_text).lower() == "true" else 0
        examples.append(
            LabeledExample(
                claim_id=str(row.get("id", lineno)),
                claim_text=str(row.get("claim_text", "")),
                label=label,
                article_text=row.get("article_text"),
            )
        )
    return examples
