"""Few-shot example selection: one example per class, drawn fresh for every
evaluation from the caller's seeded generator."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from ..corpus.records import ClaimRecord, VerdictLabel
from .specs import Task

DEFAULT_EXCERPT_CHARS = 2_000


class ExampleSelectionError(ValueError):
    pass


@dataclass(frozen=True)
class FewShotExample:
    claim: str
    article_excerpt: str
    gold: str


def _excerpt(article_text: str, cap: int) -> str:
    if len(article_text) <= cap:
        return article_text
    cut = article_text.rfind(" ", 0, cap + 1)
    return article_text[: cut if cut > 0 else cap].rstrip()


def _gold(score: int, explanation: str) -> str:
    return json.dumps({"score": score, "explanation": explanation})


def select_examples(
    dataset: list[ClaimRecord],
    exclude_id: str,
    rng: random.Random | int,
    *,
    task: Task = Task.VERDICT_FROM_ARTICLE,
    excerpt_chars: int = DEFAULT_EXCERPT_CHARS,
) -> list[FewShotExample]:
    """One True-class and one False-class example, never the excluded record.

    For the relatedness task the True-class record demonstrates a matching
    claim/article pair and the False-class claim is shown against the other
    record's article, demonstrating a mismatch.
    """
    if task is Task.FACT_CHECK:
        raise ExampleSelectionError("task 3 runs zero-shot; no examples to select")
    if isinstance(rng, int):
        rng = random.Random(rng)
    pools: dict[VerdictLabel, list[ClaimRecord]] = {}
    for label in (VerdictLabel.TRUE, VerdictLabel.FALSE):
        pool = sorted(
            (
                r
                for r in dataset
                if r.label is label and r.id != exclude_id and (r.article_text or "").strip()
            ),
            key=lambda r: r.id,
        )
        if not pool:
            raise ExampleSelectionError(f"no available {label.value}-class example besides {exclude_id}")
        pools[label] = pool
    true_record = rng.choice(pools[VerdictLabel.TRUE])
    false_record = rng.choice(pools[VerdictLabel.FALSE])

    if task is Task.RELATEDNESS:
        return [
            FewShotExample(
                claim=true_record.claim_text,
                article_excerpt=_excerpt(true_record.article_text or "", excerpt_chars),
                gold=_gold(95, "The article directly fact-checks this exact claim."),
            ),
            FewShotExample(
                claim=false_record.claim_text,
                article_excerpt=_excerpt(true_record.article_text or "", excerpt_chars),
                gold=_gold(5, "The article discusses a different statement; it is not the fact-check of this claim."),
            ),
        ]
    return [
        FewShotExample(
            claim=true_record.claim_text,
            article_excerpt=_excerpt(true_record.article_text or "", excerpt_chars),
            gold=_gold(95, "The article confirms the claim is accurate."),
        ),
        FewShotExample(
            claim=false_record.claim_text,
            article_excerpt=_excerpt(false_record.article_text or "", excerpt_chars),
            gold=_gold(5, "The article shows the claim lacks a factual basis."),
        ),
    ]
