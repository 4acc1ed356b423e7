"""Claim/article pairing for the relatedness task: half the pairs keep the
claim's own fact-check article, half swap in an article from another record."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .records import ClaimRecord


@dataclass(frozen=True)
class Task1Pair:
    record: ClaimRecord
    article_text: str
    related: bool


def pair_for_task1(dataset: list[ClaimRecord], seed: int) -> list[Task1Pair]:
    """Deterministically assign each claim a related or unrelated article.

    Exactly ceil(n/2) pairs are related (the extra pair for odd sizes is
    related). Unrelated pairs draw uniformly from records whose article text
    differs from the claim's own, so a swapped article can never be a
    byte-equal copy of the right one.
    """
    n = len(dataset)
    if n < 2:
        raise ValueError("pairing needs at least 2 records")
    missing = [r.id for r in dataset if not (r.article_text or "").strip()]
    if missing:
        raise ValueError(f"records without article_text: {missing[:5]}")

    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    related_indices = set(order[: math.ceil(n / 2)])

    pairs: list[Task1Pair] = []
    for i, record in enumerate(dataset):
        if i in related_indices:
            pairs.append(Task1Pair(record, record.article_text or "", related=True))
            continue
        candidates = [
            j for j in range(n) if j != i and dataset[j].article_text != record.article_text
        ]
        if not candidates:
            raise ValueError(f"no distinct article available to mismatch with record {record.id}")
        j = rng.choice(candidates)
        pairs.append(Task1Pair(record, dataset[j].article_text or "", related=False))
    return pairs
