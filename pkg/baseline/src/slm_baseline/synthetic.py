"""Templated, linearly separable toy corpus for sanity training runs."""

from __future__ import annotations

import random

from .data import LabeledExample

_TRUE_TEMPLATES = [
    "Official records confirm that measurement {i} matched the published value.",
    "Inspectors verified that shipment {i} arrived exactly as documented.",
    "Auditors confirmed the report on account {i} was accurate and complete.",
    "Archives show statement {i} was quoted correctly in the transcript.",
]
_FALSE_TEMPLATES = [
    "Viral posts falsely assert that measurement {i} contradicted the published value.",
    "Rumors fabricated a story that shipment {i} never arrived at the port.",
    "A hoax claimed the report on account {i} was hiding massive losses.",
    "A doctored clip misquoted statement {i} beyond recognition.",
]
_TRUE_ARTICLE = "Reporters reviewed the primary records and found item {i} fully supported by the evidence."
_FALSE_ARTICLE = "Reporters traced item {i} to an invented source and found no factual basis for it."


def make_separable_corpus(n: int = 200, seed: int = 0, with_articles: bool = False) -> list[LabeledExample]:
    """n templated examples, half per class, shuffled deterministically."""
    rng = random.Random(seed)
    examples: list[LabeledExample] = []
    for i in range(n):
        label = i % 2
        templates = _TRUE_TEMPLATES if label == 1 else _FALSE_TEMPLATES
        claim = rng.choice(templates).format(i=i)
        article = None
        if with_articles:
            article = (_TRUE_ARTICLE if label == 1 else _FALSE_ARTICLE).format(i=i)
        examples.append(
            LabeledExample(claim_id=f"toy-{i:04d}", claim_text=claim, label=label, article_text=article)
        )
    rng.shuffle(examples)
    return examples
