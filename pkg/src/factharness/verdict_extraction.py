"""Turning raw model text into a 0-100 score, an explanation, and a binary
label, with explicit fault accounting.

Extraction never raises: every input maps to a :class:`VerdictResponse`, and
anything that cannot yield an in-range score is a fault with a reason. The
JSON-locating rules here are shared with the agent's step parser.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .corpus.records import VerdictLabel


class FaultReason(Enum):
    NO_JSON = "NoJson"
    BAD_SCHEMA = "BadSchema"
    OUT_OF_RANGE = "OutOfRange"
    EMPTY = "Empty"


@dataclass(frozen=True)
class VerdictResponse:
    """Raw model output plus whatever could be extracted from it."""

    raw_text: str
    score: int | None = None
    explanation: str | None = None
    label: VerdictLabel | None = None
    fault_reason: FaultReason | None = None

    @property
    def is_fault(self) -> bool:
        return self.label is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "raw_text": self.raw_text,
            "score": self.score,
            "explanation": self.explanation,
            "label": self.label.value if self.label else None,
            "fault_reason": self.fault_reason.value if self.fault_reason else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "VerdictResponse":
        return cls(
            raw_text=data.get("raw_text", ""),
            score=data.get("score"),
            explanation=data.get("explanation"),
            label=VerdictLabel.from_string(data["label"]) if data.get("label") else None,
            fault_reason=FaultReason(data["fault_reason"]) if data.get("fault_reason") else None,
        )


# Single quotes acting as JSON string delimiters: an opening quote directly
# after { [ , or :, and a closing quote directly before : , ] or }. Apostrophes
# between word characters match neither pattern and survive untouched.
_OPENING_QUOTE = re.compile(r"([{\[,:]\s*)'")
_CLOSING_QUOTE = re.compile(r"'(\s*[:,\]}])")


def normalize_quotes(raw: str) -> str:
    """Convert single-quoted JSON-ish delimiters to double quotes."""
    out = _OPENING_QUOTE.sub(r'\1"', raw)
    return _CLOSING_QUOTE.sub(r'"\1', out)


def find_json_objects(text: str) -> list[dict]:
    """All complete (parseable) top-level JSON objects in ``text``, in order.

    Objects nested inside a successfully parsed object are not re-counted;
    when an outer candidate fails to parse, scanning resumes one character in,
    so valid inner objects are still found.
    """
    decoder = json.JSONDecoder()
    objects: list[dict] = []
    i = 0
    while True:
        start = text.find("{", i)
        if start == -1:
            return objects
        try:
            value, end = decoder.raw_decode(text, start)
        except json.JSONDecodeError:
            i = start + 1
            continue
        if isinstance(value, dict):
            objects.append(value)
            i = end
        else:
            i = start + 1


def coerce_score(value: Any) -> int | None:
    """Integer score from messy model output: ints pass, numeric strings are
    parsed, reals are truncated toward zero. Booleans and anything else fail."""
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return math.trunc(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return int(text)
        except ValueError:
            pass
        try:
            return math.trunc(float(text))
        except ValueError:
            return None
    return None


def score_to_label(score: int) -> VerdictLabel | None:
    """0-50 -> False, 51-100 -> True, anything else -> None."""
    if 0 <= score <= 50:
        return VerdictLabel.FALSE
    if 51 <= score <= 100:
        return VerdictLabel.TRUE
    return None


def extract(raw: str) -> VerdictResponse:
    """Extract the last complete answer from ``raw``.

    A complete answer is a JSON object with an integer-coercible "score"; the
    explanation is optional. Total and deterministic: failures come back as
    faults, never exceptions.
    """
    if raw is None or not raw.strip():
        return VerdictResponse(raw_text=raw or "", fault_reason=FaultReason.EMPTY)
    objects = find_json_objects(normalize_quotes(raw))
    if not objects:
        return VerdictResponse(raw_text=raw, fault_reason=FaultReason.NO_JSON)
    answers = [(obj, coerce_score(obj.get("score"))) for obj in objects]
    answers = [(obj, score) for obj, score in answers if score is not None]
    if not answers:
        return VerdictResponse(raw_text=raw, fault_reason=FaultReason.BAD_SCHEMA)
    obj, score = answers[-1]
    explanation = obj.get("explanation")
    explanation = str(explanation) if explanation is not None else None
    label = score_to_label(score)
    if label is None:
        return VerdictResponse(
            raw_text=raw, score=score, explanation=explanation, fault_reason=FaultReason.OUT_OF_RANGE
        )
    return VerdictResponse(raw_text=raw, score=score, explanation=explanation, label=label)
