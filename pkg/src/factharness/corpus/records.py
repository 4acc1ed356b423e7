"""Core record types for the fact-check corpus."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from datetime import date
from enum import Enum
from typing import Any


class VerdictLabel(Enum):
    """Binary macro-category a raw fact-checker verdict maps onto."""

    TRUE = "True"
    FALSE = "False"

    @classmethod
    def from_string(cls, value: str) -> "VerdictLabel":
        for member in cls:
            if member.value.lower() == value.strip().lower():
                return member
        raise ValueError(f"not a verdict label: {value!r}")


# Feed column -> ClaimRecord attribute. Canonical snake_case names are also
# accepted so sampled datasets round-trip through the same reader.
FEED_FIELD_MAP = {
    "claimReviewed": "claim_text",
    "datePublished": "review_date",
    "url": "fact_check_url",
    "reviewRating.alternateName": "raw_verdict",
    "author.name": "fact_checker",
    "language": "language",
    "reviewRating.author.name": "claim_author",
}

CANONICAL_FIELDS = (
    "id",
    "claim_text",
    "review_date",
    "claim_author",
    "fact_check_url",
    "raw_verdict",
    "label",
    "language",
    "fact_checker",
    "article_text",
)


def parse_date(value: Any) -> date | None:
    """Parse an ISO-ish date string; returns None when unparseable."""
    if isinstance(value, date):
        return value
    if not value or not isinstance(value, str):
        return None
    text = value.strip()
    try:
        return date.fromisoformat(text[:10])
    except ValueError:
        return None


@dataclass
class ClaimRecord:
    """One fact-checked claim with its metadata and (optionally) the scraped
    fact-check article text."""

    id: str
    claim_text: str
    review_date: date | None
    fact_check_url: str
    raw_verdict: str
    fact_checker: str = ""
    language: str = ""
    claim_author: str | None = None
    label: VerdictLabel | None = None
    article_text: str | None = None

    def with_values(self, **changes: Any) -> "ClaimRecord":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "claim_text": self.claim_text,
            "review_date": self.review_date.isoformat() if self.review_date else None,
            "claim_author": self.claim_author,
            "fact_check_url": self.fact_check_url,
            "raw_verdict": self.raw_verdict,
            "label": self.label.value if self.label else None,
            "language": self.language,
            "fact_checker": self.fact_checker,
            "article_text": self.article_text,
        }

    @classmethod
    def from_dict(cls, entry: dict[str, Any]) -> "ClaimRecord":
        """Build a record from a feed entry or a canonical dataset row."""
        values: dict[str, Any] = {}
        for feed_key, attr in FEED_FIELD_MAP.items():
            if feed_key in entry and entry[feed_key] not in (None, ""):
                values[attr] = entry[feed_key]
        for attr in CANONICAL_FIELDS:
            if attr in entry and entry[attr] not in (None, ""):
                values[attr] = entry[attr]

        claim_text = str(values.get("claim_text", "") or "")
        fact_check_url = str(values.get("fact_check_url", "") or "")
        raw_verdict = str(values.get("raw_verdict", "") or "")
        review_date = parse_date(values.get("review_date"))
        label = values.get("label")
        if isinstance(label, str):
            try:
                label = VerdictLabel.from_string(label)
            except ValueError:
                label = None
        record_id = str(values.get("id") or derive_record_id(claim_text, review_date, fact_check_url))
        return cls(
            id=record_id,
            claim_text=claim_text,
            review_date=review_date,
            fact_check_url=fact_check_url,
            raw_verdict=raw_verdict,
            fact_checker=str(values.get("fact_checker", "") or ""),
            language=str(values.get("language", "") or ""),
            claim_author=values.get("claim_author"),
            label=label,
            article_text=values.get("article_text"),
        )

    def has_feed_fields(self) -> bool:
        """True when the entry carried at least one recognizable feed field."""
        return bool(self.claim_text or self.fact_check_url or self.raw_verdict)


def derive_record_id(claim_text: str, review_date: date | None, url: str) -> str:
    basis = "|".join([claim_text, review_date.isoformat() if review_date else "", url])
    return hashlib.sha1(basis.encode("utf-8")).hexdigest()[:16]
