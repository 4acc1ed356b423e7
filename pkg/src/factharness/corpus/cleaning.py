"""Cleaning ingested records: drop incomplete, future-dated, non-English, and
duplicate entries. Cleaning is total and idempotent."""

from __future__ import annotations

import logging
from datetime import date

from .language import UNKNOWN, detect_language
from .records import ClaimRecord

logger = logging.getLogger(__name__)


def clean(records: list[ClaimRecord], today: date) -> list[ClaimRecord]:
    """Return the records that survive all cleaning rules, in input order.

    Removes entries missing claim text, review date, raw verdict, or URL;
    entries dated after ``today``; entries whose text-detected language
    disagrees with the URL domain, is undetectable, or is not English; and
    exact duplicates on (claim_text, review_date, fact_check_url).
    """
    kept: list[ClaimRecord] = []
    seen: set[tuple[str, date | None, str]] = set()
    for record in records:
        if not record.claim_text.strip() or record.review_date is None:
            _drop(record, "missing claim or date")
            continue
        if not record.raw_verdict.strip():
            _drop(record, "missing verdict")
            continue
        if not record.fact_check_url.strip():
            _drop(record, "missing fact-check URL")
            continue
        if record.review_date > today:
            _drop(record, "future-dated")
            continue
        lang = detect_language(record.claim_text, record.fact_check_url)
        if lang == UNKNOWN:
            _drop(record, "language undetectable or disagrees with domain")
            continue
        if lang != "en":
            _drop(record, f"non-English ({lang})")
            continue
        key = (record.claim_text, record.review_date, record.fact_check_url)
        if key in seen:
            _drop(record, "duplicate")
            continue
        seen.add(key)
        kept.append(record.with_values(language=lang))
    return kept


def _drop(record: ClaimRecord, reason: str) -> None:
    logger.debug("dropping %s: %s", record.id, reason)
