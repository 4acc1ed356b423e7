"""Language identification by cross-checking text evidence against the URL domain.

A language code is only returned when a stopword-profile detector on the claim
text and a domain-derived heuristic agree; any disagreement or lack of signal
yields ``unknown`` so the cleaning step can drop the record.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from urllib.parse import urlparse

UNKNOWN = "unknown"

_WORD_RE = re.compile(r"[a-zà-öø-ÿ']+", re.IGNORECASE)

# High-frequency function words per language. Deliberately small: claims are
# sentence-length, so one or two hits on the right profile is already decisive
# as long as the winner is unique.
_STOPWORD_PROFILES: dict[str, frozenset[str]] = {
    "en": frozenset(
        "the and is was are were of to in that it for on with this not have "
        "has be by from at an as but they he she will would there their".split()
    ),
    "it": frozenset(
        "il la di che non per una un sono con del le si da anche come stato "
        "nel ha gli della dei essere questo più alla".split()
    ),
    "es": frozenset(
        "los las una que está pero como más este ser fue han según entre "
        "porque sobre cuando también años había gobierno".split()
    ),
    "fr": frozenset(
        "les des est dans pour pas avec sur cette aux été ont qui une leur "
        "plus nous vous fait même après selon".split()
    ),
    "de": frozenset(
        "der die das und ist nicht mit ein eine auf dass sich wurde werden "
        "nach auch dem den für wie bei einem".split()
    ),
    "pt": frozenset(
        "não uma para com mais isso muito já você dos das foi são pela pelo "
        "como ser tem ainda governo sobre anos".split()
    ),
}


def detect_text_language(text: str) -> str | None:
    """Best-guess language of ``text``; None when there is no clear winner."""
    tokens = _WORD_RE.findall(text.lower())
    if not tokens:
        return None
    scores = {
        lang: sum(1 for tok in tokens if tok in profile)
        for lang, profile in _STOPWORD_PROFILES.items()
    }
    best_lang, best = max(scores.items(), key=lambda kv: kv[1])
    if best == 0:
        return None
    if sum(1 for s in scores.values() if s == best) > 1:
        return None
    return best_lang


@lru_cache(maxsize=1)
def _domain_table() -> list[tuple[str, str]]:
    raw = resources.files("factharness.corpus").joinpath("data/domain_languages.tsv").read_text("utf-8")
    rows: list[tuple[str, str]] = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pattern, lang = line.split("\t")
        rows.append((pattern.strip().lower(), lang.strip().lower()))
    # Longest pattern wins when several match.
    rows.sort(key=lambda row: len(row[0]), reverse=True)
    return rows


def domain_language(url: str) -> str | None:
    """Language implied by the URL's domain, or None when the domain says nothing."""
    if not url:
        return None
    parsed = urlparse(url if "//" in url else "//" + url)
    host = (parsed.netloc or "").lower()
    first_segment = (parsed.path or "").strip("/").split("/", 1)[0].lower()
    for pattern, lang in _domain_table():
        if pattern.startswith("."):
            if host.endswith(pattern):
                return lang
        elif pattern in host or pattern == first_segment:
            return lang
    return None


def detect_language(claim_text: str, url: str) -> str:
    """ISO-639-1 code when text detection and the domain heuristic agree, else
    ``unknown``. A domain with no opinion does not veto the text detection."""
    detected = detect_text_language(claim_text)
    if detected is None:
        return UNKNOWN
    from_domain = domain_language(url)
    if from_domain is not None and from_domain != detected:
        return UNKNOWN
    return detected
