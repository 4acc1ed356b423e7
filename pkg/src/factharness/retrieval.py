"""Evidence tools: encyclopedia search, date-bounded web search, and
materialization of results into snippet, full-article, or summary evidence.

Web results are filtered against a temporal cutoff (the fact-check's
publication date minus a margin, one week by default) so evidence can never
include the fact-check itself or anything later. Encyclopedia results are not
date-filtered. Providers are pluggable: a live Wikipedia API client, a generic
date-restricted web API adapter, or a fixture directory for offline runs.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from datetime import date, timedelta
from enum import Enum
from pathlib import Path
from typing import Callable, Protocol

import requests

from .content_fetch import ExtractionError, FetchError, Fetcher, FetchLimits, extract_main_text
from .corpus.records import parse_date

logger = logging.getLogger(__name__)


class EvidenceSource(Enum):
    ENCYCLOPEDIA = "encyclopedia"
    WEB_SEARCH = "web-search"
    NONE = "none"


class EvidenceFormat(Enum):
    SNIPPET = "snippet"
    FULL_ARTICLE = "full-article"
    SUMMARY = "summary"


@dataclass(frozen=True)
class SearchResult:
    title: str
    url: str
    snippet: str
    result_date: date | None = None

    def __post_init__(self) -> None:
        if not self.url:
            raise ValueError("search result needs a URL")


@dataclass(frozen=True)
class EvidenceItem:
    title: str
    url: str
    text: str

    def to_dict(self) -> dict[str, str]:
        return {"title": self.title, "url": self.url, "text": self.text}


@dataclass
class Evidence:
    source: EvidenceSource
    format: EvidenceFormat | None
    items: list[EvidenceItem] = field(default_factory=list)
    query: str = ""

    def to_dict(self) -> dict:
        return {
            "source": self.source.value,
            "format": self.format.value if self.format else None,
            "items": [item.to_dict() for item in self.items],
            "query": self.query,
        }


def no_evidence() -> Evidence:
    return Evidence(source=EvidenceSource.NONE, format=None, items=[], query="")


@dataclass(frozen=True)
class DateWindow:
    upper_bound: date
    margin_days: int = 7

    def __post_init__(self) -> None:
        if self.margin_days < 0:
            raise ValueError("margin_days must be non-negative")

    @property
    def cutoff(self) -> date:
        return self.upper_bound - timedelta(days=self.margin_days)


class SearchProviderError(Exception):
    pass


class DateFilterUnsupported(SearchProviderError):
    """The configured provider cannot restrict results by date; temporal
    integrity is a correctness requirement, so this is a hard error."""


class SearchProvider(Protocol):
    name: str
    supports_date_filtering: bool

    def search(self, query: str, *, max_results: int, cutoff: date | None) -> list[SearchResult]: ...


class WikipediaProvider:
    """Wikipedia's public search API. No date filtering (and none wanted:
    encyclopedia evidence is exempt from the temporal cutoff)."""

    name = "wikipedia-api"
    supports_date_filtering = False

    def __init__(self, language: str = "en", timeout: float = 20.0, session: requests.Session | None = None):
        self.api_url = f"https://{language}.wikipedia.org/w/api.php"
        self.page_base = f"https://{language}.wikipedia.org/wiki/"
        self.timeout = timeout
        self._session = session or requests.Session()

    def search(self, query: str, *, max_results: int, cutoff: date | None = None) -> list[SearchResult]:
        params = {
            "action": "query",
            "list": "search",
            "srsearch": query,
            "srlimit": max_results,
            "format": "json",
        }
        try:
            response = self._session.get(self.api_url, params=params, timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            raise SearchProviderError(f"wikipedia search failed: {exc}") from exc
        results = []
        for hit in payload.get("query", {}).get("search", [])[:max_results]:
            title = hit.get("title", "")
            snippet = _strip_tags(hit.get("snippet", ""))
            results.append(
                SearchResult(title=title, url=self.page_base + title.replace(" ", "_"), snippet=snippet)
            )
        return results


class WebApiProvider:
    """Generic adapter for a date-restricted web search API (serpapi-style
    JSON: an "organic_results" list of title/link/snippet/date entries)."""

    supports_date_filtering = True

    def __init__(
        self,
        provider: str,
        endpoint: str | None = None,
        api_key_env: str = "HARNESS_SEARCH_API_KEY",
        timeout: float = 20.0,
        session: requests.Session | None = None,
    ):
        self.name = f"web-api:{provider}"
        self.endpoint = endpoint or "https://serpapi.com/search"
        self.api_key_env = api_key_env
        self.timeout = timeout
        self._session = session or requests.Session()

    def search(self, query: str, *, max_results: int, cutoff: date | None) -> list[SearchResult]:
        params: dict[str, str | int] = {"q": query, "num": max_results, "engine": "google"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            params["api_key"] = key
        if cutoff is not None:
            params["tbs"] = f"cdr:1,cd_max:{cutoff.month}/{cutoff.day}/{cutoff.year}"
        try:
            response = self._session.get(self.endpoint, params=params, timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            raise SearchProviderError(f"{self.name} search failed: {exc}") from exc
        results = []
        for hit in payload.get("organic_results", [])[:max_results]:
            if not hit.get("link"):
                continue
            results.append(
                SearchResult(
                    title=hit.get("title", ""),
                    url=hit["link"],
                    snippet=hit.get("snippet", ""),
                    result_date=parse_date(hit.get("date")),
                )
            )
        return results


class FixtureProvider:
    """Offline provider reading canned results from a directory of JSON files.

    Each file holds {"query": ..., "results": [{title, url, snippet, date}]}.
    Results are returned as stored (no cutoff applied) so tests exercise the
    harness-side temporal filter.
    """

    supports_date_filtering = True

    def __init__(self, directory: str | Path):
        self.name = f"fixture:{directory}"
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise SearchProviderError(f"fixture directory missing: {directory}")
        self._by_query: dict[str, list[SearchResult]] = {}
        self._default: list[SearchResult] | None = None
        for path in sorted(self.directory.glob("*.json")):
            payload = json.loads(path.read_text("utf-8"))
            results = [
                SearchResult(
                    title=entry.get("title", ""),
                    url=entry["url"],
                    snippet=entry.get("snippet", ""),
                    result_date=parse_date(entry.get("date")),
                )
                for entry in payload.get("results", [])
            ]
            if payload.get("query") is None:
                self._default = results
            else:
                self._by_query[payload["query"]] = results

    def search(self, query: str, *, max_results: int, cutoff: date | None = None) -> list[SearchResult]:
        results = self._by_query.get(query)
        if results is None:
            results = self._default if self._default is not None else []
        return results[:max_results]


def provider_from_config(config: str, **kwargs) -> SearchProvider:
    """Build a provider from its config string: ``wikipedia-api``,
    ``web-api:<provider>``, or ``fixture:<directory>``."""
    if config == "wikipedia-api":
        return WikipediaProvider(**kwargs)
    if config.startswith("web-api:"):
        return WebApiProvider(provider=config.split(":", 1)[1], **kwargs)
    if config.startswith("fixture:"):
        return FixtureProvider(directory=config.split(":", 1)[1])
    raise ValueError(f"unknown search provider config: {config!r}")


def _strip_tags(text: str) -> str:
    out = []
    in_tag = False
    for ch in text:
        if ch == "<":
            in_tag = True
        elif ch == ">":
            in_tag = False
        elif not in_tag:
            out.append(ch)
    return "".join(out)


MAX_EVIDENCE_ITEMS = 3
WEB_RESULTS_TO_SCAN = 20


def encyclopedia_search(query: str, provider: SearchProvider) -> list[SearchResult]:
    """Top 3 encyclopedia matches for the query, each with title, link, and
    snippet."""
    if not query.strip():
        raise ValueError("query must be nonempty")
    return provider.search(query, max_results=MAX_EVIDENCE_ITEMS, cutoff=None)[:MAX_EVIDENCE_ITEMS]


def web_search(
    query: str,
    window: DateWindow,
    provider: SearchProvider,
    *,
    drop_undated: bool = False,
) -> list[SearchResult]:
    """Scan up to 20 provider results restricted to the window's cutoff and
    return the top 3 usable ones in provider rank order.

    Dated results past the cutoff are always dropped here regardless of what
    the provider did. Undated results are kept (and logged) unless
    ``drop_undated`` asks otherwise.
    """
    if not query.strip():
        raise ValueError("query must be nonempty")
    if not provider.supports_date_filtering:
        raise DateFilterUnsupported(
            f"provider {provider.name} cannot restrict results by date; refusing to search"
        )
    cutoff = window.cutoff
    raw = provider.search(query, max_results=WEB_RESULTS_TO_SCAN, cutoff=cutoff)
    usable: list[SearchResult] = []
    for result in raw:
        if result.result_date is None:
            if drop_undated:
                continue
            logger.debug("keeping undated result %s", result.url)
            usable.append(result)
        elif result.result_date <= cutoff:
            usable.append(result)
    return usable[:MAX_EVIDENCE_ITEMS]


def materialize(
    results: list[SearchResult],
    format: EvidenceFormat,
    *,
    source: EvidenceSource,
    query: str,
    limits: FetchLimits | None = None,
    fetcher: Fetcher | None = None,
    summarizer: Callable[[str], str] | None = None,
) -> Evidence:
    """Turn search results into evidence items.

    Snippets pass straight through with zero fetches. Full articles are
    fetched and stripped to main text. Summaries additionally make one
    summarizer call per surviving article. A failure on one result drops that
    item with a report and never aborts the rest.
    """
    results = results[:MAX_EVIDENCE_ITEMS]
    evidence = Evidence(source=source, format=format, query=query)
    if format is EvidenceFormat.SNIPPET:
        evidence.items = [EvidenceItem(r.title, r.url, r.snippet) for r in results]
        return evidence
    if results and fetcher is None:
        raise ValueError(f"{format.value} evidence needs a fetcher")
    if format is EvidenceFormat.SUMMARY and results and summarizer is None:
        raise ValueError("summary evidence needs a summarizer")
    for result in results:
        try:
            document = fetcher.fetch(result.url)
            extracted = extract_main_text(document, limits)
            text = extracted.text
            if format is EvidenceFormat.SUMMARY:
                text = summarizer(text)
        except (FetchError, ExtractionError) as exc:
            logger.warning("dropping evidence item %s: %s", result.url, exc)
            continue
        evidence.items.append(EvidenceItem(result.title, result.url, text))
    return evidence


@dataclass(frozen=True)
class SearchTool:
    """One configured evidence source for an agent episode."""

    name: str
    source: EvidenceSource
    description: str
    _run: Callable[[str, date], list[SearchResult]]

    def search(self, query: str, claim_date: date) -> list[SearchResult]:
        return self._run(query, claim_date)


def encyclopedia_tool(provider: SearchProvider, name: str = "wikipedia") -> SearchTool:
    description = (
        f'"{name}": searches an encyclopedia and returns the top 3 matches, '
        "each with a title, a link, and a snippet."
    )
    return SearchTool(
        name=name,
        source=EvidenceSource.ENCYCLOPEDIA,
        description=description,
        _run=lambda query, _date: encyclopedia_search(query, provider),
    )


def web_tool(
    provider: SearchProvider,
    name: str = "web-search",
    margin_days: int = 7,
    drop_undated: bool = False,
) -> SearchTool:
    description = (
        f'"{name}": runs a web search limited to results published up to '
        f"{margin_days} days before the claim's review date and returns the top 3 links."
    )

    def _run(query: str, claim_date: date) -> list[SearchResult]:
        window = DateWindow(upper_bound=claim_date, margin_days=margin_days)
        return web_search(query, window, provider, drop_undated=drop_undated)

    return SearchTool(name=name, source=EvidenceSource.WEB_SEARCH, description=description, _run=_run)
