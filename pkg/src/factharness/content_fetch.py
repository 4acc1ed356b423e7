"""HTTP fetching and readable-text extraction under size limits.

Extraction walks the DOM with a block/link-density heuristic: boilerplate
containers are skipped outright, remaining text blocks are kept when they look
like prose (long enough, mostly non-anchor text), and the result is truncated
at a whitespace boundary.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from html.parser import HTMLParser
from urllib.parse import urlparse

import requests

logger = logging.getLogger(__name__)

DEFAULT_USER_AGENT = "factharness/0.1 (+https://example.invalid/harness)"


@dataclass(frozen=True)
class FetchLimits:
    max_chars: int = 20_000
    timeout: float = 20.0
    max_redirects: int = 5

    def __post_init__(self) -> None:
        if self.max_chars <= 0:
            raise ValueError("max_chars must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


class FetchError(Exception):
    pass


class DisallowedScheme(FetchError):
    pass


class NetworkError(FetchError):
    pass


class FetchTimeout(NetworkError):
    pass


class HTTPStatusError(FetchError):
    def __init__(self, status: int, url: str):
        super().__init__(f"HTTP {status} for {url}")
        self.status = status


class ExtractionError(Exception):
    pass


@dataclass(frozen=True)
class FetchedDocument:
    body: bytes
    content_type: str
    url: str


@dataclass(frozen=True)
class ExtractedText:
    text: str
    truncated: bool


class Fetcher:
    """Thread-safe HTTP client with an in-flight cap and an optional per-host
    politeness delay. Proxies come from the standard environment variables."""

    def __init__(
        self,
        limits: FetchLimits | None = None,
        user_agent: str = DEFAULT_USER_AGENT,
        politeness_delay: float = 0.0,
        max_in_flight: int = 8,
        session: requests.Session | None = None,
        sleep=time.sleep,
    ):
        self.limits = limits or FetchLimits()
        self.user_agent = user_agent
        self.politeness_delay = politeness_delay
        self._semaphore = threading.Semaphore(max_in_flight)
        self._session = session or requests.Session()
        self._session.max_redirects = self.limits.max_redirects
        self._last_hit: dict[str, float] = {}
        self._lock = threading.Lock()
        self._sleep = sleep

    def fetch(self, url: str) -> FetchedDocument:
        parsed = urlparse(url)
        if parsed.scheme not in ("http", "https"):
            raise DisallowedScheme(f"scheme {parsed.scheme!r} not allowed: {url}")
        self._be_polite(parsed.netloc)
        with self._semaphore:
            try:
                response = self._session.get(
                    url,
                    timeout=self.limits.timeout,
                    headers={"User-Agent": self.user_agent},
                    allow_redirects=True,
                )
            except requests.Timeout as exc:
                raise FetchTimeout(f"timeout fetching {url}") from exc
            except requests.RequestException as exc:
                raise NetworkError(f"network failure fetching {url}: {exc}") from exc
        if response.status_code >= 400:
            raise HTTPStatusError(response.status_code, url)
        content_type = response.headers.get("Content-Type", "")
        return FetchedDocument(body=response.content, content_type=content_type, url=url)

    def _be_polite(self, host: str) -> None:
        if self.politeness_delay <= 0:
            return
        with self._lock:
            now = time.monotonic()
            wait = self._last_hit.get(host, -1e9) + self.politeness_delay - now
            self._last_hit[host] = max(now, now + wait)
        if wait > 0:
            self._sleep(wait)


def fetch(url: str, limits: FetchLimits | None = None) -> FetchedDocument:
    return Fetcher(limits=limits).fetch(url)


_SKIP_TAGS = frozenset(
    "script style noscript template svg nav header footer aside form button "
    "select option iframe head figure".split()
)
_BLOCK_TAGS = frozenset(
    "p div article section main li ul ol h1 h2 h3 h4 h5 h6 blockquote pre "
    "td th tr table br body".split()
)
_VOID_TAGS = frozenset("br hr img input meta link".split())


class _BlockCollector(HTMLParser):
    """Collect text blocks with the number of characters that sit inside
    anchors, so link-heavy furniture can be scored out."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.blocks: list[tuple[str, int]] = []
        self._parts: list[str] = []
        self._link_chars = 0
        self._skip_depth = 0
        self._anchor_depth = 0

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag in _SKIP_TAGS and tag not in _VOID_TAGS:
            self._skip_depth += 1
            return
        if self._skip_depth:
            return
        if tag == "a":
            self._anchor_depth += 1
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_endtag(self, tag: str) -> None:
        if tag in _SKIP_TAGS and tag not in _VOID_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
            return
        if self._skip_depth:
            return
        if tag == "a":
            self._anchor_depth = max(0, self._anchor_depth - 1)
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data: str) -> None:
        if self._skip_depth or not data:
            return
        self._parts.append(data)
        if self._anchor_depth:
            self._link_chars += len(data.strip())

    def _flush(self) -> None:
        text = " ".join("".join(self._parts).split())
        if text:
            self.blocks.append((text, self._link_chars))
        self._parts = []
        self._link_chars = 0

    def close(self) -> None:
        super().close()
        self._flush()


def _decode(document: FetchedDocument) -> str:
    charset = "utf-8"
    for part in document.content_type.split(";"):
        part = part.strip()
        if part.lower().startswith("charset="):
            charset = part.split("=", 1)[1].strip() or "utf-8"
    try:
        return document.body.decode(charset, errors="replace")
    except LookupError:
        return document.body.decode("utf-8", errors="replace")


def _looks_like_html(document: FetchedDocument, text: str) -> bool:
    if "html" in document.content_type.lower() or "xml" in document.content_type.lower():
        return True
    head = text[:500].lower()
    return "<html" in head or "<!doctype" in head


def truncate_at_whitespace(text: str, max_chars: int) -> ExtractedText:
    if len(text) <= max_chars:
        return ExtractedText(text=text, truncated=False)
    window = text[: max_chars + 1]
    cut = max(window.rfind(ch) for ch in (" ", "\n", "\t"))
    if cut <= 0:
        cut = max_chars
    return ExtractedText(text=text[:cut].rstrip(), truncated=True)


def extract_main_text(document: FetchedDocument, limits: FetchLimits | None = None) -> ExtractedText:
    """Main readable text of an HTML or plain-text document, truncated to
    ``limits.max_chars`` at a whitespace boundary. Raises
    :class:`ExtractionError` for empty or non-textual documents."""
    limits = limits or FetchLimits()
    content_type = document.content_type.lower()
    if content_type and not any(
        marker in content_type for marker in ("html", "xml", "text", "json")
    ):
        raise ExtractionError(f"non-textual content type: {document.content_type}")
    text = _decode(document)
    if not text.strip():
        raise ExtractionError("empty document")

    if not _looks_like_html(document, text):
        return truncate_at_whitespace(text.strip(), limits.max_chars)

    collector = _BlockCollector()
    collector.feed(text)
    collector.close()
    content_blocks = []
    for block, link_chars in collector.blocks:
        density = link_chars / len(block) if block else 1.0
        if len(block) >= 25 and density <= 0.5:
            content_blocks.append(block)
    if not content_blocks:
        # Short or unusual pages: fall back to every non-boilerplate block.
        content_blocks = [block for block, _ in collector.blocks]
    main = "\n\n".join(content_blocks).strip()
    if not main:
        raise ExtractionError("no extractable text")
    return truncate_at_whitespace(main, limits.max_chars)
