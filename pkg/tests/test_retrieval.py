"""Search tools: result caps, temporal filtering, and evidence materialization."""

from __future__ import annotations

import logging
from datetime import date, timedelta

import pytest

from factharness.content_fetch import FetchedDocument, NetworkError
from factharness.retrieval import (
    DateFilterUnsupported,
    DateWindow,
    EvidenceFormat,
    EvidenceSource,
    FixtureProvider,
    SearchResult,
    encyclopedia_search,
    materialize,
    provider_from_config,
    web_search,
)

CUTOFF_ANCHOR = date(2024, 3, 15)  # margin 7 -> cutoff 2024-03-08


def dated_results(n: int, post_cutoff: int = 0) -> list[dict]:
    """n fixture results; the leading ``post_cutoff`` ones are dated after the
    cutoff, the rest safely before it."""
    results = []
    cutoff = CUTOFF_ANCHOR - timedelta(days=7)
    for i in range(n):
        if i < post_cutoff:
            result_date = cutoff + timedelta(days=1 + i)
        else:
            result_date = cutoff - timedelta(days=1 + i)
        results.append(
            {
                "title": f"Result {i}",
                "url": f"https://news.example/{i}",
                "snippet": f"Snippet for result {i}.",
                "date": result_date.isoformat(),
            }
        )
    return results


class StubProvider:
    supports_date_filtering = True
    name = "stub"

    def __init__(self, results):
        self.results = results
        self.calls = []

    def search(self, query, *, max_results, cutoff=None):
        self.calls.append((query, max_results, cutoff))
        return self.results[:max_results]


def sr(i, result_date=None):
    return SearchResult(f"R{i}", f"https://e/{i}", f"s{i}", result_date)


class CountingFetcher:
    """In-memory fetcher double with scripted failures."""

    def __init__(self, failing: set[str] | None = None):
        self.calls = 0
        self.failing = failing or set()

    def fetch(self, url: str) -> FetchedDocument:
        self.calls += 1
        if url in self.failing:
            raise NetworkError(f"scripted failure for {url}")
        body = f"<html><body><p>Article body for {url} with enough text to be kept around.</p></body></html>"
        return FetchedDocument(body=body.encode(), content_type="text/html", url=url)


class TestEncyclopediaSearch:
    def test_caps_at_three(self):
        provider = StubProvider([sr(i) for i in range(10)])
        results = encyclopedia_search("some query", provider)
        assert len(results) == 3
        assert [r.title for r in results] == ["R0", "R1", "R2"]

    def test_fewer_available(self):
        provider = StubProvider([sr(0)])
        assert len(encyclopedia_search("q", provider)) == 1

    def test_zero_matches(self):
        assert encyclopedia_search("q", StubProvider([])) == []

    def test_empty_query_rejected(self):
        with pytest.raises(ValueError):
            encyclopedia_search("  ", StubProvider([]))


class TestWebSearch:
    def test_filter_then_take_three(self, fixture_search_dir):
        directory = fixture_search_dir(dated_results(20, post_cutoff=5))
        provider = FixtureProvider(directory)
        window = DateWindow(upper_bound=CUTOFF_ANCHOR, margin_days=7)
        results = web_search("anything", window, provider)
        # Oracle: drop the 5 post-cutoff results, then take the first 3 of the
        # 15 compliant ones in rank order.
        compliant = [r for r in dated_results(20, post_cutoff=5) if date.fromisoformat(r["date"]) <= window.cutoff]
        expected = [r["url"] for r in compliant[:3]]
        assert [r.url for r in results] == expected
        assert all(r.result_date <= window.cutoff for r in results)

    def test_all_post_cutoff_empty(self, fixture_search_dir):
        directory = fixture_search_dir(dated_results(20, post_cutoff=20))
        provider = FixtureProvider(directory)
        results = web_search("q", DateWindow(CUTOFF_ANCHOR, 7), provider)
        assert results == []

    def test_two_available(self):
        cutoff_safe = CUTOFF_ANCHOR - timedelta(days=30)
        provider = StubProvider([sr(0, cutoff_safe), sr(1, cutoff_safe)])
        results = web_search("q", DateWindow(CUTOFF_ANCHOR, 7), provider)
        assert len(results) == 2

    def test_requests_twenty(self):
        provider = StubProvider([])
        web_search("q", DateWindow(CUTOFF_ANCHOR, 7), provider)
        assert provider.calls[0][1] == 20
        assert provider.calls[0][2] == CUTOFF_ANCHOR - timedelta(days=7)

    def test_undated_kept_by_default_dropped_on_request(self):
        provider = StubProvider([sr(0, None), sr(1, CUTOFF_ANCHOR - timedelta(days=30))])
        window = DateWindow(CUTOFF_ANCHOR, 7)
        assert len(web_search("q", window, provider)) == 2
        assert len(web_search("q", window, provider, drop_undated=True)) == 1

    def test_provider_without_date_support_is_hard_error(self):
        class NoDates(StubProvider):
            supports_date_filtering = False

        with pytest.raises(DateFilterUnsupported):
            web_search("q", DateWindow(CUTOFF_ANCHOR, 7), NoDates([]))

    def test_margin_zero_allowed(self):
        window = DateWindow(CUTOFF_ANCHOR, 0)
        assert window.cutoff == CUTOFF_ANCHOR

    def test_negative_margin_rejected(self):
        with pytest.raises(ValueError):
            DateWindow(CUTOFF_ANCHOR, -1)


class TestMaterialize:
    def test_snippet_passthrough_zero_fetches(self):
        fetcher = CountingFetcher()
        evidence = materialize(
            [sr(i) for i in range(3)],
            EvidenceFormat.SNIPPET,
            source=EvidenceSource.ENCYCLOPEDIA,
            query="q",
            fetcher=fetcher,
        )
        assert len(evidence.items) == 3
        assert [item.text for item in evidence.items] == ["s0", "s1", "s2"]
        assert fetcher.calls == 0

    def test_full_article_fetches_and_extracts(self):
        fetcher = CountingFetcher()
        evidence = materialize(
            [sr(0), sr(1)],
            EvidenceFormat.FULL_ARTICLE,
            source=EvidenceSource.WEB_SEARCH,
            query="q",
            fetcher=fetcher,
        )
        assert fetcher.calls == 2
        assert all(item.text.startswith("Article body") for item in evidence.items)

    def test_summary_failure_drops_item_with_report(self, caplog):
        fetcher = CountingFetcher(failing={"https://e/1"})
        summarize_calls = []

        def summarizer(text: str) -> str:
            summarize_calls.append(text)
            return f"sum({len(text)})"

        with caplog.at_level(logging.WARNING):
            evidence = materialize(
                [sr(0), sr(1), sr(2)],
                EvidenceFormat.SUMMARY,
                source=EvidenceSource.WEB_SEARCH,
                query="q",
                fetcher=fetcher,
                summarizer=summarizer,
            )
        assert len(evidence.items) == 2
        assert len(summarize_calls) == 2  # one per surviving item
        assert any("dropping evidence item" in message for message in caplog.messages)

    def test_zero_results_records_source(self):
        evidence = materialize(
            [], EvidenceFormat.SUMMARY, source=EvidenceSource.WEB_SEARCH, query="nothing"
        )
        assert evidence.items == []
        assert evidence.source is EvidenceSource.WEB_SEARCH
        assert evidence.query == "nothing"

    def test_items_never_exceed_three(self):
        evidence = materialize(
            [sr(i) for i in range(7)],
            EvidenceFormat.SNIPPET,
            source=EvidenceSource.ENCYCLOPEDIA,
            query="q",
        )
        assert len(evidence.items) == 3

    def test_item_order_follows_rank(self):
        fetcher = CountingFetcher(failing={"https://e/0"})
        evidence = materialize(
            [sr(0), sr(1), sr(2)],
            EvidenceFormat.FULL_ARTICLE,
            source=EvidenceSource.WEB_SEARCH,
            query="q",
            fetcher=fetcher,
        )
        assert [item.url for item in evidence.items] == ["https://e/1", "https://e/2"]


class TestProviders:
    def test_fixture_provider_query_match(self, fixture_search_dir):
        directory = fixture_search_dir(dated_results(2), query="exact query")
        provider = FixtureProvider(directory)
        assert len(provider.search("exact query", max_results=20, cutoff=None)) == 2
        assert provider.search("other", max_results=20, cutoff=None) == []

    def test_fixture_provider_default_results(self, fixture_search_dir):
        directory = fixture_search_dir(dated_results(4))  # query=None -> default
        provider = FixtureProvider(directory)
        assert len(provider.search("anything at all", max_results=20, cutoff=None)) == 4

    def test_provider_from_config(self, fixture_search_dir):
        directory = fixture_search_dir(dated_results(1))
        provider = provider_from_config(f"fixture:{directory}")
        assert provider.supports_date_filtering
        with pytest.raises(ValueError):
            provider_from_config("carrier-pigeon")

    def test_evidence_source_none_has_empty_items(self):
        from factharness.retrieval import no_evidence

        evidence = no_evidence()
        assert evidence.source is EvidenceSource.NONE
        assert evidence.items == []


@pytest.fixture
def json_server():
    """HTTP server answering GETs with a scripted JSON payload."""
    import json as _json
    import threading
    from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
    from urllib.parse import parse_qs, urlparse

    state = {"payload": {}, "queries": []}

    class Handler(BaseHTTPRequestHandler):
        def do_GET(self):
            state["queries"].append(parse_qs(urlparse(self.path).query))
            data = _json.dumps(state["payload"]).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    yield f"http://127.0.0.1:{server.server_address[1]}", state
    server.shutdown()


class TestLiveAdapters:
    def test_wikipedia_provider_parses_search_hits(self, json_server):
        from factharness.retrieval import WikipediaProvider

        url, state = json_server
        state["payload"] = {
            "query": {
                "search": [
                    {"title": "Golden Gate Bridge", "snippet": 'The <span class="x">bridge</span> opened in 1937.'},
                    {"title": "Bay Bridge", "snippet": "Another bridge."},
                ]
            }
        }
        provider = WikipediaProvider()
        provider.api_url = url  # point the adapter at the fixture server
        results = provider.search("bridge", max_results=3)
        assert len(results) == 2
        assert results[0].title == "Golden Gate Bridge"
        assert results[0].url.endswith("/wiki/Golden_Gate_Bridge")
        assert "<span" not in results[0].snippet
        assert state["queries"][0]["srsearch"] == ["bridge"]
        assert state["queries"][0]["srlimit"] == ["3"]

    def test_web_api_provider_passes_date_restriction(self, json_server, monkeypatch):
        from factharness.retrieval import WebApiProvider

        url, state = json_server
        state["payload"] = {
            "organic_results": [
                {"title": "Old news", "link": "https://n/1", "snippet": "s", "date": "2024-02-20"},
                {"title": "No link skipped"},
            ]
        }
        monkeypatch.setenv("HARNESS_SEARCH_API_KEY", "k")
        provider = WebApiProvider("serpapi", endpoint=url)
        results = provider.search("q", max_results=20, cutoff=date(2024, 3, 8))
        assert len(results) == 1
        assert results[0].result_date == date(2024, 2, 20)
        query = state["queries"][0]
        assert query["tbs"] == ["cdr:1,cd_max:3/8/2024"]
        assert query["api_key"] == ["k"]


class TestFetcherPoliteness:
    def test_per_host_delay(self):
        from factharness.content_fetch import Fetcher

        naps: list[float] = []
        fetcher = Fetcher(politeness_delay=1.5, sleep=naps.append)
        fetcher._be_polite("host.example")
        fetcher._be_polite("host.example")
        fetcher._be_polite("other.example")
        assert len(naps) == 1  # only the repeat against the same host waits
        assert 0 < naps[0] <= 1.5
