"""Shared fixtures: scripted transports, record builders, and fixture data."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Callable

import pytest

from factharness.corpus import ClaimRecord, VerdictLabel
from factharness.llm_gateway import GenerationParams, TransportReply

TEST_PARAMS = GenerationParams(model_id="scripted", endpoint="http://mock.invalid/v1")


def make_record(
    i: int,
    label: VerdictLabel | None = None,
    year: int = 2023,
    claim: str | None = None,
    article: str | None = "unset",
    author: str | None = "Author X",
) -> ClaimRecord:
    """A well-formed English record; article defaults to a distinct string."""
    if claim is None:
        claim = f"The statement number {i} was made about the event and it is under review."
    if article == "unset":
        article = (
            f"Our fact-checkers examined statement number {i} in detail and found "
            f"the evidence for it to be what the verdict says. Further background on item {i}."
        )
    return ClaimRecord(
        id=f"rec-{i:04d}",
        claim_text=claim,
        review_date=date(year, (i % 12) + 1, (i % 27) + 1),
        fact_check_url=f"https://www.politifact.com/factchecks/{i}/",
        raw_verdict="true" if label is VerdictLabel.TRUE else "false",
        fact_checker="politifact",
        language="en",
        claim_author=author,
        label=label,
        article_text=article,
    )


def make_labeled_dataset(n: int = 8, year: int = 2023) -> list[ClaimRecord]:
    """Balanced labeled dataset with distinct articles."""
    return [
        make_record(i, VerdictLabel.TRUE if i % 2 == 0 else VerdictLabel.FALSE, year=year)
        for i in range(n)
    ]


class ScriptedTransport:
    """Transport driven by a function of the prompt; counts calls."""

    def __init__(self, reply_fn: Callable[[str], str]):
        self.reply_fn = reply_fn
        self.calls: list[str] = []
        self._lock = threading.Lock()

    @property
    def call_count(self) -> int:
        return len(self.calls)

    def complete(self, prompt: str, params) -> TransportReply:
        with self._lock:
            self.calls.append(prompt)
        return TransportReply(text=self.reply_fn(prompt))


class SequenceTransport:
    """Replays a fixed sequence of replies; entries may be exceptions."""

    def __init__(self, replies: list):
        self.replies = list(replies)
        self.calls = 0

    def complete(self, prompt: str, params) -> TransportReply:
        if self.calls >= len(self.replies):
            raise AssertionError("sequence transport exhausted")
        reply = self.replies[self.calls]
        self.calls += 1
        if isinstance(reply, Exception):
            raise reply
        return TransportReply(text=reply)


def answer_json(score: int, explanation: str = "scripted") -> str:
    return json.dumps({"score": score, "explanation": explanation})


def action_json(query: str, tool: str = "wikipedia") -> str:
    return json.dumps({"action": tool, "action_input": query})


@dataclass
class DeterministicModel:
    """Pure function of the prompt: summary prompts get a summary, agent
    prompts answer or act per ``agent_behavior``, everything else gets a
    stable in-range score derived from the prompt hash."""

    agent_behavior: str = "answer"  # answer | act | act-by-hash
    summaries: int = 0
    searches_requested: list[str] = field(default_factory=list)

    def __call__(self, prompt: str) -> str:
        import hashlib

        digest = int(hashlib.sha256(prompt.encode()).hexdigest(), 16)
        if "Reply with only the summary text." in prompt:
            self.summaries += 1
            return f"summary-{digest % 10_000}"
        tool_enabled_opening = "your search query" in prompt and "You searched for" not in prompt
        if tool_enabled_opening:
            act = self.agent_behavior == "act" or (
                self.agent_behavior == "act-by-hash" and digest % 2 == 0
            )
            if act:
                query = f"query-{digest % 997}"
                self.searches_requested.append(query)
                return action_json(query)
        return answer_json(digest % 101, f"deterministic-{digest % 9973}")


@pytest.fixture
def scripted_client_factory():
    from factharness.llm_gateway import LlmClient

    def _make(reply_fn: Callable[[str], str], **kwargs) -> tuple:
        transport = ScriptedTransport(reply_fn)
        client = LlmClient(TEST_PARAMS, transport, sleep=lambda _: None, **kwargs)
        return client, transport

    return _make


@pytest.fixture
def fixture_search_dir(tmp_path: Path) -> Callable[[list[dict], str | None], Path]:
    """Write canned search results for the fixture provider."""

    counter = {"n": 0}

    def _make(results: list[dict], query: str | None = None) -> Path:
        directory = tmp_path / f"search-fixture-{counter['n']}"
        counter["n"] += 1
        directory.mkdir(parents=True, exist_ok=True)
        payload = {"query": query, "results": results}
        (directory / "results.json").write_text(json.dumps(payload), encoding="utf-8")
        return directory

    return _make
