"""One-iteration Reason/Act episodes for the autonomous fact-checking task.

The model either answers directly or issues exactly one search action; after
the evidence comes back it must answer. A second action, an action in a
no-context run, or an unparseable step terminates the episode as a fault —
protocol violations are counted, never silently repaired.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .content_fetch import Fetcher, FetchLimits
from .corpus.records import ClaimRecord
from .llm_gateway import LlmClient
from .prompt_engine import PromptSpec, Task, Approach, claim_block, compose, render_react_system_prompt
from .retrieval import Evidence, EvidenceFormat, SearchProviderError, SearchTool, materialize
from .verdict_extraction import (
    FaultReason,
    VerdictResponse,
    coerce_score,
    extract,
    find_json_objects,
    normalize_quotes,
)

logger = logging.getLogger(__name__)

NEUTRAL_SPEC = PromptSpec(task=Task.FACT_CHECK, approach=Approach.ZERO_SHOT)


class StepKind(Enum):
    ACTION = "action"
    FINAL_ANSWER = "final-answer"


@dataclass(frozen=True)
class AgentStep:
    kind: StepKind
    action_tool: str | None = None
    action_query: str | None = None
    score: int | None = None
    explanation: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "action_tool": self.action_tool,
            "action_query": self.action_query,
            "score": self.score,
            "explanation": self.explanation,
        }


@dataclass(frozen=True)
class StepFault:
    reason: FaultReason
    raw: str

    def to_dict(self) -> dict[str, Any]:
        return {"fault": self.reason.value}


@dataclass(frozen=True)
class Exchange:
    prompt: str
    raw_response: str
    step: AgentStep | StepFault

    def to_dict(self) -> dict[str, Any]:
        return {"prompt": self.prompt, "raw_response": self.raw_response, "step": self.step.to_dict()}


@dataclass
class EpisodeTranscript:
    steps: list[Exchange] = field(default_factory=list)
    evidence: Evidence | None = None
    outcome: VerdictResponse | None = None

    @property
    def action_count(self) -> int:
        return sum(
            1 for ex in self.steps if isinstance(ex.step, AgentStep) and ex.step.kind is StepKind.ACTION
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "steps": [ex.to_dict() for ex in self.steps],
            "evidence": self.evidence.to_dict() if self.evidence else None,
            "outcome": self.outcome.to_dict() if self.outcome else None,
        }


def parse_step(raw: str) -> AgentStep | StepFault:
    """Classify a raw agent response as an Action or a Final answer.

    Uses the shared extraction rules: find complete JSON objects, take the
    last one matching either declared schema. Everything else is a fault.
    """
    if raw is None or not raw.strip():
        return StepFault(FaultReason.EMPTY, raw or "")
    objects = find_json_objects(normalize_quotes(raw))
    if not objects:
        return StepFault(FaultReason.NO_JSON, raw)
    steps = [step for step in (_classify(obj) for obj in objects) if step is not None]
    if not steps:
        return StepFault(FaultReason.BAD_SCHEMA, raw)
    return steps[-1]


def _classify(obj: dict) -> AgentStep | None:
    action = obj.get("action")
    query = obj.get("action_input")
    if isinstance(action, str) and action.strip() and isinstance(query, str) and query.strip():
        return AgentStep(kind=StepKind.ACTION, action_tool=action.strip(), action_query=query.strip())
    score = coerce_score(obj.get("score"))
    if score is not None:
        explanation = obj.get("explanation")
        return AgentStep(
            kind=StepKind.FINAL_ANSWER,
            score=score,
            explanation=str(explanation) if explanation is not None else None,
        )
    return None


def _fault_outcome(raw: str, reason: FaultReason) -> VerdictResponse:
    return VerdictResponse(raw_text=raw, fault_reason=reason)


def run_episode(
    claim: ClaimRecord,
    tool: SearchTool | None,
    evidence_format: EvidenceFormat | None,
    client: LlmClient,
    *,
    fetcher: Fetcher | None = None,
    limits: FetchLimits | None = None,
) -> EpisodeTranscript:
    """Run one agent episode for a claim.

    Budget: at most one Action and at most two generation calls (summarizer
    calls during evidence materialization excluded). Tool failures degrade to
    empty evidence with a report; the model is still re-prompted and must
    answer. Gateway errors propagate.
    """
    if claim.review_date is None:
        raise ValueError(f"claim {claim.id} has no review_date")
    transcript = EpisodeTranscript()
    system = render_react_system_prompt(tool.description if tool else "")
    prompt1 = system.text + "\n\n" + claim_block(claim.claim_text, claim.review_date, claim.claim_author)
    raw1 = client.generate(prompt1).text
    step1 = parse_step(raw1)
    if isinstance(step1, AgentStep) and step1.kind is StepKind.ACTION and tool is None:
        # Protocol violation: the no-context prompt offered no Action shape.
        logger.warning("claim %s: action emitted in a no-context run; counting a fault", claim.id)
        step1 = StepFault(FaultReason.BAD_SCHEMA, raw1)
    transcript.steps.append(Exchange(prompt1, raw1, step1))

    if isinstance(step1, StepFault):
        transcript.outcome = _fault_outcome(raw1, step1.reason)
        return transcript
    if step1.kind is StepKind.FINAL_ANSWER:
        transcript.outcome = extract(raw1)
        return transcript

    query = step1.action_query or ""
    try:
        results = tool.search(query, claim.review_date)
    except SearchProviderError as exc:
        logger.warning("claim %s: tool %s failed (%s); continuing with no results", claim.id, tool.name, exc)
        results = []
    summarizer = None
    if evidence_format is EvidenceFormat.SUMMARY:
        summarizer = lambda text: client.summarize(text, claim=claim.claim_text)  # noqa: E731
    transcript.evidence = materialize(
        results,
        evidence_format or EvidenceFormat.SNIPPET,
        source=tool.source,
        query=query,
        limits=limits,
        fetcher=fetcher,
        summarizer=summarizer,
    )

    prompt2 = compose(
        NEUTRAL_SPEC,
        claim.claim_text,
        transcript.evidence,
        claim.review_date,
        claim.claim_author,
    ).text
    raw2 = client.generate(prompt2).text
    step2 = parse_step(raw2)
    if isinstance(step2, AgentStep) and step2.kind is StepKind.ACTION:
        # One action per episode: a second request is a protocol violation.
        logger.warning("claim %s: second action refused; counting a fault", claim.id)
        step2 = StepFault(FaultReason.BAD_SCHEMA, raw2)
    transcript.steps.append(Exchange(prompt2, raw2, step2))

    if isinstance(step2, StepFault):
        transcript.outcome = _fault_outcome(raw2, step2.reason)
    else:
        transcript.outcome = extract(raw2)
    return transcript
