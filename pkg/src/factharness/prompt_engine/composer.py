"""Prompt assembly from the modular block grammar.

Block order is fixed: Role, optional Enrich, Task instruction, claim block
(claim, metadata, article or evidence), optional few-shot examples in square
brackets, JSON instruction, Final reminder, and the chain-of-thought suffix
after everything when the approach asks for it. Template wording lives in
external text files; structure lives here.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import date
from functools import lru_cache
from importlib import resources
from typing import TYPE_CHECKING

from .specs import Approach, PromptSpec, Task

if TYPE_CHECKING:  # circular-import guard; Evidence is only type-checked here
    from ..retrieval import Evidence
    from .examples import FewShotExample

# Placeholder names templates are allowed to use. The leftover check is
# restricted to these so JSON braces in instructions are never mistaken for
# placeholders.
PLACEHOLDER_NAMES = (
    "claim",
    "article",
    "date",
    "author",
    "examples",
    "evidence",
    "focus",
    "previous_prompt",
    "previous_answer",
    "tool_description",
)

_TEMPLATE_FILES = (
    "role.txt",
    "enrich.txt",
    "task_relatedness.txt",
    "task_verdict.txt",
    "task_factcheck.txt",
    "json_instruction.txt",
    "final_reminder.txt",
    "cot_suffix.txt",
    "few_shot_intro.txt",
    "self_reflection.txt",
    "summary_request.txt",
    "react_system.txt",
    "react_system_nocontext.txt",
)

_TASK_TEMPLATE = {
    Task.RELATEDNESS: "task_relatedness.txt",
    Task.VERDICT_FROM_ARTICLE: "task_verdict.txt",
    Task.FACT_CHECK: "task_factcheck.txt",
}


class ComposeError(ValueError):
    pass


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    spec: PromptSpec | None = None
    placeholders_filled: bool = True


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    return (
        resources.files("factharness.prompt_engine")
        .joinpath(f"templates/{name}")
        .read_text("utf-8")
        .strip()
    )


@lru_cache(maxsize=1)
def template_bundle_sha() -> str:
    """Stable digest over every shipped template; editing any wording changes
    it, which invalidates stale resume logs."""
    digest = hashlib.sha256()
    for name in _TEMPLATE_FILES:
        digest.update(name.encode())
        digest.update(load_template(name).encode())
    return digest.hexdigest()


def fill(template: str, values: dict[str, str]) -> str:
    out = template
    for key, value in values.items():
        out = out.replace("{" + key + "}", value)
    leftover = [name for name in PLACEHOLDER_NAMES if "{" + name + "}" in out]
    if leftover:
        raise ComposeError(f"unresolved placeholders: {leftover}")
    return out


def claim_block(
    claim: str,
    review_date: date | None,
    claim_author: str | None = None,
    extra_lines: list[str] | None = None,
) -> str:
    lines = [f"Claim: {claim}"]
    if review_date is not None:
        lines.append(f"Date: {review_date.isoformat()}")
    if claim_author:
        lines.append(f"Author: {claim_author}")
    if extra_lines:
        lines.extend(extra_lines)
    return "\n".join(lines)


def _evidence_lines(evidence: "Evidence") -> list[str]:
    lines = [f'You searched for: "{evidence.query}"']
    if not evidence.items:
        lines.append("No results were found for your query. You must still provide your final answer.")
        return lines
    lines.append("Search results:")
    for i, item in enumerate(evidence.items, start=1):
        lines.append(f"{i}. {item.title} ({item.url})")
        lines.append(item.text)
    return lines


def _render_example(example: "FewShotExample") -> str:
    return f"[Claim: {example.claim}\nArticle: {example.article_excerpt}\nAnswer: {example.gold}]"


def compose(
    spec: PromptSpec,
    claim: str,
    context: "str | Evidence | None",
    review_date: date | None,
    claim_author: str | None = None,
    examples: "list[FewShotExample] | None" = None,
) -> RenderedPrompt:
    """Assemble the prompt for one evaluation.

    ``context`` is the article text for tasks 1 and 2 (already a summary when
    the Summary toggle replaced it) and optional Evidence for task 3.
    Examples must be provided exactly when the approach is few-shot.
    """
    if not claim.strip():
        raise ComposeError("claim must be nonempty")
    if spec.task in (Task.RELATEDNESS, Task.VERDICT_FROM_ARTICLE):
        if not isinstance(context, str) or not context.strip():
            raise ComposeError(f"{spec.task.value} requires article text as context")
    if spec.approach is Approach.FEW_SHOT:
        if not examples:
            raise ComposeError("few-shot spec needs examples")
    elif examples:
        raise ComposeError("examples only belong to few-shot specs")

    blocks = [load_template("role.txt")]
    if spec.enrich:
        blocks.append(load_template("enrich.txt"))
    blocks.append(load_template(_TASK_TEMPLATE[spec.task]))

    extra_lines: list[str] | None = None
    if isinstance(context, str):
        extra_lines = [f"Article:\n{context}"]
    elif context is not None:  # Evidence
        extra_lines = _evidence_lines(context)
    blocks.append(claim_block(claim, review_date, claim_author, extra_lines))

    if examples:
        example_text = load_template("few_shot_intro.txt") + "\n" + "\n".join(
            _render_example(example) for example in examples
        )
        blocks.append(example_text)

    blocks.append(load_template("json_instruction.txt"))
    blocks.append(load_template("final_reminder.txt"))
    if spec.approach is Approach.CHAIN_OF_THOUGHT:
        blocks.append(load_template("cot_suffix.txt"))

    text = "\n\n".join(blocks)
    leftover = [name for name in PLACEHOLDER_NAMES if "{" + name + "}" in text]
    if leftover:
        raise ComposeError(f"unresolved placeholders: {leftover}")
    return RenderedPrompt(text=text, spec=spec)


def render_self_reflection(previous_prompt: str, previous_answer: str) -> RenderedPrompt:
    """Follow-up prompt asking the model to reconsider; the new response
    supersedes the previous one."""
    if not previous_answer.strip():
        raise ComposeError("previous_answer must be nonempty")
    body = fill(
        load_template("self_reflection.txt"),
        {"previous_prompt": previous_prompt, "previous_answer": previous_answer},
    )
    text = "\n\n".join([body, load_template("json_instruction.txt"), load_template("final_reminder.txt")])
    return RenderedPrompt(text=text)


def render_summary_request(article_text: str, claim: str | None = None) -> RenderedPrompt:
    """Prompt for a claim-focused summary of an article."""
    if not article_text.strip():
        raise ComposeError("article_text must be nonempty")
    focus = f"Focus on the information relevant to this claim: {claim}\n" if claim else ""
    text = fill(load_template("summary_request.txt"), {"focus": focus, "article": article_text})
    return RenderedPrompt(text=text)


def render_react_system_prompt(tool_description: str) -> RenderedPrompt:
    """Agent instructions: with a tool, either Final answer or one Action;
    without one, only the Final answer shape is offered."""
    if tool_description.strip():
        text = fill(load_template("react_system.txt"), {"tool_description": tool_description})
    else:
        text = load_template("react_system_nocontext.txt")
    return RenderedPrompt(text=text)
