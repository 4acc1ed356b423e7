"""Prompt composition: the spec matrix, block assembly, few-shot selection,
and the agent/system prompt renderers."""

from .composer import (
    ComposeError,
    RenderedPrompt,
    claim_block,
    compose,
    render_react_system_prompt,
    render_self_reflection,
    render_summary_request,
    template_bundle_sha,
)
from .examples import DEFAULT_EXCERPT_CHARS, ExampleSelectionError, FewShotExample, select_examples
from .specs import Approach, PromptSpec, Task, enumerate_specs

__all__ = [
    "Approach",
    "ComposeError",
    "DEFAULT_EXCERPT_CHARS",
    "ExampleSelectionError",
    "FewShotExample",
    "PromptSpec",
    "RenderedPrompt",
    "Task",
    "claim_block",
    "compose",
    "enumerate_specs",
    "render_react_system_prompt",
    "render_self_reflection",
    "render_summary_request",
    "select_examples",
    "template_bundle_sha",
]
