"""The prompt matrix: three approaches crossed with three independent
enhancement toggles for tasks 1 and 2, and a single neutral spec for task 3."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum


class Task(Enum):
    RELATEDNESS = "task1"
    VERDICT_FROM_ARTICLE = "task2"
    FACT_CHECK = "task3"


class Approach(Enum):
    ZERO_SHOT = "zero-shot"
    FEW_SHOT = "few-shot"
    CHAIN_OF_THOUGHT = "chain-of-thought"


@dataclass(frozen=True)
class PromptSpec:
    """One cell of the prompt matrix."""

    task: Task
    approach: Approach
    enrich: bool = False
    self_reflection: bool = False
    summary: bool = False

    def key(self) -> str:
        parts = [self.approach.value]
        if self.enrich:
            parts.append("enrich")
        if self.self_reflection:
            parts.append("reflect")
        if self.summary:
            parts.append("summary")
        return "+".join(parts)

    @classmethod
    def from_key(cls, task: Task, key: str) -> "PromptSpec":
        parts = key.strip().split("+")
        approach = Approach(parts[0])
        flags = set(parts[1:])
        unknown = flags - {"enrich", "reflect", "summary"}
        if unknown:
            raise ValueError(f"unknown spec flags: {sorted(unknown)}")
        return cls(
            task=task,
            approach=approach,
            enrich="enrich" in flags,
            self_reflection="reflect" in flags,
            summary="summary" in flags,
        )


def enumerate_specs(task: Task) -> list[PromptSpec]:
    """All 24 specs for tasks 1 and 2; the single neutral zero-shot spec for
    task 3."""
    if task is Task.FACT_CHECK:
        return [PromptSpec(task=task, approach=Approach.ZERO_SHOT)]
    return [
        PromptSpec(task=task, approach=approach, enrich=enrich, self_reflection=reflect, summary=summary)
        for approach, enrich, reflect, summary in itertools.product(
            (Approach.ZERO_SHOT, Approach.FEW_SHOT, Approach.CHAIN_OF_THOUGHT),
            (False, True),
            (False, True),
            (False, True),
        )
    ]
