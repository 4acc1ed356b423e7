"""Run configuration: CLI flags layered over a plain key=value config file."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..llm_gateway import GenerationParams
from ..prompt_engine import PromptSpec, Task, enumerate_specs
from ..retrieval import EvidenceFormat, EvidenceSource

_TASKS = {task.value: task for task in Task}
_SOURCES = {source.value: source for source in EvidenceSource}
_FORMATS = {fmt.value: fmt for fmt in EvidenceFormat}


class ConfigError(ValueError):
    pass


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and # comments are ignored."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def parse_task(value: str) -> Task:
    try:
        return _TASKS[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"unknown task {value!r}; expected one of {sorted(_TASKS)}") from None


def parse_source(value: str) -> EvidenceSource:
    try:
        return _SOURCES[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"unknown source {value!r}; expected one of {sorted(_SOURCES)}") from None


def parse_format(value: str) -> EvidenceFormat:
    try:
        return _FORMATS[value.strip().lower()]
    except KeyError:
        raise ConfigError(f"unknown format {value!r}; expected one of {sorted(_FORMATS)}") from None


def parse_specs(value: str, task: Task) -> list[PromptSpec] | None:
    if value.strip().lower() == "all":
        return None
    specs = []
    for token in value.split(","):
        token = token.strip()
        if token:
            specs.append(PromptSpec.from_key(task, token))
    if not specs:
        raise ConfigError("spec list is empty")
    return specs


@dataclass
class RunConfig:
    task: Task
    dataset_path: Path
    params: GenerationParams
    output_dir: Path
    seed: int = 0
    specs: list[PromptSpec] | None = None  # None means the full matrix (tasks 1/2)
    source: EvidenceSource | None = None
    format: EvidenceFormat | None = None
    search_provider: str | None = None
    margin_days: int = 7
    drop_undated: bool = False
    concurrency: int = 1
    limit: int | None = None
    excerpt_chars: int = 2_000
    fetch_max_chars: int = 20_000
    transport_style: str = "openai-chat"
    verbose_log: bool = False

    def __post_init__(self) -> None:
        if self.task is Task.FACT_CHECK:
            if self.source is None:
                raise ConfigError("task3 needs a source (none, encyclopedia, or web-search)")
            if self.source is EvidenceSource.NONE:
                if self.format is not None:
                    raise ConfigError("source none forbids an evidence format")
            elif self.format is None:
                raise ConfigError(f"source {self.source.value} needs an evidence format")
            if self.source is not EvidenceSource.NONE and not self.search_provider:
                raise ConfigError("task3 with a source needs search_provider")
            if self.specs is not None:
                raise ConfigError("task3 runs the single neutral prompt; specs do not apply")
        else:
            if self.source is not None or self.format is not None:
                raise ConfigError("source/format only apply to task3")
        if self.concurrency < 1:
            raise ConfigError("concurrency must be >= 1")

    def resolved_specs(self) -> list[PromptSpec]:
        if self.task is Task.FACT_CHECK:
            return enumerate_specs(Task.FACT_CHECK)
        return self.specs if self.specs is not None else enumerate_specs(self.task)
