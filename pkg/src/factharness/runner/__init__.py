"""Run orchestration: configuration, the append-only run log, task execution
with resume, and the CLI."""

from .config import ConfigError, RunConfig, load_config_file, parse_specs, parse_task
from .runlog import RunLog, RunRecord
from .tasks import (
    TaskResult,
    config_digest,
    enumerate_task3_configs,
    resume,
    run_task,
    run_task1,
    run_task2,
    run_task3,
    task3_config_key,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "RunLog",
    "RunRecord",
    "TaskResult",
    "config_digest",
    "enumerate_task3_configs",
    "load_config_file",
    "parse_specs",
    "parse_task",
    "resume",
    "run_task",
    "run_task1",
    "run_task2",
    "run_task3",
    "task3_config_key",
]
