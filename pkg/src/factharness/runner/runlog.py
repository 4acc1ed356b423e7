"""Append-only JSON-lines run log: one record per (claim, configuration) key,
crash-safe, resumable. Corrupt lines are quarantined so their keys re-run."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from ..verdict_extraction import VerdictResponse

logger = logging.getLogger(__name__)


@dataclass
class RunRecord:
    claim_id: str
    digest: str
    config_key: str
    prompt_sha: str
    responses: list[str]
    verdict: VerdictResponse
    transcript: dict | None = None
    ts: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def key(self) -> tuple[str, str]:
        return (self.claim_id, self.digest)

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "digest": self.digest,
            "config_key": self.config_key,
            "prompt_sha": self.prompt_sha,
            "responses": self.responses,
            "verdict": self.verdict.to_dict(),
            "transcript": self.transcript,
            "ts": self.ts,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        return cls(
            claim_id=data["claim_id"],
            digest=data["digest"],
            config_key=data["config_key"],
            prompt_sha=data["prompt_sha"],
            responses=list(data["responses"]),
            verdict=VerdictResponse.from_dict(data["verdict"]),
            transcript=data.get("transcript"),
            ts=data.get("ts", ""),
        )


class RunLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.quarantine_path = self.path.with_suffix(self.path.suffix + ".quarantine")

    def load(self) -> tuple[dict[tuple[str, str], RunRecord], int]:
        """Completed records keyed by (claim_id, digest), plus the number of
        corrupt lines moved to the quarantine file."""
        if not self.path.exists():
            return {}, 0
        completed: dict[tuple[str, str], RunRecord] = {}
        good_lines: list[str] = []
        corrupt: list[str] = []
        for line in self.path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            try:
                record = RunRecord.from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                logger.warning("quarantining corrupt log line: %s", exc)
                corrupt.append(line)
                continue
            completed[record.key] = record
            good_lines.append(line)
        if corrupt:
            with self.quarantine_path.open("a", encoding="utf-8") as handle:
                for line in corrupt:
                    handle.write(line + "\n")
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text("".join(l + "\n" for l in good_lines), encoding="utf-8")
            tmp.replace(self.path)
        return completed, len(corrupt)

    def append(self, record: RunRecord) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
            handle.flush()
