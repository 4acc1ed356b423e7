"""Reading fact-check feeds (JSON-lines or CSV) into claim records."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .records import FEED_FIELD_MAP, CANONICAL_FIELDS, ClaimRecord

_RECOGNIZED = set(FEED_FIELD_MAP) | set(CANONICAL_FIELDS)


@dataclass(frozen=True)
class Rejection:
    line_no: int
    reason: str
    raw: str


@dataclass
class IngestResult:
    records: list[ClaimRecord] = field(default_factory=list)
    rejections: list[Rejection] = field(default_factory=list)


def ingest_feed(path: str | Path) -> IngestResult:
    """Read a feed file into records. Entries that cannot be parsed or carry
    none of the recognized fields are returned as rejections, never dropped
    silently. Raises for a missing file or an unusable container."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".json", ".ndjson"):
        return _ingest_jsonl(path)
    if suffix == ".csv":
        return _ingest_csv(path)
    raise ValueError(f"unsupported feed format: {path.name} (expected .jsonl or .csv)")


def _ingest_jsonl(path: Path) -> IngestResult:
    result = IngestResult()
    try:
        text = path.read_text("utf-8")
    except UnicodeDecodeError as exc:
        raise ValueError(f"corrupt feed container: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            entry = json.loads(line)
        except json.JSONDecodeError as exc:
            result.rejections.append(Rejection(line_no, f"invalid JSON: {exc.msg}", line[:200]))
            continue
        if not isinstance(entry, dict):
            result.rejections.append(Rejection(line_no, "entry is not an object", line[:200]))
            continue
        _append_entry(result, entry, line_no, line)
    return result


def _ingest_csv(path: Path) -> IngestResult:
    result = IngestResult()
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            if not any(col in _RECOGNIZED for col in header):
                raise ValueError(f"corrupt feed container: no recognized columns in {header}")
            for line_no, row in enumerate(reader, start=2):
                entry = {k: v for k, v in row.items() if k is not None}
                _append_entry(result, entry, line_no, json.dumps(entry)[:200])
    except UnicodeDecodeError as exc:
        raise ValueError(f"corrupt feed container: {exc}") from exc
    return result


def _append_entry(result: IngestResult, entry: dict, line_no: int, raw: str) -> None:
    record = ClaimRecord.from_dict(entry)
    if not record.has_feed_fields():
        result.rejections.append(Rejection(line_no, "no recognized feed fields", raw))
        return
    result.records.append(record)


def load_dataset(path: str | Path) -> list[ClaimRecord]:
    """Load a sampled dataset written by :func:`write_dataset` (JSON-lines)."""
    records = []
    for line in Path(path).read_text("utf-8").splitlines():
        if line.strip():
            records.append(ClaimRecord.from_dict(json.loads(line)))
    return records


def write_dataset(records: list[ClaimRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
