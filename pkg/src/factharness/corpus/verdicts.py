"""Mapping raw fact-checker verdict strings onto the binary labels.

The mapping ships as an editable two-column text file so new feeds can extend
it without code changes. Verdicts absent from the table are reported as
unmapped rather than defaulted, to protect label integrity.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .records import VerdictLabel

_SPACE_RE = re.compile(r"\s+")


class VerdictTableError(ValueError):
    """Raised for malformed or contradictory mapping tables."""


def normalize_verdict(raw: str) -> str:
    return _SPACE_RE.sub(" ", raw.strip().casefold())


def load_verdict_table(path: str | Path | None = None) -> dict[str, VerdictLabel]:
    """Load a verdict table. Rows are ``verdict<TAB>True|False``; blank lines
    and ``#`` comments ignored. A verdict listed under both classes is an error."""
    if path is None:
        raw = resources.files("factharness.corpus").joinpath("data/verdict_labels.tsv").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    table: dict[str, VerdictLabel] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise VerdictTableError(f"line {lineno}: expected two tab-separated columns")
        verdict, label_text = normalize_verdict(parts[0]), parts[1].strip()
        try:
            label = VerdictLabel.from_string(label_text)
        except ValueError as exc:
            raise VerdictTableError(f"line {lineno}: {exc}") from exc
        if verdict in table and table[verdict] is not label:
            raise VerdictTableError(f"line {lineno}: {verdict!r} mapped to both classes")
        table[verdict] = label
    return table


@lru_cache(maxsize=1)
def default_verdict_table() -> dict[str, VerdictLabel]:
    return load_verdict_table()


def map_verdict(raw_verdict: str, table: dict[str, VerdictLabel] | None = None) -> VerdictLabel | None:
    """Case-insensitive lookup of a raw verdict; None means unmapped."""
    if not raw_verdict.strip():
        raise ValueError("raw_verdict must be nonempty")
    lookup = table if table is not None else default_verdict_table()
    return lookup.get(normalize_verdict(raw_verdict))
