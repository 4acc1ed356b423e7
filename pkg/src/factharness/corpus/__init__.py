"""Corpus construction: feed ingestion, cleaning, verdict mapping, stratified
sampling, and claim/article pairing."""

from .cleaning import clean
from .ingest import IngestResult, Rejection, ingest_feed, load_dataset, write_dataset
from .language import UNKNOWN, detect_language, detect_text_language, domain_language
from .pairing import Task1Pair, pair_for_task1
from .records import ClaimRecord, VerdictLabel, derive_record_id, parse_date
from .sampling import SampleResult, SamplingPlan, Shortfall, default_plan, stratified_sample
from .verdicts import VerdictTableError, load_verdict_table, map_verdict, normalize_verdict

__all__ = [
    "ClaimRecord",
    "IngestResult",
    "Rejection",
    "SampleResult",
    "SamplingPlan",
    "Shortfall",
    "Task1Pair",
    "UNKNOWN",
    "VerdictLabel",
    "VerdictTableError",
    "clean",
    "default_plan",
    "derive_record_id",
    "detect_language",
    "detect_text_language",
    "domain_language",
    "ingest_feed",
    "load_dataset",
    "load_verdict_table",
    "map_verdict",
    "normalize_verdict",
    "pair_for_task1",
    "parse_date",
    "stratified_sample",
    "write_dataset",
]
