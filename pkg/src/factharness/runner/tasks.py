"""Task orchestration: run the three tasks over a sampled dataset, persist
every exchange to the run log, skip already-completed keys on resume, and emit
evaluation reports.

Reports carry no timestamps and are rebuilt from the log in canonical unit
order, so a resumed run and an uninterrupted run produce byte-identical
report files under a deterministic model.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from ..content_fetch import Fetcher, FetchLimits
from ..corpus import ClaimRecord, VerdictLabel, load_dataset, pair_for_task1
from ..evaluation import EvalReport, build_report
from ..llm_gateway import LlmClient, MalformedResponse, RetryExhausted
from ..prompt_engine import (
    Approach,
    PromptSpec,
    Task,
    compose,
    render_self_reflection,
    select_examples,
    template_bundle_sha,
)
from ..react_agent import run_episode
from ..retrieval import (
    EvidenceFormat,
    EvidenceSource,
    SearchTool,
    encyclopedia_tool,
    provider_from_config,
    web_tool,
)
from ..verdict_extraction import FaultReason, VerdictResponse, extract
from .config import RunConfig
from .runlog import RunLog, RunRecord

logger = logging.getLogger(__name__)


def enumerate_task3_configs() -> list[tuple[EvidenceSource, EvidenceFormat | None]]:
    """The 7 canonical task-3 configurations: no context, plus each source
    crossed with each evidence format."""
    configs: list[tuple[EvidenceSource, EvidenceFormat | None]] = [(EvidenceSource.NONE, None)]
    for source in (EvidenceSource.ENCYCLOPEDIA, EvidenceSource.WEB_SEARCH):
        for fmt in (EvidenceFormat.SNIPPET, EvidenceFormat.FULL_ARTICLE, EvidenceFormat.SUMMARY):
            configs.append((source, fmt))
    return configs


def task3_config_key(source: EvidenceSource, fmt: EvidenceFormat | None) -> str:
    return f"{source.value}/{fmt.value if fmt else 'direct'}"


def config_digest(config: RunConfig, config_key: str) -> str:
    basis = {
        "templates": template_bundle_sha(),
        "task": config.task.value,
        "config": config_key,
        "seed": config.seed,
        "model": config.params.model_id,
    }
    return hashlib.sha256(json.dumps(basis, sort_keys=True).encode()).hexdigest()[:16]


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass
class TaskResult:
    records: list[RunRecord]
    aggregate: EvalReport
    per_config: dict[str, EvalReport]
    new_generations: int
    log_path: Path
    report_path: Path
    csv_path: Path


@dataclass(frozen=True)
class _Unit:
    """One (claim, configuration) work item."""

    config_key: str
    digest: str
    record: ClaimRecord
    gold: VerdictLabel
    article: str | None = None  # pairing-resolved article for task 1


def _fault_record(unit: _Unit, responses: list[str], prompt_sha: str) -> RunRecord:
    verdict = VerdictResponse(raw_text="", fault_reason=FaultReason.EMPTY)
    return RunRecord(
        claim_id=unit.record.id,
        digest=unit.digest,
        config_key=unit.config_key,
        prompt_sha=prompt_sha,
        responses=responses,
        verdict=verdict,
    )


def _run_units(
    config: RunConfig,
    units: list[_Unit],
    evaluate: Callable[[_Unit], RunRecord],
    log: RunLog,
    completed: dict[tuple[str, str], RunRecord],
) -> int:
    """Evaluate the units missing from the log. Results are written in unit
    order regardless of completion order, keeping the log deterministic."""
    pending = [u for u in units if (u.record.id, u.digest) not in completed]
    if not pending:
        return 0
    if config.concurrency == 1:
        for unit in pending:
            record = evaluate(unit)
            log.append(record)
            completed[record.key] = record
        return len(pending)
    with ThreadPoolExecutor(max_workers=config.concurrency) as pool:
        futures = [(unit, pool.submit(evaluate, unit)) for unit in pending]
        for _unit, future in futures:
            record = future.result()
            log.append(record)
            completed[record.key] = record
    return len(pending)


def _reports(
    config: RunConfig,
    units: list[_Unit],
    completed: dict[tuple[str, str], RunRecord],
    with_splits: bool,
) -> tuple[EvalReport, dict[str, EvalReport]]:
    by_key: dict[str, list[_Unit]] = {}
    for unit in units:
        by_key.setdefault(unit.config_key, []).append(unit)
    per_config: dict[str, EvalReport] = {}
    all_preds: list[VerdictResponse] = []
    all_golds: list[VerdictLabel] = []
    all_records: list[ClaimRecord] = []
    for key in sorted(by_key):
        group = by_key[key]
        preds = [completed[(u.record.id, u.digest)].verdict for u in group]
        golds = [u.gold for u in group]
        records = [u.record for u in group]
        per_config[key] = build_report(preds, golds, records=records, with_splits=with_splits)
        all_preds.extend(preds)
        all_golds.extend(golds)
        all_records.extend(records)
    aggregate = build_report(all_preds, all_golds, records=all_records, with_splits=with_splits)
    return aggregate, per_config


def _fault_reason_counts(records: Iterable[RunRecord]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for record in records:
        reason = record.verdict.fault_reason
        if reason is not None:
            counts[reason.value] = counts.get(reason.value, 0) + 1
    return dict(sorted(counts.items()))


def write_outputs(
    config: RunConfig,
    units: list[_Unit],
    completed: dict[tuple[str, str], RunRecord],
    aggregate: EvalReport,
    per_config: dict[str, EvalReport],
) -> tuple[Path, Path]:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    ordered_records = [completed[(u.record.id, u.digest)] for u in units]
    payload = {
        "task": config.task.value,
        "model": config.params.model_id,
        "seed": config.seed,
        "record_count": len(units),
        "fault_reasons": _fault_reason_counts(ordered_records),
        "aggregate": aggregate.to_dict(),
        "per_config": {key: report.to_dict() for key, report in per_config.items()},
    }
    report_path = config.output_dir / "report.json"
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    csv_path = config.output_dir / "per_prompt.csv"
    _write_csv(csv_path, per_config)
    return report_path, csv_path


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def _write_csv(path: Path, per_config: dict[str, EvalReport]) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "config",
                "tp",
                "fp",
                "tn",
                "fn",
                "faults",
                "total",
                "precision_pos",
                "recall_pos",
                "f1_pos",
                "precision_neg",
                "recall_neg",
                "f1_neg",
                "accuracy",
                "roc_auc",
                "fault_rate",
            ]
        )
        for key in sorted(per_config):
            report = per_config[key]
            counts = report.counts
            writer.writerow(
                [
                    key,
                    counts.tp,
                    counts.fp,
                    counts.tn,
                    counts.fn,
                    counts.faults,
                    counts.total,
                    _fmt(report.positive.precision),
                    _fmt(report.positive.recall),
                    _fmt(report.positive.f1),
                    _fmt(report.negative.precision),
                    _fmt(report.negative.recall),
                    _fmt(report.negative.f1),
                    _fmt(report.accuracy),
                    _fmt(report.roc_auc),
                    _fmt(report.fault_rate),
                ]
            )


def print_report(aggregate: EvalReport, per_config: dict[str, EvalReport]) -> None:
    header = f"{'config':<40} {'f1+':>7} {'f1-':>7} {'acc':>7} {'auc':>7} {'faults':>7}"
    print(header)
    print("-" * len(header))

    def _cell(value: float | None) -> str:
        return "  --  " if value is None else f"{value:6.3f}"

    for key in sorted(per_config):
        report = per_config[key]
        print(
            f"{key:<40} {_cell(report.positive.f1):>7} {_cell(report.negative.f1):>7} "
            f"{_cell(report.accuracy):>7} {_cell(report.roc_auc):>7} {_cell(report.fault_rate):>7}"
        )
    print("-" * len(header))
    print(
        f"{'aggregate':<40} {_cell(aggregate.positive.f1):>7} {_cell(aggregate.negative.f1):>7} "
        f"{_cell(aggregate.accuracy):>7} {_cell(aggregate.roc_auc):>7} {_cell(aggregate.fault_rate):>7}"
    )


def _check_few_shot_pools(dataset: list[ClaimRecord], specs: list[PromptSpec]) -> None:
    """Few-shot selection excludes the record under evaluation, so every class
    needs at least two labeled records with articles."""
    if not any(spec.approach is Approach.FEW_SHOT for spec in specs):
        return
    for label in VerdictLabel:
        pool = sum(1 for r in dataset if r.label is label and (r.article_text or "").strip())
        if pool < 2:
            raise ValueError(
                f"few-shot specs need >= 2 labeled {label.value}-class records with articles; found {pool}"
            )


def _load_task_dataset(config: RunConfig, need_articles: bool, need_labels: bool) -> list[ClaimRecord]:
    dataset = load_dataset(config.dataset_path)
    if config.limit is not None:
        dataset = dataset[: config.limit]
    if not dataset:
        raise ValueError(f"dataset {config.dataset_path} is empty")
    if need_articles:
        missing = [r.id for r in dataset if not (r.article_text or "").strip()]
        if missing:
            raise ValueError(f"records without article_text: {missing[:5]}")
    if need_labels:
        missing = [r.id for r in dataset if r.label is None]
        if missing:
            raise ValueError(f"records without labels: {missing[:5]}")
    return dataset


def _evaluate_article_unit(
    config: RunConfig,
    client: LlmClient,
    dataset: list[ClaimRecord],
    spec: PromptSpec,
    unit: _Unit,
) -> RunRecord:
    """Tasks 1 and 2: compose, generate, extract, with the Summary replacement
    and the Self-Reflection follow-up when the spec asks for them."""
    record = unit.record
    article = unit.article if unit.article is not None else (record.article_text or "")
    rng = random.Random(f"{config.seed}:{unit.digest}:{record.id}")
    responses: list[str] = []
    prompt_sha = ""
    try:
        context = article
        if spec.summary:
            summary = client.summarize(article, claim=record.claim_text)
            responses.append(summary)
            if summary.strip():
                context = summary
        examples = None
        if spec.approach is Approach.FEW_SHOT:
            examples = select_examples(
                dataset, record.id, rng, task=spec.task, excerpt_chars=config.excerpt_chars
            )
        prompt = compose(spec, record.claim_text, context, record.review_date, record.claim_author, examples)
        prompt_sha = _sha(prompt.text)
        first = client.generate(prompt).text
        responses.append(first)
        final_raw = first
        if spec.self_reflection and first.strip():
            followup = render_self_reflection(prompt.text, first)
            second = client.generate(followup).text
            responses.append(second)
            final_raw = second
        verdict = extract(final_raw)
    except (RetryExhausted, MalformedResponse) as exc:
        logger.warning("record %s under %s failed: %s", record.id, unit.config_key, exc)
        return _fault_record(unit, responses, prompt_sha)
    return RunRecord(
        claim_id=record.id,
        digest=unit.digest,
        config_key=unit.config_key,
        prompt_sha=prompt_sha,
        responses=responses,
        verdict=verdict,
    )


def run_task1(config: RunConfig, client: LlmClient) -> TaskResult:
    """Relatedness: each claim is paired with its own or a swapped article;
    the gold label is the pairing flag."""
    dataset = _load_task_dataset(config, need_articles=True, need_labels=False)
    pairs = pair_for_task1(dataset, config.seed)
    specs = config.resolved_specs()
    _check_few_shot_pools(dataset, specs)
    units: list[_Unit] = []
    spec_by_digest: dict[str, PromptSpec] = {}
    for spec in specs:
        digest = config_digest(config, spec.key())
        spec_by_digest[digest] = spec
        for pair in pairs:
            units.append(
                _Unit(
                    config_key=spec.key(),
                    digest=digest,
                    record=pair.record,
                    gold=VerdictLabel.TRUE if pair.related else VerdictLabel.FALSE,
                    article=pair.article_text,
                )
            )
    return _run_article_task(config, client, dataset, units, spec_by_digest, with_splits=False)


def run_task2(config: RunConfig, client: LlmClient) -> TaskResult:
    """Verdict from the fact-check article; the gold label is the mapped
    verdict."""
    dataset = _load_task_dataset(config, need_articles=True, need_labels=True)
    specs = config.resolved_specs()
    _check_few_shot_pools(dataset, specs)
    units: list[_Unit] = []
    spec_by_digest: dict[str, PromptSpec] = {}
    for spec in specs:
        digest = config_digest(config, spec.key())
        spec_by_digest[digest] = spec
        for record in dataset:
            units.append(
                _Unit(config_key=spec.key(), digest=digest, record=record, gold=record.label)
            )
    return _run_article_task(config, client, dataset, units, spec_by_digest, with_splits=False)


def _run_article_task(
    config: RunConfig,
    client: LlmClient,
    dataset: list[ClaimRecord],
    units: list[_Unit],
    spec_by_digest: dict[str, PromptSpec],
    with_splits: bool,
) -> TaskResult:
    log = RunLog(config.output_dir / "runlog.jsonl")
    completed, quarantined = log.load()
    if quarantined:
        logger.warning("%d corrupt log lines quarantined; their keys will re-run", quarantined)

    def evaluate(unit: _Unit) -> RunRecord:
        return _evaluate_article_unit(config, client, dataset, spec_by_digest[unit.digest], unit)

    new = _run_units(config, units, evaluate, log, completed)
    aggregate, per_config = _reports(config, units, completed, with_splits)
    report_path, csv_path = write_outputs(config, units, completed, aggregate, per_config)
    return TaskResult(
        records=[completed[(u.record.id, u.digest)] for u in units],
        aggregate=aggregate,
        per_config=per_config,
        new_generations=new,
        log_path=log.path,
        report_path=report_path,
        csv_path=csv_path,
    )


def _build_tool(config: RunConfig) -> SearchTool | None:
    if config.source is EvidenceSource.NONE:
        return None
    provider = provider_from_config(config.search_provider)
    if config.source is EvidenceSource.ENCYCLOPEDIA:
        return encyclopedia_tool(provider)
    return web_tool(provider, margin_days=config.margin_days, drop_undated=config.drop_undated)


def run_task3(
    config: RunConfig,
    client: LlmClient,
    *,
    tool: SearchTool | None = None,
    fetcher: Fetcher | None = None,
) -> TaskResult:
    """Autonomous fact-checking under the configured source/format; reports
    include the pre-2024/2024 temporal splits."""
    dataset = _load_task_dataset(config, need_articles=False, need_labels=True)
    for record in dataset:
        if record.review_date is None:
            raise ValueError(f"record {record.id} has no review_date")
    if tool is None and config.source is not EvidenceSource.NONE:
        tool = _build_tool(config)
    limits = FetchLimits(max_chars=config.fetch_max_chars)
    if fetcher is None and config.format in (EvidenceFormat.FULL_ARTICLE, EvidenceFormat.SUMMARY):
        fetcher = Fetcher(limits=limits)

    config_key = task3_config_key(config.source, config.format)
    digest = config_digest(config, config_key)
    units = [
        _Unit(config_key=config_key, digest=digest, record=record, gold=record.label)
        for record in dataset
    ]
    log = RunLog(config.output_dir / "runlog.jsonl")
    completed, quarantined = log.load()
    if quarantined:
        logger.warning("%d corrupt log lines quarantined; their keys will re-run", quarantined)

    def evaluate(unit: _Unit) -> RunRecord:
        try:
            transcript = run_episode(
                unit.record, tool, config.format, client, fetcher=fetcher, limits=limits
            )
        except (RetryExhausted, MalformedResponse) as exc:
            logger.warning("episode for %s failed: %s", unit.record.id, exc)
            return _fault_record(unit, [], "")
        first_prompt = transcript.steps[0].prompt if transcript.steps else ""
        return RunRecord(
            claim_id=unit.record.id,
            digest=unit.digest,
            config_key=unit.config_key,
            prompt_sha=_sha(first_prompt),
            responses=[ex.raw_response for ex in transcript.steps],
            verdict=transcript.outcome,
            transcript=transcript.to_dict(),
        )

    new = _run_units(config, units, evaluate, log, completed)
    aggregate, per_config = _reports(config, units, completed, with_splits=True)
    report_path, csv_path = write_outputs(config, units, completed, aggregate, per_config)
    return TaskResult(
        records=[completed[(u.record.id, u.digest)] for u in units],
        aggregate=aggregate,
        per_config=per_config,
        new_generations=new,
        log_path=log.path,
        report_path=report_path,
        csv_path=csv_path,
    )


_RUNNERS = {
    Task.RELATEDNESS: run_task1,
    Task.VERDICT_FROM_ARTICLE: run_task2,
    Task.FACT_CHECK: run_task3,
}


def run_task(config: RunConfig, client: LlmClient, **kwargs) -> TaskResult:
    return _RUNNERS[config.task](config, client, **kwargs)


def resume(config: RunConfig, client: LlmClient, **kwargs) -> TaskResult:
    """Continue an interrupted run: completed keys are skipped, corrupt log
    records are quarantined and re-run, and the final log and report match an
    uninterrupted run."""
    return run_task(config, client, **kwargs)
