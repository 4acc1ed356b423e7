"""Command-line entry points: sample a dataset, run the three tasks, resume
interrupted runs, and build reports from run logs or prediction files.

Credentials are read only from environment variables (HARNESS_API_KEY for the
generation endpoint, HARNESS_SEARCH_API_KEY for web search providers).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date
from pathlib import Path

from ..content_fetch import ExtractionError, FetchError, Fetcher, extract_main_text
from ..corpus import (
    ClaimRecord,
    SamplingPlan,
    VerdictLabel,
    clean,
    default_plan,
    ingest_feed,
    load_dataset,
    load_verdict_table,
    map_verdict,
    stratified_sample,
    write_dataset,
)
from ..evaluation import build_report
from ..llm_gateway import GenerationParams, HttpTransport, LlmClient
from ..verdict_extraction import FaultReason, VerdictResponse, coerce_score, score_to_label
from .config import (
    ConfigError,
    RunConfig,
    load_config_file,
    parse_format,
    parse_source,
    parse_specs,
    parse_task,
)
from .tasks import print_report, run_task

logger = logging.getLogger(__name__)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harness", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    sample = sub.add_parser("sample", help="ingest a feed, clean it, and draw the stratified sample")
    sample.add_argument("--feed", required=True, type=Path)
    sample.add_argument("--out", required=True, type=Path)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--today", type=date.fromisoformat, default=None)
    sample.add_argument("--plan", type=Path, default=None, help="file of 'year true_count false_count' lines")
    sample.add_argument("--verdict-table", type=Path, default=None, help="extra verdict mappings (TSV)")
    sample.add_argument("--scrape", action="store_true", help="fetch each sampled fact-check article")
    sample.set_defaults(handler=cmd_sample)

    for name in ("task1", "task2", "task3", "resume"):
        run = sub.add_parser(name, help=f"run {name}" if name != "resume" else "resume an interrupted run")
        run.add_argument("--config", type=Path, default=None, help="key = value config file")
        run.add_argument("--dataset", type=Path, default=None)
        run.add_argument("--endpoint", default=None)
        run.add_argument("--model", default=None)
        run.add_argument("--seed", type=int, default=None)
        run.add_argument("--out", type=Path, default=None)
        run.add_argument("--specs", default=None, help="'all' or comma-separated spec keys")
        run.add_argument("--source", default=None, help="task3: none|encyclopedia|web-search")
        run.add_argument("--format", default=None, help="task3: snippet|full-article|summary")
        run.add_argument("--provider", default=None, help="wikipedia-api|web-api:<name>|fixture:<dir>")
        run.add_argument("--temperature", type=float, default=None)
        run.add_argument("--max-new-tokens", type=int, default=None)
        run.add_argument("--concurrency", type=int, default=None)
        run.add_argument("--limit", type=int, default=None)
        run.add_argument("--margin-days", type=int, default=None)
        run.add_argument("--drop-undated", action="store_true", default=None)
        run.add_argument("--transport-style", default=None, help="openai-chat|tgi")
        run.add_argument("--verbose-log", action="store_true", default=None)
        run.set_defaults(handler=cmd_run, command_name=name)

    report = sub.add_parser("report", help="evaluate a run log or a predictions file against a dataset")
    report.add_argument("--dataset", required=True, type=Path)
    group = report.add_mutually_exclusive_group(required=True)
    group.add_argument("--log", type=Path, help="runlog.jsonl from task2/task3 (golds come from the dataset)")
    group.add_argument("--predictions", type=Path, help="JSON-lines of {claim_id, score, ...}")
    report.add_argument("--out", type=Path, default=None)
    report.add_argument("--splits", action="store_true", help="add pre-2024/2024 splits")
    report.set_defaults(handler=cmd_report)

    return parser


# ---------------------------------------------------------------------------
# sample


def _load_plan(path: Path | None, seed: int) -> SamplingPlan:
    if path is None:
        return default_plan(seed)
    quota: dict[int, tuple[int, int]] = {}
    for line in path.read_text("utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        year, true_n, false_n = line.split()
        quota[int(year)] = (int(true_n), int(false_n))
    return SamplingPlan(per_year_quota=quota, seed=seed)


def cmd_sample(args: argparse.Namespace) -> int:
    result = ingest_feed(args.feed)
    print(f"ingested {len(result.records)} records, rejected {len(result.rejections)}")
    for rejection in result.rejections[:10]:
        print(f"  line {rejection.line_no}: {rejection.reason}")

    today = args.today or date.today()
    cleaned = clean(result.records, today)
    print(f"cleaning kept {len(cleaned)} of {len(result.records)}")

    table = dict(load_verdict_table())
    if args.verdict_table:
        table.update(load_verdict_table(args.verdict_table))
    labeled: list[ClaimRecord] = []
    unmapped: dict[str, int] = {}
    for record in cleaned:
        label = map_verdict(record.raw_verdict, table)
        if label is None:
            key = record.raw_verdict.strip().casefold()
            unmapped[key] = unmapped.get(key, 0) + 1
            continue
        labeled.append(record.with_values(label=label))
    if unmapped:
        print(f"excluded {sum(unmapped.values())} records with unmapped verdicts:")
        for verdict, count in sorted(unmapped.items(), key=lambda kv: -kv[1])[:10]:
            print(f"  {verdict!r}: {count}")

    sample = stratified_sample(labeled, _load_plan(args.plan, args.seed))
    for shortfall in sample.shortfalls:
        print(
            f"shortfall: {shortfall.year} {shortfall.label.value}: "
            f"requested {shortfall.requested}, available {shortfall.available}"
        )
    records = sample.records

    if args.scrape:
        records = _scrape_articles(records)

    write_dataset(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _scrape_articles(records: list[ClaimRecord]) -> list[ClaimRecord]:
    fetcher = Fetcher(politeness_delay=1.0)
    kept: list[ClaimRecord] = []
    dropped = 0
    for record in records:
        try:
            document = fetcher.fetch(record.fact_check_url)
            extracted = extract_main_text(document, fetcher.limits)
        except (FetchError, ExtractionError) as exc:
            logger.warning("scrape failed for %s: %s", record.fact_check_url, exc)
            dropped += 1
            continue
        kept.append(record.with_values(article_text=extracted.text))
    print(f"scraped {len(kept)} articles, dropped {dropped}")
    return kept


# ---------------------------------------------------------------------------
# task runs


def _setting(args: argparse.Namespace, file_values: dict[str, str], key: str, parse, default=None):
    """One config knob: the CLI flag wins, then the config-file key, then the
    default."""
    cli_value = getattr(args, key.replace("-", "_"), None)
    if cli_value is not None:
        return cli_value
    if key in file_values:
        raw = file_values[key]
        return parse(raw) if parse is not None else raw
    return default


def build_run_config(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if args.config else {}
    if args.command_name == "resume":
        task_text = file_values.get("task")
        if not task_text:
            raise ConfigError("resume needs a config file with a task entry")
        task = parse_task(task_text)
    else:
        task = parse_task(args.command_name)
        if "task" in file_values and parse_task(file_values["task"]) is not task:
            raise ConfigError(f"config file says {file_values['task']}, command says {args.command_name}")

    dataset = _setting(args, file_values, "dataset", Path)
    if dataset is None:
        raise ConfigError("dataset is required (flag --dataset or config key dataset)")
    out = _setting(args, file_values, "out", Path)
    if out is None:
        raise ConfigError("output directory is required (flag --out or config key out)")
    endpoint = _setting(args, file_values, "endpoint", str, "")
    model = _setting(args, file_values, "model", str, "")
    if not endpoint or not model:
        raise ConfigError("endpoint and model are required")

    specs_text = args.specs if args.specs is not None else file_values.get("specs")
    specs = parse_specs(specs_text, task) if specs_text else None
    source_text = args.source if args.source is not None else file_values.get("source")
    format_text = args.format if args.format is not None else file_values.get("format")

    params = GenerationParams(
        model_id=model,
        endpoint=endpoint,
        temperature=_setting(args, file_values, "temperature", float, 0.1),
        max_new_tokens=_setting(args, file_values, "max_new_tokens", int, 256),
    )
    return RunConfig(
        task=task,
        dataset_path=Path(dataset),
        params=params,
        output_dir=Path(out),
        seed=_setting(args, file_values, "seed", int, 0),
        specs=specs,
        source=parse_source(source_text) if source_text else None,
        format=parse_format(format_text) if format_text else None,
        search_provider=_setting(args, file_values, "provider", str),
        margin_days=_setting(args, file_values, "margin_days", int, 7),
        drop_undated=bool(_setting(args, file_values, "drop_undated", _parse_bool, False)),
        concurrency=_setting(args, file_values, "concurrency", int, 1),
        limit=_setting(args, file_values, "limit", int),
        transport_style=_setting(args, file_values, "transport_style", str, "openai-chat"),
        verbose_log=bool(_setting(args, file_values, "verbose_log", _parse_bool, False)),
    )


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("1", "true", "yes", "on")


def cmd_run(args: argparse.Namespace) -> int:
    config = build_run_config(args)
    transport = HttpTransport(style=config.transport_style)
    client = LlmClient(
        config.params,
        transport,
        max_in_flight=max(config.concurrency, 1),
        verbose_log_path=(config.output_dir / "exchanges.jsonl") if config.verbose_log else None,
    )
    result = run_task(config, client)
    print_report(result.aggregate, result.per_config)
    print(f"\n{len(result.records)} records ({result.new_generations} new) -> {result.report_path}")
    return 0


# ---------------------------------------------------------------------------
# report


def read_predictions(path: Path) -> list[tuple[str, VerdictResponse]]:
    """Read a predictions file: either full run records (with a "verdict"
    object) or flat {claim_id, score, ...} lines. Labels are re-derived from
    the score so the 50 threshold has a single source of truth."""
    predictions: list[tuple[str, VerdictResponse]] = []
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        entry = json.loads(line)
        if "verdict" in entry:
            predictions.append((str(entry["claim_id"]), VerdictResponse.from_dict(entry["verdict"])))
            continue
        claim_id = entry.get("claim_id", entry.get("id"))
        if claim_id is None:
            raise ValueError(f"{path}:{lineno}: prediction without claim_id")
        score = coerce_score(entry.get("score"))
        if score is None:
            verdict = VerdictResponse(raw_text=line, fault_reason=FaultReason.BAD_SCHEMA)
        else:
            label = score_to_label(score)
            fault = None if label is not None else FaultReason.OUT_OF_RANGE
            verdict = VerdictResponse(raw_text=line, score=score, label=label, fault_reason=fault)
        predictions.append((str(claim_id), verdict))
    return predictions


def cmd_report(args: argparse.Namespace) -> int:
    dataset = {record.id: record for record in load_dataset(args.dataset)}
    source = args.log or args.predictions
    predictions = read_predictions(source)
    preds: list[VerdictResponse] = []
    golds: list[VerdictLabel] = []
    records: list[ClaimRecord] = []
    for claim_id, verdict in predictions:
        record = dataset.get(claim_id)
        if record is None:
            raise ValueError(f"prediction for unknown claim id {claim_id!r}")
        if record.label is None:
            raise ValueError(f"dataset record {claim_id} has no gold label")
        preds.append(verdict)
        golds.append(record.label)
        records.append(record)
    report = build_report(preds, golds, records=records, with_splits=args.splits)
    payload = {
        "source": str(source),
        "record_count": len(preds),
        "aggregate": report.to_dict(),
    }
    print_report(report, {})
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
