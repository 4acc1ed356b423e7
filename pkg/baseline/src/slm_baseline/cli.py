"""CLI: ``baseline train`` fine-tunes on a labeled dataset, ``baseline
predict`` scores a dataset with a saved checkpoint."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import BaselineMode, read_labeled_dataset
from .predict import predict, write_predictions
from .training import BaselineConfig, finetune, load_checkpoint


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="baseline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fine-tune on a labeled JSON-lines dataset")
    train.add_argument("--data", required=True, type=Path)
    train.add_argument("--out", required=True, type=Path, help="checkpoint directory")
    train.add_argument("--mode", choices=[m.value for m in BaselineMode], default="claim-only")
    train.add_argument("--epochs", type=int, default=3)
    train.add_argument("--learning-rate", type=float, default=3e-3)
    train.add_argument("--batch-size", type=int, default=16)
    train.add_argument("--val-fraction", type=float, default=0.2)
    train.add_argument("--seed", type=int, default=0)

    pred = sub.add_parser("predict", help="score a dataset with a trained checkpoint")
    pred.add_argument("--checkpoint", required=True, type=Path)
    pred.add_argument("--data", required=True, type=Path)
    pred.add_argument("--out", required=True, type=Path, help="predictions JSON-lines file")

    args = parser.parse_args(argv)
    try:
        if args.command == "train":
            return _cmd_train(args)
        return _cmd_predict(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _cmd_train(args: argparse.Namespace) -> int:
    examples = read_labeled_dataset(args.data)
    config = BaselineConfig(
        mode=BaselineMode(args.mode),
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        val_fraction=args.val_fraction,
        seed=args.seed,
    )
    trained, report = finetune(examples, config)
    trained.save(args.out)
    (args.out / "validation.json").write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    print(f"validation accuracy: {report.accuracy:.3f} ({report.n_val} held-out examples)")
    print(f"checkpoint written to {args.out}")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    trained = load_checkpoint(args.checkpoint)
    examples = read_labeled_dataset(args.data, require_labels=False)
    rows = predict(trained, examples)
    write_predictions(rows, args.out)
    print(f"wrote {len(rows)} predictions to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
