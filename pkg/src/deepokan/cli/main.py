"""Command-line entry point.

Subcommands: generate (dataset only), train (dataset if needed, then
training and checkpoint), evaluate (checkpoint against the test split),
report (print a digest of an existing run directory). Exit codes: 0
success, 1 validation or usage failure, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import replace
from pathlib import Path

from ..errors import FormatError, NumericalError
from .config import parse_config
from .experiment import (
    build_dataset,
    build_model,
    checkpoint_path,
    dataset_path,
    ensure_dataset,
    evaluate_model,
)
from ..optim import train
from ..report import RunReport
from .storage import emit_csv, load_checkpoint, load_dataset, save_checkpoint, save_dataset


class _Parser(argparse.ArgumentParser):
    """argparse that exits with code 1 on usage errors (2 means numerical)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="deepokan", description="Neural-operator benchmark experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("generate", "generate and store the experiment dataset"),
        ("train", "train the configured model (generates data if missing)"),
        ("evaluate", "evaluate the stored checkpoint on the test split"),
        ("report", "print a digest of an existing run directory"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", required=True, help="path to an INI config file")
        cmd.add_argument("--seed", type=int, default=None, help="override the training seed")
        cmd.add_argument("--out", default=None, help="override the output directory")
    return parser


def _cmd_generate(config) -> None:
    path = dataset_path(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    ds = build_dataset(config)
    save_dataset(ds, path)
    print(f"wrote {ds.num_samples} samples to {path}")


def _cmd_train(config) -> int:
    start = time.perf_counter()
    Path(config.out_dir).mkdir(parents=True, exist_ok=True)
    dataset = ensure_dataset(config)
    model = build_model(config, dataset)
    print(f"{config.tag}/{config.family}: {model.param_count()} trainable parameters")
    report = train(model, dataset, config.train)
    save_checkpoint(model, checkpoint_path(config))
    report.checkpoint_path = str(checkpoint_path(config))
    report.wall_clock = time.perf_counter() - start
    emit_csv(report, config.out_dir)
    if report.abort_reason is not None:
        print(f"training aborted: {report.abort_reason}", file=sys.stderr)
        return 2
    final = report.final_loss
    if final is None:
        print("trained 0 epochs")
    else:
        print(f"trained {config.train.epochs} epochs, final rmsd {final:.6g}")
    return 0


def _cmd_evaluate(config) -> None:
    dataset = load_dataset(dataset_path(config))
    model = load_checkpoint(checkpoint_path(config))
    report = RunReport()
    frames = evaluate_model(config, model, dataset, report)
    emit_csv(report, config.out_dir, field_frames=frames, include_loss=False)
    s = report.error_summary
    print(
        f"test samples: {report.sample_errors.size}  "
        f"mean {s.mean:.6g}  std {s.std_deviation:.6g}  median {s.median:.6g}"
    )


def _cmd_report(config) -> None:
    out = Path(config.out_dir)
    loss_path = out / "loss.csv"
    if not loss_path.exists():
        raise ValueError(f"no loss.csv under {out}; run train first")
    with open(loss_path, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    print(f"run directory: {out}")
    if rows:
        first, last = rows[0], rows[-1]
        print(f"epochs: {len(rows)}  first rmsd {float(first[2]):.6g}  "
              f"final rmsd {float(last[2]):.6g}")
    else:
        print("epochs: 0")
    summary_path = out / "summary.csv"
    if summary_path.exists():
        with open(summary_path, newline="") as fh:
            header, values = list(csv.reader(fh))
        stats = "  ".join(f"{k} {float(v):.6g}" for k, v in zip(header, values))
        print(f"test errors: {stats}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = parse_config(args.config)
        if args.seed is not None:
            config.train = replace(config.train, seed=args.seed)
        if args.out is not None:
            config.out_dir = args.out
        if args.command == "generate":
            _cmd_generate(config)
        elif args.command == "train":
            return _cmd_train(config)
        elif args.command == "evaluate":
            _cmd_evaluate(config)
        else:
            _cmd_report(config)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
