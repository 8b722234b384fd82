"""Command line entry point.

Exit status: 0 on success, 1 on usage or configuration errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .classify import Task, TrainConfig, evaluate, model_to_json, split_train_test, train_logistic
from .errors import ArgmineError, ConfigError
from .features import open_embeddings
from .graph import from_aif_json, to_aif_json, to_dot
from .lexicon import Lexicon
from .pipeline import (
    REPORT_COLUMNS,
    Layout,
    Mode,
    PipelineConfig,
    Resources,
    corpus_statistics,
    load_corpus,
    oracle_relations,
    run_evaluation,
    run_pipeline,
)
from .training import featurize, read_examples

log = logging.getLogger("argmine")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _csv_words(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("pipeline options")
    g.add_argument("--config", help="key = value configuration file")
    g.add_argument("--lang", choices=["en", "de"])
    g.add_argument("--mc", choices=["first", "centroid", "pairwise", "probability"], help="major-claim heuristic")
    g.add_argument("--construct", choices=["flat", "position", "pairwise"], help="graph constructor")
    g.add_argument("--threshold", type=float, help="neutral threshold in [0.5, 1.0]")
    g.add_argument("--bound-factor", type=float)
    g.add_argument("--max-iterations", type=int)
    g.add_argument("--vectors", help="word-vector file or hash:<dim>[:<seed>]")
    g.add_argument("--preset-adus", action="store_true", help="use given ADUs instead of mining them")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="argmine", description="Mine argument graphs from text and score them.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mine", parents=[common], help="text file -> AIF JSON graph")
    p.add_argument("input", help="text file ('-' for stdin); with --preset-adus a role<TAB>text file")
    p.add_argument("-o", "--output", help="write the graph here instead of stdout")
    p.add_argument("--dot", help="also write a Graphviz rendering to this path")
    p.add_argument("--timing", action="store_true", help="report processing time on stderr")

    p = sub.add_parser("evaluate", parents=[common], help="score a corpus against its benchmark graphs")
    p.add_argument("corpus", help="directory of <id>.txt / <id>.json pairs")
    p.add_argument("--grid-threshold", type=_csv_floats, help="e.g. 0.5,0.6,0.7,0.8,0.9,1.0")
    p.add_argument("--grid-mc", type=_csv_words)
    p.add_argument("--grid-construct", type=_csv_words)
    p.add_argument("--both-modes", action="store_true", help="run end-to-end and preset-ADU modes")
    p.add_argument("--oracle-relations", action="store_true", help="take relations from the benchmark")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", help="per-case report path (default stdout)")
    p.add_argument("--summary", help="write aggregate means as JSON to this path")

    p = sub.add_parser("train", parents=[common], help="train a classifier from a TSV file")
    p.add_argument("task", choices=[t.value for t in Task] + ["claim-premise"])
    p.add_argument("data", help="label<TAB>text lines (relation: label<TAB>premise<TAB>claim)")
    p.add_argument("-o", "--output", help="model path (default stdout)")
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--l2", type=float, default=1e-3)
    p.add_argument("--holdout", type=float, help="hold out this fraction for a test report, e.g. 0.1")

    p = sub.add_parser("convert", parents=[common], help="AIF JSON graph -> DOT")
    p.add_argument("graph")
    p.add_argument("-o", "--output")

    p = sub.add_parser("stats", parents=[common], help="count nodes and edges of a corpus")
    p.add_argument("corpus")
    return parser


def _config(args) -> PipelineConfig:
    overrides = {
        "language": args.lang,
        "mc_method": args.mc,
        "constructor": args.construct,
        "neutral_threshold": args.threshold,
        "bound_factor": args.bound_factor,
        "max_iterations": args.max_iterations,
        "vectors": args.vectors,
        "mode": Mode.PRESET.value if args.preset_adus else None,
    }
    if args.config:
        return PipelineConfig.from_file(args.config, **overrides)
    return PipelineConfig.from_mapping({k: v for k, v in overrides.items() if v is not None})


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArgmineError(f"cannot read {path}: {exc}") from exc


def _write(path: Optional[str], data: str | bytes) -> None:
    if path is None:
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode, **({} if mode == "wb" else {"encoding": "utf-8"})) as fh:
        fh.write(data)


def _read_preset(text: str) -> list[tuple[str, str]]:
    units = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise ArgmineError(f"line {lineno}: expected role<TAB>text")
        role, unit = line.split("\t", 1)
        units.append((unit.strip(), role.strip()))
    return units


def cmd_mine(args) -> int:
    config = _config(args)
    res = Resources.load(config)
    text = _read_text(args.input)
    source = _read_preset(text) if config.mode is Mode.PRESET else text
    result = run_pipeline(source, config, res)
    if args.timing:
        print(f"T = {result.elapsed:.3f} s", file=sys.stderr)
    if result.graph is None:
        print("argmine: no argument found", file=sys.stderr)
        return 2
    _write(args.output, to_aif_json(result.graph))
    if args.dot:
        _write(args.dot, to_dot(result.graph))
    return 0


def _grid(args, base: PipelineConfig) -> list[PipelineConfig]:
    modes = [Mode.END_TO_END, Mode.PRESET] if args.both_modes else [base.mode]
    thresholds = args.grid_threshold or [base.neutral_threshold]
    mcs = args.grid_mc or [base.mc_method]
    constructors = args.grid_construct or [base.constructor]
    return [
        base.with_overrides(mode=m, neutral_threshold=t, mc_method=mc, constructor=c)
        for m in modes
        for mc in mcs
        for c in constructors
        for t in thresholds
    ]


def cmd_evaluate(args) -> int:
    base = _config(args)
    cases = load_corpus(args.corpus, Layout.AIF_JSON)
    factory = (lambda case: oracle_relations(case.benchmark)) if args.oracle_relations else None
    report = run_evaluation(cases, _grid(args, base), workers=args.workers, relation_fn_factory=factory)
    if args.format == "json":
        _write(args.output, json.dumps({"cases": report.rows, "configs": report.config_means(),
                                        "tables": report.tables()}, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(REPORT_COLUMNS), lineterminator="\n")
        writer.writeheader()
        for row in report.rows:
            writer.writerow(row)
        _write(args.output, buf.getvalue())
    if args.summary:
        _write(args.summary, json.dumps({"configs": report.config_means(), "tables": report.tables()}, indent=2) + "\n")
    for mean in report.config_means():
        print(
            f"{mean['mode']:>10} mc={mean['mc_method']:<11} construct={mean['constructor']:<8} "
            f"t={mean['threshold']:.2f}  I={mean['inode']:.3f} M={mean['major_claim']:.3f} "
            f"S={mean['snode']:.3f} E={mean['edge']:.3f} T={mean['time_s']:.3f}s  (n={mean['cases']})",
            file=sys.stderr,
        )
    return 0


def cmd_train(args) -> int:
    config = _config(args)
    task = Task.parse(args.task)
    table = open_embeddings(config.vectors)
    lexicon = Lexicon.load(config.language, config.lexicons)
    xs, ys, schema = featurize(read_examples(args.data, task), task, table, config.language, lexicon)
    train_config = TrainConfig(args.learning_rate, args.l2, args.epochs, args.seed)
    if args.holdout:
        pairs = list(zip(xs, ys))
        train, test = split_train_test(pairs, 1.0 - args.holdout, args.seed)
        model = train_logistic([x for x, _ in train], [y for _, y in train], train_config, task, schema,
                               config.language)
        stats = evaluate(model, [x for x, _ in test], [y for _, y in test])
        print(f"held-out: A={stats.accuracy:.2f} P={stats.precision:.2f} R={stats.recall:.2f} F1={stats.f1:.2f}",
              file=sys.stderr)
    else:
        model = train_logistic(xs, ys, train_config, task, schema, config.language)
    _write(args.output, model_to_json(model))
    return 0


def cmd_convert(args) -> int:
    raw = sys.stdin.buffer.read() if args.graph == "-" else Path(args.graph).read_bytes()
    _write(args.output, to_dot(from_aif_json(raw)))
    return 0


def cmd_stats(args) -> int:
    stats = corpus_statistics(load_corpus(args.corpus, Layout.AIF_JSON))
    print(json.dumps(stats))
    return 0


COMMANDS = {
    "mine": cmd_mine,
    "evaluate": cmd_evaluate,
    "train": cmd_train,
    "convert": cmd_convert,
    "stats": cmd_stats,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"argmine: {exc}", file=sys.stderr)
        return 1
    except ArgmineError as exc:
        print(f"argmine: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"argmine: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
