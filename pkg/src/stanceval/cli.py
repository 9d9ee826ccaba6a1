"""Command-line interface.

Subcommands: ``score`` (one system), ``rank`` (leaderboard for many),
``baselines`` (majority + per-class constant predictors), ``confmat``
(confusion matrix for one system), and ``dist`` (gold class distribution).

Exit codes: 0 success; 2 a file could not be parsed; 3 alignment failed or
the evaluation is empty; 4 invalid configuration (schema, weights, formats);
5 partial success (the table was emitted but at least one system was
dropped). Error detail goes to standard error. Output is plain text with no
color codes, so NO_COLOR needs no special handling.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from stanceval.baselines import baseline_suite
from stanceval.errors import ConfigurationError, StancevalError
from stanceval.evalsuite import (
    SCHEME_NAMES,
    SystemEntry,
    confmat_report,
    evaluate_all,
    get_scheme,
)
from stanceval.labels import (
    ALIGNMENT_MODES,
    LABEL_FORMATS,
    class_distribution,
    parse_labels,
)
from stanceval.metrics import RUMOUREVAL_SCHEMA, LabelSchema, WeightScheme
from stanceval.render import OUTPUT_FORMATS, render

DEFAULT_SCHEMA_SPEC = ",".join(RUMOUREVAL_SCHEMA.classes)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stanceval",
        description=(
            "Score, rank, and inspect multi-class classification outputs with "
            "imbalance-aware, class-weighted metrics."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_io(p: argparse.ArgumentParser, with_pred: bool, multi_pred: bool = False):
        p.add_argument("--gold", required=True, help="path to the gold label file")
        p.add_argument(
            "--gold-format",
            default="tsv",
            help=f"gold file format, one of {'/'.join(LABEL_FORMATS)} (default tsv)",
        )
        if with_pred:
            p.add_argument(
                "--pred",
                required=True,
                action="append" if multi_pred else None,
                help="prediction file path, optionally as NAME=PATH"
                + (" (repeatable)" if multi_pred else ""),
            )
            p.add_argument(
                "--pred-format",
                default="tsv",
                help=f"prediction file format, one of {'/'.join(LABEL_FORMATS)}",
            )
        p.add_argument(
            "--schema",
            default=DEFAULT_SCHEMA_SPEC,
            help="comma-separated ordered class names "
            f"(default: {DEFAULT_SCHEMA_SPEC})",
        )
        p.add_argument(
            "--format",
            default="markdown",
            dest="out_format",
            help=f"output format, one of {'/'.join(OUTPUT_FORMATS)} (default markdown)",
        )
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")

    def add_scoring(p: argparse.ArgumentParser):
        p.add_argument(
            "--scheme",
            default=None,
            help=f"named weight scheme, one of {'/'.join(SCHEME_NAMES)} (default paper)",
        )
        p.add_argument(
            "--weights",
            default=None,
            help="inline weight scheme as CLASS=WEIGHT,... (weights must sum to 1)",
        )
        p.add_argument(
            "--beta",
            default="1,2",
            help="comma-separated beta values for per-class F-beta reporting (default 1,2)",
        )
        p.add_argument(
            "--mode",
            default="strict",
            help="id alignment mode: strict (identical id sets) or intersect",
        )

    p_score = sub.add_parser("score", help="score one prediction file")
    add_io(p_score, with_pred=True)
    add_scoring(p_score)

    p_rank = sub.add_parser("rank", help="score and rank many prediction files")
    add_io(p_rank, with_pred=True, multi_pred=True)
    add_scoring(p_rank)

    p_base = sub.add_parser("baselines", help="score majority and constant baselines")
    add_io(p_base, with_pred=False)
    add_scoring(p_base)

    p_conf = sub.add_parser("confmat", help="confusion matrix for one prediction file")
    add_io(p_conf, with_pred=True)
    p_conf.add_argument(
        "--normalize",
        default="none",
        help="cell normalization: none (raw counts) or row (per gold class)",
    )
    p_conf.add_argument(
        "--mode",
        default="strict",
        help="id alignment mode: strict or intersect",
    )

    p_dist = sub.add_parser("dist", help="class distribution of the gold file")
    add_io(p_dist, with_pred=False)

    return parser


def _parse_schema(spec: str) -> LabelSchema:
    return LabelSchema(tuple(part for part in spec.split(",")))


def _parse_pred_spec(spec: str) -> tuple[str, str]:
    """Split NAME=PATH; a bare path uses the file stem as the system name."""
    if "=" in spec:
        name, path = spec.split("=", 1)
        name = name.strip()
        if not name or not path:
            raise ConfigurationError(f"invalid --pred value {spec!r}; use NAME=PATH")
        return name, path
    return Path(spec).stem, spec


def _parse_weights(spec: str) -> WeightScheme:
    weights: dict[str, float] = {}
    for part in spec.split(","):
        if "=" not in part:
            raise ConfigurationError(
                f"invalid --weights entry {part!r}; use CLASS=WEIGHT,..."
            )
        cls, raw = part.split("=", 1)
        try:
            weights[cls] = float(raw)
        except ValueError:
            raise ConfigurationError(f"invalid weight {raw!r} for class {cls!r}") from None
    return WeightScheme("custom", weights)


def _resolve_scheme(args: argparse.Namespace, schema: LabelSchema) -> WeightScheme:
    if args.weights is not None:
        if args.scheme is not None:
            raise ConfigurationError("--scheme and --weights are mutually exclusive")
        scheme = _parse_weights(args.weights)
        scheme.validate_for(schema)
        return scheme
    return get_scheme(args.scheme or "paper", schema)


def _parse_betas(spec: str) -> tuple[float, ...]:
    try:
        betas = tuple(float(part) for part in spec.split(","))
    except ValueError:
        raise ConfigurationError(f"invalid --beta list {spec!r}") from None
    if not betas or any(b <= 0 for b in betas):
        raise ConfigurationError(f"--beta values must be positive, got {spec!r}")
    return betas


def _emit(payload: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        Path(out).write_bytes(payload)


def _run(args: argparse.Namespace) -> int:
    schema = _parse_schema(args.schema)
    gold = parse_labels(args.gold, args.gold_format)

    if args.command == "dist":
        _emit(render(class_distribution(gold, schema), args.out_format), args.out)
        return 0

    if args.command == "confmat":
        name, path = _parse_pred_spec(args.pred)
        pred = parse_labels(path, args.pred_format, name=name)
        report = confmat_report(
            gold, SystemEntry(name, pred), schema, normalize=args.normalize, mode=args.mode
        )
        _emit(render(report, args.out_format), args.out)
        return 0

    scheme = _resolve_scheme(args, schema)
    betas = _parse_betas(args.beta)

    if args.command == "score":
        name, path = _parse_pred_spec(args.pred)
        pred = parse_labels(path, args.pred_format, name=name)
        table = evaluate_all(gold, [SystemEntry(name, pred)], schema, scheme, args.mode, betas)
        _emit(render(table, args.out_format), args.out)
        return 0

    if args.command == "rank":
        systems = []
        for spec in args.pred:
            name, path = _parse_pred_spec(spec)
            systems.append(SystemEntry(name, parse_labels(path, args.pred_format, name=name)))
        table = evaluate_all(gold, systems, schema, scheme, args.mode, betas)
        _emit(render(table, args.out_format), args.out)
        return 5 if table.dropped else 0

    if args.command == "baselines":
        systems = [
            SystemEntry(spec.name, predictions)
            for spec, predictions in baseline_suite(gold, schema)
        ]
        table = evaluate_all(gold, systems, schema, scheme, "strict", betas)
        _emit(render(table, args.out_format), args.out)
        return 0

    raise ConfigurationError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except StancevalError as exc:
        print(f"stanceval: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
