"""Multi-system scoring, per-metric rankings, and confusion-matrix reports.

Scores any number of prediction sets against one gold set under one weight
scheme, then ranks every metric column with competition ranking ("1224":
tied scores share the smallest rank, the next rank skips). Comparisons use
full double precision, never display precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from stanceval.errors import (
    AlignmentError,
    ConfigurationError,
    EmptyEvaluationError,
    SchemaError,
)
from stanceval.labels import LabeledSet, align, class_distribution
from stanceval.metrics import (
    DEFAULT_BETAS,
    ConfusionMatrix,
    LabelSchema,
    MetricReport,
    WeightScheme,
    all_metrics,
    confusion_from_pairs,
)

#: Metric columns of a ranked table, in display order.
METRIC_KEYS = ("acc", "macro_f1", "gmr", "wauc", "wf1", "wf2")

#: Fixed four-class weight vectors known by name. "paper" weights the two
#: informative minority classes (support/deny) most; "mama-edha" and "upv"
#: are the class weights those systems trained with.
NAMED_SCHEME_WEIGHTS: dict[str, dict[str, float]] = {
    "paper": {"support": 0.40, "deny": 0.40, "query": 0.15, "comment": 0.05},
    "mama-edha": {"support": 0.157, "deny": 0.396, "query": 0.399, "comment": 0.048},
    "upv": {"support": 0.2, "deny": 0.35, "query": 0.35, "comment": 0.1},
}

SCHEME_NAMES = tuple(NAMED_SCHEME_WEIGHTS) + ("uniform",)


def get_scheme(name: str, schema: LabelSchema) -> WeightScheme:
    """Look up a registered weight scheme and validate it against ``schema``.

    ``uniform`` assigns 1/K to every schema class and works for any schema;
    the other names require the schema to carry exactly their classes.
    """
    key = name.strip().lower()
    if key == "uniform":
        return WeightScheme("uniform", {cls: 1.0 / schema.k for cls in schema.classes})
    try:
        weights = NAMED_SCHEME_WEIGHTS[key]
    except KeyError:
        raise ConfigurationError(
            f"unknown weight scheme {name!r}; registered schemes: {list(SCHEME_NAMES)}"
        ) from None
    scheme = WeightScheme(key, weights)
    scheme.validate_for(schema)
    return scheme


@dataclass(frozen=True)
class SystemEntry:
    """One system to evaluate: a display name plus its predictions."""

    name: str
    predictions: LabeledSet


@dataclass(frozen=True)
class TableRow:
    """Scores and per-metric competition ranks for one system."""

    name: str
    report: MetricReport
    ranks: Mapping[str, int]


@dataclass(frozen=True)
class RankedTable:
    """All systems' metric reports plus ranks and run metadata."""

    rows: tuple[TableRow, ...]
    gold_source: str
    scheme_name: str
    mode: str
    dropped: tuple[tuple[str, str], ...]  # (system name, reason)


@dataclass(frozen=True)
class ConfmatReport:
    """Raw confusion counts for one system, optionally row-normalized."""

    system: str
    schema: LabelSchema
    counts: tuple[tuple[int, ...], ...]
    row_normalized: tuple[tuple[float, ...], ...] | None

    @property
    def n(self) -> int:
        return sum(sum(row) for row in self.counts)


def metric_values(report: MetricReport) -> dict[str, float]:
    """The six table metrics of a report, keyed like :data:`METRIC_KEYS`."""
    return {
        "acc": report.accuracy,
        "macro_f1": report.macro_f1,
        "gmr": report.gmr,
        "wauc": report.wauc,
        "wf1": report.wf1,
        "wf2": report.wf2,
    }


def rank_column(scores: Sequence[float]) -> list[int]:
    """Descending competition ranks: each score's rank is 1 + the number of
    strictly greater scores."""
    return [1 + sum(1 for other in scores if other > s) for s in scores]


def row_normalize(counts: Sequence[Sequence[int]]) -> tuple[tuple[float, ...], ...]:
    """Per-gold-class proportions; an all-zero row stays all zeros."""
    out = []
    for row in counts:
        total = sum(row)
        if total == 0:
            out.append(tuple(0.0 for _ in row))
        else:
            out.append(tuple(v / total for v in row))
    return tuple(out)


def evaluate_all(
    gold: LabeledSet,
    systems: Sequence[SystemEntry],
    schema: LabelSchema,
    scheme: WeightScheme,
    mode: str = "strict",
    betas: Iterable[float] = DEFAULT_BETAS,
    *,
    strict_classes: bool = True,
) -> RankedTable:
    """Score every system against ``gold`` and rank each metric column.

    Systems whose predictions cannot be aligned (or carry labels outside
    the schema) are dropped and recorded with a reason, never silently;
    raising EmptyEvaluationError if nobody survives. Ranks are computed on
    full-precision scores.
    """
    if not systems:
        raise ConfigurationError("at least one system is required")
    names = [s.name for s in systems]
    duplicates = {n for n in names if names.count(n) > 1}
    if duplicates:
        raise ConfigurationError(f"duplicate system names: {sorted(duplicates)}")
    scheme.validate_for(schema)
    class_distribution(gold, schema)  # reject gold labels outside the schema up front

    reports: list[MetricReport] = []
    dropped: list[tuple[str, str]] = []
    for entry in systems:
        try:
            pairs = align(gold, entry.predictions, schema, mode)
            cm = confusion_from_pairs(pairs.gold, pairs.pred, schema)
        except (AlignmentError, SchemaError) as exc:
            dropped.append((entry.name, str(exc)))
            continue
        reports.append(
            all_metrics(cm, scheme, betas, strict=strict_classes, system=entry.name)
        )
    if not reports:
        detail = "; ".join(f"{name}: {reason}" for name, reason in dropped)
        raise EmptyEvaluationError(f"all systems were dropped ({detail})")

    columns = {
        key: rank_column([metric_values(r)[key] for r in reports])
        for key in METRIC_KEYS
    }
    rows = tuple(
        TableRow(
            name=report.system,
            report=report,
            ranks={key: columns[key][i] for key in METRIC_KEYS},
        )
        for i, report in enumerate(reports)
    )
    return RankedTable(
        rows=rows,
        gold_source=gold.source,
        scheme_name=scheme.name,
        mode=mode,
        dropped=tuple(dropped),
    )


def confmat_report(
    gold: LabeledSet,
    system: SystemEntry,
    schema: LabelSchema,
    normalize: str = "none",
    mode: str = "strict",
) -> ConfmatReport:
    """Confusion matrix of one system against the gold set."""
    if normalize not in ("none", "row"):
        raise ConfigurationError(
            f"unknown normalization {normalize!r}; expected 'none' or 'row'"
        )
    pairs = align(gold, system.predictions, schema, mode)
    cm = confusion_from_pairs(pairs.gold, pairs.pred, schema)
    return ConfmatReport(
        system=system.name,
        schema=schema,
        counts=cm.counts,
        row_normalized=row_normalize(cm.counts) if normalize == "row" else None,
    )
