"""Confusion-matrix metrics for imbalanced multi-class classification.

Everything is computed from a single K x K grid of integer counts
(rows = gold class, columns = predicted class). Besides accuracy and
macro-F-beta, the module provides metrics that stay informative when class
sizes are highly skewed and classes differ in importance:

* geometric mean of per-class recall, exactly zero as soon as one class is
  never recalled;
* per-class single-operating-point AUC, (1 + R - FPR) / 2, the area under
  the ROC path (0,0) -> (FPR, R) -> (1,1) of a discrete classifier;
* class-weighted averages of AUC and F-beta under a ``WeightScheme``.

Zero-denominator conventions: precision is 0 for a class that is never
predicted, FPR is 0 for a class with no negatives, and F-beta is 0 when
``beta^2 * P + R`` vanishes. A class with zero gold instances raises
:class:`AbsentClassError` by default; pass ``strict=False`` to score it as
recall 0 and keep it in every average.

All values are plain dataclasses; operations are pure functions of
immutable inputs and safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from stanceval.errors import (
    AbsentClassError,
    AlignmentError,
    ConfigurationError,
    DegenerateInputError,
    SchemaError,
)

#: Allowed deviation of a weight vector's sum from 1 (published schemes
#: carry 3-decimal rounding).
WEIGHT_SUM_TOLERANCE = 1e-9

DEFAULT_BETAS = (1.0, 2.0)


def canonical_label(label: str) -> str:
    """Canonical form of a class label or class name: trimmed, lowercased."""
    return label.strip().lower()


@dataclass(frozen=True)
class LabelSchema:
    """Ordered inventory of class names for one task.

    The order is stable and defines the row/column order of every confusion
    matrix built against the schema. Names are canonicalized on
    construction and must be unique and non-empty; at least two classes are
    required.
    """

    classes: tuple[str, ...]

    def __post_init__(self) -> None:
        canon = tuple(canonical_label(c) for c in self.classes)
        if any(not c for c in canon):
            raise ConfigurationError("schema class names must be non-empty")
        if len(set(canon)) != len(canon):
            raise ConfigurationError(
                f"schema class names must be unique after canonicalization: {list(canon)}"
            )
        if len(canon) < 2:
            raise ConfigurationError("a schema needs at least two classes")
        object.__setattr__(self, "classes", canon)

    @property
    def k(self) -> int:
        return len(self.classes)

    def __contains__(self, label: str) -> bool:
        return canonical_label(label) in self.classes

    def index(self, label: str) -> int:
        """Position of ``label`` in the schema; raises SchemaError if unknown."""
        canon = canonical_label(label)
        try:
            return self.classes.index(canon)
        except ValueError:
            raise SchemaError(
                f"unknown label {label!r}; schema classes are {list(self.classes)}"
            ) from None


#: The four-class reply-stance inventory used as the CLI default.
RUMOUREVAL_SCHEMA = LabelSchema(("support", "deny", "query", "comment"))


@dataclass(frozen=True)
class ConfusionMatrix:
    """K x K counts; ``counts[g][p]`` = instances of gold class g predicted as p."""

    schema: LabelSchema
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = self.schema.k
        grid = tuple(tuple(int(v) for v in row) for row in self.counts)
        if len(grid) != k or any(len(row) != k for row in grid):
            raise ConfigurationError(f"counts grid must be {k}x{k}")
        if any(v < 0 for row in grid for v in row):
            raise ConfigurationError("confusion counts must be non-negative")
        object.__setattr__(self, "counts", grid)

    @property
    def n(self) -> int:
        """Total instance count."""
        return sum(sum(row) for row in self.counts)

    def gold_count(self, cls: str) -> int:
        return sum(self.counts[self.schema.index(cls)])

    def predicted_count(self, cls: str) -> int:
        j = self.schema.index(cls)
        return sum(row[j] for row in self.counts)

    def tp(self, cls: str) -> int:
        i = self.schema.index(cls)
        return self.counts[i][i]

    def fn(self, cls: str) -> int:
        return self.gold_count(cls) - self.tp(cls)

    def fp(self, cls: str) -> int:
        return self.predicted_count(cls) - self.tp(cls)

    def tn(self, cls: str) -> int:
        return self.n - self.tp(cls) - self.fp(cls) - self.fn(cls)


@dataclass(frozen=True)
class WeightScheme:
    """Per-class importance weights; non-negative, summing to 1.

    The weight set is validated against a concrete schema at use time via
    :meth:`validate_for`, so a scheme can be declared once and applied to
    any task whose class inventory it covers.
    """

    name: str
    weights: Mapping[str, float]

    def __post_init__(self) -> None:
        canon = {canonical_label(c): float(w) for c, w in self.weights.items()}
        if len(canon) != len(self.weights):
            raise ConfigurationError(f"scheme {self.name!r} repeats a class name")
        if any(w < 0 for w in canon.values()):
            raise ConfigurationError(f"scheme {self.name!r} has a negative weight")
        total = sum(canon.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ConfigurationError(
                f"scheme {self.name!r} weights must sum to 1, got {total!r}"
            )
        object.__setattr__(self, "weights", canon)

    def validate_for(self, schema: LabelSchema) -> None:
        if set(self.weights) != set(schema.classes):
            raise ConfigurationError(
                f"scheme {self.name!r} covers classes {sorted(self.weights)}, "
                f"schema has {list(schema.classes)}"
            )

    def weight(self, cls: str) -> float:
        return self.weights[canonical_label(cls)]


@dataclass(frozen=True)
class RateSet:
    """Precision, recall, false-positive rate, and F-beta values for one class."""

    precision: float
    recall: float
    fpr: float
    fbeta: Mapping[float, float]


@dataclass(frozen=True)
class ClassRates:
    """Per-class rates keyed by class name, in schema order."""

    per_class: Mapping[str, RateSet]

    def __getitem__(self, cls: str) -> RateSet:
        return self.per_class[canonical_label(cls)]


@dataclass(frozen=True)
class MetricReport:
    """All leaderboard metrics for one system, plus the matrix they came from.

    Every scalar can be recomputed from ``confusion`` with the single-metric
    functions in this module.
    """

    system: str
    accuracy: float
    macro_f1: float
    gmr: float
    wauc: float
    wf1: float
    wf2: float
    per_class: ClassRates
    scheme: WeightScheme
    betas: tuple[float, ...]
    confusion: ConfusionMatrix


def confusion_from_pairs(
    gold: Sequence[str], pred: Sequence[str], schema: LabelSchema
) -> ConfusionMatrix:
    """Count (gold, predicted) label pairs into a confusion matrix.

    Labels are canonicalized before lookup. Raises AlignmentError on a
    length mismatch and SchemaError naming the offending label and position
    when a label is outside the schema.
    """
    if len(gold) != len(pred):
        raise AlignmentError(
            f"gold has {len(gold)} labels but predictions have {len(pred)}"
        )
    if not gold:
        raise DegenerateInputError("cannot build a confusion matrix from zero instances")
    index = {cls: i for i, cls in enumerate(schema.classes)}
    grid = [[0] * schema.k for _ in range(schema.k)]
    for pos, (g, p) in enumerate(zip(gold, pred)):
        gi = index.get(canonical_label(g))
        if gi is None:
            raise SchemaError(f"unknown gold label {g!r} at position {pos}")
        pi = index.get(canonical_label(p))
        if pi is None:
            raise SchemaError(f"unknown predicted label {p!r} at position {pos}")
        grid[gi][pi] += 1
    return ConfusionMatrix(schema, tuple(tuple(row) for row in grid))


def _require_instances(cm: ConfusionMatrix) -> None:
    if cm.n < 1:
        raise DegenerateInputError("confusion matrix is empty (n = 0)")


def _check_betas(betas: Iterable[float]) -> tuple[float, ...]:
    out = tuple(float(b) for b in betas)
    if not out:
        raise ConfigurationError("at least one beta value is required")
    if any(b <= 0 for b in out):
        raise ConfigurationError(f"beta values must be positive, got {list(out)}")
    return out


def fbeta_score(precision: float, recall: float, beta: float) -> float:
    """(1 + beta^2) * P * R / (beta^2 * P + R); 0 when the denominator is 0."""
    b2 = beta * beta
    denom = b2 * precision + recall
    if denom == 0.0:
        return 0.0
    return (1.0 + b2) * precision * recall / denom


def single_point_auc(recall: float, fpr: float) -> float:
    """Area under the ROC path through a discrete classifier's one operating point."""
    return (1.0 + recall - fpr) / 2.0


def accuracy(cm: ConfusionMatrix) -> float:
    """Fraction of instances on the matrix diagonal."""
    _require_instances(cm)
    trace = sum(cm.counts[i][i] for i in range(cm.schema.k))
    return trace / cm.n


def class_rates(
    cm: ConfusionMatrix,
    betas: Iterable[float] = DEFAULT_BETAS,
    *,
    strict: bool = True,
) -> ClassRates:
    """Per-class precision, recall, FPR, and F-beta for each requested beta.

    With ``strict=True`` (default) a class that never occurs in the gold
    data raises AbsentClassError; with ``strict=False`` its recall is 0 and
    it stays in every average.
    """
    _require_instances(cm)
    bs = _check_betas(betas)
    per: dict[str, RateSet] = {}
    for cls in cm.schema.classes:
        tp, fp, fn, tn = cm.tp(cls), cm.fp(cls), cm.fn(cls), cm.tn(cls)
        if tp + fn == 0:
            if strict:
                raise AbsentClassError(
                    f"class {cls!r} has no gold instances; "
                    "pass strict=False to score it as recall 0"
                )
            recall = 0.0
        else:
            recall = tp / (tp + fn)
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        fpr = fp / (tn + fp) if tn + fp > 0 else 0.0
        per[cls] = RateSet(
            precision=precision,
            recall=recall,
            fpr=fpr,
            fbeta={b: fbeta_score(precision, recall, b) for b in bs},
        )
    return ClassRates(per)


def macro_fbeta(cm: ConfusionMatrix, beta: float = 1.0, *, strict: bool = True) -> float:
    """Arithmetic mean of the per-class F-beta scores."""
    rates = class_rates(cm, (beta,), strict=strict)
    beta = float(beta)
    return sum(r.fbeta[beta] for r in rates.per_class.values()) / cm.schema.k


def geometric_mean_recall(cm: ConfusionMatrix, *, strict: bool = True) -> float:
    """K-th root of the product of per-class recalls.

    Returns exactly 0.0 when any class is never recalled; the product is
    never routed through logarithms.
    """
    rates = class_rates(cm, (1.0,), strict=strict)
    recalls = [r.recall for r in rates.per_class.values()]
    if any(r == 0.0 for r in recalls):
        return 0.0
    product = 1.0
    for r in recalls:
        product *= r
    return product ** (1.0 / cm.schema.k)


def class_auc(cm: ConfusionMatrix, cls: str, *, strict: bool = True) -> float:
    """Single-operating-point AUC for one class: (1 + R - FPR) / 2."""
    rates = class_rates(cm, (1.0,), strict=strict)
    r = rates[cls]
    return single_point_auc(r.recall, r.fpr)


def weighted_auc(
    cm: ConfusionMatrix, scheme: WeightScheme, *, strict: bool = True
) -> float:
    """Class-weighted sum of single-operating-point AUC values."""
    scheme.validate_for(cm.schema)
    rates = class_rates(cm, (1.0,), strict=strict)
    return sum(
        scheme.weight(cls) * single_point_auc(r.recall, r.fpr)
        for cls, r in rates.per_class.items()
    )


def weighted_fbeta(
    cm: ConfusionMatrix,
    scheme: WeightScheme,
    beta: float = 1.0,
    *,
    strict: bool = True,
) -> float:
    """Class-weighted sum of per-class F-beta scores."""
    scheme.validate_for(cm.schema)
    beta = float(beta)
    rates = class_rates(cm, (beta,), strict=strict)
    return sum(
        scheme.weight(cls) * r.fbeta[beta] for cls, r in rates.per_class.items()
    )


def all_metrics(
    cm: ConfusionMatrix,
    scheme: WeightScheme,
    betas: Iterable[float] = DEFAULT_BETAS,
    *,
    strict: bool = True,
    system: str = "",
) -> MetricReport:
    """Every leaderboard metric for one matrix under one weight scheme.

    ``betas`` controls which F-beta values appear in the per-class rates;
    the report's wF1/wF2 fields always use beta 1 and 2.
    """
    scheme.validate_for(cm.schema)
    requested = _check_betas(betas)
    rate_betas = tuple(sorted(set(requested) | {1.0, 2.0}))
    rates = class_rates(cm, rate_betas, strict=strict)

    def weighted(values: Mapping[str, float]) -> float:
        return sum(scheme.weight(cls) * v for cls, v in values.items())

    f1 = {cls: r.fbeta[1.0] for cls, r in rates.per_class.items()}
    f2 = {cls: r.fbeta[2.0] for cls, r in rates.per_class.items()}
    recalls = [r.recall for r in rates.per_class.values()]
    if any(r == 0.0 for r in recalls):
        gmr = 0.0
    else:
        product = 1.0
        for r in recalls:
            product *= r
        gmr = product ** (1.0 / cm.schema.k)
    return MetricReport(
        system=system,
        accuracy=accuracy(cm),
        macro_f1=sum(f1.values()) / cm.schema.k,
        gmr=gmr,
        wauc=weighted(
            {
                cls: single_point_auc(r.recall, r.fpr)
                for cls, r in rates.per_class.items()
            }
        ),
        wf1=weighted(f1),
        wf2=weighted(f2),
        per_class=rates,
        scheme=scheme,
        betas=requested,
        confusion=cm,
    )
