"""Reference predictors derived from a gold set.

The suite contains the majority-class predictor plus one constant predictor
per schema class. Baselines are materialized as ordinary
:class:`~stanceval.labels.LabeledSet` values so they flow through exactly
the same scoring path as real submissions.
"""

from __future__ import annotations

from dataclasses import dataclass

from stanceval.errors import SchemaError
from stanceval.labels import LabeledSet, class_distribution
from stanceval.metrics import LabelSchema, canonical_label


@dataclass(frozen=True)
class BaselineSpec:
    """Identity of one baseline predictor.

    ``tied_classes`` is non-empty only for a majority baseline whose gold
    counts tied; the first schema class among them wins.
    """

    kind: str  # "majority" | "constant"
    constant_class: str | None = None
    tied_classes: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        if self.kind == "majority":
            return "majority class"
        return f"all {self.constant_class}"


def constant_predictor(gold: LabeledSet, schema: LabelSchema, cls: str) -> LabeledSet:
    """Predict class ``cls`` for every gold id."""
    canon = canonical_label(cls)
    if canon not in schema:
        raise SchemaError(
            f"unknown baseline class {cls!r}; schema classes are {list(schema.classes)}"
        )
    return LabeledSet(f"all {canon}", {ident: canon for ident in gold.entries})


def majority_class(gold: LabeledSet, schema: LabelSchema) -> tuple[str, tuple[str, ...]]:
    """The gold set's most frequent class, plus all tied classes if any.

    Ties are broken by schema order: the first listed class wins.
    """
    counts = class_distribution(gold, schema).counts
    top = max(counts.values())
    tied = tuple(cls for cls in schema.classes if counts[cls] == top)
    winner = tied[0]
    return winner, tied if len(tied) > 1 else ()


def majority_predictor(gold: LabeledSet, schema: LabelSchema) -> LabeledSet:
    """Constant predictor using the gold set's most frequent class."""
    winner, _ = majority_class(gold, schema)
    return LabeledSet("majority class", {ident: winner for ident in gold.entries})


def baseline_suite(
    gold: LabeledSet, schema: LabelSchema
) -> list[tuple[BaselineSpec, LabeledSet]]:
    """Majority predictor followed by one constant predictor per class."""
    winner, tied = majority_class(gold, schema)
    suite: list[tuple[BaselineSpec, LabeledSet]] = [
        (
            BaselineSpec(kind="majority", constant_class=winner, tied_classes=tied),
            LabeledSet("majority class", {ident: winner for ident in gold.entries}),
        )
    ]
    for cls in schema.classes:
        suite.append(
            (
                BaselineSpec(kind="constant", constant_class=cls),
                constant_predictor(gold, schema, cls),
            )
        )
    return suite
