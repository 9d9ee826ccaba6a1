"""Reading, writing, and aligning labelled instance sets.

Supported on-disk formats:

* ``tsv`` — UTF-8 text, one ``id<TAB>label`` record per line, LF or CRLF;
  blank lines and lines starting with ``#`` are ignored; exactly one tab
  per record.
* ``json-map`` — a single top-level JSON object mapping id strings to
  label strings.
* ``rumoureval2019`` — a JSON object whose ``subtaskaenglish`` member is
  such an id-to-label object (the shared-task submission convention);
  other members are ignored.

Labels are canonicalized (trimmed, lowercased) on the way in; instance ids
are trimmed but otherwise kept verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

from stanceval.errors import (
    AlignmentError,
    ConfigurationError,
    DegenerateInputError,
    DuplicateIdError,
    ParseError,
    SchemaError,
)
from stanceval.metrics import LabelSchema, canonical_label

LABEL_FORMATS = ("tsv", "json-map", "rumoureval2019")
ALIGNMENT_MODES = ("strict", "intersect")

#: How many missing/extra ids an alignment error message lists.
_ID_DIFF_LIMIT = 10


@dataclass(frozen=True)
class LabeledSet:
    """A named mapping from instance id to canonical class label."""

    source: str
    entries: Mapping[str, str]

    def __post_init__(self) -> None:
        if not self.entries:
            raise DegenerateInputError(f"{self.source}: no label records")
        canon: dict[str, str] = {}
        for ident, label in self.entries.items():
            ident = ident.strip()
            if not ident:
                raise ParseError(f"{self.source}: empty instance id")
            cl = canonical_label(label)
            if not cl:
                raise ParseError(f"{self.source}: empty label for id {ident!r}")
            if ident in canon:
                raise DuplicateIdError(f"{self.source}: duplicate id {ident!r}")
            canon[ident] = cl
        object.__setattr__(self, "entries", canon)

    def __len__(self) -> int:
        return len(self.entries)

    def ids(self) -> frozenset[str]:
        return frozenset(self.entries)


@dataclass(frozen=True)
class Alignment:
    """Gold/prediction label pairs in ascending id order, plus drop counts."""

    ids: tuple[str, ...]
    gold: tuple[str, ...]
    pred: tuple[str, ...]
    missing_in_pred: int
    extra_in_pred: int


@dataclass(frozen=True)
class ClassDistribution:
    """Per-class counts and fractions of one labelled set."""

    schema: LabelSchema
    counts: Mapping[str, int]
    total: int

    @property
    def fractions(self) -> dict[str, float]:
        return {cls: count / self.total for cls, count in self.counts.items()}


class _JsonPairs(list):
    """Marks parsed JSON objects so they can't be confused with arrays."""


def _read_text(source: str | Path | IO[str]) -> tuple[str, str]:
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", "<stream>")
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc.reason})") from exc


def _parse_tsv(text: str, source: str) -> list[tuple[str, str]]:
    items: list[tuple[str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        tabs = line.count("\t")
        if tabs != 1:
            raise ParseError(
                f"{source}:{lineno}: expected exactly one tab separator, found {tabs}"
            )
        ident, label = line.split("\t")
        items.append((ident, label))
    return items


def _load_json(text: str, source: str) -> object:
    try:
        return json.loads(text, object_pairs_hook=_JsonPairs)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _items_from_json_object(pairs: _JsonPairs, source: str) -> list[tuple[str, str]]:
    items: list[tuple[str, str]] = []
    for key, value in pairs:
        if not isinstance(value, str):
            raise ParseError(
                f"{source}: label for id {key!r} must be a string, "
                f"got {type(value).__name__}"
            )
        items.append((key, value))
    return items


def _parse_json_map(text: str, source: str) -> list[tuple[str, str]]:
    doc = _load_json(text, source)
    if not isinstance(doc, _JsonPairs):
        raise ParseError(f"{source}: top-level value must be a JSON object")
    return _items_from_json_object(doc, source)


def _parse_rumoureval2019(text: str, source: str) -> list[tuple[str, str]]:
    doc = _load_json(text, source)
    if not isinstance(doc, _JsonPairs):
        raise ParseError(f"{source}: top-level value must be a JSON object")
    answers = [value for key, value in doc if key == "subtaskaenglish"]
    if not answers:
        raise ParseError(f"{source}: missing 'subtaskaenglish' member")
    if len(answers) > 1:
        raise ParseError(f"{source}: 'subtaskaenglish' member appears more than once")
    if not isinstance(answers[0], _JsonPairs):
        raise ParseError(f"{source}: 'subtaskaenglish' must be a JSON object")
    return _items_from_json_object(answers[0], source)


_PARSERS = {
    "tsv": _parse_tsv,
    "json-map": _parse_json_map,
    "rumoureval2019": _parse_rumoureval2019,
}


def parse_labels(
    source: str | Path | IO[str],
    fmt: str = "tsv",
    *,
    name: str | None = None,
) -> LabeledSet:
    """Read a gold or prediction file into a :class:`LabeledSet`.

    ``source`` may be a path or an open text stream; ``name`` overrides the
    set's source name (defaults to the path).
    """
    if fmt not in _PARSERS:
        raise ConfigurationError(
            f"unknown label format {fmt!r}; expected one of {list(LABEL_FORMATS)}"
        )
    text, default_name = _read_text(source)
    src = name or default_name
    items = _PARSERS[fmt](text, src)
    entries: dict[str, str] = {}
    for ident, label in items:
        ident = ident.strip()
        if ident in entries:
            raise DuplicateIdError(f"{src}: duplicate id {ident!r}")
        entries[ident] = label
    if not entries:
        raise DegenerateInputError(f"{src}: no label records")
    return LabeledSet(src, entries)


def write_labels(
    labels: LabeledSet, destination: str | Path | IO[str], fmt: str = "tsv"
) -> None:
    """Write a set back to disk in ``tsv`` or ``json-map`` form.

    Records are emitted in ascending id order so output is reproducible
    byte for byte.
    """
    ordered = sorted(labels.entries.items())
    if fmt == "tsv":
        payload = "".join(f"{ident}\t{label}\n" for ident, label in ordered)
    elif fmt == "json-map":
        payload = json.dumps(dict(ordered), indent=2, ensure_ascii=False) + "\n"
    else:
        raise ConfigurationError(f"unsupported output format {fmt!r} for label sets")
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        Path(destination).write_text(payload, encoding="utf-8")


def _describe_ids(ids: list[str]) -> str:
    shown = ", ".join(repr(i) for i in ids[:_ID_DIFF_LIMIT])
    if len(ids) > _ID_DIFF_LIMIT:
        shown += ", ..."
    return shown


def align(
    gold: LabeledSet,
    pred: LabeledSet,
    schema: LabelSchema,
    mode: str = "strict",
) -> Alignment:
    """Pair prediction labels with gold labels by instance id.

    ``strict`` requires the two id sets to be identical; ``intersect``
    evaluates on the shared ids and reports how many were dropped on each
    side. Pairs come out in ascending id order. Labels on evaluated pairs
    must belong to the schema.
    """
    if mode not in ALIGNMENT_MODES:
        raise ConfigurationError(
            f"unknown alignment mode {mode!r}; expected one of {list(ALIGNMENT_MODES)}"
        )
    gold_ids = set(gold.entries)
    pred_ids = set(pred.entries)
    missing = sorted(gold_ids - pred_ids)
    extra = sorted(pred_ids - gold_ids)
    if mode == "strict" and (missing or extra):
        parts = []
        if missing:
            parts.append(f"{len(missing)} gold ids missing: {_describe_ids(missing)}")
        if extra:
            parts.append(f"{len(extra)} extra ids: {_describe_ids(extra)}")
        raise AlignmentError(
            f"{pred.source} does not cover the same ids as {gold.source} "
            f"({'; '.join(parts)})"
        )
    shared = sorted(gold_ids & pred_ids)
    if not shared:
        raise AlignmentError(f"{pred.source} shares no instance ids with {gold.source}")
    for ident in shared:
        for labels in (gold, pred):
            label = labels.entries[ident]
            if label not in schema:
                raise SchemaError(
                    f"{labels.source}: unknown label {label!r} for id {ident!r}"
                )
    return Alignment(
        ids=tuple(shared),
        gold=tuple(gold.entries[i] for i in shared),
        pred=tuple(pred.entries[i] for i in shared),
        missing_in_pred=len(missing),
        extra_in_pred=len(extra),
    )


def class_distribution(labels: LabeledSet, schema: LabelSchema) -> ClassDistribution:
    """Count instances per schema class."""
    counts = {cls: 0 for cls in schema.classes}
    for ident, label in labels.entries.items():
        if label not in counts:
            raise SchemaError(f"{labels.source}: unknown label {label!r} for id {ident!r}")
        counts[label] += 1
    return ClassDistribution(schema=schema, counts=counts, total=len(labels.entries))
