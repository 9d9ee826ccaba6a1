"""Deterministic renderers for tables, confusion matrices, and distributions.

Markdown, CSV, and LaTeX tables display 3-decimal values with the
competition rank in parentheses ("0.784 (1)"); JSON carries full precision;
SVG draws row-normalized confusion-matrix heatmaps with cells shaded by
proportion and annotated at 2 decimals. Identical input always yields
identical bytes; nothing here reads clocks, locales, or the environment.
"""

from __future__ import annotations

import csv
import io
import json
from html import escape

from stanceval.errors import ConfigurationError
from stanceval.evalsuite import (
    METRIC_KEYS,
    ConfmatReport,
    RankedTable,
    metric_values,
    row_normalize,
)
from stanceval.labels import ClassDistribution
from stanceval.metrics import ClassRates

OUTPUT_FORMATS = ("markdown", "csv", "latex", "json", "svg")

_COLUMN_TITLES = {
    "acc": "ACC",
    "macro_f1": "macro-F1",
    "gmr": "GMR",
    "wauc": "wAUC",
    "wf1": "wF1",
    "wf2": "wF2",
}

# SVG geometry (pixels).
_CELL = 64
_LEFT = 120
_TOP = 72
_GAP = 36
_PAD = 16


def render(obj: object, fmt: str) -> bytes:
    """Render a ranked table, confusion report, or class distribution."""
    if fmt not in OUTPUT_FORMATS:
        raise ConfigurationError(
            f"unsupported output format {fmt!r}; expected one of {list(OUTPUT_FORMATS)}"
        )
    if isinstance(obj, RankedTable):
        return _TABLE_RENDERERS[fmt](obj)
    if isinstance(obj, ConfmatReport):
        return _CONFMAT_RENDERERS[fmt](obj)
    if isinstance(obj, ClassDistribution):
        renderer = _DIST_RENDERERS.get(fmt)
        if renderer is None:
            raise ConfigurationError(
                f"unsupported output format {fmt!r} for class distributions"
            )
        return renderer(obj)
    raise ConfigurationError(f"cannot render objects of type {type(obj).__name__}")


def _f3(value: float) -> str:
    return f"{value:.3f}"


def _beta_label(beta: float) -> str:
    return f"{beta:g}"


# ---------------------------------------------------------------------------
# Ranked tables


def _table_markdown(table: RankedTable) -> bytes:
    lines = [
        f"gold: {table.gold_source} | scheme: {table.scheme_name} | mode: {table.mode}",
        "",
        "| system | " + " | ".join(_COLUMN_TITLES[k] for k in METRIC_KEYS) + " |",
        "| --- |" + " ---: |" * len(METRIC_KEYS),
    ]
    for row in table.rows:
        values = metric_values(row.report)
        cells = [f"{_f3(values[k])} ({row.ranks[k]})" for k in METRIC_KEYS]
        lines.append(f"| {row.name} | " + " | ".join(cells) + " |")
    if table.dropped:
        lines.append("")
        lines.append("Dropped systems:")
        for name, reason in table.dropped:
            lines.append(f"- {name}: {reason}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _table_csv(table: RankedTable) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["name"]
    for key in METRIC_KEYS:
        header += [key, f"{key}_rank"]
    writer.writerow(header)
    for row in table.rows:
        values = metric_values(row.report)
        record: list[str] = [row.name]
        for key in METRIC_KEYS:
            record += [_f3(values[key]), str(row.ranks[key])]
        writer.writerow(record)
    return buf.getvalue().encode("utf-8")


def _tex(text: str) -> str:
    out = text.replace("\\", r"\textbackslash{}")
    for ch in "&%#_{}":
        out = out.replace(ch, "\\" + ch)
    return out


def _table_latex(table: RankedTable) -> bytes:
    lines = [
        r"\begin{tabular}{l|" + "r" * len(METRIC_KEYS) + "}",
        r"\hline",
        "system & " + " & ".join(_COLUMN_TITLES[k] for k in METRIC_KEYS) + r" \\",
        r"\hline",
    ]
    for row in table.rows:
        values = metric_values(row.report)
        cells = [f"{_f3(values[k])} ({row.ranks[k]})" for k in METRIC_KEYS]
        lines.append(_tex(row.name) + " & " + " & ".join(cells) + r" \\")
    lines += [r"\hline", r"\end{tabular}"]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _rates_json(rates: ClassRates) -> dict:
    return {
        cls: {
            "precision": r.precision,
            "recall": r.recall,
            "fpr": r.fpr,
            "fbeta": {_beta_label(b): v for b, v in r.fbeta.items()},
        }
        for cls, r in rates.per_class.items()
    }


def _table_json(table: RankedTable) -> bytes:
    doc = {
        "meta": {
            "gold": table.gold_source,
            "scheme": table.scheme_name,
            "mode": table.mode,
            "dropped": [
                {"name": name, "reason": reason} for name, reason in table.dropped
            ],
        },
        "systems": [
            {
                "name": row.name,
                "metrics": metric_values(row.report),
                "ranks": dict(row.ranks),
                "per_class": _rates_json(row.report.per_class),
                "confusion": {
                    "classes": list(row.report.confusion.schema.classes),
                    "counts": [list(r) for r in row.report.confusion.counts],
                    "row_normalized": [
                        list(r) for r in row_normalize(row.report.confusion.counts)
                    ],
                },
            }
            for row in table.rows
        ],
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _table_svg(table: RankedTable) -> bytes:
    blocks = []
    y = _PAD
    width = _LEFT + _PAD
    for row in table.rows:
        cm = row.report.confusion
        fragment, extent = _heatmap_fragment(
            title=row.name,
            classes=cm.schema.classes,
            proportions=row_normalize(cm.counts),
            y_offset=y,
        )
        blocks.append(fragment)
        y += extent + _GAP
        width = max(width, _LEFT + cm.schema.k * _CELL + _PAD)
    height = max(y - _GAP + _PAD, _PAD)
    return _svg_document(width, height, blocks)


_TABLE_RENDERERS = {
    "markdown": _table_markdown,
    "csv": _table_csv,
    "latex": _table_latex,
    "json": _table_json,
    "svg": _table_svg,
}


# ---------------------------------------------------------------------------
# Confusion-matrix reports


def _confmat_cells(report: ConfmatReport) -> list[list[str]]:
    if report.row_normalized is not None:
        return [[_f3(v) for v in row] for row in report.row_normalized]
    return [[str(v) for v in row] for row in report.counts]


def _confmat_markdown(report: ConfmatReport) -> bytes:
    classes = report.schema.classes
    kind = "row-normalized" if report.row_normalized is not None else "counts"
    lines = [
        f"Confusion matrix for {report.system} ({kind}; rows gold, columns predicted)",
        "",
        "| gold \\ predicted | " + " | ".join(classes) + " |",
        "| --- |" + " ---: |" * len(classes),
    ]
    for cls, cells in zip(classes, _confmat_cells(report)):
        lines.append(f"| {cls} | " + " | ".join(cells) + " |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _confmat_csv(report: ConfmatReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["gold", *report.schema.classes])
    for cls, cells in zip(report.schema.classes, _confmat_cells(report)):
        writer.writerow([cls, *cells])
    return buf.getvalue().encode("utf-8")


def _confmat_latex(report: ConfmatReport) -> bytes:
    classes = report.schema.classes
    lines = [
        r"\begin{tabular}{l|" + "r" * len(classes) + "}",
        r"\hline",
        "gold & " + " & ".join(_tex(c) for c in classes) + r" \\",
        r"\hline",
    ]
    for cls, cells in zip(classes, _confmat_cells(report)):
        lines.append(_tex(cls) + " & " + " & ".join(cells) + r" \\")
    lines += [r"\hline", r"\end{tabular}"]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _confmat_json(report: ConfmatReport) -> bytes:
    doc = {
        "system": report.system,
        "classes": list(report.schema.classes),
        "counts": [list(row) for row in report.counts],
        "row_normalized": (
            None
            if report.row_normalized is None
            else [list(row) for row in report.row_normalized]
        ),
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _confmat_svg(report: ConfmatReport) -> bytes:
    fragment, extent = _heatmap_fragment(
        title=report.system,
        classes=report.schema.classes,
        proportions=row_normalize(report.counts),
        y_offset=_PAD,
    )
    width = _LEFT + report.schema.k * _CELL + _PAD
    return _svg_document(width, _PAD + extent + _PAD, [fragment])


_CONFMAT_RENDERERS = {
    "markdown": _confmat_markdown,
    "csv": _confmat_csv,
    "latex": _confmat_latex,
    "json": _confmat_json,
    "svg": _confmat_svg,
}


# ---------------------------------------------------------------------------
# Class distributions


def _percent(fraction: float) -> str:
    return f"{fraction * 100:.0f}%"


def _dist_markdown(dist: ClassDistribution) -> bytes:
    lines = [
        "| class | count | fraction | percent |",
        "| --- | ---: | ---: | ---: |",
    ]
    for cls, count in dist.counts.items():
        frac = count / dist.total
        lines.append(f"| {cls} | {count} | {_f3(frac)} | {_percent(frac)} |")
    lines.append(f"| total | {dist.total} | 1.000 | 100% |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _dist_csv(dist: ClassDistribution) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["class", "count", "fraction"])
    for cls, count in dist.counts.items():
        writer.writerow([cls, str(count), _f3(count / dist.total)])
    return buf.getvalue().encode("utf-8")


def _dist_latex(dist: ClassDistribution) -> bytes:
    lines = [
        r"\begin{tabular}{l|rr}",
        r"\hline",
        r"class & count & percent \\",
        r"\hline",
    ]
    for cls, count in dist.counts.items():
        lines.append(f"{_tex(cls)} & {count} & {_percent(count / dist.total)}" + r" \\")
    lines += [r"\hline", f"total & {dist.total} & 100%".replace("%", r"\%") + r" \\"]
    lines += [r"\hline", r"\end{tabular}"]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _dist_json(dist: ClassDistribution) -> bytes:
    doc = {
        "total": dist.total,
        "classes": [
            {"name": cls, "count": count, "fraction": count / dist.total}
            for cls, count in dist.counts.items()
        ],
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


_DIST_RENDERERS = {
    "markdown": _dist_markdown,
    "csv": _dist_csv,
    "latex": _dist_latex,
    "json": _dist_json,
}


# ---------------------------------------------------------------------------
# SVG heatmaps


def _cell_color(value: float) -> str:
    """Linear white -> dark blue ramp over [0, 1]."""
    v = min(max(value, 0.0), 1.0)
    r = round(255 + (8 - 255) * v)
    g = round(255 + (48 - 255) * v)
    b = round(255 + (107 - 255) * v)
    return f"rgb({r},{g},{b})"


def _heatmap_fragment(
    title: str,
    classes: tuple[str, ...],
    proportions: tuple[tuple[float, ...], ...],
    y_offset: int,
) -> tuple[str, int]:
    """One titled heatmap; returns (svg fragment, vertical extent in px)."""
    k = len(classes)
    parts = [
        f'<text x="{_LEFT}" y="{y_offset + 18}" font-size="15" '
        f'font-weight="bold">{escape(title)}</text>'
    ]
    grid_top = y_offset + _TOP
    for j, cls in enumerate(classes):
        x = _LEFT + j * _CELL + _CELL // 2
        parts.append(
            f'<text x="{x}" y="{grid_top - 10}" font-size="11" '
            f'text-anchor="middle">{escape(cls)}</text>'
        )
    for i, cls in enumerate(classes):
        y_mid = grid_top + i * _CELL + _CELL // 2
        parts.append(
            f'<text x="{_LEFT - 8}" y="{y_mid + 4}" font-size="11" '
            f'text-anchor="end">{escape(cls)}</text>'
        )
        for j in range(k):
            value = proportions[i][j]
            x = _LEFT + j * _CELL
            y = grid_top + i * _CELL
            text_color = "#ffffff" if value > 0.5 else "#000000"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{_CELL}" height="{_CELL}" '
                f'fill="{_cell_color(value)}" stroke="#999999"/>'
            )
            parts.append(
                f'<text x="{x + _CELL // 2}" y="{y + _CELL // 2 + 4}" font-size="12" '
                f'text-anchor="middle" fill="{text_color}">{value:.2f}</text>'
            )
    return "\n".join(parts), _TOP + k * _CELL


def _svg_document(width: int, height: int, blocks: list[str]) -> bytes:
    body = "\n".join(blocks)
    doc = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">\n'
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>\n'
        f"{body}\n"
        "</svg>\n"
    )
    return doc.encode("utf-8")
