"""Tabular sweep results with deterministic CSV and SVG emission.

A SweepTable is a plain header-plus-rows carrier.  Cells are numbers, or
strings for label columns such as a shape tag.  Emission is deterministic:
floats are rendered as %.17e, integers as bare digits, rows end in a single
newline, so identical tables always produce identical bytes.
"""

from __future__ import annotations

import math
import numbers
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import InvalidProblem

__all__ = ["SweepTable", "emit_csv", "emit_svg", "render_csv", "render_svg"]

_SERIES_COLORS = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)


@dataclass(frozen=True)
class SweepTable:
    """Column headers plus rows of cells; every row matches the header width."""

    headers: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self) -> None:
        headers = tuple(str(h) for h in self.headers)
        if not headers:
            raise InvalidProblem("a table needs at least one column")
        object.__setattr__(self, "headers", headers)
        rows = []
        for i, row in enumerate(self.rows):
            row = tuple(row)
            if len(row) != len(headers):
                raise InvalidProblem(
                    f"row {i} has {len(row)} cells, expected {len(headers)}"
                )
            for cell in row:
                if isinstance(cell, str):
                    continue
                try:
                    value = float(cell)
                except (TypeError, ValueError) as exc:
                    raise InvalidProblem(f"row {i} has a non-numeric cell {cell!r}") from exc
                if not math.isfinite(value):
                    raise InvalidProblem(f"row {i} contains a non-finite value")
            rows.append(row)
        object.__setattr__(self, "rows", tuple(rows))


def _format_cell(cell) -> str:
    if isinstance(cell, str):
        if any(ch in cell for ch in ',"\r\n'):
            return '"' + cell.replace('"', '""') + '"'
        return cell
    if isinstance(cell, numbers.Integral):
        return str(int(cell))
    return "%.17e" % float(cell)


def render_csv(table: SweepTable) -> str:
    """The table as RFC-4180 text: header row first, LF line endings."""
    lines = [",".join(_format_cell(h) for h in table.headers)]
    for row in table.rows:
        lines.append(",".join(_format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_bytes(text.encode("utf-8"))


def emit_csv(table: SweepTable, path) -> None:
    """Write the table as CSV to a file path, or to stdout when path is '-'."""
    _write(path, render_csv(table))


def _numeric_columns(table: SweepTable) -> list[int]:
    cols = []
    for j in range(len(table.headers)):
        if all(not isinstance(row[j], str) for row in table.rows):
            cols.append(j)
    return cols


def _series(table: SweepTable) -> list[tuple[str, list[tuple[float, float]]]]:
    """Group rows into polyline series.

    Tables whose first three columns are numeric are treated as keyed sweeps:
    column 0 labels the series, column 1 is the abscissa, column 2 the
    ordinate.  Anything else is plotted as a single series from the first two
    numeric columns.
    """
    if not table.rows:
        raise InvalidProblem("cannot plot an empty table")
    cols = _numeric_columns(table)
    if {0, 1, 2} <= set(cols):
        groups: dict[float, list[tuple[float, float]]] = {}
        for row in table.rows:
            groups.setdefault(float(row[0]), []).append((float(row[1]), float(row[2])))
        return [
            (f"{table.headers[0]}={key:g}", pts) for key, pts in groups.items()
        ]
    if len(cols) < 2:
        raise InvalidProblem("plotting needs at least two numeric columns")
    x, y = cols[0], cols[1]
    pts = [(float(row[x]), float(row[y])) for row in table.rows]
    return [(f"{table.headers[y]}", pts)]


def render_svg(table: SweepTable, width: int = 800, height: int = 560) -> str:
    """A minimal line plot: one polyline per series, axis box, legend."""
    series = _series(table)
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    left, right, top, bottom = 70.0, 20.0, 20.0, 50.0
    span_x = width - left - right
    span_y = height - top - bottom

    def px(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * span_x

    def py(y: float) -> float:
        return top + (y_hi - y) / (y_hi - y_lo) * span_y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{span_x}" height="{span_y}" '
        'fill="none" stroke="#000000"/>',
    ]
    for k, (label, pts) in enumerate(series):
        color = _SERIES_COLORS[k % len(_SERIES_COLORS)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in sorted(pts))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>'
        )
        parts.append(
            f'<text x="{width - right - 5:.0f}" y="{top + 16 * (k + 1):.0f}" '
            f'text-anchor="end" font-family="monospace" font-size="12" '
            f'fill="{color}">{label}</text>'
        )
    labels = (
        (left, height - bottom + 18.0, "start", f"{x_lo:.6g}"),
        (width - right, height - bottom + 18.0, "end", f"{x_hi:.6g}"),
        (left - 6.0, height - bottom, "end", f"{y_lo:.6g}"),
        (left - 6.0, top + 10.0, "end", f"{y_hi:.6g}"),
    )
    for x, y, anchor, text in labels:
        parts.append(
            f'<text x="{x:.0f}" y="{y:.0f}" text-anchor="{anchor}" '
            f'font-family="monospace" font-size="12">{text}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(table: SweepTable, path, width: int = 800, height: int = 560) -> None:
    """Write the line plot of the table to a file path, or stdout for '-'."""
    _write(path, render_svg(table, width, height))
