"""Flat result tables and their CSV / SVG renderings.

Both emitters are byte-deterministic: floats are written with the shortest
round-trip decimal in CSV and with fixed two-decimal coordinates in SVG,
and no timestamps or environment data are embedded. The SVG writer is
self-contained on purpose (no plotting backend), producing a plain line
chart with axes, tick labels, and a legend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class EmptyTable(ValueError):
    """Raised when an emitter is handed a table with no rows."""


@dataclass(frozen=True)
class Table:
    """Column names plus rows of cells (floats, ints, or strings)."""

    columns: tuple
    rows: list

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def emit_csv(table: Table, path) -> None:
    if not table.rows:
        raise EmptyTable("refusing to write a CSV with no data rows")
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


# --- SVG line chart ---------------------------------------------------------

_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")

_WIDTH, _HEIGHT = 880, 520
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 240, 40, 60


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _ticks(lo: float, hi: float, target: int = 6) -> list:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if span / (mult * mag) <= target - 1 + 1e-9:
            step = mult * mag
            break
    ticks = []
    t = math.ceil(lo / step - 1e-9) * step
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if t == 0 else t)
        t += step
    return ticks


def _fmt_tick(v: float) -> str:
    if v == 0.0:
        return "0"
    return f"{v:g}"


def emit_svg(table: Table, path, title: str = "") -> None:
    """Write a line chart of every numeric column against the first column.

    Non-numeric columns are skipped; the table must have a numeric first
    column and at least one numeric series.
    """
    if not table.rows:
        raise EmptyTable("refusing to write an SVG with no data rows")
    if not all(_is_number(row[0]) for row in table.rows):
        raise ValueError("the first column must be numeric to serve as the x axis")
    series_idx = [i for i in range(1, len(table.columns))
                  if all(_is_number(row[i]) for row in table.rows)]
    if not series_idx:
        raise ValueError("no numeric series to plot")

    xs = [float(row[0]) for row in table.rows]
    ys = [float(row[i]) for row in table.rows for i in series_idx]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    # headroom so curves do not sit on the frame
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return _TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    if title:
        parts.append(f'<text x="{_LEFT + plot_w / 2:.2f}" y="24" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="16">{title}</text>')

    for t in _ticks(x_lo, x_hi):
        x = px(t)
        parts.append(f'<line x1="{x:.2f}" y1="{_TOP + plot_h}" x2="{x:.2f}" '
                     f'y2="{_TOP + plot_h + 5}" stroke="#333333"/>')
        parts.append(f'<text x="{x:.2f}" y="{_TOP + plot_h + 20}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{_fmt_tick(t)}</text>')
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(f'<line x1="{_LEFT - 5}" y1="{y:.2f}" x2="{_LEFT}" '
                     f'y2="{y:.2f}" stroke="#333333"/>')
        parts.append(f'<text x="{_LEFT - 9}" y="{y + 4:.2f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="12">{_fmt_tick(t)}</text>')
    parts.append(f'<text x="{_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 16}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{table.columns[0]}</text>')

    for k, idx in enumerate(series_idx):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{px(float(row[0])):.2f},{py(float(row[idx])):.2f}"
                       for row in table.rows)
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{pts}"/>')
        ly = _TOP + 14 + 22 * k
        lx = _WIDTH - _RIGHT + 16
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 26}" y2="{ly}" '
                     f'stroke="{color}" stroke-width="2.5"/>')
        parts.append(f'<text x="{lx + 32}" y="{ly + 4}" font-family="sans-serif" '
                     f'font-size="12">{table.columns[idx]}</text>')

    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")
