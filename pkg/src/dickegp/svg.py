"""Minimal self-contained SVG line charts (no external assets, no fonts
beyond generic families).  Output is a pure function of the input, so equal
data gives byte-identical files."""

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    dashed: bool = False
    color: str = None


@dataclass
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: list = field(default_factory=list)
    vlines: list = field(default_factory=list)  # (x, label)


def _fmt(v):
    return f"{v:.2f}"


def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** np.floor(np.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    start = np.ceil(lo / step) * step
    ticks = np.arange(start, hi + 0.5 * step, step)
    return [float(t) for t in ticks if lo - 1e-9 * step <= t <= hi + 1e-9 * step]


def _tick_label(v):
    return f"{v:.6g}" if abs(v) > 1e-12 else "0"


def _panel_svg(panel, left, top, width, height):
    xs = [np.asarray(s.x, dtype=float) for s in panel.series]
    ys = [np.asarray(s.y, dtype=float) for s in panel.series]
    finite_y = np.concatenate([y[np.isfinite(y)] for y in ys]) if ys else np.array([0.0])
    all_x = np.concatenate(xs) if xs else np.array([0.0, 1.0])
    x0, x1 = float(all_x.min()), float(all_x.max())
    y0, y1 = float(finite_y.min()), float(finite_y.max())
    if x1 <= x0:
        x1 = x0 + 1.0
    pad = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return left + (v - x0) / (x1 - x0) * width

    def sy(v):
        return top + height - (v - y0) / (y1 - y0) * height

    out = [
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(width)}" height="{_fmt(height)}" '
        'fill="none" stroke="#000" stroke-width="1"/>',
        f'<text x="{_fmt(left + width / 2)}" y="{_fmt(top - 10)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(panel.title)}</text>',
        f'<text x="{_fmt(left + width / 2)}" y="{_fmt(top + height + 38)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(panel.xlabel)}</text>',
        f'<text transform="translate({_fmt(left - 52)},{_fmt(top + height / 2)}) rotate(-90)" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">{escape(panel.ylabel)}</text>',
    ]
    for t in _nice_ticks(x0, x1):
        out.append(
            f'<line x1="{_fmt(sx(t))}" y1="{_fmt(top + height)}" x2="{_fmt(sx(t))}" '
            f'y2="{_fmt(top + height + 5)}" stroke="#000"/>'
            f'<text x="{_fmt(sx(t))}" y="{_fmt(top + height + 18)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_tick_label(t)}</text>'
        )
    for t in _nice_ticks(y0, y1):
        out.append(
            f'<line x1="{_fmt(left - 5)}" y1="{_fmt(sy(t))}" x2="{_fmt(left)}" y2="{_fmt(sy(t))}" stroke="#000"/>'
            f'<text x="{_fmt(left - 8)}" y="{_fmt(sy(t) + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_tick_label(t)}</text>'
        )
    for xv, label in panel.vlines:
        out.append(
            f'<line x1="{_fmt(sx(xv))}" y1="{_fmt(top)}" x2="{_fmt(sx(xv))}" y2="{_fmt(top + height)}" '
            'stroke="#888" stroke-dasharray="2,3"/>'
            f'<text x="{_fmt(sx(xv) + 4)}" y="{_fmt(top + 14)}" font-family="sans-serif" '
            f'font-size="10" fill="#555">{escape(label)}</text>'
        )
    for k, (s, x, y) in enumerate(zip(panel.series, xs, ys)):
        color = s.color or PALETTE[k % len(PALETTE)]
        ok = np.isfinite(y)
        points = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(x[ok], y[ok]))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>'
        )
        ly = top + 16 + 15 * k
        out.append(
            f'<line x1="{_fmt(left + width - 110)}" y1="{_fmt(ly - 4)}" x2="{_fmt(left + width - 90)}" '
            f'y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="1.5"{dash}/>'
            f'<text x="{_fmt(left + width - 85)}" y="{_fmt(ly)}" font-family="sans-serif" '
            f'font-size="10">{escape(s.label)}</text>'
        )
    return "\n".join(out)


def render(panels, width=640, panel_height=300):
    """Stack panels vertically into one SVG document string."""
    margin_left, margin_right, margin_top, gap = 80, 20, 40, 80
    inner_w = width - margin_left - margin_right
    total_h = margin_top + len(panels) * (panel_height + gap)
    body = [
        _panel_svg(p, margin_left, margin_top + i * (panel_height + gap), inner_w, panel_height)
        for i, p in enumerate(panels)
    ]
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{total_h}" '
        f'viewBox="0 0 {width} {total_h}">\n'
        f'<rect width="{width}" height="{total_h}" fill="#fff"/>\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )
