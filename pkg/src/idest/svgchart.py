"""Minimal standalone SVG line charts (fixed 800x600 viewBox, no
interactivity).  Output is a deterministic function of the input series."""
from __future__ import annotations

from pathlib import Path

import numpy as np

_WIDTH, _HEIGHT = 800, 600
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 80, 40, 50, 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, count)


def render_line_chart(series, title: str, x_label: str, y_label: str) -> str:
    """Render labeled (xs, ys) polylines into an SVG document string.

    ``series`` is a list of (label, xs, ys) triples; non-finite y values are
    skipped point-wise.
    """
    xs_all, ys_all = [], []
    cleaned = []
    for label, xs, ys in series:
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        keep = np.isfinite(xs) & np.isfinite(ys)
        cleaned.append((label, xs[keep], ys[keep]))
        xs_all.append(xs[keep])
        ys_all.append(ys[keep])
    xcat = np.concatenate(xs_all) if xs_all else np.array([0.0, 1.0])
    ycat = np.concatenate(ys_all) if ys_all else np.array([0.0, 1.0])
    if xcat.size == 0:
        xcat = np.array([0.0, 1.0])
    if ycat.size == 0:
        ycat = np.array([0.0, 1.0])
    x_lo, x_hi = float(xcat.min()), float(xcat.max())
    y_lo, y_hi = float(ycat.min()), float(ycat.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(v):
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v):
        return _HEIGHT - _MARGIN_B - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="18">{title}</text>',
    ]
    axis = (
        f'<line x1="{_MARGIN_L}" y1="{_HEIGHT - _MARGIN_B}" '
        f'x2="{_WIDTH - _MARGIN_R}" y2="{_HEIGHT - _MARGIN_B}" stroke="black"/>'
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" '
        f'x2="{_MARGIN_L}" y2="{_HEIGHT - _MARGIN_B}" stroke="black"/>'
    )
    parts.append(axis)
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{_fmt(sx(tx))}" y1="{_HEIGHT - _MARGIN_B}" '
            f'x2="{_fmt(sx(tx))}" y2="{_HEIGHT - _MARGIN_B + 6}" stroke="black"/>'
            f'<text x="{_fmt(sx(tx))}" y="{_HEIGHT - _MARGIN_B + 22}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{_MARGIN_L - 6}" y1="{_fmt(sy(ty))}" '
            f'x2="{_MARGIN_L}" y2="{_fmt(sy(ty))}" stroke="black"/>'
            f'<text x="{_MARGIN_L - 10}" y="{_fmt(sy(ty) + 4)}" '
            f'text-anchor="end" font-family="sans-serif" font-size="12">{_fmt(ty)}</text>'
        )
    parts.append(
        f'<text x="{_WIDTH / 2}" y="{_HEIGHT - 16}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{x_label}</text>'
    )
    parts.append(
        f'<text x="22" y="{_HEIGHT / 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 22 {_HEIGHT / 2})">{y_label}</text>'
    )
    for i, (label, xs, ys) in enumerate(cleaned):
        color = _COLORS[i % len(_COLORS)]
        if xs.size:
            points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                f'points="{points}"/>'
            )
        ly = _MARGIN_T + 18 * (i + 1)
        parts.append(
            f'<line x1="{_WIDTH - _MARGIN_R - 140}" y1="{ly - 4}" '
            f'x2="{_WIDTH - _MARGIN_R - 110}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
            f'<text x="{_WIDTH - _MARGIN_R - 104}" y="{ly}" '
            f'font-family="sans-serif" font-size="13">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_line_chart(series, title: str, x_label: str, y_label: str, path) -> Path:
    path = Path(path)
    path.write_text(render_line_chart(series, title, x_label, y_label))
    return path
