"""Minimal self-contained SVG line charts for simulation output.

No plotting dependency: charts are assembled as plain SVG text so runs can
emit figures in headless environments and the files diff cleanly.
"""

from __future__ import annotations

import math

import numpy as np

_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
]

_W, _H = 640, 220
_ML, _MR, _MT, _MB = 55, 120, 28, 30


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * step:
        out.append(round(v, 12))
        v += step
    return out


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _panel(title, times, series, labels, y0):
    """One chart panel as a list of SVG elements offset to y0."""
    finite = np.asarray(series, dtype=float)
    mask = np.isfinite(finite)
    lo = float(finite[mask].min()) if mask.any() else 0.0
    hi = float(finite[mask].max()) if mask.any() else 1.0
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    t0, t1 = float(times[0]), float(times[-1])

    def sx(t):
        return _ML + (t - t0) / (t1 - t0) * (_W - _ML - _MR)

    def sy(v):
        return y0 + _MT + (hi - v) / (hi - lo) * (_H - _MT - _MB)

    parts = [
        f'<text x="{_ML}" y="{y0 + 18}" font-size="13" font-weight="bold">{title}</text>',
        f'<rect x="{_ML}" y="{y0 + _MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#999"/>',
    ]
    for v in _ticks(lo, hi):
        if lo <= v <= hi:
            y = sy(v)
            parts.append(
                f'<line x1="{_ML}" y1="{y:.1f}" x2="{_W - _MR}" y2="{y:.1f}" '
                'stroke="#e0e0e0"/>'
            )
            parts.append(
                f'<text x="{_ML - 6}" y="{y + 4:.1f}" font-size="10" '
                f'text-anchor="end">{_fmt(v)}</text>'
            )
    for v in _ticks(t0, t1):
        if t0 <= v <= t1:
            x = sx(v)
            parts.append(
                f'<text x="{x:.1f}" y="{y0 + _H - _MB + 14}" font-size="10" '
                f'text-anchor="middle">{_fmt(v)}</text>'
            )
    for k, (lab, ys) in enumerate(zip(labels, np.atleast_2d(finite))):
        color = _PALETTE[k % len(_PALETTE)]
        pts = [
            f"{sx(t):.2f},{sy(v):.2f}"
            for t, v in zip(times, ys)
            if math.isfinite(v)
        ]
        if pts:
            parts.append(
                f'<polyline points="{" ".join(pts)}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        ly = y0 + _MT + 14 * k
        parts.append(
            f'<line x1="{_W - _MR + 8}" y1="{ly + 6}" x2="{_W - _MR + 26}" '
            f'y2="{ly + 6}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_W - _MR + 30}" y="{ly + 10}" font-size="10">{lab}</text>'
        )
    return parts


def trajectory_chart(times, shares, tech_growth, sector_growth) -> str:
    """Three stacked panels (shares, per-technology growth, sector growth)
    as one standalone SVG document."""
    n = shares.shape[1]
    tech_labels = [f"tech {i + 1}" for i in range(n)]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
        f'height="{3 * _H}" font-family="sans-serif">',
        f'<rect width="{_W}" height="{3 * _H}" fill="white"/>',
    ]
    parts += _panel("Scientist shares", times, shares.T, tech_labels, 0)
    parts += _panel("Technology growth rates", times, tech_growth.T, tech_labels, _H)
    parts += _panel("Sector growth rate", times, sector_growth[None, :], ["g_YL"], 2 * _H)
    parts.append("</svg>")
    return "\n".join(parts)
