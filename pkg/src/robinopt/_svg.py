"""Minimal SVG polyline plots (no plotting dependency)."""

from __future__ import annotations

import math

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(
    path,
    curves,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> None:
    """Write labelled polyline curves: curves = [(label, xs, ys), ...]."""
    pts = [(x, y) for _, xs, ys in curves for x, y in zip(xs, ys)]
    if not pts:
        raise ValueError("nothing to plot")
    xs_all = [p[0] for p in pts]
    ys_all = [p[1] for p in pts]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def sx(x):
        return _ML + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return _MT + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" '
        'fill="white" stroke="black"/>',
    ]
    if title:
        out.append(
            f'<text x="{_W / 2}" y="24" text-anchor="middle" '
            f'font-size="14">{_esc(title)}</text>'
        )
    if x_label:
        out.append(
            f'<text x="{_ML + pw / 2}" y="{_H - 12}" '
            f'text-anchor="middle">{_esc(x_label)}</text>'
        )
    if y_label:
        out.append(
            f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {_MT + ph / 2})">{_esc(y_label)}</text>'
        )
    for v, anchor, yshift in ((x0, "start", 0), (x1, "end", 0)):
        out.append(
            f'<text x="{sx(v)}" y="{_MT + ph + 16}" '
            f'text-anchor="{anchor}">{v:.6g}</text>'
        )
    for v in (y0, y1):
        out.append(
            f'<text x="{_ML - 6}" y="{sy(v) + 4}" text-anchor="end">{v:.6g}</text>'
        )
    for i, (label, cxs, cys) in enumerate(curves):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(cxs, cys)
            if math.isfinite(x) and math.isfinite(y)
        )
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )
        if label:
            out.append(
                f'<text x="{_ML + pw - 8}" y="{_MT + 18 + 16 * i}" '
                f'text-anchor="end" fill="{color}">{_esc(label)}</text>'
            )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
