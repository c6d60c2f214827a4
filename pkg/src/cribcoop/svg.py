"""Minimal SVG line plots of 2-D frontiers (axes, polylines, legend)."""

from __future__ import annotations

import datetime
from typing import Sequence

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def frontier_svg(series: Sequence[tuple[str, np.ndarray]], xlabel: str = "R1 [bits]",
                 ylabel: str = "R2 [bits]", reproducible: bool = True,
                 width: int = 480, height: int = 400) -> str:
    """One polyline per ``(label, vertices)``; vertices are drawn in the given order."""
    pad = 50
    pts = [np.asarray(v, dtype=float).reshape(-1, 2) for _, v in series]
    xmax = max([p[:, 0].max() for p in pts if len(p)] + [1e-9]) * 1.05
    ymax = max([p[:, 1].max() for p in pts if len(p)] + [1e-9]) * 1.05

    def sx(x):
        return pad + (width - 2 * pad) * x / xmax

    def sy(y):
        return height - pad - (height - 2 * pad) * y / ymax

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    if not reproducible:
        out.append(f"<!-- generated {datetime.datetime.now().isoformat(timespec='seconds')} -->")
    out.append('<rect width="100%" height="100%" fill="white"/>')
    x0, y0 = sx(0), sy(0)
    out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{sx(xmax):.2f}" y2="{y0:.2f}" stroke="black"/>')
    out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{sy(ymax):.2f}" stroke="black"/>')
    for t in np.linspace(0, xmax / 1.05, 5):
        out.append(f'<text x="{sx(t):.2f}" y="{y0 + 16:.2f}" font-size="10" '
                   f'text-anchor="middle">{t:.2f}</text>')
    for t in np.linspace(0, ymax / 1.05, 5):
        out.append(f'<text x="{x0 - 6:.2f}" y="{sy(t) + 3:.2f}" font-size="10" '
                   f'text-anchor="end">{t:.2f}</text>')
    out.append(f'<text x="{width / 2:.0f}" y="{height - 12}" font-size="12" '
               f'text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{height / 2:.0f}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 14 {height / 2:.0f})">{ylabel}</text>')
    for k, ((label, _), p) in enumerate(zip(series, pts)):
        color = COLORS[k % len(COLORS)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in p)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5">'
                   f"<title>{label}</title></polyline>")
        ly = pad / 2 + 14 * k
        out.append(f'<line x1="{width - 150}" y1="{ly:.0f}" x2="{width - 130}" y2="{ly:.0f}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{width - 125}" y="{ly + 4:.0f}" font-size="11">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
