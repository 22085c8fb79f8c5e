"""Dependency-free SVG scatter plots for embedding visualizations.

Plain text output keeps plots diffable and byte-stable for golden tests.
"""

from __future__ import annotations

import numpy as np

__all__ = ["scatter_svg"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def scatter_svg(points, labels, width: int = 480, height: int = 360, margin: int = 40) -> str:
    """Render labeled 2-D points as an SVG document string.

    One color per class in first-seen label order; axes are padded 5% beyond
    the data range. Output depends only on the inputs.
    """
    pts = np.asarray(points, dtype=np.float64)
    labels = np.asarray(labels)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] != labels.size:
        raise ValueError("points must be (n, 2) with one label per row")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    lo = lo - 0.05 * span
    hi = hi + 0.05 * span
    span = hi - lo

    def to_px(p):
        x = margin + (p[0] - lo[0]) / span[0] * (width - 2 * margin)
        y = height - margin - (p[1] - lo[1]) / span[1] * (height - 2 * margin)
        return x, y

    classes = list(dict.fromkeys(labels.tolist()))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="#888" stroke-width="1"/>',
    ]
    for i, (p, lab) in enumerate(zip(pts, labels.tolist())):
        color = _PALETTE[classes.index(lab) % len(_PALETTE)]
        x, y = to_px(p)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="{color}" fill-opacity="0.75"/>')
    for k, lab in enumerate(classes):
        color = _PALETTE[k % len(_PALETTE)]
        y = margin + 16 * (k + 1)
        parts.append(f'<circle cx="{width - margin - 70}" cy="{y - 4}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{width - margin - 58}" y="{y}" font-family="monospace" '
            f'font-size="12">class {lab}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
