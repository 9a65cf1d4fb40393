"""Static SVG renderings: partition diagrams and MSE growth curves.

Plain string assembly, no styling dependencies; output is deterministic for
identical inputs.
"""

from __future__ import annotations

import math

import numpy as np

from .experiments import FitResult, MseTable, fit_curve_values
from .partition import Partition


def _fmt(x: float) -> str:
    return format(x, ".4f").rstrip("0").rstrip(".")


def render_partition_svg(partition: Partition, size: int = 640) -> str:
    """Draw every cell outline, the disc, the cameras, and the central circle."""
    array = partition.array
    half = size / 2.0
    scale = 0.44 * size / array.r

    def sx(x: float) -> float:
        return half + scale * x

    def sy(y: float) -> float:
        return half - scale * y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{_fmt(half)}" cy="{_fmt(half)}" r="{_fmt(scale * array.r)}" '
        'fill="none" stroke="#999" stroke-width="1"/>',
    ]
    for cell in partition.cells:
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in cell.polygon)
        parts.append(
            f'<polygon points="{pts}" fill="none" stroke="#33557a" '
            'stroke-width="0.8"/>'
        )
    parts.append(
        f'<circle cx="{_fmt(half)}" cy="{_fmt(half)}" '
        f'r="{_fmt(scale * partition.central_radius)}" fill="none" '
        'stroke="#c03030" stroke-width="1.2" stroke-dasharray="6 4"/>'
    )
    for alpha in partition.array.angles:
        cx = sx(array.r * math.cos(alpha))
        cy = sy(array.r * math.sin(alpha))
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="#222"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def render_growth_svg(
    tables: list[MseTable], fits: list[FitResult] | None = None
) -> str:
    """MSE against camera count with fitted curves, in a fixed 800x500 frame."""
    width, height = 800, 500
    left, right, top, bottom = 70, 20, 20, 50
    plot_w = width - left - right
    plot_h = height - top - bottom

    all_m = sorted({row.m for t in tables for row in t.rows})
    m_lo, m_hi = min(all_m), max(all_m)
    y_hi = 1.05 * max(row.mse + row.stderr for t in tables for row in t.rows)

    def px(m: float) -> float:
        return left + plot_w * (m - m_lo) / (m_hi - m_lo)

    def py(v: float) -> float:
        return top + plot_h * (1.0 - v / y_hi)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
        f'y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" '
        'stroke="black"/>',
    ]
    for m in range(m_lo, m_hi + 1, 5):
        x = px(m)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{top + plot_h}" x2="{_fmt(x)}" '
            f'y2="{top + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{top + plot_h + 20}" font-size="12" '
            f'text-anchor="middle">{m}</text>'
        )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = frac * y_hi
        y = py(v)
        parts.append(
            f'<line x1="{left - 5}" y1="{_fmt(y)}" x2="{left}" y2="{_fmt(y)}" '
            'stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{_fmt(y + 4)}" font-size="12" '
            f'text-anchor="end">{v:.2e}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2}" y="{height - 10}" font-size="13" '
        'text-anchor="middle">cameras</text>'
    )
    parts.append(
        f'<text x="15" y="{top + plot_h / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {top + plot_h / 2})">MSE</text>'
    )

    colors = {"orth": "#1f77b4", "persp": "#d62728"}
    for idx, table in enumerate(tables):
        color = colors.get(table.kind, "#444")
        for row in table.rows:
            x, y = px(row.m), py(row.mse)
            if table.kind == "orth":
                parts.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="none" '
                    f'stroke="{color}"/>'
                )
            else:
                parts.append(
                    f'<path d="M {_fmt(x - 3)} {_fmt(y - 3)} L {_fmt(x + 3)} '
                    f'{_fmt(y + 3)} M {_fmt(x - 3)} {_fmt(y + 3)} L {_fmt(x + 3)} '
                    f'{_fmt(y - 3)}" stroke="{color}"/>'
                )
        if fits is not None:
            fit = fits[idx]
            grid = np.linspace(m_lo, m_hi, 200)
            vals = fit_curve_values(fit, grid)
            path = " ".join(
                f"{'M' if i == 0 else 'L'} {_fmt(px(m))} {_fmt(py(v))}"
                for i, (m, v) in enumerate(zip(grid, vals))
            )
            dash = "" if table.kind == "orth" else ' stroke-dasharray="5 4"'
            parts.append(
                f'<path d="{path}" fill="none" stroke="{color}"{dash}/>'
            )
        label = "orthogonal" if table.kind == "orth" else "perspective"
        parts.append(
            f'<text x="{left + plot_w - 150}" y="{top + 20 + 18 * idx}" '
            f'font-size="12" fill="{color}">{label} ({table.estimator})</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
