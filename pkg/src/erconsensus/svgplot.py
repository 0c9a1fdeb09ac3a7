"""Minimal standalone SVG line plots: two or more polylines on linear axes.

Hand-rolled so figure emission carries no plotting dependency; adequate for
eyeballing bound-versus-empirical curves.
"""

from __future__ import annotations

import numpy as np

_WIDTH = 800
_HEIGHT = 500
_MARGIN_L = 70
_MARGIN_R = 20
_MARGIN_T = 30
_MARGIN_B = 50
_TICKS = 6


def _axis_range(values: np.ndarray) -> tuple[float, float]:
    lo = float(np.min(values))
    hi = float(np.max(values))
    if lo == hi:
        lo -= 1.0
        hi += 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def write_line_plot(path, x: np.ndarray,
                    series: list[tuple[str, np.ndarray, bool]],
                    xlabel: str, ylabel: str, title: str = "") -> None:
    """Write one SVG: ``series`` entries are (label, y-values, dashed?)."""
    x = np.asarray(x, dtype=np.float64)
    ys = np.concatenate([np.asarray(y, dtype=np.float64) for _, y, _ in series])
    x_lo, x_hi = _axis_range(x)
    y_lo, y_hi = _axis_range(ys)
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return _HEIGHT - _MARGIN_B - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>')
    # axes
    x0, y0 = _MARGIN_L, _HEIGHT - _MARGIN_B
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{_WIDTH - _MARGIN_R}" y2="{y0}" '
                 'stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{_MARGIN_T}" '
                 'stroke="black" stroke-width="1"/>')
    for tick in np.linspace(x_lo, x_hi, _TICKS):
        px = sx(tick)
        parts.append(f'<line x1="{px:.1f}" y1="{y0}" x2="{px:.1f}" y2="{y0 + 5}" '
                     'stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{px:.1f}" y="{y0 + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{tick:.4g}</text>')
    for tick in np.linspace(y_lo, y_hi, _TICKS):
        py = sy(tick)
        parts.append(f'<line x1="{x0 - 5}" y1="{py:.1f}" x2="{x0}" y2="{py:.1f}" '
                     'stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{x0 - 8}" y="{py + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{tick:.4g}</text>')
    parts.append(f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{_HEIGHT - 12}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>')
    parts.append(f'<text x="16" y="{_MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2:.1f})">{ylabel}</text>')
    # polylines and legend
    for idx, (label, y, dashed) in enumerate(series):
        y = np.asarray(y, dtype=np.float64)
        points = " ".join(f"{sx(float(a)):.2f},{sy(float(b)):.2f}" for a, b in zip(x, y))
        dash = ' stroke-dasharray="7,4"' if dashed else ""
        parts.append(f'<polyline fill="none" stroke="black" stroke-width="1.4"{dash} '
                     f'points="{points}"/>')
        ly = _MARGIN_T + 14 + 16 * idx
        lx = _WIDTH - _MARGIN_R - 170
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 26}" y2="{ly - 4}" '
                     f'stroke="black" stroke-width="1.4"{dash}/>')
        parts.append(f'<text x="{lx + 32}" y="{ly}" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
