"""Chord diagrams of angle families on the unit circle, emitted as SVG.

Output is deterministic: same input, same bytes.  Classes with two or
more angles are drawn as a star of chords from the class centroid;
singletons become dots on the circle.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .angles import Angle, AngleSet

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)


def _xy(t: Angle, cx: float, cy: float, r: float) -> tuple[float, float]:
    phi = 2.0 * math.pi * (t.num / t.den)
    return cx + r * math.cos(phi), cy - r * math.sin(phi)


def render_svg(
    classes: Sequence[Iterable[Angle]],
    size: int = 600,
    labels: bool = False,
    stroke_width: float = 1.5,
) -> str:
    """Render the family as one SVG document string."""
    cx = cy = size / 2.0
    r = size * 0.45
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<circle cx="{cx:.4f}" cy="{cy:.4f}" r="{r:.4f}" fill="none" '
        f'stroke="#000000" stroke-width="1"/>',
    ]
    for idx, cls in enumerate(classes):
        aset = cls if isinstance(cls, AngleSet) else AngleSet(cls)
        color = _PALETTE[idx % len(_PALETTE)]
        pts = [_xy(a, cx, cy, r) for a in aset]
        if len(pts) == 1:
            x, y = pts[0]
            out.append(
                f'<circle cx="{x:.4f}" cy="{y:.4f}" r="3" fill="{color}"/>'
            )
        else:
            gx = sum(x for x, _ in pts) / len(pts)
            gy = sum(y for _, y in pts) / len(pts)
            for x, y in pts:
                out.append(
                    f'<line x1="{gx:.4f}" y1="{gy:.4f}" x2="{x:.4f}" y2="{y:.4f}" '
                    f'stroke="{color}" stroke-width="{stroke_width}"/>'
                )
        if labels:
            for a, (x, y) in zip(aset, pts):
                lx, ly = _xy(a, cx, cy, r * 1.06)
                out.append(
                    f'<text x="{lx:.4f}" y="{ly:.4f}" font-size="{size / 50:.4f}" '
                    f'text-anchor="middle" dominant-baseline="middle">{a}</text>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
