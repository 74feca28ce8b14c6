"""Static drawings of an instance and an optional partition."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .audit import Partition, build_happiness
from .core import Color, Instance

__all__ = ["render_ascii", "render_svg"]

_FILL = {Color.RED: "#e06666", Color.BLUE: "#6fa8dc"}


def _cuts(partition: Partition) -> set[int]:
    n = partition.n
    return {(b + partition.offset) % n for b in partition.boundaries} - {0}


def _unhappy_mask(x: Instance, partition: Partition) -> np.ndarray:
    h = build_happiness(x, partition)
    return np.roll(h.unhappy, partition.offset)


def render_ascii(x: Instance, partition: Partition | None = None) -> str:
    """One letter per point, ``|`` between parts; unhappy points in lowercase."""
    letters = list(x.to_string())
    if partition is None:
        return "".join(letters)
    unhappy = _unhappy_mask(x, partition)
    cuts = _cuts(partition)
    out = []
    for k, ch in enumerate(letters):
        if k in cuts:
            out.append("|")
        out.append(ch.lower() if unhappy[k] else ch)
    return "".join(out)


def render_svg(x: Instance, partition: Partition | None = None, *, cell: int = 12,
               title: str | None = None) -> str:
    """Colored run rectangles, with a bracket under each part and unhappy points dotted."""
    n = x.n
    width = n * cell + 2 * cell
    height = 4 * cell
    top = cell // 2
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if title:
        lines.append(f"  <title>{escape(title)}</title>")
    pos = 0
    for color, length in x.runs:
        lines.append(
            f'  <rect x="{cell + pos * cell}" y="{top}" width="{length * cell}" '
            f'height="{cell * 2}" fill="{_FILL[color]}" stroke="#333" stroke-width="0.5"/>'
        )
        pos += length
    if partition is not None:
        unhappy = _unhappy_mask(x, partition)
        for k in np.flatnonzero(unhappy).tolist():
            cx = cell + k * cell + cell / 2
            lines.append(f'  <circle cx="{cx}" cy="{top + cell}" r="{cell / 4}" fill="#000"/>')
        y = top + 2 * cell + cell // 3
        for iv in partition.intervals():
            segs = [(iv.start, min(iv.end, n))]
            if iv.end > n:
                segs.append((0, iv.end - n))
            for a, b in segs:
                x0 = cell + a * cell + 1
                x1 = cell + b * cell - 1
                lines.append(
                    f'  <path d="M{x0} {y - 3} L{x0} {y} L{x1} {y} L{x1} {y - 3}" '
                    f'fill="none" stroke="#000" stroke-width="1.5"/>'
                )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
