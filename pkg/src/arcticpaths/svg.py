"""Minimal self-contained SVG emitter for arctic curves and point clouds."""
from __future__ import annotations

import math

import numpy as np

WIDTH = 800.0
PAD = 20.0

_COLORS = {
    "generic-I": "#c0392b",
    "generic-II": "#2471a3",
    "frozen-R": "#27ae60",
    "gap": "#8e44ad",
    "edge-freeze-left": "#d68910",
    "edge-freeze-right": "#d68910",
}


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render(parts, alpha1: float, points=None, fans=None, tangents=None,
           triangular: bool = False) -> str:
    """SVG text for the domain, the ``Y = X`` guard line and curve portions.

    The canvas is ``800 x 800/alpha1`` so one unit has the same length on both
    axes.  ``fans`` is a list of parameter values whose tangent lines are
    drawn; it needs ``tangents``, a callable ``t -> (slope, t)`` giving the
    line through ``(t, 0)``.
    """
    s = (WIDTH - 2 * PAD) / alpha1
    if triangular:
        height = WIDTH / alpha1 * math.sqrt(3) / 2
    else:
        height = WIDTH / alpha1
    H = height + 2 * PAD

    def map_pt(X, Y):
        if triangular:
            X, Y = X - Y / 2, math.sqrt(3) / 2 * Y
        return PAD + s * X + (s / 2 if triangular else 0.0), H - PAD - s * Y

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(WIDTH)}" '
           f'height="{_fmt(H)}" viewBox="0 0 {_fmt(WIDTH)} {_fmt(H)}">',
           '<rect width="100%" height="100%" fill="white"/>']

    corners = [(0, 0), (alpha1, 0), (alpha1, 1), (0, 1)]
    pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (map_pt(*c) for c in corners))
    out.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1"/>')
    g0, g1 = map_pt(0, 0), map_pt(1, 1)
    out.append(f'<line x1="{_fmt(g0[0])}" y1="{_fmt(g0[1])}" x2="{_fmt(g1[0])}" '
               f'y2="{_fmt(g1[1])}" stroke="#999" stroke-dasharray="4 3"/>')

    if points is not None and len(points):
        for X, Y in np.asarray(points, dtype=float):
            a, b = map_pt(X, Y)
            out.append(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="0.8" fill="#555" fill-opacity="0.3"/>')

    for p in parts:
        keep = np.isfinite(p.X) & np.isfinite(p.Y)
        path = " ".join(f"{_fmt(a)},{_fmt(b)}"
                        for a, b in (map_pt(X, Y) for X, Y in zip(p.X[keep], p.Y[keep])))
        dash = ' stroke-dasharray="6 3"' if p.conjectured else ""
        out.append(f'<polyline points="{path}" fill="none" stroke="{_COLORS.get(p.kind, "black")}" '
                   f'stroke-width="2"{dash}><title>{p.kind}</title></polyline>')

    for t in fans or []:
        slope, t0 = tangents(t)
        # clip the line Y = slope (X - t0) to 0 <= Y <= 1
        ends = []
        for Y in (0.0, 1.0):
            if slope != 0 and math.isfinite(slope):
                ends.append((t0 + Y / slope, Y))
        if len(ends) == 2:
            (xa, ya), (xb, yb) = map_pt(*ends[0]), map_pt(*ends[1])
            out.append(f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" y2="{_fmt(yb)}" '
                       f'stroke="#aaa" stroke-width="0.6"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
