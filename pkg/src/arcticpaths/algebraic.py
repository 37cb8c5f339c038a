"""Closed-form algebraic relations satisfied by some arctic curves.

Each function returns the polynomial value at ``(X, Y)``; it vanishes on the
curve.  Used as independent checks of the parametric construction.
"""
from __future__ import annotations

import numpy as np


def pure2(X, Y):
    """``alpha(u) = 2u``: a parabola."""
    return (2 * X - Y) ** 2 - 8 * (X - Y)


def pure3(X, Y):
    """``alpha(u) = 3u``: a quartic."""
    q = 3 * X ** 2 - 3 * X * Y + Y ** 2
    return q ** 2 - 2 * (3 * X - Y) * (9 * X ** 2 - 15 * X * Y + 7 * Y ** 2) + 81 * (X - Y) ** 2


def pure3_2(X, Y):
    """``alpha(u) = 3u/2``."""
    q = 3 * X ** 2 - 3 * X * Y + Y ** 2
    cubic = 54 * X ** 3 - 135 * X ** 2 * Y + 99 * X * Y ** 2 - 19 * Y ** 3
    return 32 * q ** 2 - 16 * cubic + 162 * (5 * X - 8 * Y) * (X - Y) - 243 * (X - Y)


def hexagon_ellipse(a, b, c):
    """Relation for the frozen/gap/frozen profile with widths ``a``, ``c`` and gap ``b``."""
    a, b, c = float(a), float(b), float(c)

    def rel(X, Y):
        return ((c - b) * Y - (a + c) * X + a * (a + b + c)) ** 2 + 4 * b * c * Y * (Y - X)

    return rel


def max_residual(rel, parts) -> float:
    """Largest ``|rel(X, Y)|`` over all finite samples of the given portions."""
    worst = 0.0
    for p in parts:
        keep = np.isfinite(p.X) & np.isfinite(p.Y)
        if keep.any():
            worst = max(worst, float(np.max(np.abs(rel(p.X[keep], p.Y[keep])))))
    return worst
