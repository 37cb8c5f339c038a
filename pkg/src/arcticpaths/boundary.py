"""Starting-point sequences and their scaling boundary shapes.

A finite configuration is described by a :class:`StartSequence`
``a = (a_0=0 < a_1 < ... < a_n)``.  Its large-``n`` limit is described by a
:class:`BoundaryShape` ``alpha: [0, 1] -> R`` with ``a_i ~ n alpha(i/n)``.

Shapes are stored as an ordered tuple of :class:`Piece` records.  A piece is
either a linear segment (slope ``p >= 1``; ``p == 1`` is a freezing segment),
a jump (a macroscopic gap in the starting points) or a generic curved stretch
evaluated through a user callable.  Jumps advance ``theta`` (the alpha-extent)
without advancing ``phi`` (the u-extent).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "StartSequence",
    "ComplementarySequence",
    "Segment",
    "Jump",
    "Piece",
    "BoundaryShape",
    "StartDensity",
    "ShapeError",
    "tilde_of",
    "complement_of",
    "realize",
    "density_of",
    "complementary_profile",
]


class ShapeError(ValueError):
    """Raised for invalid sequences or boundary shapes."""


def exact(v) -> Fraction:
    """Convert ``v`` to a Fraction; floats are snapped to a nearby rational."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, (float, np.floating)):
        if not math.isfinite(v):
            raise ShapeError(f"non-finite value {v!r}")
        return Fraction(float(v)).limit_denominator(10**12)
    raise ShapeError(f"cannot interpret {v!r} as a number")


# --------------------------------------------------------------------------
# finite sequences


@dataclass(frozen=True)
class StartSequence:
    """Strictly increasing starting abscissas ``a_0 = 0 < a_1 < ... < a_n``."""

    a: tuple

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if not a:
            raise ShapeError("empty sequence")
        if a[0] != 0:
            raise ShapeError(f"a[0] must be 0, got {a[0]}")
        for i in range(len(a) - 1):
            if a[i + 1] <= a[i]:
                raise ShapeError(f"sequence not strictly increasing at index {i + 1}: {a}")

    @classmethod
    def parse(cls, text: str) -> "StartSequence":
        return cls(tuple(int(s) for s in text.replace(" ", "").split(",") if s))

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @property
    def an(self) -> int:
        return self.a[-1]

    @property
    def m(self) -> int:
        """Number of complementary (gap) positions, ``a_n - n``."""
        return self.a[-1] - self.n

    def __len__(self):
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    def __getitem__(self, i):
        return self.a[i]

    def __str__(self):
        return ",".join(map(str, self.a))


@dataclass(frozen=True)
class ComplementarySequence:
    """The integers of ``[0, a_n]`` not in the starting sequence.

    ``n`` is kept alongside because the complementary paths end at
    ``(n + i, n + 1/2)`` and every formula on this side depends on it.
    """

    b: tuple
    n: int

    @property
    def m(self) -> int:
        return len(self.b)

    def __iter__(self):
        return iter(self.b)

    def __len__(self):
        return len(self.b)

    def __getitem__(self, i):
        return self.b[i]


def tilde_of(seq: StartSequence) -> StartSequence:
    """Reflected sequence ``atilde_i = a_n - a_{n-i}`` (an involution)."""
    a = seq.a
    an = a[-1]
    return StartSequence(tuple(an - a[len(a) - 1 - i] for i in range(len(a))))


def complement_of(seq: StartSequence) -> ComplementarySequence:
    taken = set(seq.a)
    b = tuple(v for v in range(seq.an + 1) if v not in taken)
    return ComplementarySequence(b, seq.n)


# --------------------------------------------------------------------------
# boundary shapes


@dataclass(frozen=True)
class Segment:
    """Linear stretch of ``alpha`` with given u-width and slope.

    ``slope="frozen"`` is accepted and means exactly 1.
    """

    width: Fraction
    slope: Fraction

    def __post_init__(self):
        slope = Fraction(1) if self.slope == "frozen" else exact(self.slope)
        object.__setattr__(self, "width", exact(self.width))
        object.__setattr__(self, "slope", slope)
        if self.width <= 0:
            raise ShapeError(f"segment width must be positive, got {self.width}")
        if slope < 1:
            raise ShapeError(f"segment slope must be >= 1, got {slope}")


@dataclass(frozen=True)
class Jump:
    """Discontinuity of ``alpha`` (a macroscopic gap) of the given height."""

    height: Fraction

    def __post_init__(self):
        object.__setattr__(self, "height", exact(self.height))
        if self.height <= 0:
            raise ShapeError(f"jump height must be positive, got {self.height}")


@dataclass(frozen=True)
class Piece:
    """One maximal stretch of a shape with cumulative coordinates.

    ``kind`` is ``"linear"``, ``"jump"`` or ``"curve"``.  The piece covers
    ``u in [u0, u1]`` and ``alpha in [v0, v1]``.  For curves, ``func`` is the
    global alpha callable (valid on the open interval) and ``dfunc`` its
    derivative if known.
    """

    kind: str
    u0: object
    u1: object
    v0: object
    v1: object
    slope: object = None
    func: Optional[Callable] = field(default=None, compare=False)
    dfunc: Optional[Callable] = field(default=None, compare=False)

    @property
    def frozen(self) -> bool:
        return self.kind == "linear" and self.slope == 1

    def alpha(self, u):
        if self.kind == "linear":
            return self.v0 + self.slope * (u - self.u0)
        if self.kind == "curve":
            return self.func(u)
        raise ShapeError("jump pieces have no alpha values")

    def dalpha(self, u):
        if self.kind == "linear":
            return self.slope
        if self.dfunc is not None:
            return self.dfunc(u)
        h = 1e-6 * max(self.u1 - self.u0, 1e-12)
        lo, hi = max(u - h, self.u0 + 1e-15), min(u + h, self.u1 - 1e-15)
        return (self.func(hi) - self.func(lo)) / (hi - lo)


class BoundaryShape:
    """Scaling profile ``alpha(u)`` of the starting points.

    Build with :meth:`piecewise` (segments and jumps, exact rationals) or
    :meth:`analytic` (callable plus declared frozen intervals and jumps).
    ``alpha`` is left-continuous at jumps, matching ``a_i = floor(n alpha(i/n))``.
    """

    def __init__(self, pieces: Sequence[Piece], name: str = "", endpoint=None):
        self.pieces = tuple(pieces)
        self.name = name
        # declared endpoint behaviour: slope0, slope1, exponent0, exponent1
        self.endpoint = dict(endpoint or {})
        self._check()

    # -- construction -----------------------------------------------------

    @classmethod
    def piecewise(cls, elements: Iterable, name: str = "") -> "BoundaryShape":
        elements = list(elements)
        if not elements:
            raise ShapeError("shape needs at least one segment")
        if isinstance(elements[0], Jump) or isinstance(elements[-1], Jump):
            raise ShapeError("jumps must lie strictly inside (0, 1)")
        pieces = []
        u = v = Fraction(0)
        for k, el in enumerate(elements):
            if isinstance(el, Segment):
                u1, v1 = u + el.width, v + el.slope * el.width
                pieces.append(Piece("linear", u, u1, v, v1, el.slope))
            elif isinstance(el, Jump):
                if isinstance(elements[k - 1], Jump):
                    raise ShapeError("consecutive jumps; merge them into one")
                u1, v1 = u, v + el.height
                pieces.append(Piece("jump", u, u, v, v1))
            else:
                raise ShapeError(f"unknown shape element {el!r}")
            u, v = u1, v1
        if abs(float(u) - 1.0) > 1e-12:
            raise ShapeError(f"segment widths sum to {float(u)!r}, expected 1")
        return cls(pieces, name=name)

    @classmethod
    def linear(cls, p) -> "BoundaryShape":
        """The pure profile ``alpha(u) = p u``."""
        return cls.piecewise([Segment(1, p)], name=f"pure p={p}")

    @classmethod
    def hexagon(cls, a, b, c) -> "BoundaryShape":
        """Frozen stretch ``a``, gap ``b``, frozen stretch ``c`` (``a + c = 1``)."""
        return cls.piecewise([Segment(a, 1), Jump(b), Segment(c, 1)],
                             name=f"hexagon a={a} b={b} c={c}")

    @classmethod
    def analytic(cls, alpha: Callable, dalpha: Optional[Callable] = None, *,
                 frozen=(), jumps=(), name: str = "", slope0=None, slope1=None,
                 exponent0=None, exponent1=None) -> "BoundaryShape":
        """Shape from a callable ``alpha`` on ``[0, 1]``.

        ``alpha`` must include the jumps and be left-continuous there.
        ``frozen`` lists intervals ``(u1, u2)`` where ``alpha' == 1``; they are
        never detected automatically.  ``jumps`` lists ``(u, delta)`` pairs.
        The endpoint data (slopes, local exponents ``a`` with
        ``alpha ~ C u^a``) is only needed when a slope is infinite.
        """
        frozen = sorted((float(a), float(b)) for a, b in frozen)
        jumps = sorted((float(u), float(d)) for u, d in jumps)
        for u, d in jumps:
            if not 0 < u < 1 or d <= 0:
                raise ShapeError(f"invalid jump at u={u} with height {d}")
        cuts = {0.0, 1.0}
        for a, b in frozen:
            if not 0 <= a < b <= 1:
                raise ShapeError(f"invalid frozen interval ({a}, {b})")
            cuts.update((a, b))
        cuts.update(u for u, _ in jumps)
        cuts = sorted(cuts)
        jump_at = dict(jumps)

        pieces = []
        v = 0.0
        if abs(alpha(0.0)) > 1e-12:
            raise ShapeError(f"alpha(0) must be 0, got {alpha(0.0)}")
        for u0, u1 in zip(cuts[:-1], cuts[1:]):
            if u0 in jump_at:
                pieces.append(Piece("jump", u0, u0, v, v + jump_at[u0]))
                v += jump_at[u0]
            is_frozen = any(a <= u0 and u1 <= b for a, b in frozen)
            if is_frozen:
                pieces.append(Piece("linear", u0, u1, v, v + (u1 - u0), Fraction(1)))
                mid = 0.5 * (u0 + u1)
                if abs(alpha(mid) - (v + mid - u0)) > 1e-9:
                    raise ShapeError(f"alpha is not of slope 1 on declared frozen "
                                     f"interval around u={mid}")
                v += u1 - u0
            else:
                v1 = float(alpha(u1))
                pieces.append(Piece("curve", u0, u1, v, v1, None, alpha, dalpha))
                v = v1
        endpoint = dict(slope0=slope0, slope1=slope1,
                        exponent0=exponent0, exponent1=exponent1)
        return cls(pieces, name=name, endpoint=endpoint)

    def _check(self):
        last = None
        for pc in self.pieces:
            if pc.kind == "linear" and pc.slope < 1:
                raise ShapeError("slopes below 1 are not allowed")
            if pc.kind == "curve":
                us = np.linspace(pc.u0, pc.u1, 41)[1:-1]
                vals = np.array([pc.func(u) for u in us])
                if np.any(np.diff(vals) < np.diff(us) * (1 - 1e-9) - 1e-12):
                    raise ShapeError(f"alpha has slope below 1 on [{pc.u0}, {pc.u1}]")
            if last is not None and float(pc.v0) < float(last.v1) - 1e-12:
                raise ShapeError("alpha must be non-decreasing")
            last = pc

    # -- evaluation -------------------------------------------------------

    @property
    def is_piecewise_linear(self) -> bool:
        return all(pc.kind != "curve" for pc in self.pieces)

    @property
    def alpha1(self):
        return self.pieces[-1].v1

    @property
    def theta(self) -> list:
        """Breakpoints of the alpha-range, ``theta_0 = 0 < ... < alpha(1)``."""
        return [self.pieces[0].v0] + [pc.v1 for pc in self.pieces]

    @property
    def phi(self) -> list:
        return [self.pieces[0].u0] + [pc.u1 for pc in self.pieces]

    def alpha(self, u):
        """Left-continuous ``alpha(u)``; exact for piecewise-linear shapes."""
        if u <= 0:
            return self.pieces[0].v0
        for pc in self.pieces:
            if pc.kind != "jump" and pc.u0 < u <= pc.u1:
                if pc.kind == "curve":
                    return pc.func(float(u))
                return pc.alpha(u)
        raise ShapeError(f"u={u} outside [0, 1]")

    def slope_at(self, end: int):
        """``alpha'(0+)`` (end=0) or ``alpha'(1-)`` (end=1); may be ``inf``."""
        declared = self.endpoint.get(f"slope{end}")
        if declared is not None:
            return float(declared)
        pc = self.pieces[0] if end == 0 else self.pieces[-1]
        if pc.kind == "linear":
            return pc.slope
        try:
            return float(pc.dalpha(float(pc.u0 if end == 0 else pc.u1)))
        except ZeroDivisionError:
            return math.inf

    def exponent_at(self, end: int):
        return self.endpoint.get(f"exponent{end}")

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        """True when ``alpha(u) = alpha(1) - alpha(1 - u)``."""
        if self.is_piecewise_linear:
            kinds = [(pc.kind, pc.u1 - pc.u0, pc.v1 - pc.v0) for pc in self.pieces]
            return kinds == kinds[::-1]
        us = np.linspace(0.01, 0.99, 99)
        a1 = float(self.alpha1)
        return all(abs(self.alpha(u) - (a1 - self.alpha(1 - u))) < 1e-9 for u in us)

    def frozen_pieces(self) -> list:
        return [pc for pc in self.pieces if pc.frozen]

    def __repr__(self):
        return f"BoundaryShape({self.name or len(self.pieces)})"


def realize(shape: BoundaryShape, n: int) -> StartSequence:
    """Finite starting sequence ``a_i = floor(n alpha(i/n))``."""
    if n < 1:
        raise ShapeError("n must be positive")
    for pc in shape.pieces:
        if pc.kind == "jump":
            delta = pc.v1 - pc.v0
            need = math.ceil(1 / delta if isinstance(delta, Fraction) else 1 / delta - 1e-12)
            if n < need:
                raise ShapeError(f"n={n} too small for jump of height "
                                 f"{pc.v1 - pc.v0}; need n >= {need}")
    a = []
    for i in range(n + 1):
        if shape.is_piecewise_linear:
            v = n * shape.alpha(Fraction(i, n))
            a.append(math.floor(v))
        else:
            v = n * float(shape.alpha(i / n))
            # absorb float noise on exact integers (e.g. 4 * 0.75)
            a.append(math.floor(v + 1e-9 * max(1.0, abs(v))))
    try:
        return StartSequence(tuple(a))
    except ShapeError as err:
        raise ShapeError(f"realization at n={n} is not strictly increasing: {err}")


# --------------------------------------------------------------------------
# density of starting points


@dataclass(frozen=True)
class StartDensity:
    """Limiting density ``rho(v)`` of starting points and its moments."""

    shape: BoundaryShape
    moments: tuple

    def rho(self, v: float) -> float:
        for pc in self.shape.pieces:
            lo, hi = float(pc.v0), float(pc.v1)
            if lo <= v <= hi:
                if pc.kind == "jump":
                    if lo < v < hi:
                        return 0.0
                    continue
                if pc.kind == "linear":
                    return 1.0 / float(pc.slope)
                u = optimize.brentq(lambda s: pc.func(s) - v, float(pc.u0), float(pc.u1),
                                    xtol=1e-14)
                return 1.0 / float(pc.dalpha(u))
        raise ShapeError(f"v={v} outside [0, alpha(1)]")


def _curve_quad(f, a, b, **kw):
    val, _ = integrate.quad(f, float(a), float(b), epsabs=0.0, epsrel=1e-12, limit=200, **kw)
    return val


def density_of(shape: BoundaryShape, K_max: int) -> StartDensity:
    """Moments ``mu_k = int_0^1 alpha(u)^k du`` for ``k = 0..K_max``.

    Exact rationals for piecewise-linear shapes, quadrature otherwise.
    """
    moments = []
    for k in range(K_max + 1):
        if shape.is_piecewise_linear:
            total = Fraction(0)
            for pc in shape.pieces:
                if pc.kind == "linear":
                    total += (pc.v1 ** (k + 1) - pc.v0 ** (k + 1)) / (pc.slope * (k + 1))
        else:
            total = 0.0
            for pc in shape.pieces:
                if pc.kind == "linear":
                    p = float(pc.slope)
                    total += (float(pc.v1) ** (k + 1) - float(pc.v0) ** (k + 1)) / (p * (k + 1))
                elif pc.kind == "curve":
                    total += _curve_quad(lambda u: pc.func(u) ** k, pc.u0, pc.u1)
        moments.append(total)
    return StartDensity(shape, tuple(moments))


def complementary_profile(shape: BoundaryShape) -> list:
    """Scaling profile of the complementary sequence ``b`` as linear pieces.

    Returns ``(kind, w0, w1, v0, v1, slope)`` tuples over ``w in [0, mu]``
    with ``mu = alpha(1) - 1``.  Only defined for piecewise-linear shapes:
    a slope-``p`` stretch of ``alpha`` becomes a slope ``p/(p-1)`` stretch of
    the complement, a jump becomes a slope-1 stretch and a frozen stretch
    becomes a jump.
    """
    if not shape.is_piecewise_linear:
        raise ShapeError("complementary profile only available for piecewise-linear shapes")
    out = []
    w = Fraction(0)
    for pc in shape.pieces:
        dv = pc.v1 - pc.v0
        if pc.kind == "jump":
            out.append(("linear", w, w + dv, pc.v0, pc.v1, Fraction(1)))
            w += dv
        elif pc.slope == 1:
            out.append(("jump", w, w, pc.v0, pc.v1, None))
        else:
            dw = dv * (1 - 1 / pc.slope)
            out.append(("linear", w, w + dw, pc.v0, pc.v1, pc.slope / (pc.slope - 1)))
            w += dw
    return out
