"""From a boundary shape to its arctic curve.

Everything here is driven by the resolvent

    x(t) = exp(-int_0^1 du / (t - alpha(u)))

and its logarithmic derivative ``D = x'/x``.  The tangent line with
X-intercept ``t`` is ``x Y + (1 - x)(X - t) = 0`` and its envelope is

    X = t - (1 - x)/D,     Y = (1 - x)^2 / (x D).

``x`` is stored as ``(sign, log|x|)`` so that ``1 - x`` keeps full relative
accuracy near the apex (``x -> 1``) and negative values on frozen intervals
never go through a real power of a negative number.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from .boundary import BoundaryShape, Piece, complementary_profile, density_of

__all__ = [
    "BranchError",
    "Resolvent",
    "resolvent",
    "curve_point",
    "TangentLine",
    "tangent_at",
    "ArcticPortion",
    "portions",
    "SpecialPoint",
    "SpecialPoints",
    "special_points",
    "cusps",
    "axis_tangencies",
    "legendre_check",
    "MomentsCheck",
    "moments_check",
    "to_triangular",
    "hat_y",
    "hat_x",
    "symmetry_residual",
    "portions_to_csv",
]

QUAD_TOL = 1e-12
PORTION_SAMPLES = 400


class BranchError(ValueError):
    """``t`` lies on a cut of ``x(t)``; no real continuation exists there."""


# --------------------------------------------------------------------------
# quadrature with declared endpoint behaviour


def _quad_plain(f, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            return integrate.quad(f, a, b, epsabs=0.0, epsrel=QUAD_TOL, limit=400)[0]
        except integrate.IntegrationWarning:
            return None


def _quad(f, a, b, near=None, depth=60):
    """Adaptive quadrature on ``[a, b]``.

    ``near`` (``"a"`` or ``"b"``) flags an endpoint close to a pole of the
    integrand; the interval is then cut geometrically towards it, ``depth``
    halvings deep.  Any quadrature warning triggers the same treatment at
    both ends.
    """
    if near is None:
        val = _quad_plain(f, a, b)
        if val is not None:
            return val
        cuts = {a + (b - a) * 2.0 ** -k for k in range(1, depth)}
        cuts |= {b - (b - a) * 2.0 ** -k for k in range(2, depth)}
    elif near == "a":
        cuts = {a + (b - a) * 2.0 ** -k for k in range(1, depth)}
    else:
        cuts = {b - (b - a) * 2.0 ** -k for k in range(1, depth)}
    cuts = sorted(cuts | {a, b})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return sum(integrate.quad(f, lo, hi, epsabs=0.0, epsrel=QUAD_TOL, limit=200)[0]
                   for lo, hi in zip(cuts[:-1], cuts[1:]) if hi > lo)


def _near_depth(width: float, dist: float) -> int:
    """Halvings needed to resolve a pole at distance ``dist`` from an end."""
    if not math.isfinite(dist) or dist <= 0:
        return 60
    return int(min(60, max(4, math.ceil(math.log2(max(width, 1e-300) / (1e-2 * dist))))))


def _piece_integral(shape: BoundaryShape, pc: Piece, g, t=None):
    """``int_{u0}^{u1} g(u, alpha(u)) du`` over a curve piece.

    A declared local exponent ``a < 1`` at ``u = 0`` (``alpha ~ C u^a``) or
    at ``u = 1`` (``alpha(1) - alpha ~ C (1-u)^a``) triggers the substitution
    ``u = s^(1/a)`` (resp. ``1 - u = s^(1/a)``), which straightens ``alpha``
    against the new variable and removes the integrable endpoint blow-up.
    If ``t`` is given and lies close to ``alpha`` at an end of the piece,
    the quadrature is refined towards that end.
    """
    u0, u1 = float(pc.u0), float(pc.u1)
    v0, v1 = float(pc.v0), float(pc.v1)
    f = pc.func
    a0 = shape.exponent_at(0) if u0 == 0.0 else None
    a1 = shape.exponent_at(1) if u1 == 1.0 else None
    span = max(v1 - v0, 1e-300)
    d0 = abs(t - v0) if t is not None else math.inf
    d1 = abs(t - v1) if t is not None else math.inf
    near0 = d0 < 0.05 * span
    near1 = d1 < 0.05 * span
    if (a0 is None or a0 >= 1) and (a1 is None or a1 >= 1) and not (near0 and near1):
        if near0:
            return _quad(lambda u: g(u, f(u)), u0, u1, "a", _near_depth(u1 - u0, d0))
        if near1:
            return _quad(lambda u: g(u, f(u)), u0, u1, "b", _near_depth(u1 - u0, d1))
        return _quad(lambda u: g(u, f(u)), u0, u1)
    mid = 0.5 * (u0 + u1)
    total = 0.0
    if a0 is not None and a0 < 1:
        m = 1.0 / a0
        total += _quad(lambda s: g(s**m, f(s**m)) * m * s ** (m - 1), 0.0, mid ** a0,
                       "a" if near0 else None)
    else:
        total += _quad(lambda u: g(u, f(u)), u0, mid,
                       "a" if near0 else None, _near_depth(mid - u0, d0))
    if a1 is not None and a1 < 1:
        m = 1.0 / a1

        def h(s):
            u = 1.0 - s**m
            return g(u, f(u)) * m * s ** (m - 1)

        total += _quad(h, 0.0, (1.0 - mid) ** a1, "a" if near1 else None)
    else:
        total += _quad(lambda u: g(u, f(u)), mid, u1,
                       "b" if near1 else None, _near_depth(u1 - mid, d1))
    return total


# --------------------------------------------------------------------------
# the resolvent


class Resolvent:
    """Evaluators for ``x(t)``, ``D = x'/x`` and ``D'`` on every real branch.

    Piecewise-linear stretches use the closed product form (one factor per
    segment, exponent ``1/p``; jumps contribute no factor).  Curved stretches
    are integrated numerically.  Branches: ``"generic-I"`` for ``t > alpha(1)``,
    ``"generic-II"`` for ``t < 0``, ``"frozen"`` inside slope-1 stretches,
    ``"gap"`` inside jumps.  Anything else is a cut.
    """

    def __init__(self, shape: BoundaryShape):
        self.shape = shape
        self.alpha1 = float(shape.alpha1)
        self.linear = []     # (theta0, theta1, 1/p)
        self.curves = []
        self.intervals = []  # (lo, hi, branch, piece index)
        n = len(shape.pieces)
        for k, pc in enumerate(shape.pieces):
            lo, hi = float(pc.v0), float(pc.v1)
            if pc.kind == "linear":
                self.linear.append((lo, hi, 1.0 / float(pc.slope)))
                if pc.frozen:
                    if k == 0:
                        kind = "edge-freeze-left"
                    elif k == n - 1:
                        kind = "edge-freeze-right"
                    else:
                        kind = "frozen-R"
                    self.intervals.append((lo, hi, kind, k))
            elif pc.kind == "jump":
                self.intervals.append((lo, hi, "gap", k))
            else:
                self.curves.append(pc)
        self._th0 = np.array([c[0] for c in self.linear])
        self._th1 = np.array([c[1] for c in self.linear])
        self._ip = np.array([c[2] for c in self.linear])
        self.breakpoints = sorted({float(v) for v in shape.theta})

    # -- branch bookkeeping ---------------------------------------------

    def branch(self, t: float) -> str:
        if t > self.alpha1:
            return "generic-I"
        if t < 0:
            return "generic-II"
        for lo, hi, kind, _ in self.intervals:
            if lo < t < hi:
                return kind
        raise BranchError(f"x(t) has no real continuation at t={t}")

    def is_defined(self, t: float) -> bool:
        try:
            self.branch(t)
            return True
        except BranchError:
            return False

    def sign(self, t: float) -> float:
        kind = self.branch(t)
        return -1.0 if kind in ("frozen-R", "edge-freeze-left", "edge-freeze-right") else 1.0

    # -- scalar evaluation ----------------------------------------------

    def _lin_log(self, t: float) -> float:
        total = 0.0
        for lo, hi, ip in self.linear:
            d0 = t - lo
            r = (t - hi) / d0
            if r > 0.5:
                total += ip * math.log1p(-(hi - lo) / d0)
            else:
                total += ip * (math.log(abs(t - hi)) - math.log(abs(d0)))
        return total

    def log_abs(self, t: float) -> float:
        """``log|x(t)|``."""
        self.branch(t)
        total = self._lin_log(t)
        for pc in self.curves:
            total -= _piece_integral(self.shape, pc, lambda u, a: 1.0 / (t - a), t)
        return total

    def D(self, t: float) -> float:
        """``x'(t)/x(t) = int du / (t - alpha)^2`` (continued analytically)."""
        self.branch(t)
        total = 0.0
        for lo, hi, ip in self.linear:
            total += ip * (hi - lo) / ((t - hi) * (t - lo))
        for pc in self.curves:
            total += _piece_integral(self.shape, pc, lambda u, a: 1.0 / (t - a) ** 2, t)
        return total

    def Dprime(self, t: float) -> float:
        self.branch(t)
        total = 0.0
        for lo, hi, ip in self.linear:
            total += ip * (1.0 / (t - lo) ** 2 - 1.0 / (t - hi) ** 2)
        for pc in self.curves:
            total -= 2.0 * _piece_integral(self.shape, pc, lambda u, a: 1.0 / (t - a) ** 3, t)
        return total

    def x(self, t: float) -> float:
        return self.sign(t) * math.exp(self.log_abs(t))

    def xprime(self, t: float) -> float:
        return self.x(t) * self.D(t)

    def one_minus_x(self, t: float) -> float:
        L = self.log_abs(t)
        return -math.expm1(L) if self.sign(t) > 0 else 1.0 + math.exp(L)

    def state(self, t: float) -> dict:
        """All derived quantities at ``t`` in one pass."""
        s = self.sign(t)
        L = self.log_abs(t)
        D = self.D(t)
        x = s * math.exp(L)
        omx = -math.expm1(L) if s > 0 else 1.0 + math.exp(L)
        X = t - omx / D
        Y = omx * omx / (x * D)
        slope = 1.0 - s * math.exp(-L)
        return dict(t=t, x=x, logx=L, sign=s, D=D, omx=omx, X=X, Y=Y, slope=slope)

    def cusp_function(self, t: float) -> float:
        """``K = (1+x) D^2 + (1-x) D'``; ``dX/dt = K/D^2``."""
        s = self.sign(t)
        L = self.log_abs(t)
        x = s * math.exp(L)
        omx = -math.expm1(L) if s > 0 else 1.0 + math.exp(L)
        D = self.D(t)
        return (1.0 + x) * D * D + omx * self.Dprime(t)

    # -- vectorized fast path (piecewise-linear shapes) ------------------

    def states(self, ts) -> dict:
        ts = np.asarray(ts, dtype=float)
        if self.curves:
            rows = [self.state(float(t)) for t in ts]
            return {k: np.array([r[k] for r in rows]) for k in rows[0]} if rows else {}
        signs = np.array([self.sign(float(t)) for t in ts])
        T = ts[:, None]
        d0 = T - self._th0
        r = (T - self._th1) / d0
        with np.errstate(divide="ignore", invalid="ignore"):
            near = np.log1p(-(self._th1 - self._th0) / d0)
            far = np.log(np.abs(T - self._th1)) - np.log(np.abs(d0))
        L = np.sum(self._ip * np.where(r > 0.5, near, far), axis=1)
        D = np.sum(self._ip * (self._th1 - self._th0) / ((T - self._th1) * d0), axis=1)
        x = signs * np.exp(L)
        omx = np.where(signs > 0, -np.expm1(L), 1.0 + np.exp(L))
        X = ts - omx / D
        Y = omx * omx / (x * D)
        slope = 1.0 - signs * np.exp(-L)
        return dict(t=ts, x=x, logx=L, sign=signs, D=D, omx=omx, X=X, Y=Y, slope=slope)

    # -- exact breakpoints ------------------------------------------------

    def log_abs_limit(self, t: float) -> float:
        """``log|x|`` at a breakpoint of a piecewise-linear shape (may be +-inf).

        Uses the grouped form ``sum_j (1/p_j - 1/p_{j+1}) log|t - theta_j|``.
        """
        if self.curves:
            raise BranchError("breakpoint limits need a piecewise-linear shape")
        coef = {}
        for lo, hi, ip in self.linear:
            coef[hi] = coef.get(hi, 0.0) + ip
            coef[lo] = coef.get(lo, 0.0) - ip
        total = 0.0
        for th, c in coef.items():
            if abs(c) < 1e-15:
                continue
            d = abs(t - th)
            total += c * (math.log(d) if d > 0 else -math.inf)
        return total


def resolvent(shape: BoundaryShape) -> Resolvent:
    return Resolvent(shape)


def curve_point(res: Resolvent, t: float):
    """``(X, Y)`` on the envelope for parameter ``t``."""
    st = res.state(t)
    if st["D"] == 0 or not math.isfinite(st["D"]):
        raise BranchError(f"x'(t) vanishes or diverges at t={t}")
    return st["X"], st["Y"]


@dataclass(frozen=True)
class TangentLine:
    t: float
    slope: float
    kind: str

    def residual(self, X, Y, x):
        return x * Y + (1 - x) * (X - self.t)


def tangent_at(res: Resolvent, t: float) -> TangentLine:
    """Tangent line crossing the X-axis at ``t`` with slope ``-(1-x)/x``.

    At exact breakpoints of piecewise-linear shapes the one-sided limit of
    the slope is returned (e.g. 1 at the left end of a frozen stretch).
    """
    try:
        kind = res.branch(t)
        slope = 1.0 - res.sign(t) * math.exp(-res.log_abs(t))
    except BranchError:
        if not any(abs(t - th) < 1e-15 for th in res.breakpoints):
            raise
        L = res.log_abs_limit(t)
        if L == math.inf:
            slope, kind = 1.0, "limit"
        elif L == -math.inf:
            slope, kind = math.inf, "limit"
        else:
            raise
    return TangentLine(t, slope, kind)


# --------------------------------------------------------------------------
# special points


@dataclass(frozen=True)
class SpecialPoint:
    X: float
    Y: float
    slope: float
    case: str


@dataclass(frozen=True)
class SpecialPoints:
    X1Y1: SpecialPoint
    X0Y0: SpecialPoint
    XinfYinf: SpecialPoint
    flags: dict = field(default_factory=dict)


def _slope_class(s) -> str:
    if s is None:
        return "unknown"
    s = float(s)
    if math.isinf(s):
        return "infinite"
    if abs(s - 1.0) < 1e-9:
        return "one"
    return "steep"


def _end_exponent(shape: BoundaryShape, end: int) -> float:
    """Declared local exponent, or a numerical estimate from two scales."""
    a = shape.exponent_at(end)
    if a is not None:
        return float(a)
    f = shape.alpha
    a1 = float(shape.alpha1)
    h1, h2 = 1e-6, 1e-8
    if end == 0:
        v1, v2 = float(f(h1)), float(f(h2))
    else:
        v1, v2 = a1 - float(f(1 - h1)), a1 - float(f(1 - h2))
    return math.log(v1 / v2) / math.log(h1 / h2)


def _integrate_shape(shape: BoundaryShape, g_linear, g_curve):
    total = 0.0
    for pc in shape.pieces:
        if pc.kind == "linear":
            total += g_linear(pc)
        elif pc.kind == "curve":
            total += _piece_integral(shape, pc, g_curve)
    return total


def special_points(shape: BoundaryShape) -> SpecialPoints:
    """Apex ``(X1, 1)``, right end ``(X0, Y0)`` and left end ``(Xinf, Yinf)``."""
    mu1 = float(density_of(shape, 1).moments[1])
    a1 = float(shape.alpha1)
    apex = SpecialPoint(0.5 + mu1, 1.0, 0.0, "apex")
    flags = {}

    # right end
    first, last = shape.pieces[0], shape.pieces[-1]
    s1 = shape.slope_at(1)
    cls1 = _slope_class(s1)
    flags["slope1"] = cls1
    if cls1 == "steep":
        X0 = SpecialPoint(a1, 0.0, math.inf, "alpha'(1)>1")
    elif cls1 == "one":
        def lin(pc):
            if pc is last and pc.frozen:
                return 0.0
            p = float(pc.slope)
            return (math.log((a1 - float(pc.v0)) / (a1 - float(pc.v1))) / p
                    - math.log((1 - float(pc.u0)) / (1 - float(pc.u1))))

        def cur(u, a):
            return 1.0 / (a1 - a) - 1.0 / (1.0 - u)

        Y0 = math.exp(_integrate_shape(shape, lin, cur))
        X0 = SpecialPoint(a1, Y0, math.inf, "alpha'(1)=1")
    else:
        expo = _end_exponent(shape, 1)
        I1 = _integrate_shape(
            shape,
            lambda pc: math.log((a1 - float(pc.v0)) / (a1 - float(pc.v1))) / float(pc.slope),
            lambda u, a: 1.0 / (a1 - a))
        slope = -math.expm1(I1)
        flags["I1"] = I1
        if expo < 0.5:
            I2 = _integrate_shape(
                shape,
                lambda pc: (1 / (a1 - float(pc.v1)) - 1 / (a1 - float(pc.v0))) / float(pc.slope),
                lambda u, a: 1.0 / (a1 - a) ** 2)
            flags["I2"] = I2
            e = math.exp(-I1)
            X0 = SpecialPoint(a1 - (1 - e) / I2, (1 - e) ** 2 / (I2 * e), slope,
                              "alpha'(1)=inf, I2 finite")
        else:
            flags["I2"] = math.inf
            X0 = SpecialPoint(a1, 0.0, slope, "alpha'(1)=inf, I2 divergent")

    # left end
    s0 = shape.slope_at(0)
    cls0 = _slope_class(s0)
    flags["slope0"] = cls0
    if cls0 == "steep":
        Xi = SpecialPoint(0.0, 0.0, 1.0, "alpha'(0)>1")
    elif cls0 == "one":
        def lin0(pc):
            if pc is first and pc.frozen:
                return 0.0
            p = float(pc.slope)
            return (math.log(float(pc.u1) / float(pc.u0))
                    - math.log(float(pc.v1) / float(pc.v0)) / p)

        def cur0(u, a):
            return 1.0 / u - 1.0 / a

        v = math.exp(-_integrate_shape(shape, lin0, cur0))
        Xi = SpecialPoint(v, v, 1.0, "alpha'(0)=1")
    else:
        expo = _end_exponent(shape, 0)
        J1 = _integrate_shape(
            shape,
            lambda pc: math.log(float(pc.v1) / float(pc.v0)) / float(pc.slope),
            lambda u, a: 1.0 / a)
        slope = -math.expm1(-J1)
        flags["J1"] = J1
        if expo < 0.5:
            J2 = _integrate_shape(
                shape,
                lambda pc: (1 / float(pc.v0) - 1 / float(pc.v1)) / float(pc.slope),
                lambda u, a: 1.0 / a**2)
            flags["J2"] = J2
            e = math.exp(J1)
            Xi = SpecialPoint((e - 1) / J2, (e - 1) ** 2 / (J2 * e), slope,
                              "alpha'(0)=inf, J2 finite")
        else:
            flags["J2"] = math.inf
            Xi = SpecialPoint(0.0, 0.0, slope, "alpha'(0)=inf, J2 divergent")
    return SpecialPoints(apex, X0, Xi, flags)


# --------------------------------------------------------------------------
# portions


@dataclass
class ArcticPortion:
    """One parameter interval of the envelope with its samples.

    ``samples`` has columns ``t, x, X, Y, slope``.  ``variable`` names the
    coordinate that was sampled uniformly: ``"x"`` (generic-I), ``"1/x"``
    (generic-II) or ``"t"`` (bounded portions).
    """

    kind: str
    t_domain: tuple
    samples: np.ndarray
    conjectured: bool
    variable: str
    resolvent: Resolvent = field(repr=False, compare=False)
    cusps: list = field(default_factory=list)

    @property
    def t(self):
        return self.samples[:, 0]

    @property
    def x(self):
        return self.samples[:, 1]

    @property
    def X(self):
        return self.samples[:, 2]

    @property
    def Y(self):
        return self.samples[:, 3]

    @property
    def slope(self):
        return self.samples[:, 4]

    def tangency_residual(self) -> float:
        r = self.x * self.Y + (1 - self.x) * (self.X - self.t)
        return float(np.max(np.abs(r))) if len(r) else 0.0


def _x_limits(res: Resolvent, shape: BoundaryShape, sp: Optional[SpecialPoints] = None):
    """``x(alpha(1)+)`` and ``x(0-)`` (0 and inf unless an end slope is infinite)."""
    lo, hi = 0.0, math.inf
    if _slope_class(shape.slope_at(1)) == "infinite":
        sp = sp or special_points(shape)
        lo = math.exp(-sp.flags["I1"])
    if _slope_class(shape.slope_at(0)) == "infinite":
        sp = sp or special_points(shape)
        hi = math.exp(sp.flags["J1"])
    return lo, hi


class _LogTable:
    """``log|x|`` tabulated on a unit-spaced grid in ``tau``, filled lazily.

    ``t = alpha(1) + e^tau`` (side I) or ``t = -e^tau`` (side II); ``log|x|``
    increases with ``tau`` on side I and decreases on side II.
    """

    def __init__(self, res: Resolvent, side: str):
        self.res, self.side = res, side
        a1 = res.alpha1
        base = max(a1, 1.0) if side == "I" else 1.0
        self.taus = np.arange(math.log(base * 1e-14), 61.0, 1.0)
        self.vals = {}

    def t(self, tau):
        return self.res.alpha1 + math.exp(tau) if self.side == "I" else -math.exp(tau)

    def g(self, tau, target):
        L = self.res.log_abs(self.t(tau))
        return L - target if self.side == "I" else target - L

    def at(self, k, target):
        if k not in self.vals:
            self.vals[k] = self.res.log_abs(self.t(float(self.taus[k])))
        L = self.vals[k]
        return L - target if self.side == "I" else target - L

    def bracket(self, target):
        """Adjacent grid indices with a sign change, by bisection on the table."""
        lo, hi = 0, len(self.taus) - 1
        if self.at(lo, target) > 0 or self.at(hi, target) < 0:
            return None
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.at(mid, target) < 0:
                lo = mid
            else:
                hi = mid
        return lo, hi


def _invert(res: Resolvent, target_log: float, side: str, table=None) -> Optional[float]:
    """Solve ``log|x(t)| = target_log`` on a generic branch.

    ``t = alpha(1) + e^tau`` (side I) or ``t = -e^tau`` (side II), so that
    the bracket spans many decades.
    """
    if table is None:
        cache = res.__dict__.setdefault("_tables", {})
        table = cache.setdefault(side, _LogTable(res, side))
    br = table.bracket(target_log)
    if br is None:
        return None
    lo, hi = float(table.taus[br[0]]), float(table.taus[br[1]])
    tau = optimize.brentq(lambda u: table.g(u, target_log), lo, hi, xtol=1e-15,
                          rtol=4 * np.finfo(float).eps, maxiter=200)
    return table.t(tau)


def _cos_grid(a: float, b: float, N: int):
    j = np.arange(1, N + 1)
    return a + (b - a) * 0.5 * (1 - np.cos(np.pi * j / (N + 1)))


def _sample_generic(res, shape, side, N, sp=None):
    xlo, xhi = _x_limits(res, shape, sp)
    if side == "I":
        sig = xlo + (1 - xlo) * np.arange(1, N + 1) / (N + 1)
        targets = np.log(sig)
    else:
        slo = 0.0 if math.isinf(xhi) else 1.0 / xhi
        sig = slo + (1 - slo) * np.arange(1, N + 1) / (N + 1)
        targets = -np.log(sig)
    ts = []
    table = res.__dict__.setdefault("_tables", {}).setdefault(side, _LogTable(res, side))
    for tl in targets:
        t = _invert(res, float(tl), side, table)
        if t is not None:
            ts.append(t)
    return np.array(sorted(ts))


def _build(res, kind, dom, ts, conjectured, variable):
    if len(ts) == 0:
        samples = np.zeros((0, 5))
    else:
        st = res.states(ts)
        samples = np.column_stack([st["t"], st["x"], st["X"], st["Y"], st["slope"]])
    por = ArcticPortion(kind, dom, samples, conjectured, variable, res)
    por.cusps = cusps(por)
    return por


def portions(shape: BoundaryShape, N: int = PORTION_SAMPLES) -> list:
    """All curve portions, ordered by increasing ``t``.

    Always contains ``generic-II`` (``t < 0``) and ``generic-I``
    (``t > alpha(1)``).  Each slope-1 stretch adds a frozen portion (edge
    ones are flagged as proven, interior ones as conjectured) and each jump
    adds a conjectured gap portion.
    """
    res = Resolvent(shape)
    sp = special_points(shape) if not shape.is_piecewise_linear else None
    out = [_build(res, "generic-II", (-math.inf, 0.0),
                  _sample_generic(res, shape, "II", N, sp), False, "1/x")]
    for lo, hi, kind, _ in sorted(res.intervals):
        conj = kind in ("frozen-R", "gap")
        out.append(_build(res, kind, (lo, hi), _cos_grid(lo, hi, N), conj, "t"))
    out.append(_build(res, "generic-I", (res.alpha1, math.inf),
                      _sample_generic(res, shape, "I", N, sp), False, "x"))
    return out


# --------------------------------------------------------------------------
# cusps, tangencies, checks


def cusps(portion: ArcticPortion, tol: float = 1e-10) -> list:
    """Parameters where ``dX/dt`` and ``dY/dt`` vanish together (sign change of K)."""
    res = portion.resolvent
    ts = portion.t
    if len(ts) < 2:
        return []
    K = np.array([res.cusp_function(float(t)) for t in ts])
    out = []
    for i in range(len(ts) - 1):
        if K[i] == 0:
            out.append(float(ts[i]))
        elif K[i] * K[i + 1] < 0:
            out.append(optimize.brentq(res.cusp_function, float(ts[i]), float(ts[i + 1]),
                                       xtol=tol))
    return out


def axis_tangencies(portion: ArcticPortion, tol: float = 1e-12) -> list:
    """Points where the portion touches ``Y = 0`` with a horizontal tangent (``x = 1``)."""
    res = portion.resolvent
    ts = portion.t
    lx = np.array([res.log_abs(float(t)) for t in ts])
    out = []
    for i in range(len(ts) - 1):
        if portion.x[i] > 0 and lx[i] * lx[i + 1] < 0:
            t0 = optimize.brentq(res.log_abs, float(ts[i]), float(ts[i + 1]), xtol=tol)
            out.append((t0, t0))
    return out


def _sigma_to_t(res: Resolvent, portion: ArcticPortion, sig: float):
    if portion.variable == "x":
        return _invert(res, math.log(sig), "I")
    if portion.variable == "1/x":
        return _invert(res, -math.log(sig), "II")
    return sig


def _t_to_sigma(portion: ArcticPortion, i: int) -> float:
    if portion.variable == "x":
        return float(portion.x[i])
    if portion.variable == "1/x":
        return 1.0 / float(portion.x[i])
    return float(portion.t[i])


def legendre_check(portion: ArcticPortion, rel_step: float = 2e-2,
                   max_s: float = 1e3) -> float:
    """Max over interior samples of ``|s + dX/dY|`` with ``s = x/(1-x)``.

    ``dX/dY`` is a five-point centred difference in the portion's sampling
    variable, evaluated afresh around each sample.  Samples where ``|s|``
    exceeds ``max_s`` (apex, vertical tangents) or where the stencil leaves
    the branch or is degenerate (``dY`` numerically zero) are skipped.
    """
    res = portion.resolvent
    n = len(portion.t)
    if n < 3:
        raise ValueError("need at least three samples")
    sigs = np.array([_t_to_sigma(portion, i) for i in range(n)])
    worst = 0.0
    for i in range(1, n - 1):
        x = portion.x[i]
        s = x / (1 - x)
        if not math.isfinite(s) or abs(s) > max_s:
            continue
        sg = sigs[i]
        h = rel_step * min(sg - sigs[i - 1], sigs[i + 1] - sg) * 2
        pts = []
        ok = True
        for k in (-2, -1, 1, 2):
            t = _sigma_to_t(res, portion, sg + k * h)
            if t is None or not res.is_defined(t):
                ok = False
                break
            st = res.state(t)
            pts.append((st["X"], st["Y"]))
        if not ok:
            continue
        (Xm2, Ym2), (Xm1, Ym1), (Xp1, Yp1), (Xp2, Yp2) = pts
        dX = (Xm2 - 8 * Xm1 + 8 * Xp1 - Xp2)
        dY = (Ym2 - 8 * Ym1 + 8 * Yp1 - Yp2)
        if abs(dY) < 1e-13 * max(1.0, abs(dX)):
            continue
        worst = max(worst, abs(s + dX / dY))
    return worst


@dataclass(frozen=True)
class MomentsCheck:
    max_deviation: float
    deviations: tuple
    fitted: tuple
    residual: float


def moments_check(shape: BoundaryShape, K: int, t_min: float = 1e2, t_max: float = 1e4,
                  degree: int = 8, npts: int = 200) -> MomentsCheck:
    """Fit ``-log x(t)`` at large ``t`` by ``sum_k c_k / t^(k+1)`` and compare with moments.

    The fit always uses ``degree + 1`` terms; the deviations of the first
    ``K + 1`` coefficients from the exact moments are reported.
    """
    if not 0 <= K <= degree:
        raise ValueError(f"K must lie in [0, {degree}]")
    res = Resolvent(shape)
    ts = np.geomspace(t_min, t_max, npts)
    w = 1.0 / ts
    g = np.array([-res.log_abs(float(t)) for t in ts]) / w   # = sum mu_k w^k
    scale = 1.0 / t_min
    V = np.vander(w / scale, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, g, rcond=None)
    c = coef / scale ** np.arange(degree + 1)
    mom = density_of(shape, degree).moments
    devs = tuple(abs(float(c[k]) - float(mom[k])) for k in range(K + 1))
    resid = float(np.max(np.abs(V @ coef - g) * w))
    return MomentsCheck(max(devs), devs, tuple(float(v) for v in c), resid)


def to_triangular(portion_or_points):
    """Map ``(X, Y) -> (X - Y/2, sqrt(3) Y / 2)``.

    Accepts an :class:`ArcticPortion` (returns an ``(N, 2)`` array) or a
    pair / array of points.
    """
    if isinstance(portion_or_points, ArcticPortion):
        X, Y = portion_or_points.X, portion_or_points.Y
    else:
        P = np.asarray(portion_or_points, dtype=float)
        if P.ndim == 1:
            return np.array([P[0] - P[1] / 2, math.sqrt(3) * P[1] / 2])
        X, Y = P[:, 0], P[:, 1]
    return np.column_stack([X - Y / 2, math.sqrt(3) / 2 * Y])


def symmetry_residual(shape: BoundaryShape, ts) -> float:
    """Max residual of the reflection involution ``t -> alpha(1) - t``."""
    res = Resolvent(shape)
    a1 = res.alpha1
    worst = 0.0
    for t in ts:
        p, q = res.state(float(t)), res.state(a1 - float(t))
        worst = max(worst, abs(q["X"] - (a1 - p["X"] + p["Y"])), abs(q["Y"] - p["Y"]),
                    abs(p["logx"] + q["logx"]))
    return worst


# --------------------------------------------------------------------------
# right-edge freezing through the complementary profile


def _edge_data(shape: BoundaryShape):
    last = shape.pieces[-1]
    if not (last.kind == "linear" and last.frozen):
        raise ValueError("shape has no frozen right edge")
    a1 = float(shape.alpha1)
    mu = a1 - 1.0
    rho = float(last.u1 - last.u0)
    return mu, rho


def hat_y(shape: BoundaryShape, t: float) -> float:
    """``y(t) = exp(-int_0^mu du / (t - beta(u)))`` from the complementary profile."""
    prof = complementary_profile(shape)
    total = 0.0
    for kind, w0, w1, v0, v1, q in prof:
        if kind != "linear":
            continue
        v0, v1, q = float(v0), float(v1), float(q)
        if not t > v1:
            raise BranchError(f"t={t} lies on the complementary cut")
        total += math.log1p(-(v1 - v0) / (t - v0)) / q
    return math.exp(total)


def hat_x(shape: BoundaryShape, t: float) -> float:
    """``x(t) = -(1 + mu - t) / (t y(t))`` on the frozen right edge."""
    mu, rho = _edge_data(shape)
    if not 1 + mu - rho < t < 1 + mu:
        raise BranchError(f"t={t} outside the right-edge interval")
    return -(1 + mu - t) / (t * hat_y(shape, t))


# --------------------------------------------------------------------------
# export


def portions_to_csv(parts) -> str:
    lines = ["kind,conjectured,t,x,X,Y,slope"]
    for p in parts:
        for row in p.samples:
            t, x, X, Y, s = (repr(float(v)) for v in row)
            lines.append(f"{p.kind},{str(p.conjectured).lower()},{t},{x},{X},{Y},{s}")
    return "\n".join(lines) + "\n"
