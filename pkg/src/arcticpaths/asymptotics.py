"""Saddle-point actions, most likely exit points and finite-n convergence.

Three tangent-method families are covered:

* ``I``   -- top exit, target moved north-west, ``t > alpha(1)``;
* ``II``  -- top exit for the complementary description, ``t < 0``;
* ``hat`` -- right-edge exit when the last stretch of ``alpha`` is frozen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .arctic import Resolvent, _edge_data, _piece_integral, hat_y, portions, special_points
from .boundary import BoundaryShape, complementary_profile, realize
from .onepoint import H, Htilde

__all__ = [
    "xlogx",
    "log_integral",
    "S0", "S1", "dS0_dt",
    "S0_tilde", "S1_tilde", "dS0_tilde_dt",
    "S0_hat", "S1_hat", "dS0_hat_dt",
    "ActionBundle",
    "SaddleResult",
    "saddle_t",
    "saddle_t_tilde",
    "RateFunction",
    "rate_function",
    "exit_solution_I",
    "exit_solution_II",
    "exit_solution_hat",
    "ConvergenceTable",
    "convergence_study",
    "log_fraction",
]


def xlogx(z: float) -> float:
    if z == 0:
        return 0.0
    return z * math.log(z)


def _F(z: float) -> float:
    """Antiderivative ``z log z - z`` of ``log z``."""
    return xlogx(z) - z


def log_integral(shape: BoundaryShape, t: float) -> float:
    """``int_0^1 log|t - alpha(u)| du`` for ``t`` outside ``[0, alpha(1)]``."""
    a1 = float(shape.alpha1)
    if 0 <= t <= a1:
        raise ValueError("t must lie outside [0, alpha(1)]")
    total = 0.0
    for pc in shape.pieces:
        if pc.kind == "linear":
            v0, v1, p = float(pc.v0), float(pc.v1), float(pc.slope)
            if t > a1:
                total += (_F(t - v0) - _F(t - v1)) / p
            else:
                total += (_F(v1 - t) - _F(v0 - t)) / p
        elif pc.kind == "curve":
            total += _piece_integral(shape, pc, lambda u, a: math.log(abs(t - a)), t)
    return total


# -- family I ---------------------------------------------------------------


def S0(shape, t, xi, res=None):
    return -1.0 + xlogx(t + 1 - xi) - xlogx(t - xi) - log_integral(shape, t)


def dS0_dt(shape, t, xi, res=None):
    res = res or Resolvent(shape)
    return math.log1p(1.0 / (t - xi)) + res.log_abs(t)


def S1(xi, z):
    return xlogx(xi + z) - xlogx(xi) - xlogx(z)


# -- family II --------------------------------------------------------------


def S0_tilde(shape, t, xi, res=None):
    return -1.0 - xlogx(xi - t - 1) + xlogx(xi - t) - log_integral(shape, t)


def dS0_tilde_dt(shape, t, xi, res=None):
    res = res or Resolvent(shape)
    return math.log(xi - t - 1) - math.log(xi - t) + res.log_abs(t)


def S1_tilde(shape, xi, z):
    a1 = float(shape.alpha1)
    return xlogx(a1 - xi) - xlogx(z) - xlogx(a1 - xi - z)


# -- hat family -------------------------------------------------------------


def _beta_log_integral(shape, c):
    """``int_0^mu log(c - beta(u)) du`` over the complementary profile."""
    total = 0.0
    for kind, w0, w1, v0, v1, q in complementary_profile(shape):
        if kind == "linear":
            total += (_F(c - float(v0)) - _F(c - float(v1))) / float(q)
    return total


def S0_hat(shape, t, xh):
    mu, _ = _edge_data(shape)
    return (_beta_log_integral(shape, 1 + mu) - _beta_log_integral(shape, t)
            + xlogx(t) - xlogx(t - mu - xh) - xlogx(1 + mu) + xlogx(1 - xh))


def dS0_hat_dt(shape, t, xh):
    mu, _ = _edge_data(shape)
    return math.log(hat_y(shape, t)) + math.log(t) - math.log(t - mu - xh)


def S1_hat(xh, w):
    return xlogx(xh) - xlogx(w) - xlogx(xh - w)


@dataclass(frozen=True)
class ActionBundle:
    """Action evaluators of one family, bound to a shape."""

    family: str
    shape: BoundaryShape

    def S0(self, t, xi):
        f = {"I": S0, "II": S0_tilde}.get(self.family)
        return f(self.shape, t, xi) if f else S0_hat(self.shape, t, xi)

    def S1(self, xi, z):
        if self.family == "I":
            return S1(xi, z)
        if self.family == "II":
            return S1_tilde(self.shape, xi, z)
        return S1_hat(xi, z)


# -- exit solutions ---------------------------------------------------------


def exit_solution_I(shape, t, res=None):
    res = res or Resolvent(shape)
    if not t > res.alpha1:
        raise ValueError(f"family I needs t > alpha(1) = {res.alpha1}")
    L = res.log_abs(t)
    x = math.exp(L)
    omx = -math.expm1(L)
    return t - x / omx, t * omx / x - 1.0


def exit_solution_II(shape, t, res=None):
    res = res or Resolvent(shape)
    if not t < 0:
        raise ValueError("family II needs t < 0")
    L = res.log_abs(t)
    x = math.exp(L)
    xm1 = math.expm1(L)
    return t + x / xm1, (res.alpha1 - t) * xm1 / x - 1.0


def exit_solution_hat(shape, t):
    mu, rho = _edge_data(shape)
    if not 1 + mu - rho < t <= 1 + mu:
        raise ValueError(f"hat family needs t in ({1 + mu - rho}, {1 + mu}]")
    y = hat_y(shape, t)
    xh = t - mu - t * y
    q = t * (1 - y)
    w = (q - mu) / (1 + mu - q) * (1 + mu - t)
    return xh, w


# -- saddle points ----------------------------------------------------------


@dataclass(frozen=True)
class SaddleResult:
    t: float
    residual: float
    diverged: bool


def saddle_t(shape: BoundaryShape, xi: float, res=None) -> SaddleResult:
    """Root of ``d/dt S0`` on ``(alpha(1), inf)`` for family I.

    ``diverged`` is set (and ``t = inf``) when ``xi <= X1``, where the saddle
    runs off to infinity.
    """
    res = res or Resolvent(shape)
    a1 = res.alpha1
    X1 = special_points(shape).X1Y1.X
    if xi <= X1:
        return SaddleResult(math.inf, 0.0, True)
    if xi >= a1:
        raise ValueError(f"xi={xi} outside (X1, alpha(1)) = ({X1}, {a1})")
    g = lambda tau: dS0_dt(shape, a1 + math.exp(tau), xi, res)
    grid = np.arange(math.log(a1 * 1e-15), 40.0, 1.0)
    vals = [g(tau) for tau in grid]
    for k in range(len(grid) - 1):
        if vals[k] < 0 <= vals[k + 1]:
            tau = optimize.brentq(g, grid[k], grid[k + 1], xtol=1e-15,
                                  rtol=4 * np.finfo(float).eps, maxiter=300)
            t = a1 + math.exp(tau)
            return SaddleResult(t, abs(dS0_dt(shape, t, xi, res)), False)
    raise ValueError(f"no saddle bracket for xi={xi}")


def saddle_t_tilde(shape: BoundaryShape, xi: float, res=None) -> SaddleResult:
    """Root of ``d/dt S0_tilde`` on ``(-inf, 0)`` for family II (``1 < xi < X1``)."""
    res = res or Resolvent(shape)
    X1 = special_points(shape).X1Y1.X
    if xi >= X1:
        return SaddleResult(-math.inf, 0.0, True)
    g = lambda tau: dS0_tilde_dt(shape, -math.exp(tau), xi, res)
    grid = np.arange(math.log(1e-15), 40.0, 1.0)
    vals = [g(tau) for tau in grid]
    for k in range(len(grid) - 1):
        if vals[k] * vals[k + 1] <= 0:
            tau = optimize.brentq(g, grid[k], grid[k + 1], xtol=1e-15,
                                  rtol=4 * np.finfo(float).eps, maxiter=300)
            t = -math.exp(tau)
            return SaddleResult(t, abs(dS0_tilde_dt(shape, t, xi, res)), False)
    raise ValueError(f"no saddle bracket for xi={xi}")


# -- rate function ----------------------------------------------------------


@dataclass
class RateFunction:
    """Samples of ``xi -> S0(t*(xi), xi)`` on ``[X1, alpha(1)]``."""

    shape: BoundaryShape
    xi: np.ndarray
    S0: np.ndarray
    t: np.ndarray

    def __call__(self, xi: float) -> float:
        sad = saddle_t(self.shape, xi)
        if sad.diverged:
            return 0.0
        return S0(self.shape, sad.t, xi)


def rate_function(shape: BoundaryShape, N: int = 200) -> RateFunction:
    res = Resolvent(shape)
    por = [p for p in portions(shape, N) if p.kind == "generic-I"][0]
    xs, ss, ts = [special_points(shape).X1Y1.X], [0.0], [math.inf]
    for t in por.t[::-1]:
        xi, _ = exit_solution_I(shape, float(t), res)
        xs.append(xi)
        ss.append(S0(shape, float(t), xi))
        ts.append(float(t))
    order = np.argsort(xs)
    return RateFunction(shape, np.array(xs)[order], np.array(ss)[order], np.array(ts)[order])


# -- finite-n convergence ---------------------------------------------------


def log_fraction(q) -> float:
    """Natural log of a positive rational without going through floats."""
    if q <= 0:
        return -math.inf
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass
class ConvergenceTable:
    family: str
    rows: list = field(default_factory=list)   # (family, n, xi, exact, predicted, deviation)
    max_deviation: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        out = ["family,n,xi,exact_log_over_n,predicted_S0,deviation"]
        for fam, n, xi, ex, pr, dv in self.rows:
            out.append(f"{fam},{n},{xi!r},{ex!r},{pr!r},{dv!r}")
        return "\n".join(out) + "\n"


def convergence_study(shape: BoundaryShape, n_list, family: str = "I",
                      xi_min=None, xi_max=None, margin: float = 0.02) -> ConvergenceTable:
    """Compare ``(1/n) log`` of exact one-point values with the saddle-point rate.

    Uses every integer exit position ``ell`` with ``xi = ell/n`` in the
    window; the prediction is evaluated at that exact ``xi``.
    """
    res = Resolvent(shape)
    X1 = special_points(shape).X1Y1.X
    a1 = res.alpha1
    if family == "I":
        lo = X1 + margin if xi_min is None else xi_min
        hi = a1 - margin if xi_max is None else xi_max
    elif family == "II":
        lo = 1 + margin if xi_min is None else xi_min
        hi = X1 - margin if xi_max is None else xi_max
    else:
        raise ValueError(f"unsupported family {family!r}")
    table = ConvergenceTable(family)
    for n in n_list:
        seq = realize(shape, n)
        worst = 0.0
        for ell in range(math.ceil(lo * n - 1e-9), math.floor(hi * n + 1e-9) + 1):
            xi = ell / n
            if family == "I":
                exact = log_fraction(H(seq, ell)) / n
                sad = saddle_t(shape, xi, res)
                pred = 0.0 if sad.diverged else S0(shape, sad.t, xi)
            else:
                exact = log_fraction(Htilde(seq, ell)) / n
                sad = saddle_t_tilde(shape, xi, res)
                pred = 0.0 if sad.diverged else S0_tilde(shape, sad.t, xi)
            dev = abs(exact - pred)
            worst = max(worst, dev)
            table.rows.append((family, n, xi, exact, pred, dev))
        table.max_deviation[n] = worst
    return table
