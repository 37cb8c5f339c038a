import math
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from arcticpaths.arctic import hat_x, resolvent, special_points
from arcticpaths.asymptotics import (ActionBundle, S0, S0_hat, S0_tilde, S1, S1_hat, S1_tilde,
                                     convergence_study, dS0_dt, dS0_hat_dt, dS0_tilde_dt,
                                     exit_solution_hat, exit_solution_I, exit_solution_II,
                                     log_fraction, log_integral, rate_function, saddle_t,
                                     saddle_t_tilde, xlogx)
from arcticpaths.boundary import BoundaryShape, realize
from arcticpaths.onepoint import H
from arcticpaths.shapefile import load_shape

SHAPES = Path(__file__).resolve().parent.parent / "shapes"
P3 = BoundaryShape.linear(3)


def shape(name):
    return load_shape(SHAPES / f"{name}.shape")


def test_log_integral_matches_quadrature():
    for sh, alpha in [(P3, lambda u: 3 * u), (shape("quadratic"), lambda u: u + u * u)]:
        for t in (-2.0, -0.3, 2.5, 7.0):
            if 0 <= t <= float(sh.alpha1):
                continue
            ref, _ = integrate.quad(lambda u: math.log(abs(t - alpha(u))), 0, 1, epsabs=1e-13)
            assert log_integral(sh, t) == pytest.approx(ref, abs=1e-11)
    with pytest.raises(ValueError):
        log_integral(P3, 1.0)


def test_xlogx_and_log_fraction():
    assert xlogx(0) == 0 and xlogx(1) == 0
    assert log_fraction(F(1, 3)) == pytest.approx(-math.log(3))
    assert log_fraction(F(0)) == -math.inf
    big = F(10 ** 400, 3 * 10 ** 399)
    assert log_fraction(big) == pytest.approx(math.log(10 / 3))


# -- family I --------------------------------------------------------------

def test_saddle_examples():
    assert saddle_t(P3, 2.0).diverged
    assert saddle_t(P3, 1.7).t == math.inf
    sad = saddle_t(P3, 2.5)
    assert not sad.diverged and sad.t > 3
    assert exit_solution_I(P3, sad.t)[0] == pytest.approx(2.5, abs=1e-9)
    near = saddle_t(P3, 2.999)
    assert 3 < near.t < 3.01
    with pytest.raises(ValueError):
        saddle_t(P3, 3.2)


@settings(max_examples=40)
@given(st.floats(2.02, 2.98))
def test_saddle_invariants(xi):
    res = resolvent(P3)
    sad = saddle_t(P3, xi, res)
    assert sad.t > 3
    # near alpha(1) the float spacing of t itself bounds the attainable residual
    floor = res.D(sad.t) * math.ulp(sad.t)
    assert abs(dS0_dt(P3, sad.t, xi, res)) < max(1e-12, floor)
    assert exit_solution_I(P3, sad.t, res)[0] == pytest.approx(xi, abs=1e-9)


@pytest.mark.parametrize("name", ["pure3", "gap", "reentrance", "quadratic"])
def test_forward_backward_consistency(name):
    sh = shape(name)
    res = resolvent(sh)
    X1, a1 = special_points(sh).X1Y1.X, res.alpha1
    for xi in np.linspace(X1 + 0.02, a1 - 0.02, 7):
        sad = saddle_t(sh, float(xi), res)
        assert exit_solution_I(sh, sad.t, res)[0] == pytest.approx(xi, abs=1e-9)


def test_action_gradient_vanishes():
    res = resolvent(P3)
    h = 1e-6
    for xi0 in (2.2, 2.5, 2.8):
        t = saddle_t(P3, xi0, res).t
        xi, z = exit_solution_I(P3, t, res)
        assert z >= 0
        f = lambda s: S0(P3, t, s) + S1(s, z)
        assert abs((f(xi + h) - f(xi - h)) / (2 * h)) < 1e-9


def test_exit_solution_tends_to_apex():
    xi, z = exit_solution_I(P3, 1e6)
    assert xi == pytest.approx(2.0, abs=1e-5)
    with pytest.raises(ValueError):
        exit_solution_I(P3, 2.0)


def test_S0_pure3_at_saddle_matches_direct_integral():
    for xi in (2.2, 2.5, 2.8):
        t = saddle_t(P3, xi).t
        direct, _ = integrate.quad(lambda u: math.log(t - 3 * u), 0, 1, epsabs=1e-13)
        want = -1 + (t + 1 - xi) * math.log(t + 1 - xi) - (t - xi) * math.log(t - xi) - direct
        assert S0(P3, t, xi) == pytest.approx(want, abs=1e-11)


def test_rate_function():
    rf = rate_function(P3, 100)
    assert rf(2.0) == 0.0 and rf(1.5) == 0.0
    assert rf(2.5) < 0
    assert rf.S0[0] == 0.0 and rf.xi[0] == pytest.approx(2.0)
    assert np.all(rf.S0[1:] < 0)
    assert np.all(np.diff(rf.xi) >= 0)
    # decays away from the apex
    assert rf(2.8) < rf(2.5) < rf(2.1) < 0
    assert abs(rf(2.0 + 1e-6)) < 1e-9


# -- family II ---------------------------------------------------------------

def test_family_II_saddle_and_gradient():
    res = resolvent(P3)
    for xi in (1.2, 1.5, 1.9):
        sad = saddle_t_tilde(P3, xi, res)
        assert sad.t < 0 and sad.residual < 1e-12
        xi2, z = exit_solution_II(P3, sad.t, res)
        assert xi2 == pytest.approx(xi, abs=1e-9)
        assert S0_tilde(P3, sad.t, xi) < 0
    assert saddle_t_tilde(P3, 2.0).diverged
    h = 1e-6
    for t in (-0.3, -2.0, -20.0):
        xi, z = exit_solution_II(P3, t, res)
        assert z >= 0
        f = lambda s: S0_tilde(P3, t, s) + S1_tilde(P3, s, z)
        assert abs((f(xi + h) - f(xi - h)) / (2 * h)) < 1e-8
        g = lambda u: S0_tilde(P3, u, xi)
        assert abs((g(t + h) - g(t - h)) / (2 * h) - dS0_tilde_dt(P3, t, xi, res)) < 1e-7
    with pytest.raises(ValueError):
        exit_solution_II(P3, 0.5)


def test_families_mirror_on_symmetric_shape():
    sh = shape("symmetric5")
    res = resolvent(sh)
    a1 = res.alpha1
    for t in a1 + np.geomspace(1e-2, 1e2, 15):
        xi1, _ = exit_solution_I(sh, t, res)
        xi2, _ = exit_solution_II(sh, a1 - t, res)
        assert xi1 + xi2 == pytest.approx(a1 + 1, abs=1e-12)


# -- hat family ----------------------------------------------------------------

def _edge(sh):
    a1 = float(sh.alpha1)
    rho = float(sh.pieces[-1].u1 - sh.pieces[-1].u0)
    return a1 - 1, rho


@pytest.mark.parametrize("name", ["symmetric5", "hexagon"])
def test_hat_solution(name):
    sh = shape(name)
    mu, rho = _edge(sh)
    lo, hi = 1 + mu - rho, 1 + mu
    for t in np.linspace(lo, hi, 9)[1:-1]:
        xh, w = exit_solution_hat(sh, t)
        x = hat_x(sh, t)
        assert w == pytest.approx(xh * x / (x - 1), abs=1e-12)
        assert xh == pytest.approx(t - mu - (t - 1 - mu) / x, abs=1e-12)
        assert w >= 0
        assert abs(dS0_hat_dt(sh, t, xh)) < 1e-12
        h = 1e-6
        f = lambda s: S0_hat(sh, t, s) + S1_hat(s, w)
        assert abs((f(xh + h) - f(xh - h)) / (2 * h)) < 1e-8
    with pytest.raises(ValueError):
        exit_solution_hat(sh, lo)


def test_hat_endpoint_meets_axis():
    sh = shape("symmetric5")
    mu, rho = _edge(sh)
    lo = 1 + mu - rho
    st_ = resolvent(sh).state(lo + 1e-12)
    assert st_["X"] == pytest.approx(lo, abs=1e-4)
    assert st_["Y"] == pytest.approx(0.0, abs=1e-4)


def test_action_bundle_dispatch():
    b = ActionBundle("I", P3)
    assert b.S0(4.0, 2.5) == S0(P3, 4.0, 2.5)
    assert b.S1(2.5, 0.3) == S1(2.5, 0.3)
    b2 = ActionBundle("II", P3)
    assert b2.S0(-1.0, 1.5) == S0_tilde(P3, -1.0, 1.5)
    assert b2.S1(1.5, 0.2) == S1_tilde(P3, 1.5, 0.2)
    sh = shape("symmetric5")
    b3 = ActionBundle("hat", sh)
    assert b3.S0(1.3, 0.2) == S0_hat(sh, 1.3, 0.2)
    assert b3.S1(0.4, 0.1) == S1_hat(0.4, 0.1)


# -- convergence -------------------------------------------------------------

def test_convergence_family_I():
    tab = convergence_study(P3, [20, 50, 100], xi_min=2.2, xi_max=2.8)
    d = tab.max_deviation
    assert d[20] > d[50] > d[100]
    assert d[100] < 0.05
    csv = tab.to_csv().splitlines()
    assert csv[0] == "family,n,xi,exact_log_over_n,predicted_S0,deviation"
    assert len(csv) == 1 + len(tab.rows)


def test_convergence_below_apex_vanishes():
    tab = convergence_study(P3, [40, 80], xi_min=0.5, xi_max=1.8)
    assert all(pred == 0.0 for *_, pred, _ in tab.rows)
    assert tab.max_deviation[80] < tab.max_deviation[40]
    assert tab.max_deviation[80] < 0.02


def test_convergence_family_II():
    tab = convergence_study(P3, [20, 50, 100], family="II", xi_min=1.2, xi_max=1.8)
    d = tab.max_deviation
    assert d[20] > d[50] > d[100]
    with pytest.raises(ValueError):
        convergence_study(P3, [10], family="hat")


def test_transition_sharpens_towards_apex():
    mids = []
    for n in (20, 50, 100):
        seq = realize(P3, n)
        mids.append(next(ell / n for ell in range(seq.an + 1) if H(seq, ell) < F(1, 2)))
    assert mids[0] > mids[1] > mids[2] > 2.0


def test_saddle_residual_is_reported():
    res = resolvent(P3)
    for xi in (2.2, 2.5, 2.9):
        sad = saddle_t(P3, xi, res)
        assert sad.residual == abs(dS0_dt(P3, sad.t, xi, res))
        assert sad.residual < 1e-12
