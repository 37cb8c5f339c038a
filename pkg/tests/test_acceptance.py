"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` (the summary lines are written to
the terminal even under output capture) or ``python tests/test_acceptance.py``.
"""
import math
import random
import sys
import time
from collections import Counter
from fractions import Fraction as F
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

sys.path.insert(0, str(Path(__file__).resolve().parent))

from arcticpaths import algebraic, arctic, asymptotics, exactcomb, onepoint, sampler  # noqa: E402
from arcticpaths.boundary import BoundaryShape, StartSequence, complement_of, realize  # noqa: E402
from arcticpaths.shapefile import load_shape  # noqa: E402
from conftest import random_sequence  # noqa: E402

SHAPES = Path(__file__).resolve().parent.parent / "shapes"
SEED = 20261016
RESULTS = {}


def shape(name):
    return load_shape(SHAPES / f"{name}.shape")


# --------------------------------------------------------------------------
# criteria


def crit_identity_chain():
    rng = random.Random(SEED)
    t0 = time.perf_counter()
    for _ in range(200):
        seq = random_sequence(rng, n_max=8, an_max=20)
        z = exactcomb.partition_product(seq)
        vals = (exactcomb.det_exact(exactcomb.lgv_A(seq)),
                exactcomb.det_exact(exactcomb.lgv_Atilde(seq)),
                exactcomb.det_exact(exactcomb.lgv_Ahat(seq)),
                exactcomb.partition_bform(seq))
        if any(v != z for v in vals):
            return False, f"mismatch at {seq}"
    dt = time.perf_counter() - t0
    return dt < 30, f"200 sequences in {dt:.2f}s"


def crit_pure_partition():
    for p in (2, 3, 5):
        for n in range(1, 11):
            seq = StartSequence(tuple(p * i for i in range(n + 1)))
            want = p ** (n * (n + 1) // 2)
            if exactcomb.partition_product(seq) != want or \
                    exactcomb.det_exact(exactcomb.lgv_A(seq)) != want:
                return False, f"p={p}, n={n}"
    return True, "p in {2,3,5}, n <= 10"


def crit_sum_rules():
    rng = random.Random(SEED + 3)
    checked = 0
    for _ in range(50):
        seq = random_sequence(rng, n_max=8, an_max=20)
        for ell in range(seq.n, seq.an + 1):
            if onepoint.H(seq, ell) + onepoint.Htilde(seq, ell - 1) != 1:
                return False, f"H sum rule at {seq}, ell={ell}"
            checked += 1
        if complement_of(seq).b:
            for ell in range(seq.n + 1):
                if onepoint.Hcheck(seq, ell) != 1 - onepoint.Hhat(seq, ell + 1):
                    return False, f"Hcheck rule at {seq}, ell={ell}"
                if onepoint.Hcheck(seq, ell) != onepoint.Hcheck_residue(seq, ell):
                    return False, f"Hcheck residue form at {seq}, ell={ell}"
                checked += 1
    return True, f"{checked} exact identities on 50 sequences"


def _guarded_sequences():
    for an in range(1, exactcomb.BRUTE_MAX_AN + 1):
        for n in range(1, min(exactcomb.BRUTE_MAX_N, an) + 1):
            for inner in combinations(range(1, an), n - 1):
                yield StartSequence((0, *inner, an))


def crit_oracles():
    count = 0
    for seq in _guarded_sequences():
        for ell in range(seq.an + 1):
            if onepoint.H(seq, ell) * exactcomb.det_exact(exactcomb.lgv_A(seq)) != \
                    _det_Aprime(seq, ell):
                return False, f"H at {seq}, ell={ell}"
        if complement_of(seq).b:
            for ell in range(seq.n + 2):
                if onepoint.Hhat(seq, ell) != onepoint.Hhat_det_oracle(seq, ell):
                    return False, f"Hhat at {seq}, ell={ell}"
        count += 1
    return True, f"all {count} guarded sequences"


def _det_Aprime(seq, ell):
    n = seq.n
    A = exactcomb.lgv_A(seq)
    return exactcomb.det_exact([row[:n] + [exactcomb.binom(ai + n - ell, n)]
                                for row, ai in zip(A, seq.a)])


def crit_curves():
    r2 = algebraic.max_residual(algebraic.pure2, arctic.portions(BoundaryShape.linear(2), 400))
    r3 = algebraic.max_residual(algebraic.pure3, arctic.portions(BoundaryShape.linear(3), 400))
    r32 = algebraic.max_residual(algebraic.pure3_2,
                                 arctic.portions(BoundaryShape.linear(F(3, 2)), 400))
    a, b, c = F(1, 3), 1, F(2, 3)
    re = algebraic.max_residual(algebraic.hexagon_ellipse(a, b, c),
                                arctic.portions(BoundaryShape.hexagon(a, b, c), 400))
    ok = r2 < 1e-9 and r3 < 1e-7 and r32 < 1e-7 and re < 1e-8
    return ok, f"2u {r2:.1e}, 3u {r3:.1e}, 3u/2 {r32:.1e}, ellipse {re:.1e}"


def crit_special_points():
    sp = arctic.special_points(BoundaryShape.linear(3))
    e1 = max(abs(sp.X1Y1.X - 2), abs(sp.X1Y1.Y - 1), abs(sp.X0Y0.X - 3), abs(sp.X0Y0.Y),
             abs(sp.XinfYinf.X), abs(sp.XinfYinf.Y))
    sp = arctic.special_points(shape("cuberoot"))
    e2 = max(abs(sp.X1Y1.X - 11 / 4), abs(sp.X1Y1.Y - 1), abs(sp.X0Y0.X - 3),
             abs(sp.X0Y0.Y - 3 * math.exp(-1.5)))
    sp = arctic.special_points(shape("quadratic"))
    e3 = max(abs(sp.XinfYinf.X - 0.5), abs(sp.XinfYinf.Y - 0.5))
    return e1 < 1e-8 and e2 < 1e-6 and e3 < 1e-8, f"3u {e1:.1e}, cube root {e2:.1e}, " \
                                                   f"u+u^2 {e3:.1e}"


def crit_convergence():
    t0 = time.perf_counter()
    tab = asymptotics.convergence_study(BoundaryShape.linear(3), [20, 50, 100],
                                        xi_min=2.2, xi_max=2.8)
    dt = time.perf_counter() - t0
    d = [tab.max_deviation[n] for n in (20, 50, 100)]
    ok = d[0] > d[1] > d[2] and d[2] < 0.05 and dt < 300
    return ok, "max dev " + ", ".join(f"{v:.4f}" for v in d) + f" ({dt:.1f}s)"


def crit_envelope_suite():
    worst_tan = 0.0
    for nm in ("pure2", "pure3", "hexagon", "reentrance", "gap", "symmetric5", "mixed",
               "quadratic"):
        for p in arctic.portions(shape(nm), 200):
            worst_tan = max(worst_tan, p.tangency_residual())
    worst_leg = 0.0
    for nm in ("pure2", "pure3", "reentrance", "gap", "symmetric5", "hexagon"):
        for p in arctic.portions(shape(nm), 200):
            if len(p.t) >= 3:
                worst_leg = max(worst_leg, arctic.legendre_check(p))
    m0 = arctic.moments_check(BoundaryShape.linear(3), 0).deviations[0]
    m1 = arctic.moments_check(BoundaryShape.linear(3), 1).deviations[1]
    m2 = arctic.moments_check(shape("quadratic"), 2).deviations[2]
    sym = shape("symmetric5")
    a1 = float(sym.alpha1)
    sres = arctic.symmetry_residual(sym, a1 + np.geomspace(1e-3, 1e3, 60))
    edge = 0.0
    for nm in ("symmetric5", "hexagon"):
        sh = shape(nm)
        res = arctic.resolvent(sh)
        b = float(sh.alpha1)
        rho = float(sh.pieces[-1].u1 - sh.pieces[-1].u0)
        for t in np.linspace(b - rho, b, 102)[1:-1]:
            x = res.x(t)
            edge = max(edge, abs(arctic.hat_x(sh, t) - x) / max(1.0, abs(x)))
    ok = (worst_tan < 1e-9 and worst_leg < 1e-6 and m0 < 1e-8 and m1 < 1e-6 and m2 < 1e-5
          and sres < 1e-8 and edge < 1e-10)
    return ok, (f"tangency {worst_tan:.1e}, Legendre {worst_leg:.1e}, moments "
                f"{m0:.0e}/{m1:.0e}/{m2:.0e}, symmetry {sres:.1e}, edge {edge:.1e}")


def _chi2(seq, n_samples, seed):
    states = sorted(c.to_text() for c in exactcomb.brute_force_enumerate(seq))
    thin = max(8, 4 * seq.n * seq.an)
    got = Counter(c.to_text() for c in
                  sampler.sample_ensemble(seq, n_samples, 10_000, thin, seed=seed))
    if set(got) - set(states):
        return 0.0, len(states)
    return stats.chisquare([got.get(s, 0) for s in states]).pvalue, len(states)


def crit_sampler():
    rng = random.Random(SEED + 9)
    rand3 = random_sequence(rng, n_max=3, an_max=exactcomb.BRUTE_MAX_AN, n_min=3)
    out, ok = [], True
    for k, seq in enumerate([StartSequence((0, 2)), StartSequence((0, 2, 4)), rand3]):
        t0 = time.perf_counter()
        p, m = _chi2(seq, 100_000, seed=SEED + k)
        dt = time.perf_counter() - t0
        ok &= p > 0.01 and dt < 60
        out.append(f"{seq} [{m}] p={p:.2f} {dt:.1f}s")
    return ok, "; ".join(out)


def crit_overlay():
    sh = BoundaryShape.linear(3)
    seq = realize(sh, 60)
    parts = arctic.portions(sh, 400)
    X1 = arctic.special_points(sh).X1Y1.X
    samples = sampler.sample_ensemble(seq, 100, burn_in=150_000_000, thin=1_000_000,
                                      seed=SEED)
    pts = np.concatenate([sampler.outer_shell(s) for s in samples])
    inside = sampler.overlay_fraction(pts, parts, X1, margin=0.1)
    # two-sided: away from the flat top the shell must also stay close to the curve
    X, Y = sampler.upper_envelope(parts, X1)
    off = pts[pts[:, 0] > X1 + 0.05]
    near = float(np.mean(sampler._dist_to_polyline(off, X, Y) <= 0.1))
    return inside >= 0.95, f"inside {inside:.4f} ({len(pts)} vertices); " \
                           f"two-sided diagnostic {near:.4f}"


CRITERIA = [
    ("1 exact identity chain", crit_identity_chain),
    ("2 pure-case partition", crit_pure_partition),
    ("3 sum rules", crit_sum_rules),
    ("4 determinant oracles", crit_oracles),
    ("5 algebraic curve residuals", crit_curves),
    ("6 special points", crit_special_points),
    ("7 finite-n convergence", crit_convergence),
    ("8 envelope/tangency suite", crit_envelope_suite),
    ("9 sampler uniformity", crit_sampler),
    ("10 sampler/curve overlay", crit_overlay),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  {name:<30} {detail}"


@pytest.fixture(scope="module", autouse=True)
def _report(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is None or not RESULTS:
        return
    tr.write_line("")
    tr.write_line("acceptance criteria:")
    for name, _ in CRITERIA:
        if name in RESULTS:
            tr.write_line(_line(name, *RESULTS[name]))


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn):
    ok, detail = fn()
    RESULTS[name] = (ok, detail)
    print(_line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    status = 0
    for name, fn in CRITERIA:
        ok, detail = fn()
        print(_line(name, ok, detail), flush=True)
        status |= not ok
    sys.exit(status)
