"""Fast invariant suite over all modules, used by ``arcticpaths selftest``."""
from __future__ import annotations

import random
import time
from collections import Counter
from fractions import Fraction

from . import algebraic, arctic, asymptotics, exactcomb, onepoint, sampler
from .boundary import BoundaryShape, Jump, Segment, StartSequence


def _random_seq(rng: random.Random, n_max: int, an_max: int) -> StartSequence:
    n = rng.randint(1, n_max)
    an = rng.randint(n, an_max)
    return StartSequence((0, *sorted(rng.sample(range(1, an), n - 1)), an))


def check_identity_chain(rng):
    for _ in range(20):
        seq = _random_seq(rng, 6, 14)
        vals = {exactcomb.det_exact(exactcomb.lgv_A(seq)),
                exactcomb.det_exact(exactcomb.lgv_Atilde(seq)),
                exactcomb.det_exact(exactcomb.lgv_Ahat(seq)),
                exactcomb.partition_product(seq),
                exactcomb.partition_bform(seq)}
        if len(vals) != 1:
            return False, f"routes disagree for {seq}: {sorted(vals)}"
    return True, "20 sequences"


def check_pure_partition(rng):
    for p in (2, 3, 5):
        for n in range(1, 8):
            seq = StartSequence(tuple(p * i for i in range(n + 1)))
            if exactcomb.partition_product(seq) != p ** (n * (n + 1) // 2):
                return False, f"p={p}, n={n}"
    return True, "p in 2,3,5"


def check_sum_rules(rng):
    for _ in range(10):
        seq = _random_seq(rng, 6, 14)
        for ell in range(seq.n, seq.an + 1):
            if onepoint.H(seq, ell) + onepoint.Htilde(seq, ell - 1) != 1:
                return False, f"H + Htilde at {seq}, ell={ell}"
        if seq.m:
            for ell in range(seq.n + 1):
                if onepoint.Hcheck(seq, ell) != 1 - onepoint.Hhat(seq, ell + 1):
                    return False, f"Hcheck at {seq}, ell={ell}"
    return True, "10 sequences"


def check_oracles(rng):
    for _ in range(10):
        seq = _random_seq(rng, 4, 10)
        for ell in range(seq.an + 1):
            if onepoint.H(seq, ell) != onepoint.H_det_oracle(seq, ell):
                return False, f"H at {seq}, ell={ell}"
        if seq.m:
            for ell in range(seq.n + 2):
                if onepoint.Hhat(seq, ell) != onepoint.Hhat_det_oracle(seq, ell):
                    return False, f"Hhat at {seq}, ell={ell}"
    return True, "10 sequences"


def check_brute_force(rng):
    for a in [(0, 2), (0, 2, 4), (0, 1, 3, 6)]:
        seq = StartSequence(a)
        if exactcomb.brute_force_count(seq) != exactcomb.det_exact(exactcomb.lgv_A(seq)):
            return False, f"count mismatch at {a}"
    return True, "3 sequences"


def check_curves(rng):
    worst = algebraic.max_residual(algebraic.pure2, arctic.portions(BoundaryShape.linear(2), 200))
    h = BoundaryShape.hexagon(Fraction(1, 3), 1, Fraction(2, 3))
    worst_h = algebraic.max_residual(algebraic.hexagon_ellipse(Fraction(1, 3), 1, Fraction(2, 3)),
                                     arctic.portions(h, 200))
    return worst < 1e-9 and worst_h < 1e-8, f"2u {worst:.1e}, ellipse {worst_h:.1e}"


def check_tangency(rng):
    shapes = [BoundaryShape.linear(3),
              BoundaryShape.piecewise([Segment(Fraction(1, 2), 2), Jump(1), Segment(Fraction(1, 2), 2)]),
              BoundaryShape.piecewise([Segment(Fraction(1, 3), 2), Segment(Fraction(1, 3), 1),
                                       Segment(Fraction(1, 3), 2)])]
    worst = max(p.tangency_residual() for sh in shapes for p in arctic.portions(sh, 100))
    return worst < 1e-9, f"{worst:.1e}"


def check_special_points(rng):
    sp = arctic.special_points(BoundaryShape.linear(3))
    err = max(abs(sp.X1Y1.X - 2), abs(sp.X1Y1.Y - 1), abs(sp.X0Y0.X - 3), abs(sp.X0Y0.Y),
              abs(sp.XinfYinf.X), abs(sp.XinfYinf.Y))
    return err < 1e-8, f"{err:.1e}"


def check_convergence(rng):
    tab = asymptotics.convergence_study(BoundaryShape.linear(3), [10, 20, 40],
                                        xi_min=2.2, xi_max=2.8)
    d = [tab.max_deviation[n] for n in (10, 20, 40)]
    return d[0] > d[1] > d[2], ", ".join(f"{v:.3f}" for v in d)


def check_sampler(rng):
    seq = StartSequence((0, 2, 4))
    states = {c.to_text() for c in exactcomb.brute_force_enumerate(seq)}
    arr = sampler.sample_ensemble(seq, 16000, 2000, 16, seed=7)
    c = Counter(s.to_text() for s in arr)
    if set(c) - states:
        return False, "sampled an invalid state"
    exp = len(arr) / len(states)
    chi2 = sum((c.get(s, 0) - exp) ** 2 / exp for s in states)
    # 7 degrees of freedom, 0.001 upper quantile
    return chi2 < 24.32, f"chi2={chi2:.2f}"


CHECKS = [
    ("identity chain", check_identity_chain),
    ("pure partition", check_pure_partition),
    ("sum rules", check_sum_rules),
    ("oracles", check_oracles),
    ("brute force", check_brute_force),
    ("curve residuals", check_curves),
    ("tangency", check_tangency),
    ("special points", check_special_points),
    ("convergence", check_convergence),
    ("sampler uniformity", check_sampler),
]


def run(seed: int = 0, out=print) -> bool:
    """Run every check; print one line each; return overall success."""
    ok_all = True
    for name, fn in CHECKS:
        rng = random.Random(seed)
        t0 = time.perf_counter()
        try:
            ok, detail = fn(rng)
        except Exception as err:  # report and keep going
            ok, detail = False, f"{type(err).__name__}: {err}"
        ok_all &= bool(ok)
        out(f"{'PASS' if ok else 'FAIL'}  {name:<20} {detail}  ({time.perf_counter() - t0:.2f}s)")
    return ok_all
