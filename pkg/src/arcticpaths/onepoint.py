"""Exact one-point functions and escape-path counts.

All functions return ``Fraction`` values.  The production route uses only
the last row of the closed-form ``L^{-1}`` (or ``Lhat^{-1}``), so a single
value costs O(n) once the row weights are known.  The modified-column
determinant route is kept as an independent oracle.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .boundary import StartSequence, complement_of, tilde_of
from .exactcomb import binom, det_exact, lgv_A, lgv_Ahat

__all__ = [
    "H", "Htilde", "Hhat", "Hcheck",
    "Yfactor", "Ytilde", "Yhat",
    "OnePointTable", "table", "table_to_csv",
    "H_det_oracle", "Hhat_det_oracle", "Htilde_residue", "Hhat_residue",
    "Hcheck_residue", "KINDS",
]

KINDS = ("H", "Htilde", "Hhat", "Hcheck")


@lru_cache(maxsize=256)
def _row_weights(a: tuple) -> tuple:
    """``L^{-1}[n][k] / U[n][n] = n! / prod_{s != k} (a_k - a_s)``."""
    n = len(a) - 1
    nf = math.factorial(n)
    return tuple(Fraction(nf, math.prod(a[k] - a[s] for s in range(n + 1) if s != k))
                 for k in range(n + 1))


@lru_cache(maxsize=256)
def _hat_row_weights(a: tuple) -> tuple:
    """``Lhat^{-1}[m][k] / Uhat[m][m]`` for the complementary sequence of ``a``."""
    seq = StartSequence(a)
    b = complement_of(seq).b
    N = seq.an
    pref = math.prod(N - bs for bs in b)
    out = []
    for k, bk in enumerate(b):
        den = binom(N, bk) * (N - bk) * math.prod(bk - bs for s, bs in enumerate(b) if s != k)
        out.append(Fraction(pref, den))
    return tuple(out)


def H(seq: StartSequence, ell: int) -> Fraction:
    """Probability that the top path exits the domain upward at ``(ell, n)``."""
    if not 0 <= ell <= seq.an:
        raise ValueError(f"ell={ell} outside [0, {seq.an}]")
    n = seq.n
    w = _row_weights(seq.a)
    return sum((wk * binom(ak + n - ell, n) for wk, ak in zip(w, seq.a)), Fraction(0))


def Htilde(seq: StartSequence, ell: int) -> Fraction:
    """One-point function of the complementary description, via reflection."""
    n = seq.n
    if ell == n - 1:
        return Fraction(0)
    if not n <= ell <= seq.an:
        raise ValueError(f"ell={ell} outside [{n - 1}, {seq.an}]")
    return H(tilde_of(seq), seq.an - ell + n)


def Hhat(seq: StartSequence, ell: int) -> Fraction:
    """Exit probability of the rightmost complementary path at height ``n+1-ell``.

    Defined for ``0 <= ell <= n + 1``; ``Hhat(0) = 1`` and ``Hhat(n+1) = 0``.
    """
    n = seq.n
    b = complement_of(seq).b
    if not b:
        raise ValueError("Hhat needs at least one complementary path (m >= 1)")
    if not 0 <= ell <= n + 1:
        raise ValueError(f"ell={ell} outside [0, {n + 1}]")
    N = seq.an
    w = _hat_row_weights(seq.a)
    return sum((wk * binom(n - ell + 1, N - bk) for wk, bk in zip(w, b)), Fraction(0))


def Hcheck(seq: StartSequence, ell: int) -> Fraction:
    """Re-entry probability at ``(a_n, n - ell)`` when the bottom-right start moves right."""
    if not 0 <= ell <= seq.n:
        raise ValueError(f"ell={ell} outside [0, {seq.n}]")
    return 1 - Hhat(seq, ell + 1)


def Yfactor(ell: int, r: int) -> int:
    return binom(ell + r - 1, ell)


def Ytilde(seq: StartSequence, ell: int, r: int) -> int:
    return binom(seq.an - ell - 1, r - 1)


def Yhat(p: int, ell: int) -> int:
    return binom(ell - 1, p - 1)


# --------------------------------------------------------------------------
# tables


@dataclass
class OnePointTable:
    kind: str
    seq: StartSequence
    values: dict = field(default_factory=dict)

    def ells(self):
        return sorted(self.values)


def table(seq: StartSequence, kind: str = "H") -> OnePointTable:
    n, an = seq.n, seq.an
    if kind == "H":
        rng, f = range(0, an + 1), H
    elif kind == "Htilde":
        rng, f = range(n - 1, an + 1), Htilde
    elif kind == "Hhat":
        rng, f = range(0, n + 2), Hhat
    elif kind == "Hcheck":
        rng, f = range(0, n + 1), Hcheck
    else:
        raise ValueError(f"unknown one-point kind {kind!r}; expected one of {KINDS}")
    return OnePointTable(kind, seq, {ell: f(seq, ell) for ell in rng})


def table_to_csv(tab: OnePointTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ell", "numerator", "denominator", "value"])
    for ell in tab.ells():
        v = tab.values[ell]
        w.writerow([ell, v.numerator, v.denominator, repr(float(v))])
    return buf.getvalue()


# --------------------------------------------------------------------------
# independent oracles


def H_det_oracle(seq: StartSequence, ell: int) -> Fraction:
    """``det(A') / det(A)`` with last column ``C(a_i + n - ell, n)``."""
    n = seq.n
    A = lgv_A(seq)
    Ap = [row[:n] + [binom(ai + n - ell, n)] for row, ai in zip(A, seq.a)]
    return Fraction(det_exact(Ap), det_exact(A))


def Hhat_det_oracle(seq: StartSequence, ell: int) -> Fraction:
    """``det(Ahat') / det(Ahat)`` with last column ``C(n - ell + 1, n + m - b_i)``."""
    n, N = seq.n, seq.an
    b = complement_of(seq).b
    Ah = lgv_Ahat(seq)
    m = len(b)
    Ap = [row[:m - 1] + [binom(n - ell + 1, N - bi)] for row, bi in zip(Ah, b)]
    return Fraction(det_exact(Ap), det_exact(Ah))


def Htilde_residue(seq: StartSequence, ell: int) -> Fraction:
    """Direct residue sum over the starting points ``a_k <= ell - n``."""
    a, n = seq.a, seq.n
    total = Fraction(0)
    for k, ak in enumerate(a):
        if ak > ell - n:
            continue
        P = math.prod(ell - ak - s for s in range(n))
        den = math.prod(a[s] - ak for s in range(n + 1) if s != k)
        total += Fraction(P, den)
    return total


def Hhat_residue(seq: StartSequence, ell: int) -> Fraction:
    """Residue form over the poles ``b_k`` with the pole at ``a_n`` excluded."""
    n, N = seq.n, seq.an
    b = complement_of(seq).b
    m = len(b)
    pref = Fraction(math.prod(N - bs for bs in b), binom(N, n - ell + 1))
    total = Fraction(0)
    for k, bk in enumerate(b):
        num = math.prod(bk - s for s in range(m + ell - 1))
        den = (N - bk) * math.prod(bk - bs for s, bs in enumerate(b) if s != k)
        total += Fraction(num, den * math.factorial(m + ell - 1))
    return pref * total


def Hcheck_residue(seq: StartSequence, ell: int) -> Fraction:
    """Residues at ``a_n - s`` for ``s = 0..n-ell`` of the re-entry integrand."""
    a, n = seq.a, seq.n
    an = a[-1]
    norm = math.prod(an - a[s] for s in range(n))
    fact = math.factorial(n - ell)
    total = Fraction(0)
    for s0 in range(n - ell + 1):
        t0 = an - s0
        num = math.prod(t0 - a[s] for s in range(n)) * fact
        den = math.prod(t0 - an + s for s in range(n - ell + 1) if s != s0)
        total += Fraction(num, den)
    return total / norm
