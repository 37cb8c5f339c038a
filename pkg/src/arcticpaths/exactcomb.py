"""Exact linear algebra for the path families.

Matrices are plain lists of lists holding ``int`` or ``Fraction`` entries.
Indices follow the natural conventions: the west/north family is indexed
``0..n``, the complementary (north/northeast) family ``1..m`` is stored
0-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .boundary import StartSequence, complement_of, tilde_of

__all__ = [
    "SizeGuardError",
    "binom",
    "lgv_A",
    "lgv_Atilde",
    "lgv_Ahat",
    "det_exact",
    "matmul",
    "is_upper_triangular",
    "lu_Linv",
    "lu_U_diag",
    "lu_Linv_hat",
    "lu_Uhat_diag",
    "superfactorial",
    "vandermonde",
    "partition_product",
    "partition_bform",
    "PathConfiguration",
    "brute_force_enumerate",
    "brute_force_count",
    "BRUTE_MAX_N",
    "BRUTE_MAX_AN",
]

BRUTE_MAX_N = 5
BRUTE_MAX_AN = 12


class SizeGuardError(ValueError):
    """Refusal to run an exponential-time routine on a large instance."""


@lru_cache(maxsize=1 << 16)
def binom(m: int, k: int) -> int:
    """Binomial coefficient, zero whenever ``k < 0``, ``m < 0`` or ``k > m``."""
    if k < 0 or m < 0 or k > m:
        return 0
    return math.comb(m, k)


# --------------------------------------------------------------------------
# LGV matrices


def lgv_A(seq: StartSequence) -> list:
    """``A[i][j] = C(a_i + j, j)``, paths from ``(a_i, 0)`` to ``(0, j)``."""
    n = seq.n
    return [[binom(ai + j, j) for j in range(n + 1)] for ai in seq.a]


def lgv_Atilde(seq: StartSequence) -> list:
    """``Atilde[i][j] = C(atilde_i, j)``."""
    n = seq.n
    return [[binom(ai, j) for j in range(n + 1)] for ai in tilde_of(seq).a]


def lgv_Ahat(seq: StartSequence) -> list:
    """``Ahat[i][j] = C(n+1, b_i - j + 1)`` for ``i, j = 1..m`` (empty if m=0)."""
    b = complement_of(seq).b
    n = seq.n
    return [[binom(n + 1, bi - j + 1) for j in range(1, len(b) + 1)] for bi in b]


# --------------------------------------------------------------------------
# determinants


def det_exact(M) -> Fraction | int:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Integer matrices stay in integers throughout.  Any other entries are
    promoted to ``Fraction`` and the same recurrence is run with exact
    division.  The empty matrix has determinant 1.
    """
    size = len(M)
    if size == 0:
        return 1
    if any(len(row) != size for row in M):
        raise ValueError("matrix is not square")
    integral = all(isinstance(v, int) for row in M for v in row)
    A = [list(row) if integral else [Fraction(v) for v in row] for row in M]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if A[k][k] == 0:
            for r in range(k + 1, size):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, size):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, size):
                num = row_i[j] * akk - aik * row_k[j]
                row_i[j] = num // prev if integral else num / prev
            row_i[k] = 0
        prev = akk
    return sign * A[size - 1][size - 1]


def matmul(P, Q) -> list:
    inner = len(Q)
    cols = len(Q[0]) if Q else 0
    return [[sum(P[i][k] * Q[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(P))]


def is_upper_triangular(M) -> bool:
    return all(M[i][j] == 0 for i in range(len(M)) for j in range(i))


# --------------------------------------------------------------------------
# closed-form LU factors


def lu_Linv(seq: StartSequence) -> list:
    """Lower uni-triangular ``L^{-1}`` with ``L^{-1} A`` upper triangular.

    ``L^{-1}[i][j] = prod_{s<i}(a_i - a_s) / prod_{s<=i, s!=j}(a_j - a_s)``
    for ``i >= j``.
    """
    a = seq.a
    size = len(a)
    L = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        num = math.prod(a[i] - a[s] for s in range(i))
        for j in range(i + 1):
            den = math.prod(a[j] - a[s] for s in range(i + 1) if s != j)
            L[i][j] = Fraction(num, den)
    return L


def lu_U_diag(seq: StartSequence) -> list:
    """``U[i][i] = prod_{s<i}(a_i - a_s) / i!``."""
    a = seq.a
    return [Fraction(math.prod(a[i] - a[s] for s in range(i)), math.factorial(i))
            for i in range(len(a))]


def lu_Linv_hat(seq: StartSequence) -> list:
    """Closed-form ``Lhat^{-1}`` for the complementary family (0-based storage).

    With 1-based ``i >= j``::

        C(N, b_i) C(N - b_i, m+1-i)     prod_{s<i} (b_i - b_s)
        ---------------------------  *  -------------------------
        C(N, b_j) C(N - b_j, m+1-i)     prod_{s<=i, s!=j} (b_j - b_s)

    where ``N = n + m = a_n``.
    """
    cs = complement_of(seq)
    b, m, N = cs.b, cs.m, seq.an
    if m == 0:
        raise ValueError("no complementary paths (m = 0)")
    L = [[Fraction(0)] * m for _ in range(m)]
    for i in range(1, m + 1):
        bi = b[i - 1]
        top = binom(N, bi) * binom(N - bi, m + 1 - i)
        num = math.prod(bi - b[s - 1] for s in range(1, i))
        for j in range(1, i + 1):
            bj = b[j - 1]
            bottom = binom(N, bj) * binom(N - bj, m + 1 - i)
            den = math.prod(bj - b[s - 1] for s in range(1, i + 1) if s != j)
            L[i - 1][j - 1] = Fraction(top * num, bottom * den)
    return L


def lu_Uhat_diag(seq: StartSequence) -> list:
    """``Uhat[i][i] = C(n+i, b_i) prod_{s<i} (b_i - b_s)/(n + i - b_s)``."""
    b = complement_of(seq).b
    n = seq.n
    out = []
    for i in range(1, len(b) + 1):
        bi = b[i - 1]
        val = Fraction(binom(n + i, bi))
        for s in range(1, i):
            val *= Fraction(bi - b[s - 1], n + i - b[s - 1])
        out.append(val)
    return out


# --------------------------------------------------------------------------
# partition functions


def superfactorial(N: int) -> int:
    """``Delta(0, 1, ..., N) = prod_{i<=N} i!``."""
    return math.prod(math.factorial(i) for i in range(N + 1))


def vandermonde(xs) -> int:
    xs = list(xs)
    return math.prod(xs[j] - xs[i] for j in range(len(xs)) for i in range(j))


def partition_product(seq: StartSequence) -> int:
    """``Z = Delta(a) / Delta(0..n)``."""
    num, den = vandermonde(seq.a), superfactorial(seq.n)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"non-integral partition function for {seq}")
    return q


def partition_bform(seq: StartSequence) -> int:
    """Partition function from the complementary sequence alone."""
    cs = complement_of(seq)
    n, N = seq.n, seq.an
    num = superfactorial(N) * vandermonde(cs.b)
    den = superfactorial(n) * math.prod(math.factorial(bi) * math.factorial(N - bi)
                                        for bi in cs.b)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"non-integral b-form partition function for {seq}")
    return q


# --------------------------------------------------------------------------
# brute force


@dataclass(frozen=True)
class PathConfiguration:
    """One family of non-intersecting paths as west/north step words.

    ``words[i]`` leads from ``(a_i, 0)`` to ``(0, i)`` and contains exactly
    ``a_i`` letters ``W`` and ``i`` letters ``N``.
    """

    seq: StartSequence
    words: tuple

    def path_vertices(self, i: int) -> list:
        x, y = self.seq.a[i], 0
        pts = [(x, y)]
        for c in self.words[i]:
            if c == "W":
                x -= 1
            else:
                y += 1
            pts.append((x, y))
        return pts

    def is_valid(self) -> bool:
        seen = set()
        for i, w in enumerate(self.words):
            if w.count("W") != self.seq.a[i] or w.count("N") != i or len(w) != self.seq.a[i] + i:
                return False
            for p in self.path_vertices(i):
                if p in seen:
                    return False
                seen.add(p)
        return True

    def to_text(self) -> str:
        """Run-length text, one path per ``;`` e.g. ``W2N1;W3N2``."""
        parts = []
        for w in self.words:
            if not w:
                parts.append("-")
                continue
            runs, cur, cnt = [], w[0], 0
            for c in w:
                if c == cur:
                    cnt += 1
                else:
                    runs.append(f"{cur}{cnt}")
                    cur, cnt = c, 1
            runs.append(f"{cur}{cnt}")
            parts.append("".join(runs))
        return ";".join(parts)


def _check_guard(seq: StartSequence):
    if seq.n > BRUTE_MAX_N or seq.an > BRUTE_MAX_AN:
        raise SizeGuardError(f"brute force limited to n <= {BRUTE_MAX_N} and "
                             f"a_n <= {BRUTE_MAX_AN}; got n={seq.n}, a_n={seq.an}")


def _single_paths(x0: int, target_y: int, occupied: set):
    """All W/N words from ``(x0, 0)`` to ``(0, target_y)`` avoiding ``occupied``."""
    out = []
    word = []

    def rec(x, y):
        if (x, y) in occupied:
            return
        if x == 0 and y == target_y:
            out.append("".join(word))
            return
        if x > 0:
            word.append("W")
            rec(x - 1, y)
            word.pop()
        if y < target_y:
            word.append("N")
            rec(x, y + 1)
            word.pop()

    rec(x0, 0)
    return out


def _walk(x, y, word):
    pts = [(x, y)]
    for c in word:
        if c == "W":
            x -= 1
        else:
            y += 1
        pts.append((x, y))
    return pts


def brute_force_enumerate(seq: StartSequence) -> list:
    """Every configuration, by backtracking from the bottom path upwards."""
    _check_guard(seq)
    a = seq.a
    results = []
    words = []
    occupied = set()

    def rec(i):
        if i == len(a):
            results.append(PathConfiguration(seq, tuple(words)))
            return
        for w in _single_paths(a[i], i, occupied):
            pts = _walk(a[i], 0, w)
            occupied.update(pts)
            words.append(w)
            rec(i + 1)
            words.pop()
            occupied.difference_update(pts)

    rec(0)
    return results


def brute_force_count(seq: StartSequence) -> int:
    return len(brute_force_enumerate(seq))
