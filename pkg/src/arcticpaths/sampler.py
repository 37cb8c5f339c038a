"""Metropolis corner-flip sampler for uniform path configurations.

A proposal picks one interior vertex of one path uniformly among all
interior vertices of all paths.  If the two steps around it form a corner
(``WN`` or ``NW``) and the opposite corner vertex is free, the steps are
swapped.  Proposals are symmetric and the target is uniform, so every legal
flip is accepted.

Random numbers come from numpy's ``Philox`` counter-based generator; a run is
reproducible from ``(seed, parameters)``.  The inner loop is compiled with
numba.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .boundary import StartSequence
from .exactcomb import PathConfiguration

__all__ = [
    "ChainState",
    "init_minimal",
    "flip_step",
    "run_chain",
    "sample_ensemble",
    "default_burn_in",
    "default_thin",
    "outer_shell",
    "upper_envelope",
    "overlay_fraction",
    "overlay_export",
    "samples_to_text",
]

W, N = 0, 1
_CHUNK = 1 << 20
DEBUG = bool(os.environ.get("ARCTICPATHS_DEBUG"))
RELEASE_CHECK_EVERY = 1000


@njit(cache=True, nogil=True)
def _run(steps, xs, ys, occ, path_of, pos_of, props, thin, out):
    """Apply ``props`` proposals; after every ``thin`` of them copy ``steps``
    into the next slot of ``out`` (if ``out`` has room).  Returns the number
    of accepted flips."""
    acc = 0
    rec = 0
    for r in range(props.shape[0]):
        j = props[r]
        i = path_of[j]
        k = pos_of[j]
        s0 = steps[i, k]
        s1 = steps[i, k + 1]
        if s0 != s1:
            px = xs[i, k]
            py = ys[i, k]
            if s0 == W:
                nx, ny = px, py + 1
            else:
                nx, ny = px - 1, py
            if occ[nx, ny] == 0:
                occ[xs[i, k + 1], ys[i, k + 1]] = 0
                occ[nx, ny] = i + 1
                xs[i, k + 1] = nx
                ys[i, k + 1] = ny
                steps[i, k] = s1
                steps[i, k + 1] = s0
                acc += 1
        if thin > 0 and (r + 1) % thin == 0 and rec < out.shape[0]:
            out[rec, :, :] = steps
            rec += 1
    return acc


@dataclass
class ChainState:
    """Mutable sampler state.

    ``steps[i, :lens[i]]`` is the step word of path ``i`` (0 = W, 1 = N),
    ``xs``/``ys`` the vertex coordinates and ``occ`` a grid holding
    ``path index + 1`` at occupied vertices.
    """

    seq: StartSequence
    steps: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    occ: np.ndarray
    seed: int = 0
    step_count: int = 0
    accepted: int = 0
    path_of: np.ndarray = field(default=None, repr=False)
    pos_of: np.ndarray = field(default=None, repr=False)

    @property
    def lens(self):
        return [ai + i for i, ai in enumerate(self.seq.a)]

    @property
    def n_positions(self) -> int:
        return len(self.path_of)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.step_count if self.step_count else 0.0

    def configuration(self) -> PathConfiguration:
        return _config_from_steps(self.seq, self.steps)

    def copy(self) -> "ChainState":
        return ChainState(self.seq, self.steps.copy(), self.xs.copy(), self.ys.copy(),
                          self.occ.copy(), self.seed, self.step_count, self.accepted,
                          self.path_of, self.pos_of)


def _config_from_steps(seq: StartSequence, steps) -> PathConfiguration:
    words = []
    for i, ai in enumerate(seq.a):
        row = steps[i, :ai + i]
        words.append("".join("N" if c else "W" for c in row.tolist()))
    return PathConfiguration(seq, tuple(words))


def _state_from_words(seq: StartSequence, words, seed=0) -> ChainState:
    n, an = seq.n, seq.an
    L = an + n
    steps = np.zeros((n + 1, max(L, 1)), dtype=np.int8)
    xs = np.zeros((n + 1, L + 1), dtype=np.int64)
    ys = np.zeros((n + 1, L + 1), dtype=np.int64)
    occ = np.zeros((an + 1, n + 1), dtype=np.int32)
    path_of, pos_of = [], []
    for i, (ai, w) in enumerate(zip(seq.a, words)):
        x, y = ai, 0
        xs[i, 0], ys[i, 0] = x, y
        if occ[x, y]:
            raise AssertionError(f"paths {occ[x, y] - 1} and {i} share vertex {(x, y)}")
        occ[x, y] = i + 1
        for k, c in enumerate(w):
            if c == "W":
                x -= 1
            else:
                y += 1
                steps[i, k] = N
            xs[i, k + 1], ys[i, k + 1] = x, y
            if occ[x, y]:
                raise AssertionError(f"paths {occ[x, y] - 1} and {i} share vertex {(x, y)}")
            occ[x, y] = i + 1
        if (x, y) != (0, i):
            raise AssertionError(f"path {i} ends at {(x, y)}, expected {(0, i)}")
        for k in range(len(w) - 1):
            path_of.append(i)
            pos_of.append(k)
    return ChainState(seq, steps, xs, ys, occ, seed,
                      path_of=np.array(path_of, dtype=np.int64),
                      pos_of=np.array(pos_of, dtype=np.int64))


def init_minimal(seq: StartSequence, seed: int = 0) -> ChainState:
    """Lowest configuration: every path goes west whenever that vertex is free."""
    occupied = set()
    words = []
    for i, ai in enumerate(seq.a):
        x, y = ai, 0
        w = []
        occupied.add((x, y))
        while (x, y) != (0, i):
            if x > 0 and (x - 1, y) not in occupied:
                x -= 1
                w.append("W")
            else:
                y += 1
                w.append("N")
            if y > i or (x, y) in occupied:
                raise AssertionError(f"greedy construction failed for path {i}")
            occupied.add((x, y))
        words.append("".join(w))
    st = _state_from_words(seq, words, seed)
    assert st.configuration().is_valid()
    return st


def _proposals(rng: np.random.Generator, npos: int, size: int) -> np.ndarray:
    if npos == 0:
        return np.zeros(0, dtype=np.int64)
    return rng.integers(0, npos, size=size, dtype=np.int64)


_EMPTY_OUT = np.zeros((0, 1, 1), dtype=np.int8)


def flip_step(state: ChainState, rng: np.random.Generator | None = None) -> ChainState:
    """One proposal, in place.  Returns ``state`` for chaining."""
    if rng is None:
        rng = np.random.Generator(np.random.Philox(state.seed + state.step_count))
    state.step_count += 1
    if state.n_positions == 0:
        return state
    props = _proposals(rng, state.n_positions, 1)
    state.accepted += _run(state.steps, state.xs, state.ys, state.occ, state.path_of,
                           state.pos_of, props, 0, _EMPTY_OUT)
    if DEBUG:
        assert state.configuration().is_valid()
    return state


def run_chain(state: ChainState, n_steps: int, rng: np.random.Generator) -> ChainState:
    """Advance ``n_steps`` proposals without recording."""
    left = int(n_steps)
    while left > 0:
        size = min(left, _CHUNK)
        left -= size
        state.step_count += size
        if state.n_positions == 0:
            continue
        props = _proposals(rng, state.n_positions, size)
        state.accepted += _run(state.steps, state.xs, state.ys, state.occ, state.path_of,
                               state.pos_of, props, 0, _EMPTY_OUT)
    if DEBUG:
        assert state.configuration().is_valid()
    return state


def _record(state: ChainState, n_samples: int, thin: int, rng) -> np.ndarray:
    n1, L = state.steps.shape
    out = np.zeros((n_samples, n1, L), dtype=np.int8)
    per_chunk = max(1, _CHUNK // thin)
    done = 0
    while done < n_samples:
        k = min(per_chunk, n_samples - done)
        size = k * thin
        state.step_count += size
        if state.n_positions == 0:
            out[done:done + k] = state.steps
        else:
            props = _proposals(rng, state.n_positions, size)
            state.accepted += _run(state.steps, state.xs, state.ys, state.occ,
                                   state.path_of, state.pos_of, props, thin,
                                   out[done:done + k])
        done += k
    return out


def default_burn_in(seq: StartSequence) -> int:
    return 20 * max(1, seq.n * seq.an)


def default_thin(seq: StartSequence) -> int:
    return max(1, seq.n * seq.an)


def _chain(seq, n_samples, burn_in, thin, seed_seq):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    st = init_minimal(seq)
    run_chain(st, burn_in, rng)
    return _record(st, n_samples, thin, rng), st


def sample_ensemble(seq: StartSequence, n_samples: int, burn_in: int | None = None,
                    thin: int | None = None, seed: int = 0, chains: int = 1,
                    as_arrays: bool = False):
    """Draw ``n_samples`` configurations.

    Parameters
    ----------
    seq : StartSequence
    n_samples : int
        Total number of recorded configurations (split evenly over chains).
    burn_in, thin : int, optional
        Proposals discarded at start and between records.  Defaults are
        ``20 n a_n`` and ``n a_n``.
    seed : int
        64-bit seed; chain ``c`` uses the ``c``-th child of
        ``SeedSequence(seed)``.
    chains : int
        Independent chains, run on threads and concatenated in chain order.
    as_arrays : bool
        Return the raw ``(n_samples, n+1, L)`` int8 step array instead of
        :class:`PathConfiguration` objects.
    """
    if n_samples <= 0 or chains <= 0:
        raise ValueError("n_samples and chains must be positive")
    burn_in = default_burn_in(seq) if burn_in is None else int(burn_in)
    thin = default_thin(seq) if thin is None else int(thin)
    if burn_in < 0 or thin <= 0:
        raise ValueError("burn_in must be >= 0 and thin > 0")
    children = np.random.SeedSequence(int(seed)).spawn(chains)
    counts = [n_samples // chains + (c < n_samples % chains) for c in range(chains)]
    if chains == 1:
        results = [_chain(seq, counts[0], burn_in, thin, children[0])]
    else:
        with ThreadPoolExecutor(max_workers=min(chains, os.cpu_count() or 1)) as ex:
            results = list(ex.map(lambda c: _chain(seq, counts[c], burn_in, thin, children[c]),
                                  range(chains)))
    arr = np.concatenate([r[0] for r in results], axis=0)
    every = 1 if DEBUG else RELEASE_CHECK_EVERY
    for j in range(0, len(arr), every):
        cfg = _config_from_steps(seq, arr[j])
        if not cfg.is_valid():
            raise AssertionError(f"invalid configuration at sample {j}")
    if as_arrays:
        return arr
    return [_config_from_steps(seq, s) for s in arr]


def samples_to_text(samples) -> str:
    """One run-length record per line."""
    return "".join(s.to_text() + "\n" for s in samples)


# --------------------------------------------------------------------------
# overlay against the predicted curve


def outer_shell(cfg: PathConfiguration) -> np.ndarray:
    """Rescaled vertices ``(X/n, Y/n)`` of the topmost path."""
    n = cfg.seq.n
    pts = np.array(cfg.path_vertices(n), dtype=float)
    return pts / max(n, 1)


def upper_envelope(parts, X1: float):
    """Polyline of the predicted upper boundary of the path region.

    It runs along ``Y = 1`` up to ``X1`` and then follows the generic-I
    portion down to the axis.
    """
    por = [p for p in parts if p.kind == "generic-I"][0]
    order = np.argsort(por.X)
    Xc, Yc = por.X[order], por.Y[order]
    X = np.concatenate([[0.0, X1], Xc])
    Y = np.concatenate([[1.0, 1.0], Yc])
    return X, Y


def _dist_to_polyline(P, X, Y):
    A = np.column_stack([X[:-1], Y[:-1]])
    B = np.column_stack([X[1:], Y[1:]])
    AB = B - A
    L2 = np.maximum((AB ** 2).sum(1), 1e-300)
    out = np.empty(len(P))
    for j, p in enumerate(P):
        s = np.clip(((p - A) * AB).sum(1) / L2, 0.0, 1.0)
        d = A + s[:, None] * AB - p
        out[j] = np.sqrt((d ** 2).sum(1).min())
    return out


def overlay_fraction(points: np.ndarray, parts, X1: float, margin: float = 0.1) -> float:
    """Share of ``points`` lying under the envelope or within ``margin`` of it."""
    if len(points) == 0:
        return 1.0
    X, Y = upper_envelope(parts, X1)
    f = np.interp(points[:, 0], X, Y, left=1.0, right=0.0)
    below = points[:, 1] <= f
    near = np.zeros(len(points), dtype=bool)
    idx = np.flatnonzero(~below)
    if len(idx):
        near[idx] = _dist_to_polyline(points[idx], X, Y) <= margin
    return float(np.mean(below | near))


def overlay_export(samples, parts, alpha1: float | None = None, svg_path=None,
                   csv_path=None, triangular: bool = False):
    """Point cloud of outer-shell vertices together with the curve portions.

    Returns ``(csv_text, svg_text)`` and writes them when paths are given.
    """
    from .svg import render

    pts = (np.concatenate([outer_shell(s) for s in samples], axis=0)
           if samples else np.zeros((0, 2)))
    if alpha1 is None:
        alpha1 = float(parts[0].resolvent.alpha1)
    lines = ["kind,X,Y"]
    lines += [f"shell,{X!r},{Y!r}" for X, Y in pts.tolist()]
    for p in parts:
        lines += [f"{p.kind},{float(X)!r},{float(Y)!r}" for X, Y in zip(p.X, p.Y)]
    csv_text = "\n".join(lines) + "\n"
    svg_text = render(parts, alpha1, points=pts, triangular=triangular)
    if csv_path:
        with open(csv_path, "w", newline="\n") as fh:
            fh.write(csv_text)
    if svg_path:
        with open(svg_path, "w", newline="\n") as fh:
            fh.write(svg_text)
    return csv_text, svg_text
