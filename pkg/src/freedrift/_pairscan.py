"""Chunked pairwise scans over particle arrays.

Shared by the flow, hard-core, and cylinder verifiers. Pair enumeration is
exhaustive up to a pair-count limit and switches to uniform seeded sampling
beyond it; scans reduce deterministically (first-encountered pair wins ties
in enumeration order, which is lexicographic in exhaustive mode).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_SEED = 0x5EED
EXHAUSTIVE_LIMIT = 10**7
DEFAULT_SAMPLE_BUDGET = 10**6
_CHUNK = 1 << 18


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def _iter_exhaustive(n: int):
    for i in range(n - 1):
        jj = np.arange(i + 1, n)
        yield np.full(jj.shape, i, dtype=np.int64), jj


def _iter_sampled(n: int, budget: int, seed: int):
    rng = np.random.default_rng(seed)
    remaining = budget
    while remaining > 0:
        m = min(_CHUNK, remaining)
        ii = rng.integers(0, n, size=m)
        jj = rng.integers(0, n - 1, size=m)
        jj = np.where(jj >= ii, jj + 1, jj)  # uniform over the n-1 others
        yield np.minimum(ii, jj), np.maximum(ii, jj)
        remaining -= m


def iter_pairs(n: int, exhaustive: bool, budget: int, seed: int):
    if exhaustive:
        yield from _iter_exhaustive(n)
    else:
        yield from _iter_sampled(n, budget, seed)


@dataclass(frozen=True)
class ApproachScan:
    min_distance: float
    witness: tuple[int, int] | None
    pairs_total: int
    pairs_checked: int
    mode: str
    seed: int | None


def _lex_best(dist, ii, jj):
    """Smallest distance in the chunk; ties to the smallest (i, j)."""
    d = float(np.min(dist))
    where = np.flatnonzero(dist == d)
    pairs = sorted(zip(ii[where].tolist(), jj[where].tolist()))
    return d, pairs[0]


def closest_approach_distances(P, V, ii, jj):
    """Vectorized closest-approach distance for index pairs (ii, jj)."""
    dx = P[jj] - P[ii]
    dv = V[jj] - V[ii]
    num = np.abs(dx[:, 1] * dv[:, 0] - dx[:, 0] * dv[:, 1])
    dv_norm = np.hypot(dv[:, 0], dv[:, 1])
    static = dv_norm == 0.0
    out = np.where(static, np.hypot(dx[:, 0], dx[:, 1]),
                   num / np.where(static, 1.0, dv_norm))
    return out


def scan_closest_approach(P, V, *, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                          sample_budget: int = DEFAULT_SAMPLE_BUDGET,
                          seed: int = DEFAULT_SEED) -> ApproachScan:
    n = len(P)
    total = pair_count(n)
    if total == 0:
        return ApproachScan(math.inf, None, 0, 0, "exhaustive", None)
    exhaustive = total <= exhaustive_limit
    best = math.inf
    best_pair: tuple[int, int] | None = None
    checked = 0
    for ii, jj in iter_pairs(n, exhaustive, sample_budget, seed):
        dist = closest_approach_distances(P, V, ii, jj)
        checked += len(dist)
        d, pair = _lex_best(dist, ii, jj)
        if d < best or (d == best and (best_pair is None or pair < best_pair)):
            best = d
            best_pair = pair
    return ApproachScan(best, best_pair, total, checked,
                        "exhaustive" if exhaustive else "sampled",
                        None if exhaustive else seed)


@dataclass(frozen=True)
class ChainScan:
    dot_margin: float
    norm_margin: float
    failures: tuple[tuple[int, int], ...]
    failure_count: int
    pairs_total: int
    pairs_checked: int
    mode: str
    seed: int | None


def scan_chain(P, W, *, tolerance: float = 1e-12,
               exhaustive_limit: int = EXHAUSTIVE_LIMIT,
               sample_budget: int = DEFAULT_SAMPLE_BUDGET,
               seed: int = DEFAULT_SEED, max_failures: int = 16) -> ChainScan:
    """Per-pair margins of <x-y, dW> >= |dW1|+|dW2| >= |dW|.

    The first inequality is the summed per-coordinate bound (lattice points
    are at integer offsets, so each coordinate contributes at least its
    profile increment); the second is the 1-norm/2-norm comparison.
    """
    n = len(P)
    total = pair_count(n)
    if total == 0:
        return ChainScan(math.inf, math.inf, (), 0, 0, 0, "exhaustive", None)
    exhaustive = total <= exhaustive_limit
    dot_margin = math.inf
    norm_margin = math.inf
    failures: list[tuple[int, int]] = []
    failure_count = 0
    checked = 0
    for ii, jj in iter_pairs(n, exhaustive, sample_budget, seed):
        dx = P[jj] - P[ii]
        dw = W[jj] - W[ii]
        dot = dx[:, 0] * dw[:, 0] + dx[:, 1] * dw[:, 1]
        l1 = np.abs(dw[:, 0]) + np.abs(dw[:, 1])
        l2 = np.hypot(dw[:, 0], dw[:, 1])
        m1 = dot - l1
        m2 = l1 - l2
        checked += len(dot)
        dot_margin = min(dot_margin, float(np.min(m1)))
        norm_margin = min(norm_margin, float(np.min(m2)))
        bad = np.flatnonzero((m1 < -tolerance) | (m2 < -tolerance))
        failure_count += len(bad)
        for k in bad[: max(0, max_failures - len(failures))]:
            failures.append((int(ii[k]), int(jj[k])))
    return ChainScan(dot_margin, norm_margin, tuple(failures), failure_count,
                     total, checked, "exhaustive" if exhaustive else "sampled",
                     None if exhaustive else seed)


def duplicate_rows(A, max_pairs: int = 16):
    """Exactly equal rows of an (n, 2) array.

    Returns (count, pairs) where pairs lists up to max_pairs index pairs
    (i < j), each a duplicate adjacency in value-sorted order.
    """
    n = len(A)
    if n < 2:
        return 0, ()
    order = np.lexsort((A[:, 1], A[:, 0]))
    S = A[order]
    eq = np.flatnonzero((S[1:, 0] == S[:-1, 0]) & (S[1:, 1] == S[:-1, 1]))
    pairs = []
    for k in eq[:max_pairs]:
        a, b = int(order[k]), int(order[k + 1])
        pairs.append((min(a, b), max(a, b)))
    return int(len(eq)), tuple(sorted(pairs))


@dataclass(frozen=True)
class LineScan:
    min_distance: float
    witness: tuple[int, int] | None
    pairs_total: int
    pairs_checked: int
    mode: str
    seed: int | None


def worldline_distances(P, V, ii, jj, parallel_eps: float = 1e-12):
    """Line-line distances between worldlines (base (x,0), direction (v,1))."""
    dx = P[ii] - P[jj]
    a = V[ii]
    b = V[jj]
    # d_i x d_j for directions (a,1), (b,1)
    n1 = a[:, 1] - b[:, 1]
    n2 = b[:, 0] - a[:, 0]
    n3 = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    cross_norm = np.sqrt(n1 * n1 + n2 * n2 + n3 * n3)
    len_a = np.sqrt(1.0 + a[:, 0] ** 2 + a[:, 1] ** 2)
    len_b = np.sqrt(1.0 + b[:, 0] ** 2 + b[:, 1] ** 2)
    parallel = cross_norm < parallel_eps * len_a * len_b
    # Skew branch: |<p_j - p_i, n>| / |n|; offset has zero third component.
    num_skew = np.abs((-dx[:, 0]) * n1 + (-dx[:, 1]) * n2)
    skew = num_skew / np.where(parallel, 1.0, cross_norm)
    # Parallel branch: point-to-line distance from p_j to line i.
    c1 = -dx[:, 1]
    c2 = dx[:, 0]
    c3 = -dx[:, 0] * a[:, 1] + dx[:, 1] * a[:, 0]
    point_line = np.sqrt(c1 * c1 + c2 * c2 + c3 * c3) / len_a
    return np.where(parallel, point_line, skew)


def scan_worldline_distance(P, V, *, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                            sample_budget: int = DEFAULT_SAMPLE_BUDGET,
                            seed: int = DEFAULT_SEED) -> LineScan:
    n = len(P)
    total = pair_count(n)
    if total == 0:
        return LineScan(math.inf, None, 0, 0, "exhaustive", None)
    exhaustive = total <= exhaustive_limit
    best = math.inf
    best_pair: tuple[int, int] | None = None
    checked = 0
    for ii, jj in iter_pairs(n, exhaustive, sample_budget, seed):
        dist = worldline_distances(P, V, ii, jj)
        checked += len(dist)
        d, pair = _lex_best(dist, ii, jj)
        if d < best or (d == best and (best_pair is None or pair < best_pair)):
            best = d
            best_pair = pair
    return LineScan(best, best_pair, total, checked,
                    "exhaustive" if exhaustive else "sampled",
                    None if exhaustive else seed)
