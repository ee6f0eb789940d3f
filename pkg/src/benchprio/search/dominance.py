"""Pareto dominance utilities on canonical (all-minimization) objective rows."""

from __future__ import annotations

import numpy as np


def dominates(a, b) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True iff row i dominates row j."""
    le = np.all(F[:, None, :] <= F[None, :, :], axis=-1)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=-1)
    return le & lt


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    if len(F) == 0:
        return np.zeros(0, dtype=bool)
    return ~dominance_matrix(F).any(axis=0)


def fast_nondominated_sort(F: np.ndarray) -> np.ndarray:
    """Pareto rank per row (0 = first front)."""
    D = dominance_matrix(F)
    counts = D.sum(axis=0)
    ranks = np.full(len(F), -1, dtype=np.int64)
    current = np.flatnonzero(counts == 0)
    r = 0
    while current.size:
        ranks[current] = r
        counts = counts - D[current].sum(axis=0)
        counts[ranks >= 0] = -1
        current = np.flatnonzero(counts == 0)
        r += 1
    return ranks


def crowding_distance(F: np.ndarray, tiebreak: np.ndarray | None = None) -> np.ndarray:
    """NSGA-II crowding distance within one front; boundary points get inf."""
    k, m = F.shape
    dist = np.zeros(k)
    if k <= 2:
        dist[:] = np.inf
        return dist
    if tiebreak is None:
        tiebreak = np.arange(k)
    for j in range(m):
        order = np.lexsort((tiebreak, F[:, j]))
        lo, hi = F[order[0], j], F[order[-1], j]
        dist[order[0]] = dist[order[-1]] = np.inf
        if hi == lo:
            continue
        dist[order[1:-1]] += (F[order[2:], j] - F[order[:-2], j]) / (hi - lo)
    return dist


def strength(F: np.ndarray) -> np.ndarray:
    """SPEA2 strength: how many rows each row dominates."""
    return dominance_matrix(F).sum(axis=1)


def lex_rank(F: np.ndarray, genes: np.ndarray) -> np.ndarray:
    """Position of each individual in (objectives, genes) lexicographic order."""
    order = np.lexsort([F[:, c] for c in range(F.shape[1] - 1, -1, -1)])
    Fs = F[order]
    same = np.all(Fs[1:] == Fs[:-1], axis=1)
    if same.any():
        order = order.copy()
        start = 0
        for i in range(1, len(order) + 1):
            if i == len(order) or not same[i - 1]:
                if i - start > 1:
                    group = order[start:i]
                    order[start:i] = sorted(group, key=lambda g: (tuple(genes[g]), g))
                start = i
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    return rank
