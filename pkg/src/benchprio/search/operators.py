"""Permutation variation operators: PMX crossover and swap mutation."""

from __future__ import annotations

import numpy as np


def random_cuts(n: int, rng: np.random.Generator) -> tuple[int, int]:
    """Two distinct cut points in [0, n]; the segment is ``[lo, hi)``."""
    lo, hi = sorted(int(c) for c in rng.choice(n + 1, size=2, replace=False))
    return lo, hi


def pmx_batch(p1: np.ndarray, p2: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """PMX children keeping ``p1[k, lo[k]:hi[k]]`` and filling the rest from ``p2[k]``.

    Conflicting genes outside the segment follow the segment mapping
    ``p1[q] -> p2[q]`` until they leave the segment.
    """
    p1 = np.atleast_2d(p1)
    p2 = np.atleast_2d(p2)
    k, n = p1.shape
    rows = np.arange(k)[:, None]
    cols = np.arange(n)[None, :]
    seg = (cols >= np.asarray(lo)[:, None]) & (cols < np.asarray(hi)[:, None])
    inv1 = np.empty_like(p1)
    inv1[rows, p1] = cols
    child = np.where(seg, p1, p2)
    ks, js = np.nonzero(~seg & seg[rows, inv1[rows, child]])
    vals = child[ks, js]
    done_k, done_j, done_v = [], [], []
    while ks.size:
        pos = inv1[ks, vals]
        vals = p2[ks, pos]
        still = seg[ks, inv1[ks, vals]]
        done_k.append(ks[~still])
        done_j.append(js[~still])
        done_v.append(vals[~still])
        ks, js, vals = ks[still], js[still], vals[still]
    if done_k:
        child[np.concatenate(done_k), np.concatenate(done_j)] = np.concatenate(done_v)
    return child


def pmx_crossover(
    p1, p2, rng: np.random.Generator, cuts: tuple[int, int] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Partially-mapped crossover of two permutations of equal length."""
    p1 = np.asarray(p1)
    p2 = np.asarray(p2)
    if p1.shape != p2.shape or p1.ndim != 1 or len(p1) < 2:
        raise ValueError("pmx needs two permutations of equal length >= 2")
    lo, hi = cuts if cuts is not None else random_cuts(len(p1), rng)
    c1 = pmx_batch(p1, p2, np.array([lo]), np.array([hi]))[0]
    c2 = pmx_batch(p2, p1, np.array([lo]), np.array([hi]))[0]
    return c1, c2


def swap_mutation(p, prob: float, rng: np.random.Generator) -> np.ndarray:
    """With probability ``prob`` swap one uniformly chosen pair of positions."""
    out = np.array(p, copy=True)
    if len(out) < 2:
        raise ValueError("swap mutation needs length >= 2")
    if rng.random() < prob:
        i, j = rng.choice(len(out), size=2, replace=False)
        out[i], out[j] = out[j], out[i]
    return out


def is_permutation(p) -> bool:
    p = np.asarray(p)
    return p.ndim == 1 and np.array_equal(np.sort(p), np.arange(len(p)))
