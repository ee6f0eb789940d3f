"""Picking one ranking from a Pareto front and change-aware reordering."""

from __future__ import annotations

from typing import Callable

import numpy as np

from benchprio.errors import EmptyFront
from benchprio.model import CoverageMatrix, DiffSet, GroundTruthChanges, Ranking
from benchprio.search.engine import ParetoFront

POLICIES = ("ideal", "median")


def distance_to_ideal(F: np.ndarray) -> np.ndarray:
    lo = F.min(axis=0)
    span = F.max(axis=0) - lo
    norm = np.divide(F - lo, span, out=np.zeros_like(F), where=span > 0)
    return np.sqrt((norm**2).sum(axis=1))


def select_solution(
    front: ParetoFront,
    policy: str = "ideal",
    truth: GroundTruthChanges | None = None,
    transform: Callable[[Ranking], Ranking] | None = None,
) -> Ranking:
    """Choose the ranking to execute.

    ``ideal`` takes the solution nearest the all-zero corner after min-max
    normalization across the front. ``median`` takes the lower-median APFD-P
    solution against ``truth`` (after ``transform``, e.g. change-aware
    reordering). Front order (objectives, then genes) breaks ties.
    """
    if not front.solutions:
        raise EmptyFront("cannot select from an empty front")
    post = transform or (lambda r: r)
    if policy == "ideal":
        d = distance_to_ideal(front.objective_matrix())
        best = int(np.flatnonzero(d == d.min())[0])
        return post(front.ranking(best, note="distance_to_ideal"))
    if policy == "median":
        if truth is None:
            raise ValueError("median selection needs ground-truth changes")
        from benchprio.evaluation.metrics import apfd_p

        candidates = [post(front.ranking(i, note="median_effectiveness")) for i in range(len(front))]
        scores = np.array([apfd_p(r, truth) for r in candidates])
        order = np.argsort(scores, kind="stable")
        return candidates[int(order[(len(order) - 1) // 2])]
    raise ValueError(f"unknown selection policy {policy!r}")


def apply_car(ranking: Ranking, cov: CoverageMatrix, diff: DiffSet) -> Ranking:
    """Stable partition: benchmarks covering a changed method go first."""
    coverage = cov.benchmarks
    changed = diff.changed_methods
    hits = [b for b in ranking.order if coverage[b] & changed]
    rest = [b for b in ranking.order if not coverage[b] & changed]
    note = (ranking.note + "; car").lstrip("; ")
    return Ranking(tuple(hits + rest), strategy=ranking.strategy, seed=ranking.seed, note=note)
