"""End-to-end prioritization: strategy dispatch, selection, post-processing."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from benchprio.greedy import prioritize_additional, prioritize_total
from benchprio.model import (
    ChangeHistory,
    CoverageMatrix,
    DiffSet,
    GroundTruthChanges,
    ObjectiveVector,
    Ranking,
    canonical_index,
)
from benchprio.objectives import ObjectiveContext, build_context, evaluate
from benchprio.search import SearchConfig, apply_car, run_search, select_solution

GREEDY = ("total", "additional")
MOEAS = ("ibea", "nsga2", "spea2")
CONTROLS = ("random",)
STRATEGIES = GREEDY + MOEAS + CONTROLS


@dataclass
class Prioritized:
    ranking: Ranking
    objectives: ObjectiveVector
    prioritization_time: float
    front_size: int = 0


def random_ranking(cov: CoverageMatrix, seed: int) -> Ranking:
    ids = canonical_index(cov)
    perm = np.random.default_rng(seed).permutation(len(ids))
    return Ranking(tuple(ids[i] for i in perm), strategy="random", seed=seed)


def prioritize(
    strategy: str,
    cov: CoverageMatrix,
    hist: ChangeHistory | None = None,
    diff: DiffSet | None = None,
    mode: str = "nca",
    seed: int = 42,
    select: str = "ideal",
    truth: GroundTruthChanges | None = None,
    config: SearchConfig | None = None,
    ctx: ObjectiveContext | None = None,
) -> Prioritized:
    """Rank ``cov`` with one strategy and report its fitness and timing.

    Change-aware ranking (``car``) reorders the final ranking of every
    strategy; change-aware coverage (``cac``) only alters MOEA objectives.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    hist = hist or ChangeHistory({})
    if ctx is None:
        ctx = build_context(cov, hist, diff, mode)
    post = (lambda r: apply_car(r, cov, diff)) if mode == "car" else None

    start = time.perf_counter()
    front_size = 0
    if strategy == "total":
        ranking = prioritize_total(cov)
    elif strategy == "additional":
        ranking = prioritize_additional(cov)
    elif strategy == "random":
        ranking = random_ranking(cov, seed)
    else:
        cfg = replace(config or SearchConfig(), algorithm=strategy, seed=seed)
        front = run_search(ctx, cfg)
        front_size = len(front)
        ranking = select_solution(front, select, truth=truth, transform=post)
        post = None
    if post is not None:
        ranking = post(ranking)
    elapsed = time.perf_counter() - start
    ranking = Ranking(ranking.order, strategy=strategy, seed=seed, note=ranking.note)
    return Prioritized(ranking, evaluate(ranking, ctx), elapsed, front_size)
