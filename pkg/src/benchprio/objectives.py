"""APTEC-based fitness: coverage, coverage overlap, historical change."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from benchprio.errors import MissingDiff, PermutationMismatch
from benchprio.model import (
    BenchmarkId,
    ChangeHistory,
    CoverageMatrix,
    DiffSet,
    ObjectiveVector,
    Ranking,
    canonical_index,
)

Mode = Literal["nca", "cac", "car"]
MODES = ("nca", "cac", "car")
OVERLAP_MEASURES = ("jaccard", "containment")
HIST_AGGREGATES = ("mean", "median")


@dataclass(frozen=True, eq=False)
class ObjectiveContext:
    """Per-benchmark element values, indexed by canonical gene value.

    ``elements`` has shape (3, n): coverage counts, mean overlap, aggregated
    historical change. ``m_total[k]`` is the plain sum of row ``k``.
    """

    ids: tuple[BenchmarkId, ...]
    elements: np.ndarray
    m_total: np.ndarray
    mode: str = "nca"

    def __post_init__(self) -> None:
        self.elements.setflags(write=False)
        self.m_total.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def elem_coverage(self) -> np.ndarray:
        return self.elements[0]

    @property
    def elem_overlap(self) -> np.ndarray:
        return self.elements[1]

    @property
    def elem_hist(self) -> np.ndarray:
        return self.elements[2]

    def index_of(self, bid: BenchmarkId) -> int:
        return self._index[bid]

    @property
    def _index(self) -> dict[BenchmarkId, int]:
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = {bid: i for i, bid in enumerate(self.ids)}
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def genes_of(self, ranking: Ranking) -> np.ndarray:
        ranking.check_against(self.ids)
        return np.fromiter((self._index[b] for b in ranking.order), dtype=np.int64, count=self.n)

    def ranking_of(self, genes: Sequence[int], **provenance) -> Ranking:
        return Ranking(tuple(self.ids[int(g)] for g in genes), **provenance)


def overlap_elements(sets: Sequence[frozenset], measure: str = "jaccard") -> np.ndarray:
    """Mean pairwise overlap of each coverage set against all the others."""
    n = len(sets)
    if n < 2:
        return np.zeros(n)
    universe = sorted(set().union(*sets))
    col = {m: j for j, m in enumerate(universe)}
    mat = np.zeros((n, len(universe)))
    for i, s in enumerate(sets):
        mat[i, [col[m] for m in s]] = 1.0
    inter = mat @ mat.T
    sizes = mat.sum(axis=1)
    if measure == "jaccard":
        denom = sizes[:, None] + sizes[None, :] - inter
    elif measure == "containment":
        denom = np.broadcast_to(sizes[:, None], inter.shape)
    else:
        raise ValueError(f"unknown overlap measure {measure!r}")
    sim = np.divide(inter, denom, out=np.zeros_like(inter), where=denom > 0)
    np.fill_diagonal(sim, 0.0)
    return sim.sum(axis=1) / (n - 1)


def build_context(
    cov: CoverageMatrix,
    hist: ChangeHistory,
    diff: DiffSet | None = None,
    mode: str = "nca",
    overlap: str = "jaccard",
    hist_agg: str = "mean",
) -> ObjectiveContext:
    if mode not in MODES:
        raise ValueError(f"unknown change-awareness mode {mode!r}")
    if hist_agg not in HIST_AGGREGATES:
        raise ValueError(f"unknown history aggregate {hist_agg!r}")
    if mode in ("cac", "car") and diff is None:
        raise MissingDiff(f"mode {mode} needs a diff of changed methods")

    ids = tuple(canonical_index(cov))
    coverage = cov.benchmarks
    sets = [coverage[b] for b in ids]
    if mode == "cac":
        sets = [s & diff.changed_methods for s in sets]

    elem_cov = np.array([len(s) for s in sets], dtype=float)
    elem_overlap = overlap_elements(sets, overlap)
    agg = np.mean if hist_agg == "mean" else np.median
    elem_hist = np.array([float(agg(hist.changes(b))) if hist.changes(b) else 0.0 for b in ids])

    elements = np.vstack([elem_cov, elem_overlap, elem_hist])
    return ObjectiveContext(ids, elements, elements.sum(axis=1), mode)


def aptec(elements: Sequence[float], m_total: float | None = None) -> float:
    """Area under the cumulative element curve of a ranking, in [0, 1].

    Uses the running prefix ``prev(b) = prev(b-1) + elements(b)``. Returns 0
    when the elements sum to zero.
    """
    n = len(elements)
    if n == 0:
        raise ValueError("aptec needs at least one element")
    if m_total is None:
        m_total = float(np.sum(np.asarray(elements, dtype=float)))
    if m_total <= 0:
        return 0.0
    prev = 0.0
    acc = 0.0
    for e in elements:
        prev += e
        acc += prev
    return min(1.0, max(0.0, acc / m_total / n))


def evaluate_genes(genes: Sequence[int], ctx: ObjectiveContext) -> ObjectiveVector:
    genes = np.asarray(genes)
    cov, ovl, hst = (aptec(ctx.elements[k, genes], ctx.m_total[k]) for k in range(3))
    return ObjectiveVector.from_scores(cov, ovl, hst)


def evaluate(ranking: Ranking, ctx: ObjectiveContext) -> ObjectiveVector:
    if len(ranking) != ctx.n:
        raise PermutationMismatch(f"ranking has {len(ranking)} benchmarks, suite has {ctx.n}")
    return evaluate_genes(ctx.genes_of(ranking), ctx)


def evaluate_batch(population: np.ndarray, ctx: ObjectiveContext) -> np.ndarray:
    """Canonical-min objective rows for a (P, n) array of permutations."""
    population = np.atleast_2d(population)
    n = population.shape[1]
    prefix = np.cumsum(ctx.elements[:, population], axis=-1)
    area = prefix.sum(axis=-1)
    totals = ctx.m_total[:, None]
    scores = np.divide(area, totals * n, out=np.zeros_like(area), where=totals > 0)
    scores = np.clip(scores, 0.0, 1.0)
    out = np.empty((population.shape[0], 3))
    out[:, 0] = 1.0 - scores[0]
    out[:, 1] = scores[1]
    out[:, 2] = 1.0 - scores[2]
    return out
