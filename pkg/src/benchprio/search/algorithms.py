"""Environmental/mating selection for IBEA, NSGA-II and SPEA2.

Each algorithm owns its survivor set and exposes the same three hooks to the
engine loop: ``setup`` with the evaluated initial population, ``parents`` to
draw a mating pool, and ``survive`` to absorb evaluated offspring. Adding
another MOEA means writing one more class with these hooks.
"""

from __future__ import annotations

import numpy as np

from benchprio.search.dominance import (
    crowding_distance,
    dominance_matrix,
    fast_nondominated_sort,
    lex_rank,
)
from benchprio.search.hypervolume import hv_indicator_matrix

# reference point (normalized space) for the IBEA indicator
IBEA_RHO = 2.0


class Algorithm:
    name = "base"

    def __init__(self, config) -> None:
        self.config = config
        self.genes: np.ndarray | None = None
        self.F: np.ndarray | None = None
        self.fitness: np.ndarray | None = None

    def setup(self, genes: np.ndarray, F: np.ndarray) -> None:
        raise NotImplementedError

    def parents(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Indices into ``self.genes`` of ``count`` tournament winners."""
        raise NotImplementedError

    def survive(self, genes: np.ndarray, F: np.ndarray) -> None:
        raise NotImplementedError

    def _tournament(self, count: int, rng: np.random.Generator, better) -> np.ndarray:
        # better(a, b) -> True if a beats b; full ties go to the lexicographically smaller
        size = len(self.genes)
        draws = rng.integers(0, size, size=(count, 2))
        tb = lex_rank(self.F, self.genes)
        winners = np.empty(count, dtype=np.int64)
        for k, (a, b) in enumerate(draws):
            if better(a, b):
                winners[k] = a
            elif better(b, a):
                winners[k] = b
            else:
                winners[k] = a if tb[a] <= tb[b] else b
        return winners


class IBEA(Algorithm):
    """Indicator-based EA with the additive hypervolume indicator."""

    name = "ibea"

    def setup(self, genes, F):
        self._select(genes, F)

    def survive(self, genes, F):
        self._select(np.vstack([self.genes, genes]), np.vstack([self.F, F]))

    def parents(self, count, rng):
        fit = self.fitness
        return self._tournament(count, rng, lambda a, b: fit[a] > fit[b])

    def _select(self, genes: np.ndarray, F: np.ndarray) -> None:
        lo = F.min(axis=0)
        span = F.max(axis=0) - lo
        norm = np.divide(F - lo, span, out=np.zeros_like(F), where=span > 0)
        ind = hv_indicator_matrix(norm, np.full(F.shape[1], IBEA_RHO))
        c = np.abs(ind).max()
        kappa = self.config.ibea_kappa
        if c == 0:
            contrib = np.ones_like(ind)
        else:
            contrib = np.exp(-ind / (c * kappa))
        np.fill_diagonal(contrib, 0.0)
        fitness = -contrib.sum(axis=0)

        alive = np.ones(len(genes), dtype=bool)
        tb = lex_rank(F, genes)
        excess = len(genes) - self.config.archive
        for _ in range(max(0, excess)):
            cand = np.flatnonzero(alive)
            worst_fit = fitness[cand].min()
            tied = cand[fitness[cand] == worst_fit]
            # among equally bad, drop the lexicographically largest
            worst = tied[np.argmax(tb[tied])]
            alive[worst] = False
            fitness += contrib[worst]
        keep = np.flatnonzero(alive)
        self.genes = genes[keep]
        self.F = F[keep]
        self.fitness = fitness[keep]


class NSGA2(Algorithm):
    name = "nsga2"

    def setup(self, genes, F):
        self._assign(genes, F)

    def parents(self, count, rng):
        rank, crowd = self.rank, self.crowd

        def better(a, b):
            return rank[a] < rank[b] or (rank[a] == rank[b] and crowd[a] > crowd[b])

        return self._tournament(count, rng, better)

    def survive(self, genes, F):
        genes = np.vstack([self.genes, genes])
        F = np.vstack([self.F, F])
        ranks = fast_nondominated_sort(F)
        tb = lex_rank(F, genes)
        target = self.config.population
        chosen: list[int] = []
        for r in range(ranks.max() + 1):
            front = np.flatnonzero(ranks == r)
            if len(chosen) + len(front) <= target:
                chosen.extend(front.tolist())
                if len(chosen) == target:
                    break
                continue
            crowd = crowding_distance(F[front], tb[front])
            order = np.lexsort((tb[front], -crowd))
            chosen.extend(front[order[: target - len(chosen)]].tolist())
            break
        keep = np.array(chosen, dtype=np.int64)
        self._assign(genes[keep], F[keep])

    def _assign(self, genes, F):
        self.genes, self.F = genes, F
        self.rank = fast_nondominated_sort(F)
        tb = lex_rank(F, genes)
        self.crowd = np.zeros(len(F))
        for r in range(self.rank.max() + 1):
            front = np.flatnonzero(self.rank == r)
            self.crowd[front] = crowding_distance(F[front], tb[front])
        self.fitness = self.rank.astype(float)


def spea2_fitness(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Raw fitness plus density, and the pairwise distance matrix."""
    D = dominance_matrix(F)
    strength = D.sum(axis=1)
    raw = (D * strength[:, None]).sum(axis=0)
    dist = np.sqrt(((F[:, None, :] - F[None, :, :]) ** 2).sum(axis=-1))
    k = int(np.sqrt(len(F)))
    sorted_d = np.sort(dist, axis=1)
    kth = sorted_d[:, min(k, len(F) - 1)]
    return raw + 1.0 / (kth + 2.0), dist


class SPEA2(Algorithm):
    """Strength Pareto EA 2 with an archive as large as the population."""

    name = "spea2"

    def setup(self, genes, F):
        self._select(genes, F)

    def survive(self, genes, F):
        self._select(np.vstack([self.genes, genes]), np.vstack([self.F, F]))

    def parents(self, count, rng):
        fit = self.fitness
        return self._tournament(count, rng, lambda a, b: fit[a] < fit[b])

    def _select(self, genes, F):
        fitness, dist = spea2_fitness(F)
        tb = lex_rank(F, genes)
        size = self.config.population
        nondom = np.flatnonzero(fitness < 1.0)
        if len(nondom) <= size:
            order = np.lexsort((tb, fitness))
            keep = order[:size]
        else:
            keep = self._truncate(nondom, dist, tb, size)
        keep = np.sort(keep)
        self.genes = genes[keep]
        self.F = F[keep]
        self.fitness, _ = spea2_fitness(self.F)

    @staticmethod
    def _truncate(members: np.ndarray, dist: np.ndarray, tb: np.ndarray, size: int) -> np.ndarray:
        members = members.copy()
        sub = dist[np.ix_(members, members)].copy()
        np.fill_diagonal(sub, np.inf)
        while len(members) > size:
            nearest = np.sort(sub, axis=1)
            # smallest distance to nearest neighbour, then 2nd nearest, ...; then lex order
            keys = [-tb[members]] + [nearest[:, c] for c in range(nearest.shape[1] - 1, -1, -1)]
            victim = np.lexsort(keys)[0]
            members = np.delete(members, victim)
            sub = np.delete(np.delete(sub, victim, axis=0), victim, axis=1)
        return members


ALGORITHMS = {cls.name: cls for cls in (IBEA, NSGA2, SPEA2)}
