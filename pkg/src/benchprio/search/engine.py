"""Generational loop shared by every MOEA."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from benchprio.model import BenchmarkId, ObjectiveVector, Ranking
from benchprio.objectives import ObjectiveContext, evaluate_batch
from benchprio.search.algorithms import ALGORITHMS
from benchprio.search.dominance import lex_rank, nondominated_mask
from benchprio.search.operators import is_permutation, pmx_batch

MAX_GENERATIONS = 100


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str = "ibea"
    population: int = 250
    archive: int = 500
    max_evaluations: int = 25000
    crossover_prob: float = 0.9
    mutation_prob: float | None = None  # None -> 1/n
    seed: int = 42
    ibea_kappa: float = 0.05
    max_generations: int = MAX_GENERATIONS
    check_permutations: bool = False

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.population < 2 or self.population % 2:
            raise ValueError("population must be even and >= 2")
        if self.archive < 1:
            raise ValueError("archive must be >= 1")
        if self.max_evaluations < self.population:
            raise ValueError("max_evaluations must be >= population")
        for p in (self.crossover_prob, self.mutation_prob):
            if p is not None and not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.ibea_kappa <= 0:
            raise ValueError("ibea_kappa must be positive")

    @property
    def budget(self) -> int:
        return min(self.max_evaluations, self.population * self.max_generations)


@dataclass(frozen=True)
class Individual:
    genes: tuple[int, ...]
    objectives: ObjectiveVector
    aux_fitness: float = 0.0


@dataclass
class ParetoFront:
    ids: tuple[BenchmarkId, ...]
    solutions: list[Individual]
    evaluations: int = 0
    generations: int = 0
    wall_time: float = 0.0
    algorithm: str = ""
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.solutions)

    def objective_matrix(self) -> np.ndarray:
        return np.array([s.objectives.canonical for s in self.solutions], dtype=float).reshape(-1, 3)

    def ranking(self, i: int, note: str = "") -> Ranking:
        genes = self.solutions[i].genes
        return Ranking(tuple(self.ids[g] for g in genes), strategy=self.algorithm, seed=self.seed, note=note)


def _vary(parents: np.ndarray, k: int, n: int, cfg: SearchConfig, pm: float, rng: np.random.Generator) -> np.ndarray:
    pairs = parents.reshape(-1, 2, n)
    m = len(pairs)
    p1, p2 = pairs[:, 0], pairs[:, 1]
    crossed = rng.random(m) < cfg.crossover_prob
    a = rng.integers(0, n + 1, size=m)
    b = rng.integers(0, n, size=m)
    b = b + (b >= a)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    c1 = np.where(crossed[:, None], pmx_batch(p1, p2, lo, hi), p1)
    c2 = np.where(crossed[:, None], pmx_batch(p2, p1, lo, hi), p2)
    off = np.stack([c1, c2], axis=1).reshape(-1, n)[:k].copy()

    mutate = rng.random(k) < pm
    i = rng.integers(0, n, size=k)
    j = rng.integers(0, n - 1, size=k)
    j = j + (j >= i)
    rows = np.flatnonzero(mutate)
    off[rows, i[rows]], off[rows, j[rows]] = off[rows, j[rows]], off[rows, i[rows]]
    return off


def extract_front(ids, genes: np.ndarray, F: np.ndarray, fitness=None) -> list[Individual]:
    """Non-dominated, objective-deduplicated individuals in lexicographic order."""
    mask = nondominated_mask(F)
    idx = np.flatnonzero(mask)
    idx = idx[np.argsort(lex_rank(F[idx], genes[idx]), kind="stable")]
    out: list[Individual] = []
    last = None
    for i in idx:
        key = tuple(F[i])
        if key == last:
            continue
        last = key
        aux = float(fitness[i]) if fitness is not None else 0.0
        out.append(Individual(tuple(int(g) for g in genes[i]), ObjectiveVector(key), aux))
    return out


def run_search(ctx: ObjectiveContext, config: SearchConfig) -> ParetoFront:
    """Evolve permutations of the suite and return the final non-dominated set."""
    n = ctx.n
    if n < 2:
        raise ValueError("search needs at least two benchmarks")
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    pm = config.mutation_prob if config.mutation_prob is not None else 1.0 / n
    algo = ALGORITHMS[config.algorithm](config)

    budget = config.budget
    genes = np.array([rng.permutation(n) for _ in range(config.population)], dtype=np.int64)
    F = evaluate_batch(genes, ctx)
    evals = len(genes)
    generations = 1
    algo.setup(genes, F)

    while evals < budget:
        k = min(config.population, budget - evals)
        count = k + (k % 2)
        parents = algo.genes[algo.parents(count, rng)]
        off = _vary(parents, k, n, config, pm, rng)
        if config.check_permutations:
            assert all(is_permutation(row) for row in off), "variation produced a non-permutation"
        F_off = evaluate_batch(off, ctx)
        evals += k
        generations += 1
        algo.survive(off, F_off)

    solutions = extract_front(ctx.ids, algo.genes, algo.F, algo.fitness)
    return ParetoFront(
        ids=ctx.ids,
        solutions=solutions,
        evaluations=evals,
        generations=generations,
        wall_time=time.perf_counter() - start,
        algorithm=config.algorithm,
        seed=config.seed,
    )
