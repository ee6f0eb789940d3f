"""Seeded synthetic suites with planted coverage/change structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from benchprio.model import (
    BenchmarkId,
    ChangeHistory,
    CoverageMatrix,
    DiffSet,
    GroundTruthChanges,
)

# change_percent = CHANGE_SCALE * exp(CHANGE_SIGMA * latent): a few large
# changes and many small ones
CHANGE_SCALE = 5.0
CHANGE_SIGMA = 0.8
DIFF_FRACTION = 0.2


@dataclass(frozen=True)
class SyntheticSpec:
    n_benchmarks: int = 50
    n_methods: int = 200
    coverage_density: float = 0.1
    change_correlation: float = 0.5
    n_versions: int = 5
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n_benchmarks < 1 or self.n_methods < 1 or self.n_versions < 1:
            raise ValueError("n_benchmarks, n_methods and n_versions must all be >= 1")
        if not 0.0 < self.coverage_density <= 1.0:
            raise ValueError("coverage_density must be in (0, 1]")
        if not 0.0 <= self.change_correlation <= 1.0:
            raise ValueError("change_correlation must be in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _standardize(x: np.ndarray) -> np.ndarray:
    sd = x.std()
    if sd == 0:
        return np.zeros_like(x, dtype=float)
    return (x - x.mean()) / sd


def generate_synthetic(
    spec: SyntheticSpec,
) -> tuple[CoverageMatrix, ChangeHistory, DiffSet, GroundTruthChanges]:
    """Build a suite whose current-version changes track coverage size.

    Each benchmark gets a standard-normal latent propensity correlated with
    its standardized coverage size; the ground-truth change is lognormal in
    that latent, and every historical version applies the same map to the
    latent plus fresh per-version noise. The latent correlation is inflated
    by ``sqrt(exp(s^2) - 1) / s`` (capped at 1) so that the Pearson
    correlation between coverage size and the lognormal change lands near
    ``change_correlation`` for large suites.
    """
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n_benchmarks, spec.n_methods
    methods = [f"pkg.C{j // 10}.m{j}" for j in range(m)]

    # per-benchmark density in [density^2, density^0.5]; density 1 covers everything
    exponent = rng.uniform(0.5, 2.0, size=n)
    density = spec.coverage_density ** exponent
    covered = rng.random((n, m)) < density[:, None]

    ids = [BenchmarkId.of(f"bench.Suite.b{i:04d}") for i in range(n)]
    cov = CoverageMatrix(
        "v_current",
        tuple((ids[i], frozenset(methods[j] for j in np.flatnonzero(covered[i]))) for i in range(n)),
    )

    size_z = _standardize(covered.sum(axis=1).astype(float))
    s = CHANGE_SIGMA
    rho = min(1.0, spec.change_correlation * np.sqrt(np.expm1(s * s)) / s)
    latent = rho * size_z + np.sqrt(1.0 - rho * rho) * rng.standard_normal(n)

    truth_vals = CHANGE_SCALE * np.exp(s * latent)
    truth = GroundTruthChanges({ids[i]: float(truth_vals[i]) for i in range(n)})

    noise = rng.standard_normal((n, spec.n_versions))
    hist_vals = CHANGE_SCALE * np.exp(s * (latent[:, None] + noise))
    hist = ChangeHistory(
        {ids[i]: tuple((f"v{v:03d}", float(hist_vals[i, v])) for v in range(spec.n_versions)) for i in range(n)}
    )

    k = max(1, int(round(DIFF_FRACTION * m)))
    picked = rng.choice(m, size=k, replace=False)
    diff = DiffSet(frozenset(methods[j] for j in picked))
    return cov, hist, diff, truth
