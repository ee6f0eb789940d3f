"""Coverage-based greedy baselines: Total and Additional."""

from __future__ import annotations

from benchprio.model import CoverageMatrix, Ranking, canonical_index


def prioritize_total(cov: CoverageMatrix) -> Ranking:
    """Most covered methods first; ties keep canonical order."""
    coverage = cov.benchmarks
    ids = canonical_index(cov)
    order = sorted(ids, key=lambda b: -len(coverage[b]))  # stable
    return Ranking(tuple(order), strategy="total")


def prioritize_additional(cov: CoverageMatrix) -> Ranking:
    """Repeatedly take the benchmark adding the most not-yet-covered methods.

    Once no remaining benchmark adds anything, the covered set is reset and
    selection continues. Ties: larger total coverage, then canonical order.
    """
    coverage = cov.benchmarks
    remaining = canonical_index(cov)
    covered: set[str] = set()
    order = []
    while remaining:
        gains = [len(coverage[b] - covered) for b in remaining]
        if max(gains) == 0 and covered:
            covered = set()
            continue
        best = max(range(len(remaining)), key=lambda i: (gains[i], len(coverage[remaining[i]]), -i))
        pick = remaining.pop(best)
        covered |= coverage[pick]
        order.append(pick)
    return Ranking(tuple(order), strategy="additional")
