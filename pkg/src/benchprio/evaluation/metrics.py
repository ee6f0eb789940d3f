"""Effectiveness of a ranking against current-version changes."""

from __future__ import annotations

from benchprio.errors import PermutationMismatch, SuiteTooSmall, ZeroTotalChange
from benchprio.model import GroundTruthChanges, Ranking, canonical_index


def _ranked_changes(ranking: Ranking, truth: GroundTruthChanges) -> list[float]:
    if set(ranking.order) != set(truth.changes) or len(ranking.order) != len(truth.changes):
        raise PermutationMismatch("ranking and ground truth cover different benchmarks")
    return [truth.changes[b] for b in ranking.order]


def apfd_p(ranking: Ranking, truth: GroundTruthChanges) -> float:
    """Area under the cumulative detected-change curve, in [0, 1]."""
    changes = _ranked_changes(ranking, truth)
    c = truth.total
    if c <= 0:
        raise ZeroTotalChange("all changes are zero; APFD-P is undefined")
    detected = 0.0
    acc = 0.0
    for ch in changes:
        detected += ch
        acc += detected / c
    return min(1.0, acc / len(changes))


def top_n(ranking: Ranking, truth: GroundTruthChanges, n: int = 3) -> float:
    """Fraction of the suite to run before the ``n`` largest changes are all seen."""
    changes = _ranked_changes(ranking, truth)
    size = len(changes)
    if n < 1 or size < n:
        raise SuiteTooSmall(f"Top-{n} needs at least {n} benchmarks, suite has {size}")
    if truth.total <= 0:
        raise ZeroTotalChange("all changes are zero; Top-N is undefined")
    by_size = sorted(canonical_index(list(truth.changes)), key=lambda b: -truth.changes[b])  # stable
    targets = set(by_size[:n])
    last = max(i for i, b in enumerate(ranking.order, start=1) if b in targets)
    return last / size
