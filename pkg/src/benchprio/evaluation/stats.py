"""Kruskal-Wallis, Dunn's post-hoc test, and Vargha-Delaney A12."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.special import gammaincc, ndtr
from scipy.stats import rankdata

NEGLIGIBLE, SMALL, MEDIUM = 0.147, 0.33, 0.474


def _tie_sum(ranked_values: np.ndarray) -> float:
    _, counts = np.unique(ranked_values, return_counts=True)
    return float(((counts.astype(float) ** 3) - counts).sum())


def _check_groups(groups: Sequence[Sequence[float]]) -> list[np.ndarray]:
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if any(a.size == 0 for a in arrays):
        raise ValueError("every group needs at least one observation")
    return arrays


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Tie-corrected H statistic and its chi-squared p-value (k-1 dof).

    When every observation is identical H is undefined; (0.0, 1.0) is returned.
    """
    arrays = _check_groups(groups)
    pooled = np.concatenate(arrays)
    N = pooled.size
    ranks = rankdata(pooled)
    correction = 1.0 - _tie_sum(pooled) / (N**3 - N) if N > 1 else 0.0
    if correction <= 0:
        return 0.0, 1.0
    bounds = np.cumsum([0] + [a.size for a in arrays])
    s = sum(ranks[bounds[i]:bounds[i + 1]].sum() ** 2 / arrays[i].size for i in range(len(arrays)))
    h = (12.0 / (N * (N + 1)) * s - 3.0 * (N + 1)) / correction
    h = max(h, 0.0)
    dof = len(arrays) - 1
    return float(h), float(gammaincc(dof / 2.0, h / 2.0))


def dunn_posthoc(
    groups: Sequence[Sequence[float]], alpha: float = 0.01, correction: str = "bonferroni"
) -> dict[tuple[int, int], float]:
    """Bonferroni-adjusted two-sided p-values for every pair of groups.

    ``alpha`` is accepted for symmetry with the reporting layer; the returned
    p-values do not depend on it.
    """
    if correction != "bonferroni":
        raise ValueError("only Bonferroni correction is supported")
    arrays = _check_groups(groups)
    pooled = np.concatenate(arrays)
    N = pooled.size
    ranks = rankdata(pooled)
    bounds = np.cumsum([0] + [a.size for a in arrays])
    mean_ranks = [ranks[bounds[i]:bounds[i + 1]].mean() for i in range(len(arrays))]
    variance = N * (N + 1) / 12.0 - (_tie_sum(pooled) / (12.0 * (N - 1)) if N > 1 else 0.0)
    pairs = list(itertools.combinations(range(len(arrays)), 2))
    out = {}
    for i, j in pairs:
        se = math.sqrt(max(variance, 0.0) * (1.0 / arrays[i].size + 1.0 / arrays[j].size))
        if se == 0:
            p = 1.0
        else:
            z = abs(mean_ranks[i] - mean_ranks[j]) / se
            p = 2.0 * float(ndtr(-z))
        out[(i, j)] = min(1.0, p * len(pairs))
    return out


def magnitude(a12: float) -> str:
    scaled = abs((a12 - 0.5) * 2.0)
    if scaled < NEGLIGIBLE:
        return "negligible"
    if scaled < SMALL:
        return "small"
    if scaled < MEDIUM:
        return "medium"
    return "large"


def vargha_delaney(a: Sequence[float], b: Sequence[float]) -> tuple[float, str]:
    """Probability that a draw from ``a`` exceeds one from ``b`` (ties count half)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    ranks = rankdata(np.concatenate([a, b]))
    r1 = ranks[: a.size].sum()
    a12 = (r1 / a.size - (a.size + 1) / 2.0) / b.size
    return float(a12), magnitude(a12)


@dataclass
class PairwiseResult:
    first: str
    second: str
    dunn_p_adjusted: float | None
    a12: float
    magnitude: str
    median_first: float
    median_second: float
    median_difference: float
    significant: bool


@dataclass
class ComparisonReport:
    kw_h: float | None
    kw_p: float | None
    alpha: float
    medians: dict[str, float]
    pairwise: list[PairwiseResult] = field(default_factory=list)
    note: str = ""

    @property
    def rejected(self) -> bool:
        return self.kw_p is not None and self.kw_p < self.alpha

    def significant_pairs(self) -> list[tuple[str, str]]:
        return [(p.first, p.second) for p in self.pairwise if p.significant]

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        lines = []
        if self.kw_h is None:
            lines.append(f"Kruskal-Wallis: skipped ({self.note})")
        else:
            lines.append(f"Kruskal-Wallis: H={self.kw_h:.4f} p={self.kw_p:.4g} (alpha={self.alpha})")
        header = f"{'first':<14}{'second':<14}{'p_adj':>10}{'A12':>8}  {'magnitude':<11}{'med_diff':>10}  sig"
        lines.append(header)
        lines.append("-" * len(header))
        for p in self.pairwise:
            padj = "-" if p.dunn_p_adjusted is None else f"{p.dunn_p_adjusted:.3g}"
            lines.append(
                f"{p.first:<14}{p.second:<14}{padj:>10}{p.a12:>8.3f}  {p.magnitude:<11}"
                f"{p.median_difference:>10.4f}  {'yes' if p.significant else 'no'}"
            )
        return "\n".join(lines) + "\n"


def compare_strategies(results: Mapping[str, Sequence[float]], alpha: float = 0.01) -> ComparisonReport:
    """Kruskal-Wallis over all strategies, then Dunn + A12 per pair.

    A pair is significant iff Kruskal-Wallis rejects, the adjusted Dunn
    p-value is below ``alpha``, and the effect is not negligible. When every
    group holds a single observation no test is run; medians and A12 are
    still reported.
    """
    names = list(results)
    if len(names) < 2:
        raise ValueError("need at least two strategies to compare")
    groups = [np.asarray(results[k], dtype=float) for k in names]
    medians = {k: float(np.median(g)) for k, g in zip(names, groups)}
    testable = any(g.size >= 2 for g in groups)
    if testable:
        h, p = kruskal_wallis(groups)
        dunn = dunn_posthoc(groups, alpha=alpha)
        note = ""
    else:
        h = p = None
        dunn = {}
        note = "single observation per strategy"
    report = ComparisonReport(kw_h=h, kw_p=p, alpha=alpha, medians=medians, note=note)
    for i, j in itertools.combinations(range(len(names)), 2):
        a12, mag = vargha_delaney(groups[i], groups[j])
        padj = dunn.get((i, j))
        sig = report.rejected and padj is not None and padj < alpha and mag != "negligible"
        report.pairwise.append(
            PairwiseResult(
                first=names[i],
                second=names[j],
                dunn_p_adjusted=padj,
                a12=a12,
                magnitude=mag,
                median_first=medians[names[i]],
                median_second=medians[names[j]],
                median_difference=medians[names[i]] - medians[names[j]],
                significant=bool(sig),
            )
        )
    return report
