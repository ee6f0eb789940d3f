from benchprio.evaluation.metrics import apfd_p, top_n
from benchprio.evaluation.stats import (
    ComparisonReport,
    PairwiseResult,
    compare_strategies,
    dunn_posthoc,
    kruskal_wallis,
    magnitude,
    vargha_delaney,
)
from benchprio.model import GroundTruthChanges

__all__ = [
    "ComparisonReport",
    "GroundTruthChanges",
    "PairwiseResult",
    "apfd_p",
    "compare_strategies",
    "dunn_posthoc",
    "kruskal_wallis",
    "magnitude",
    "top_n",
    "vargha_delaney",
]
