"""Multi-objective search-based prioritization of microbenchmark suites."""

__version__ = "0.1.0"

from benchprio.errors import (
    BenchprioError,
    DegenerateInput,
    DuplicateBenchmark,
    EmptyFront,
    MissingDiff,
    NegativeChange,
    ParseError,
    PermutationMismatch,
    SuiteTooSmall,
    ZeroTotalChange,
)
from benchprio.model import (
    BenchmarkId,
    ChangeHistory,
    CoverageMatrix,
    ObjectiveVector,
    Ranking,
    canonical_index,
    validate_suite,
)

__all__ = [
    "BenchmarkId",
    "BenchprioError",
    "ChangeHistory",
    "CoverageMatrix",
    "DegenerateInput",
    "DuplicateBenchmark",
    "EmptyFront",
    "MissingDiff",
    "NegativeChange",
    "ObjectiveVector",
    "ParseError",
    "PermutationMismatch",
    "Ranking",
    "SuiteTooSmall",
    "ZeroTotalChange",
    "canonical_index",
    "validate_suite",
]
