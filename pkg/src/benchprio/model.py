"""Shared domain types: benchmark identifiers, coverage, history, rankings."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from benchprio.errors import NegativeChange, PermutationMismatch

MethodRef = str


@dataclass(frozen=True, order=False)
class BenchmarkId:
    """A benchmark method plus one concrete parameterization."""

    method: str
    params: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if not self.method:
            raise ValueError("benchmark method must be non-empty")
        params = tuple((str(k), str(v)) for k, v in self.params)
        keys = [k for k, _ in params]
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate parameter keys in {self.method}: {keys}")
        object.__setattr__(self, "params", params)

    @classmethod
    def of(cls, method: str, params: Mapping[str, str] | Iterable[tuple[str, str]] = ()) -> BenchmarkId:
        """Build an id with params sorted by key (the form every loader produces)."""
        items = params.items() if isinstance(params, Mapping) else params
        return cls(method, tuple(sorted((str(k), str(v)) for k, v in items)))

    @classmethod
    def parse(cls, method: str, params: str) -> BenchmarkId:
        """Parse the ``k1=v1;k2=v2`` params encoding used by the CSV/JSON files."""
        pairs = []
        if params:
            for chunk in params.split(";"):
                if "=" not in chunk:
                    raise ValueError(f"malformed parameter {chunk!r}")
                k, v = chunk.split("=", 1)
                pairs.append((k, v))
        return cls.of(method, pairs)

    @property
    def params_str(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params))

    @property
    def sort_key(self) -> tuple:
        return (self.method, tuple(sorted(self.params)))

    def __str__(self) -> str:
        if not self.params:
            return self.method
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params))
        return f"{self.method}({inner})"


@dataclass(frozen=True)
class CoverageMatrix:
    """Per-benchmark sets of covered methods for one version.

    ``entries`` keeps file order and may hold duplicate ids until the suite is
    validated; loaders reject duplicates outright.
    """

    version: str
    entries: tuple[tuple[BenchmarkId, frozenset[MethodRef]], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "entries", tuple((bid, frozenset(cov)) for bid, cov in self.entries)
        )

    @classmethod
    def from_mapping(cls, version: str, benchmarks: Mapping[BenchmarkId, Iterable[MethodRef]]) -> CoverageMatrix:
        return cls(version, tuple((bid, frozenset(cov)) for bid, cov in benchmarks.items()))

    @property
    def benchmarks(self) -> dict[BenchmarkId, frozenset[MethodRef]]:
        return dict(self.entries)

    @property
    def ids(self) -> list[BenchmarkId]:
        return [bid for bid, _ in self.entries]

    @property
    def universe(self) -> frozenset[MethodRef]:
        out: set[MethodRef] = set()
        for _, cov in self.entries:
            out |= cov
        return frozenset(out)

    @property
    def n(self) -> int:
        return len(self.entries)

    def coverage_of(self, bid: BenchmarkId) -> frozenset[MethodRef]:
        return self.benchmarks[bid]

    def restricted(self, methods: Iterable[MethodRef]) -> CoverageMatrix:
        """Coverage intersected with ``methods`` (used for change-aware coverage)."""
        keep = frozenset(methods)
        return CoverageMatrix(self.version, tuple((bid, cov & keep) for bid, cov in self.entries))


@dataclass(frozen=True)
class ChangeHistory:
    """Non-negative change sizes (percent) per benchmark over prior versions."""

    entries: Mapping[BenchmarkId, tuple[tuple[str, float], ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for bid, rows in self.entries.items():
            rows = tuple((str(v), float(c)) for v, c in rows)
            versions = [v for v, _ in rows]
            if len(set(versions)) != len(versions):
                raise ValueError(f"duplicate version label in history of {bid}")
            for v, c in rows:
                if not math.isfinite(c):
                    raise ValueError(f"non-finite change for {bid} in {v}")
                if c < 0:
                    raise NegativeChange(f"negative change {c} for {bid} in {v}")
            clean[bid] = rows
        object.__setattr__(self, "entries", clean)

    def changes(self, bid: BenchmarkId) -> list[float]:
        return [c for _, c in self.entries.get(bid, ())]

    def __contains__(self, bid: object) -> bool:
        return bid in self.entries


@dataclass(frozen=True)
class Ranking:
    """An execution order over the whole suite."""

    order: tuple[BenchmarkId, ...]
    strategy: str = ""
    seed: int | None = None
    note: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))

    def check_against(self, ids: Iterable[BenchmarkId]) -> None:
        """Raise PermutationMismatch unless ``order`` is a bijection onto ``ids``."""
        expected = Counter(ids)
        got = Counter(self.order)
        if got != expected or any(c != 1 for c in got.values()):
            missing = sorted(map(str, expected - got))
            extra = sorted(map(str, got - expected))
            raise PermutationMismatch(f"ranking is not a permutation of the suite (missing={missing[:5]}, extra={extra[:5]})")

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class ObjectiveVector:
    """Three fitness values held in all-minimization form.

    ``canonical`` is ``(1 - coverage, overlap, 1 - hist_change)``.
    """

    canonical: tuple[float, float, float]

    def __post_init__(self) -> None:
        c = tuple(float(x) for x in self.canonical)
        if len(c) != 3 or not all(math.isfinite(x) and -1e-12 <= x <= 1 + 1e-12 for x in c):
            raise ValueError(f"objective components must be finite and in [0,1], got {c}")
        object.__setattr__(self, "canonical", c)

    @classmethod
    def from_scores(cls, coverage: float, overlap: float, hist_change: float) -> ObjectiveVector:
        return cls((1.0 - coverage, overlap, 1.0 - hist_change))

    @property
    def coverage(self) -> float:
        return 1.0 - self.canonical[0]

    @property
    def overlap(self) -> float:
        return self.canonical[1]

    @property
    def hist_change(self) -> float:
        return 1.0 - self.canonical[2]

    def as_dict(self) -> dict[str, float]:
        return {"coverage": self.coverage, "overlap": self.overlap, "hist_change": self.hist_change}


@dataclass
class ValidationReport:
    ok: bool
    missing_history: list[BenchmarkId]
    duplicates: list[BenchmarkId]
    empty_universe: bool
    notes: list[str]


def validate_suite(cov: CoverageMatrix, hist: ChangeHistory) -> ValidationReport:
    """Report-style check of a suite; only duplicate ids make it fail."""
    counts = Counter(cov.ids)
    duplicates = sorted((bid for bid, c in counts.items() if c > 1), key=lambda b: b.sort_key)
    missing = [bid for bid in canonical_index(cov) if bid not in hist]
    notes = [f"no history for {bid}" for bid in missing]
    notes += [f"duplicate benchmark {bid}" for bid in duplicates]
    empty = not cov.universe
    if empty:
        notes.append("coverage universe is empty")
    if cov.n == 0:
        notes.append("suite has no benchmarks")
    return ValidationReport(
        ok=not duplicates and cov.n >= 1,
        missing_history=missing,
        duplicates=duplicates,
        empty_universe=empty,
        notes=notes,
    )


def canonical_index(cov: CoverageMatrix | Sequence[BenchmarkId]) -> list[BenchmarkId]:
    """Deterministic gene order: lexicographic by method, then params."""
    ids = cov.ids if isinstance(cov, CoverageMatrix) else list(cov)
    return sorted(set(ids), key=lambda b: b.sort_key)


@dataclass(frozen=True)
class DiffSet:
    """Methods changed since the previous version."""

    changed_methods: frozenset[MethodRef] = frozenset()

    def __post_init__(self) -> None:
        methods = frozenset(self.changed_methods)
        if any(not isinstance(m, str) or not m for m in methods):
            raise ValueError("changed methods must be non-empty strings")
        object.__setattr__(self, "changed_methods", methods)


@dataclass(frozen=True)
class GroundTruthChanges:
    """Current-version change sizes used only for effectiveness evaluation."""

    changes: Mapping[BenchmarkId, float]

    def __post_init__(self) -> None:
        clean = {}
        for bid, c in self.changes.items():
            c = float(c)
            if not math.isfinite(c) or c < 0:
                raise NegativeChange(f"ground-truth change for {bid} must be finite and >= 0, got {c}")
            clean[bid] = c
        object.__setattr__(self, "changes", clean)

    @property
    def total(self) -> float:
        return math.fsum(self.changes.values())

    def __getitem__(self, bid: BenchmarkId) -> float:
        return self.changes[bid]
