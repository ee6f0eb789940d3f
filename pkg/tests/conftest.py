import numpy as np
import pytest

from benchprio.model import BenchmarkId, ChangeHistory, CoverageMatrix, GroundTruthChanges


def bid(name: str, **params) -> BenchmarkId:
    return BenchmarkId.of(name, params)


def make_cov(sets: dict, version: str = "v1") -> CoverageMatrix:
    return CoverageMatrix.from_mapping(version, {bid(k): v for k, v in sets.items()})


def make_hist(changes: dict) -> ChangeHistory:
    return ChangeHistory({bid(k): tuple((f"v{i}", c) for i, c in enumerate(v)) for k, v in changes.items()})


def make_truth(changes: dict) -> GroundTruthChanges:
    return GroundTruthChanges({bid(k): v for k, v in changes.items()})


def random_cov(rng: np.random.Generator, n: int, m: int, p: float = 0.4) -> CoverageMatrix:
    return make_cov({f"b{i:02d}": {f"m{j}" for j in range(m) if rng.random() < p} for i in range(n)})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def planted_instance(seed: int, n: int = 50):
    """Synthetic suite plus one benchmark strictly best on every element value.

    The planted benchmark covers more methods than any other, shares none of
    them (while every other benchmark overlaps some peer), and carries the largest historical change. Returns (cov, hist, planted_id).
    """
    from benchprio.synthetic import SyntheticSpec, generate_synthetic

    cov, hist, _, _ = generate_synthetic(SyntheticSpec(n_benchmarks=n - 1, seed=seed))
    biggest = max(len(s) for s in cov.benchmarks.values())
    top = max(max(hist.changes(b)) for b in cov.ids)
    planted = BenchmarkId.of("bench.Planted.best")
    # a method shared by all others keeps their overlap strictly positive
    sets = {b: s | {"shared.m0"} for b, s in cov.benchmarks.items()}
    sets[planted] = frozenset(f"planted.m{j}" for j in range(biggest + 6))
    entries = dict(hist.entries)
    entries[planted] = tuple((v, 2.0 * top) for v, _ in hist.entries[cov.ids[0]])
    return CoverageMatrix.from_mapping(cov.version, sets), ChangeHistory(entries), planted


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
