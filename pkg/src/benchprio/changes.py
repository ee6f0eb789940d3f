"""Performance-change sizes from hierarchical bootstrap CIs of the ratio of means."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from benchprio.errors import DegenerateInput, ParseError
from benchprio.model import BenchmarkId

# replicates per RNG stream; block b draws from default_rng([seed, b]) so the
# result does not depend on how blocks are scheduled
BLOCK = 250


@dataclass(frozen=True)
class MeasurementSet:
    """trials -> iterations -> invocation samples, all finite and positive."""

    trials: tuple[tuple[tuple[float, ...], ...], ...]

    def __post_init__(self) -> None:
        trials = tuple(tuple(tuple(float(x) for x in it) for it in trial) for trial in self.trials)
        if not trials or any(not t for t in trials) or any(not it for t in trials for it in t):
            raise ValueError("need >= 1 trial, >= 1 iteration per trial, >= 1 sample per iteration")
        if not all(math.isfinite(x) and x > 0 for t in trials for it in t for x in it):
            raise ValueError("samples must be finite and positive")
        object.__setattr__(self, "trials", trials)

    @classmethod
    def from_array(cls, arr) -> MeasurementSet:
        return cls(tuple(tuple(tuple(it) for it in t) for t in np.asarray(arr, dtype=float)))

    def scaled(self, c: float) -> MeasurementSet:
        return MeasurementSet(tuple(tuple(tuple(x * c for x in it) for it in t) for t in self.trials))

    def _padded(self):
        n_trials = len(self.trials)
        n_iter = np.array([len(t) for t in self.trials])
        max_s = max(len(it) for t in self.trials for it in t)
        data = np.zeros((n_trials, n_iter.max(), max_s))
        n_samp = np.zeros((n_trials, n_iter.max()), dtype=np.int64)
        for i, t in enumerate(self.trials):
            for j, it in enumerate(t):
                data[i, j, : len(it)] = it
                n_samp[i, j] = len(it)
        return data, n_iter, n_samp


@dataclass(frozen=True)
class ChangeResult:
    ratio_ci_low: float
    ratio_ci_high: float
    change_percent: float
    significant: bool


def _resampled_means(ms: MeasurementSet, reps: int, rng: np.random.Generator) -> np.ndarray:
    data, n_iter, n_samp = ms._padded()
    T, I, S = data.shape
    t_sel = rng.integers(0, T, size=(reps, T))
    if np.all(n_iter == I) and np.all(n_samp == S):
        it_sel = rng.integers(0, I, size=(reps, T, I))
        inv = rng.integers(0, S, size=(reps, T, I, S))
        flat = ((t_sel[:, :, None, None] * I + it_sel[:, :, :, None]) * S + inv).reshape(reps, -1)
        return data.reshape(-1)[flat].mean(axis=1)
    # ragged hierarchy: draw uniforms and scale by the size of each chosen unit
    iters_here = n_iter[t_sel]  # (reps, T)
    it_sel = np.floor(rng.random((reps, T, I)) * iters_here[:, :, None]).astype(np.int64)
    it_mask = np.arange(I)[None, None, :] < iters_here[:, :, None]
    samp_here = n_samp[t_sel[:, :, None], it_sel]  # (reps, T, I)
    inv = np.floor(rng.random((reps, T, I, S)) * samp_here[..., None]).astype(np.int64)
    mask = it_mask[..., None] & (np.arange(S)[None, None, None, :] < samp_here[..., None])
    vals = data[t_sel[:, :, None, None], it_sel[..., None], inv]
    return np.where(mask, vals, 0.0).sum(axis=(1, 2, 3)) / mask.sum(axis=(1, 2, 3))


def bootstrap_ratio_ci(
    old: MeasurementSet,
    new: MeasurementSet,
    iterations: int = 10000,
    confidence: float = 0.99,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile CI of mean(new)/mean(old) under trial/iteration/invocation resampling."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not 0 < confidence < 1:
        raise ValueError("confidence must be in (0, 1)")
    ratios = np.empty(iterations)
    for b, start in enumerate(range(0, iterations, BLOCK)):
        reps = min(BLOCK, iterations - start)
        rng = np.random.default_rng([seed, b])
        m_old = _resampled_means(old, reps, rng)
        m_new = _resampled_means(new, reps, rng)
        if np.any(m_old <= 0) or np.any(m_new <= 0):
            raise DegenerateInput("resampled mean is not positive")
        ratios[start : start + reps] = m_new / m_old
    tail = (1.0 - confidence) / 2.0
    low, high = np.quantile(ratios, [tail, 1.0 - tail])
    return float(low), float(max(low, high))


def change_size(ci: tuple[float, float]) -> ChangeResult:
    """Map a ratio CI to a direction-free change size in percent.

    A CI containing 1 means no change; otherwise the endpoint nearest 1 gives
    the (conservative) size.
    """
    low, high = ci
    if low > high:
        raise ValueError("ci low must not exceed ci high")
    if low <= 1.0 <= high:
        return ChangeResult(low, high, 0.0, False)
    nearest = low if low > 1.0 else high
    return ChangeResult(low, high, abs(nearest - 1.0) * 100.0, True)


def detect_change(
    old: MeasurementSet, new: MeasurementSet, iterations: int = 10000, confidence: float = 0.99, seed: int = 0
) -> ChangeResult:
    return change_size(bootstrap_ratio_ci(old, new, iterations, confidence, seed))


def parse_measurements(data) -> dict[BenchmarkId, MeasurementSet]:
    items = data if isinstance(data, list) else [data]
    out: dict[BenchmarkId, MeasurementSet] = {}
    try:
        for item in items:
            bench = item["benchmark"]
            params = bench.get("params", "")
            if isinstance(params, list):
                bid = BenchmarkId.of(bench["method"], [(p["k"], p["v"]) for p in params])
            else:
                bid = BenchmarkId.parse(bench["method"], params or "")
            if bid in out:
                raise ParseError(f"benchmark {bid} listed twice")
            out[bid] = MeasurementSet(item["trials"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed measurements: {exc!r}") from exc
    return out


def load_measurements(path) -> dict[BenchmarkId, MeasurementSet]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read measurements {path}: {exc}") from exc
    return parse_measurements(data)


def dump_measurements(sets: dict[BenchmarkId, MeasurementSet]) -> str:
    items = [
        {"benchmark": {"method": bid.method, "params": bid.params_str}, "trials": [list(map(list, t)) for t in ms.trials]}
        for bid, ms in sets.items()
    ]
    return json.dumps(items[0] if len(items) == 1 else items)


def detect_changes(
    old: dict[BenchmarkId, MeasurementSet],
    new: dict[BenchmarkId, MeasurementSet],
    iterations: int = 10000,
    confidence: float = 0.99,
    seed: int = 0,
) -> list[tuple[BenchmarkId, ChangeResult]]:
    """Change per benchmark present in both versions, in canonical order."""
    common = sorted(set(old) & set(new), key=lambda b: b.sort_key)
    return [(bid, detect_change(old[bid], new[bid], iterations, confidence, seed)) for bid in common]


def ratio_of_means(old: MeasurementSet, new: MeasurementSet) -> float:
    def mean(ms: Sequence) -> float:
        flat = [x for t in ms.trials for it in t for x in it]
        return math.fsum(flat) / len(flat)

    return mean(new) / mean(old)
