"""Readers and writers for coverage, history, diff, and ground-truth files."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable

from benchprio.errors import DuplicateBenchmark, NegativeChange, ParseError
from benchprio.model import (
    BenchmarkId,
    ChangeHistory,
    CoverageMatrix,
    DiffSet,
    GroundTruthChanges,
    canonical_index,
)

HISTORY_HEADER = ["version", "method", "params", "change_percent"]
TRUTH_HEADER = ["method", "params", "change_percent"]


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _id_from_json(obj: dict) -> BenchmarkId:
    params = obj.get("params", [])
    if isinstance(params, str):
        return BenchmarkId.parse(obj["method"], params)
    if not isinstance(params, list):
        raise ParseError(f"params must be a list or string, got {type(params).__name__}")
    return BenchmarkId.of(obj["method"], [(p["k"], p["v"]) for p in params])


def parse_coverage(data: dict) -> CoverageMatrix:
    try:
        version = data["version"]
        raw = data["benchmarks"]
        if not isinstance(version, str) or not isinstance(raw, list):
            raise ParseError("coverage needs a string 'version' and a list 'benchmarks'")
        entries = []
        seen = set()
        for item in raw:
            bid = _id_from_json(item)
            covered = item["covered"]
            if not isinstance(covered, list) or not all(isinstance(m, str) and m for m in covered):
                raise ParseError(f"'covered' of {bid} must be a list of non-empty strings")
            if bid in seen:
                raise DuplicateBenchmark(f"benchmark {bid} listed twice")
            seen.add(bid)
            entries.append((bid, frozenset(covered)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed coverage: {exc!r}") from exc
    if not entries:
        raise ParseError("coverage lists no benchmarks")
    return CoverageMatrix(version, tuple(entries))


def load_coverage(path) -> CoverageMatrix:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON must be an object")
    return parse_coverage(data)


def dump_coverage(cov: CoverageMatrix) -> str:
    """Canonical serialization: benchmarks in canonical order, methods sorted."""
    benchmarks = cov.benchmarks
    out = {
        "version": cov.version,
        "benchmarks": [
            {
                "method": bid.method,
                "params": [{"k": k, "v": v} for k, v in sorted(bid.params)],
                "covered": sorted(benchmarks[bid]),
            }
            for bid in canonical_index(cov)
        ],
    }
    return json.dumps(out, indent=1, sort_keys=True) + "\n"


def save_coverage(cov: CoverageMatrix, path) -> None:
    Path(path).write_text(dump_coverage(cov), encoding="utf-8")


def _csv_rows(path, header: list[str]) -> list[dict[str, str]]:
    reader = csv.DictReader(io.StringIO(_read_text(path)))
    if reader.fieldnames is None or any(h not in reader.fieldnames for h in header):
        raise ParseError(f"{path}: expected header containing {','.join(header)}, got {reader.fieldnames}")
    return list(reader)


def _change_value(raw: str, absolute: bool, where: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: change_percent {raw!r} is not a number") from exc
    if value != value or value in (float("inf"), float("-inf")):
        raise ParseError(f"{where}: change_percent must be finite")
    if value < 0:
        if not absolute:
            raise NegativeChange(f"{where}: negative change {value} (use the absolute-value option for signed data)")
        value = -value
    return value


def load_history(path, absolute: bool = False) -> ChangeHistory:
    """Read history CSV rows grouped per benchmark, in file order.

    Extra columns (e.g. confidence-interval bounds) are ignored.
    """
    grouped: dict[BenchmarkId, list[tuple[str, float]]] = {}
    for lineno, row in enumerate(_csv_rows(path, HISTORY_HEADER), start=2):
        where = f"{path}:{lineno}"
        try:
            bid = BenchmarkId.parse(row["method"], row["params"] or "")
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{where}: {exc}") from exc
        grouped.setdefault(bid, []).append((row["version"], _change_value(row["change_percent"], absolute, where)))
    try:
        return ChangeHistory({bid: tuple(rows) for bid, rows in grouped.items()})
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def dump_history(hist: ChangeHistory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HISTORY_HEADER)
    for bid in canonical_index(list(hist.entries)):
        for version, change in hist.entries[bid]:
            writer.writerow([version, bid.method, bid.params_str, repr(change)])
    return buf.getvalue()


def save_history(hist: ChangeHistory, path) -> None:
    Path(path).write_text(dump_history(hist), encoding="utf-8")


def load_diff(path) -> DiffSet:
    lines = (line.strip() for line in _read_text(path).splitlines())
    return DiffSet(frozenset(line for line in lines if line))


def dump_diff(diff: DiffSet) -> str:
    return "".join(f"{m}\n" for m in sorted(diff.changed_methods))


def save_diff(diff: DiffSet, path) -> None:
    Path(path).write_text(dump_diff(diff), encoding="utf-8")


def load_truth(path, absolute: bool = False) -> GroundTruthChanges:
    changes: dict[BenchmarkId, float] = {}
    for lineno, row in enumerate(_csv_rows(path, TRUTH_HEADER), start=2):
        where = f"{path}:{lineno}"
        try:
            bid = BenchmarkId.parse(row["method"], row["params"] or "")
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{where}: {exc}") from exc
        if bid in changes:
            raise DuplicateBenchmark(f"{where}: benchmark {bid} listed twice")
        changes[bid] = _change_value(row["change_percent"], absolute, where)
    return GroundTruthChanges(changes)


def dump_truth(truth: GroundTruthChanges) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRUTH_HEADER)
    for bid in canonical_index(list(truth.changes)):
        writer.writerow([bid.method, bid.params_str, repr(truth.changes[bid])])
    return buf.getvalue()


def save_truth(truth: GroundTruthChanges, path) -> None:
    Path(path).write_text(dump_truth(truth), encoding="utf-8")


def ranking_ids(order: Iterable[dict]) -> list[BenchmarkId]:
    try:
        return [BenchmarkId.parse(o["method"], o.get("params", "") or "") for o in order]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed ranking order: {exc!r}") from exc
