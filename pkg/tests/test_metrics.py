import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import bid, make_truth
from benchprio.errors import PermutationMismatch, SuiteTooSmall, ZeroTotalChange
from benchprio.evaluation import apfd_p, top_n
from benchprio.model import Ranking


def ranking(*names):
    return Ranking(tuple(bid(n) for n in names))


def apfd_double_loop(changes):
    c = sum(changes)
    n = len(changes)
    return sum(sum(changes[: i + 1]) / c for i in range(n)) / n


def test_apfd_examples():
    truth = make_truth({"a": 10.0, "b": 5.0, "c": 0.0})
    assert apfd_p(ranking("a", "b", "c"), truth) == pytest.approx(8 / 9, abs=1e-12)
    assert apfd_p(ranking("c", "b", "a"), truth) == pytest.approx(4 / 9, abs=1e-12)
    equal = make_truth({"a": 2.0, "b": 2.0, "c": 2.0})
    for p in itertools.permutations("abc"):
        assert apfd_p(ranking(*p), equal) == pytest.approx(2 / 3, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=8).filter(lambda v: sum(v) > 0))
def test_apfd_matches_double_loop(values):
    names = [f"b{i}" for i in range(len(values))]
    truth = make_truth(dict(zip(names, values)))
    assert apfd_p(ranking(*names), truth) == pytest.approx(apfd_double_loop(values), abs=1e-12)


def test_apfd_descending_is_optimal(rng):
    for _ in range(20):
        vals = rng.integers(0, 20, size=5).astype(float)
        vals[0] += 1
        names = [f"b{i}" for i in range(5)]
        truth = make_truth(dict(zip(names, vals)))
        best = max(apfd_p(ranking(*p), truth) for p in itertools.permutations(names))
        desc = sorted(names, key=lambda n: -truth.changes[bid(n)])
        assert apfd_p(ranking(*desc), truth) == pytest.approx(best, abs=1e-12)


def test_apfd_errors():
    with pytest.raises(ZeroTotalChange):
        apfd_p(ranking("a", "b"), make_truth({"a": 0.0, "b": 0.0}))
    with pytest.raises(PermutationMismatch):
        apfd_p(ranking("a"), make_truth({"a": 1.0, "b": 0.0}))


def test_top_n_examples():
    names = [f"b{i}" for i in range(10)]
    vals = {n: float(i) for i, n in enumerate(names)}  # b9, b8, b7 largest
    truth = make_truth(vals)
    assert top_n(ranking("b9", "b8", "b7", *names[:7]), truth) == pytest.approx(0.3)
    assert top_n(ranking("b9", "b8", *names[:7], "b7"), truth) == pytest.approx(1.0)
    order = ["b0", "b9", "b1", "b8", "b7", "b2", "b3", "b4", "b5", "b6"]
    assert top_n(ranking(*order), truth) == pytest.approx(0.5)


def test_top_n_ties_use_canonical_order():
    truth = make_truth({"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0})
    assert top_n(ranking("a", "b", "c", "d"), truth, n=2) == pytest.approx(0.5)
    assert top_n(ranking("c", "d", "a", "b"), truth, n=2) == pytest.approx(1.0)


def test_top_n_errors():
    truth = make_truth({"a": 1.0, "b": 2.0, "c": 0.0, "d": 4.0})
    with pytest.raises(SuiteTooSmall):
        top_n(ranking("a", "b", "c", "d"), truth, n=5)
    with pytest.raises(ZeroTotalChange):
        top_n(ranking("a", "b", "c"), make_truth({"a": 0.0, "b": 0.0, "c": 0.0}))
