import pytest
from hypothesis import given, strategies as st

from benchprio.errors import NegativeChange, PermutationMismatch
from benchprio.model import (
    BenchmarkId,
    ChangeHistory,
    CoverageMatrix,
    ObjectiveVector,
    Ranking,
    canonical_index,
    validate_suite,
)

from conftest import bid, make_cov, make_hist


def test_benchmark_id_string_forms():
    b = BenchmarkId("x.Y.run", (("size", "10"), ("alg", "a")))
    assert str(b) == "x.Y.run(alg=a,size=10)"
    assert b.params_str == "alg=a;size=10"
    assert BenchmarkId.parse("x.Y.run", "size=10;alg=a") == BenchmarkId.of("x.Y.run", {"alg": "a", "size": "10"})


def test_benchmark_id_equality_uses_ordered_params():
    assert BenchmarkId("m", (("a", "1"), ("b", "2"))) != BenchmarkId("m", (("b", "2"), ("a", "1")))
    assert BenchmarkId.of("m", {"b": "2", "a": "1"}) == BenchmarkId.of("m", {"a": "1", "b": "2"})


@pytest.mark.parametrize("method,params", [("", ()), ("m", (("k", "1"), ("k", "2")))])
def test_benchmark_id_invalid(method, params):
    with pytest.raises(ValueError):
        BenchmarkId(method, params)


def test_validate_missing_history_is_legal():
    cov = make_cov({"a": {"m1"}, "b": {"m2"}, "c": set()})
    report = validate_suite(cov, make_hist({"a": [1.0], "b": [2.0]}))
    assert report.ok
    assert report.missing_history == [bid("c")]
    assert len([n for n in report.notes if "no history" in n]) == 1


def test_validate_duplicate_ids_fail():
    cov = CoverageMatrix("v", ((bid("a"), {"m"}), (bid("a"), {"n"}), (bid("b"), set())))
    assert not validate_suite(cov, ChangeHistory({})).ok


def test_validate_empty_history():
    cov = make_cov({"a": {"m1"}, "b": {"m2"}})
    report = validate_suite(cov, ChangeHistory({}))
    assert report.ok and len(report.missing_history) == 2


def test_validate_empty_universe_noted():
    report = validate_suite(make_cov({"a": set()}), ChangeHistory({}))
    assert report.ok and report.empty_universe


def test_canonical_index_lexicographic():
    cov = CoverageMatrix.from_mapping("v", {bid("b.a"): set(), bid("a.z"): set(), bid("a.z", p="1"): set()})
    assert [str(b) for b in canonical_index(cov)] == ["a.z", "a.z(p=1)", "b.a"]
    assert canonical_index(cov) == canonical_index(cov)
    single = make_cov({"only": {"m"}})
    assert canonical_index(single) == [bid("only")]


@given(st.lists(st.text(alphabet="abc.", min_size=1, max_size=4), min_size=1, max_size=12, unique=True))
def test_canonical_index_round_trip(names):
    cov = make_cov({n: set() for n in names})
    ids = canonical_index(cov)
    index_of = {b: i for i, b in enumerate(ids)}
    assert all(index_of[ids[i]] == i for i in range(len(ids)))
    # file order does not matter
    shuffled = make_cov({n: set() for n in reversed(names)})
    assert canonical_index(shuffled) == ids


def test_history_rejects_negative_and_duplicate_versions():
    with pytest.raises(NegativeChange):
        ChangeHistory({bid("a"): (("v1", -1.0),)})
    with pytest.raises(ValueError):
        ChangeHistory({bid("a"): (("v1", 1.0), ("v1", 2.0))})


def test_ranking_permutation_check():
    ids = [bid("a"), bid("b"), bid("c")]
    Ranking(tuple(reversed(ids))).check_against(ids)
    with pytest.raises(PermutationMismatch):
        Ranking((ids[0], ids[0], ids[1])).check_against(ids)
    with pytest.raises(PermutationMismatch):
        Ranking(tuple(ids[:2])).check_against(ids)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_objective_vector_encoding_round_trip(c, o, h):
    v = ObjectiveVector.from_scores(c, o, h)
    assert v.canonical == pytest.approx((1 - c, o, 1 - h), abs=1e-15)
    assert (v.coverage, v.overlap, v.hist_change) == pytest.approx((c, o, h), abs=1e-15)
    assert ObjectiveVector(v.canonical) == v


def test_objective_vector_range_checked():
    with pytest.raises(ValueError):
        ObjectiveVector((0.0, 1.5, 0.0))
    with pytest.raises(ValueError):
        ObjectiveVector((float("nan"), 0.0, 0.0))
