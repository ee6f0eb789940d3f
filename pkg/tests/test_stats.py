import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from benchprio.evaluation.stats import (
    compare_strategies,
    dunn_posthoc,
    kruskal_wallis,
    magnitude,
    vargha_delaney,
)

FIXTURES = json.loads((Path(__file__).parent / "fixtures" / "stats_reference.json").read_text())


@pytest.mark.parametrize("case", FIXTURES, ids=[f"set{i}" for i in range(len(FIXTURES))])
def test_against_frozen_reference(case):
    groups = case["groups"]
    h, p = kruskal_wallis(groups)
    assert h == pytest.approx(case["kw_h"], abs=1e-8)
    assert p == pytest.approx(case["kw_p"], abs=1e-8)
    dunn = dunn_posthoc(groups)
    for pair in case["pairs"]:
        i, j = pair["i"], pair["j"]
        assert dunn[(i, j)] == pytest.approx(pair["dunn_p_adjusted"], abs=1e-8)
        assert vargha_delaney(groups[i], groups[j])[0] == pytest.approx(pair["a12"], abs=1e-8)


def test_kruskal_examples():
    assert kruskal_wallis([[1, 2, 3], [1, 2, 3]]) == (0.0, 1.0)
    assert kruskal_wallis([[1, 2, 3], [100, 101, 102]])[1] < 0.05
    assert kruskal_wallis([[4, 4], [4, 4, 4]]) == (0.0, 1.0)


def test_kruskal_calibration():
    rng = np.random.default_rng(7)
    rejections = sum(kruskal_wallis(list(rng.normal(size=(3, 15))))[1] < 0.01 for _ in range(1000))
    assert rejections / 1000 <= 0.03


def test_dunn_examples():
    a = [1.0, 2.0, 3.0]
    assert dunn_posthoc([a, a, a]) == {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0}
    two = dunn_posthoc([[1, 2, 3, 4], [5, 6, 7, 9]])
    assert set(two) == {(0, 1)} and 0 < two[(0, 1)] < 1
    three = dunn_posthoc([a, a, [50, 60, 70]])
    assert max(three[(0, 2)], three[(1, 2)]) < three[(0, 1)]
    with pytest.raises(ValueError):
        dunn_posthoc([a, a], correction="holm")


def test_vargha_delaney_examples():
    assert vargha_delaney([1, 2, 3], [1, 2, 3]) == (0.5, "negligible")
    assert vargha_delaney([2, 2], [1, 1]) == (1.0, "large")
    assert vargha_delaney([1, 2], [2, 3]) == (0.125, "large")
    assert magnitude(0.5 + 0.1) == "small"
    assert magnitude(0.5 - 0.2) == "medium"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=12), st.lists(st.integers(0, 5), min_size=1, max_size=12))
def test_a12_matches_enumeration_and_is_antisymmetric(a, b):
    wins = sum((x > y) + 0.5 * (x == y) for x in a for y in b) / (len(a) * len(b))
    ab, ba = vargha_delaney(a, b)[0], vargha_delaney(b, a)[0]
    assert ab == pytest.approx(wins, abs=1e-12)
    assert ab + ba == pytest.approx(1.0, abs=1e-12)


def test_compare_strategies():
    rng = np.random.default_rng(1)
    same = list(rng.random(20))
    assert compare_strategies({"x": same, "y": same}).significant_pairs() == []
    report = compare_strategies({"a": [0.5] * 30, "b": [0.8] * 30})
    assert report.significant_pairs() == [("a", "b")]
    assert report.pairwise[0].a12 == 0.0 and report.pairwise[0].magnitude == "large"

    base = lambda: list(rng.normal(0.5, 0.05, 30))
    shifted = list(rng.normal(0.8, 0.05, 30))
    three = compare_strategies({"p": base(), "q": base(), "r": shifted})
    assert sorted(three.significant_pairs()) == [("p", "r"), ("q", "r")]
    assert "Kruskal-Wallis" in three.table()
    assert three.to_dict()["medians"]["r"] == pytest.approx(np.median(shifted))


def test_compare_single_observations():
    report = compare_strategies({"a": [0.4], "b": [0.6]})
    assert report.kw_h is None and report.significant_pairs() == []
    assert report.pairwise[0].median_difference == pytest.approx(-0.2)
    assert "skipped" in report.table()
    with pytest.raises(ValueError):
        compare_strategies({"a": [1.0]})
