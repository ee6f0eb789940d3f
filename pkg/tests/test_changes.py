import json

import numpy as np
import pytest

from conftest import bid
from benchprio.changes import (
    MeasurementSet,
    bootstrap_ratio_ci,
    change_size,
    detect_change,
    detect_changes,
    dump_measurements,
    load_measurements,
    parse_measurements,
    ratio_of_means,
)
from benchprio.errors import ParseError


def normal_set(rng, shape=(3, 20, 50), mu=100.0, sd=5.0):
    return MeasurementSet.from_array(rng.normal(mu, sd, size=shape))


def test_identical_data_contains_one(rng):
    ms = normal_set(rng)
    low, high = bootstrap_ratio_ci(ms, ms, iterations=1000)
    assert low <= 1.0 <= high


def test_constant_scaling_is_exact():
    old = MeasurementSet.from_array(np.full((2, 4, 5), 3.0))
    low, high = bootstrap_ratio_ci(old, old.scaled(2.0), iterations=500)
    assert high - low < 1e-9 and low == pytest.approx(2.0, abs=1e-12)


def test_scale_equivariance(rng):
    old, new = normal_set(rng, (3, 5, 8)), normal_set(rng, (3, 5, 8), mu=110)
    base = bootstrap_ratio_ci(old, new, iterations=800, seed=4)
    for c in (0.5, 3.0, 1000.0):
        assert bootstrap_ratio_ci(old.scaled(c), new.scaled(c), iterations=800, seed=4) == pytest.approx(base, rel=1e-9)
    scaled_new = bootstrap_ratio_ci(old, new.scaled(2.0), iterations=800, seed=4)
    assert scaled_new == pytest.approx(tuple(2 * x for x in base), rel=1e-9)


def test_deterministic_per_seed(rng):
    old, new = normal_set(rng, (2, 4, 6)), normal_set(rng, (2, 4, 6))
    a = bootstrap_ratio_ci(old, new, iterations=600, seed=11)
    assert a == bootstrap_ratio_ci(old, new, iterations=600, seed=11)
    assert a != bootstrap_ratio_ci(old, new, iterations=600, seed=12)


def test_clear_regression_detected(rng):
    old, new = normal_set(rng, (3, 10, 20)), normal_set(rng, (3, 10, 20), mu=120.0)
    res = detect_change(old, new, iterations=1000)
    assert res.significant and 15.0 < res.change_percent < 20.0
    assert res.ratio_ci_low > 1.0


def test_ragged_hierarchy():
    trials = [[[1.0, 1.0, 1.0], [1.0]], [[1.0, 1.0]]]
    old = MeasurementSet(trials)
    low, high = bootstrap_ratio_ci(old, old.scaled(1.5), iterations=300)
    assert low == pytest.approx(1.5) and high == pytest.approx(1.5)
    noisy = MeasurementSet([[[1.0, 2.0], [3.0]], [[4.0, 5.0, 6.0]], [[2.0]]])
    low, high = bootstrap_ratio_ci(noisy, noisy, iterations=500)
    assert 0 < low <= 1.0 <= high


def test_ragged_resample_mean_unbiased():
    # every resampled mean is a mean of observed samples, so the ratio stays within data bounds
    old = MeasurementSet([[[1.0, 2.0], [3.0]], [[4.0]]])
    new = MeasurementSet([[[2.0, 2.0, 2.0]]])
    low, high = bootstrap_ratio_ci(old, new, iterations=1000, confidence=0.5)
    assert 2.0 / 4.0 <= low <= high <= 2.0 / 1.0


@pytest.mark.parametrize(
    "ci,expected,sig",
    [((0.98, 1.03), 0.0, False), ((1.10, 1.25), 10.0, True), ((0.80, 0.95), 5.0, True)],
)
def test_change_size_examples(ci, expected, sig):
    res = change_size(ci)
    assert res.change_percent == pytest.approx(expected, abs=1e-9) and res.significant is sig


def test_invalid_inputs():
    with pytest.raises(ValueError):
        MeasurementSet([])
    with pytest.raises(ValueError):
        MeasurementSet([[[1.0, -2.0]]])
    with pytest.raises(ValueError):
        change_size((1.2, 1.1))
    ms = MeasurementSet([[[1.0]]])
    with pytest.raises(ValueError):
        bootstrap_ratio_ci(ms, ms, iterations=0)
    with pytest.raises(ValueError):
        bootstrap_ratio_ci(ms, ms, confidence=1.0)


def test_measurement_io_roundtrip(tmp_path, rng):
    sets = {bid("a.b", x="1"): normal_set(rng, (1, 2, 3)), bid("a.c"): normal_set(rng, (2, 1, 2))}
    path = tmp_path / "m.json"
    path.write_text(dump_measurements(sets))
    assert load_measurements(path) == sets
    single = {bid("z"): MeasurementSet([[[1.0]]])}
    assert parse_measurements(json.loads(dump_measurements(single))) == single
    with pytest.raises(ParseError):
        parse_measurements({"benchmark": {"method": "x"}})
    with pytest.raises(ParseError):
        parse_measurements([{"benchmark": {"method": "x"}, "trials": [[[1.0]]]}] * 2)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_measurements(bad)


def test_detect_changes_batch(rng):
    old = {bid("b"): normal_set(rng, (2, 3, 4)), bid("a"): normal_set(rng, (2, 3, 4)), bid("gone"): normal_set(rng, (1, 1, 2))}
    new = {bid("a"): old[bid("a")].scaled(2.0), bid("b"): old[bid("b")]}
    out = detect_changes(old, new, iterations=300)
    assert [b for b, _ in out] == [bid("a"), bid("b")]
    assert out[0][1].change_percent > 50.0
    assert ratio_of_means(old[bid("a")], new[bid("a")]) == pytest.approx(2.0)
