from hypothesis import given, settings, strategies as st

from conftest import bid, make_cov, random_cov
from benchprio.greedy import prioritize_additional, prioritize_total
from benchprio.model import canonical_index


def naive_total(cov):
    ids = canonical_index(cov)
    sets = cov.benchmarks
    order = []
    left = list(ids)
    while left:
        best = left[0]
        for b in left[1:]:
            if len(sets[b]) > len(sets[best]):
                best = b
        order.append(best)
        left.remove(best)
    return order


def naive_additional(cov):
    ids = canonical_index(cov)
    sets = cov.benchmarks
    order, left, covered = [], list(ids), set()
    while left:
        gain = {b: len(sets[b] - covered) for b in left}
        if all(g == 0 for g in gain.values()) and covered:
            covered = set()
            continue
        best = left[0]
        for b in left[1:]:
            if (gain[b], len(sets[b])) > (gain[best], len(sets[best])):
                best = b
        order.append(best)
        left.remove(best)
        covered |= sets[best]
    return order


def test_total_examples():
    cov = make_cov({"b1": set("abcde"), "b2": set("abc"), "b3": set("abcdefghi")})
    assert prioritize_total(cov).order == (bid("b3"), bid("b1"), bid("b2"))
    eq = make_cov({"c": {"x"}, "a": {"y"}, "b": {"z"}})
    assert prioritize_total(eq).order == tuple(canonical_index(eq))
    assert prioritize_total(make_cov({"b1": {"m"}})).order == (bid("b1"),)


def test_additional_examples():
    cov = make_cov({"b1": {"m1", "m2"}, "b2": {"m2", "m3"}, "b3": {"m1", "m2", "m3"}})
    assert prioritize_additional(cov).order == (bid("b3"), bid("b1"), bid("b2"))
    disjoint = make_cov({"b1": {"a"}, "b2": {"b", "c", "d"}, "b3": {"e", "f"}})
    assert prioritize_additional(disjoint).order == prioritize_total(disjoint).order
    empty = make_cov({"z": set(), "a": set(), "m": set()})
    assert prioritize_additional(empty).order == tuple(canonical_index(empty))


def test_greedy_matches_naive_reference(rng):
    for _ in range(200):
        cov = random_cov(rng, int(rng.integers(1, 11)), int(rng.integers(0, 13)), float(rng.uniform(0.1, 0.7)))
        assert list(prioritize_total(cov).order) == naive_total(cov)
        assert list(prioritize_additional(cov).order) == naive_additional(cov)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 8), max_size=6), min_size=1, max_size=9))
def test_greedy_first_pick_and_permutation(sets):
    cov = make_cov({f"b{i}": {f"m{j}" for j in s} for i, s in enumerate(sets)})
    for strategy in (prioritize_total, prioritize_additional):
        order = strategy(cov).order
        assert sorted(order, key=lambda b: b.sort_key) == canonical_index(cov)
        assert len(cov.benchmarks[order[0]]) == max(len(s) for s in sets)
