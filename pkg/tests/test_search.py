import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bergetheta import oracle, search
from bergetheta.hypergraph import BergePathWitness, build, validate_path, validate_theta
from bergetheta.search import PathQuery

from .conftest import hypergraphs


def test_query_validation():
    with pytest.raises(search.InvalidQuery):
        PathQuery(1, 1, 2)
    with pytest.raises(search.InvalidQuery):
        PathQuery(0, 1, 0)


def test_count_single_edge(single_edge):
    assert search.count_paths(single_edge, PathQuery(0, 1, 1)) == 1


def test_count_parallel_edges():
    H = build(3, 4, [[0, 1, 2], [0, 1, 3]])
    assert search.count_paths(H, PathQuery(0, 1, 1)) == 2


def test_count_two_overlapping_edges():
    # oracle: cores (0,1,3) and (0,2,3), both through edges (0, 1)
    H = build(3, 4, [[0, 1, 2], [1, 2, 3]])
    assert search.count_paths(H, PathQuery(0, 3, 2)) == 2
    assert [w.core_vertices for w in search.enumerate_paths(H, PathQuery(0, 3, 2))] == [(0, 1, 3), (0, 2, 3)]


def test_enumerate_small_cases(single_edge, c4):
    assert search.enumerate_paths(single_edge, PathQuery(0, 1, 1)) == [BergePathWitness((0, 1), (0,))]
    assert len(search.enumerate_paths(c4, PathQuery(0, 2, 2))) == 2
    empty = build(3, 5, [])
    assert search.enumerate_paths(empty, PathQuery(0, 4, 2)) == []


def test_find_theta_c4(c4):
    w = search.find_theta(c4, 2, 2)
    assert w is not None and validate_theta(c4, w)
    assert (w.x, w.y) == (0, 2)
    assert search.is_theta_free(c4, 2, 3)


def test_find_theta_single_edge(single_edge):
    assert search.find_theta(single_edge, 2, 2) is None


def test_find_theta_worked_instance():
    # oracle: paths 0-1-5 via (0,1) and 0-2-5 via (2,3) are internally disjoint
    H = build(3, 6, [[0, 1, 2], [1, 5, 3], [0, 2, 4], [2, 5, 3]])
    w = search.find_theta_at(H, 0, 5, 2, 2)
    assert w is not None and validate_theta(H, w)
    assert [p.core_vertices for p in w.paths] == [(0, 1, 5), (0, 2, 5)]
    assert search.find_theta(H, 2, 2) is not None


def test_empty_is_theta_free():
    assert search.is_theta_free(build(3, 6, []), 2, 2)


def test_k1_theta_is_parallel_edges():
    H = build(3, 5, [[0, 1, 2], [0, 1, 3], [0, 1, 4]])
    w = search.find_theta(H, 1, 3)
    assert w is not None and [p.edge_indices for p in w.paths] == [(0,), (1,), (2,)]
    assert search.is_theta_free(H, 1, 4)


def test_budget_is_inconclusive_not_absent():
    H = build(2, 8, [[a, b] for a in range(8) for b in range(a + 1, 8)])
    with pytest.raises(search.SearchInconclusive):
        search.find_theta(H, 4, 3, node_budget=50)


def test_lexicographic_witness():
    # two thetas at (0, 2): cores through {1, 3} and through {3, 4}
    H = build(2, 5, [[0, 3], [2, 3], [0, 4], [2, 4], [0, 1], [1, 2]])
    w = search.find_theta(H, 2, 2)
    assert [p.core_vertices for p in w.paths] == [(0, 1, 2), (0, 3, 2)]


@settings(max_examples=150, deadline=None)
@given(hypergraphs(), st.integers(1, 4))
def test_count_matches_oracle(H, k):
    paths = oracle.all_paths(H, k)
    for x in range(H.n):
        for y in range(H.n):
            if x != y:
                expected = sum(1 for c, _ in paths if c[0] == x and c[-1] == y)
                assert search.count_paths(H, PathQuery(x, y, k)) == expected


@settings(max_examples=100, deadline=None)
@given(hypergraphs(), st.integers(1, 4))
def test_count_from_matches_pairwise(H, k):
    for x in range(H.n):
        table = search.count_paths_from(H, x, k)
        for y in range(H.n):
            if y != x:
                assert table.get(y, 0) == search.count_paths(H, PathQuery(x, y, k))


@settings(max_examples=150, deadline=None)
@given(hypergraphs(), st.integers(1, 4), st.integers(1, 3))
def test_theta_matches_oracle(H, k, t):
    w = search.find_theta(H, k, t)
    assert (w is not None) == oracle.oracle_has_theta(H, k, t)
    if w is not None:
        assert validate_theta(H, w) and w.t == t and w.k == k


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_m=8), st.integers(1, 3), st.data())
def test_enumerated_paths_are_valid_and_sorted(H, k, data):
    x = data.draw(st.integers(0, H.n - 1))
    y = data.draw(st.integers(0, H.n - 1))
    assume(x != y)
    paths = search.enumerate_paths(H, PathQuery(x, y, k))
    assert all(validate_path(H, p) for p in paths)
    keys = [(p.core_vertices, p.edge_indices) for p in paths]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert len(paths) == search.count_paths(H, PathQuery(x, y, k))


@settings(max_examples=100, deadline=None)
@given(hypergraphs(), st.integers(1, 3), st.integers(1, 6))
def test_cap_contract(H, k, cap):
    full = search.count_paths(H, PathQuery(0, 1, k))
    capped = search.count_paths(H, PathQuery(0, 1, k, cap))
    assert capped == min(full, cap)
    assert len(search.enumerate_paths(H, PathQuery(0, 1, k, cap))) == capped


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_m=9), st.integers(1, 3), st.integers(1, 3), st.data())
def test_monotonicity(H, k, t, data):
    extra = data.draw(st.sampled_from(sorted({tuple(e) for e in H.edges} or {tuple(range(H.r))})))
    bigger = H.with_edges([extra])
    for x, y in [(0, 1), (0, H.n - 1)]:
        if x != y:
            assert search.count_paths(bigger, PathQuery(x, y, k)) >= search.count_paths(H, PathQuery(x, y, k))
    if H.m:
        smaller = H.without_edges([data.draw(st.integers(0, H.m - 1))])
        if search.is_theta_free(H, k, t):
            assert search.is_theta_free(smaller, k, t)
