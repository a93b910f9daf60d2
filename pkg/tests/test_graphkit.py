from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumsetlab import oracles
from sumsetlab.errors import EmptyGraph, EmptyInput, RetriesExhausted
from sumsetlab.graphkit import (
    COVERED,
    DISJOINT,
    BipartiteGraph,
    CoverOutcome,
    Hub,
    IndependentSet,
    SimpleGraph,
    common_neighborhood,
    complete_bipartite,
    complete_graph,
    covering_split,
    drc_feasible,
    drc_select,
    folded_cover_holds,
    independent_or_hub,
    perfect_matching,
    random_bipartite,
    random_graph,
    right_common_neighborhood,
    star,
    verify_cover_outcome,
    verify_drc,
)
from sumsetlab.setcalc import NumberSet


def S(*xs):
    return NumberSet(xs)


# -- independent set or hub ----------------------------------------------------------------

def test_edgeless_graph_gives_independent_set():
    res = independent_or_hub(SimpleGraph.from_edges(6, []), 6)
    assert isinstance(res, IndependentSet)
    assert len(res.vertices) == 6


def test_complete_graph_gives_hub():
    res = independent_or_hub(complete_graph(4), 2)
    assert isinstance(res, Hub)
    assert res.degree == 3 and 2 * res.degree >= 4


def test_star_gives_center_hub():
    G = star(7)
    res = independent_or_hub(G, 2)
    assert isinstance(res, Hub)
    assert res.degree == 7
    assert G.degree(res.vertex) == 7


def test_empty_graph_rejected():
    with pytest.raises(EmptyGraph):
        independent_or_hub(SimpleGraph.from_edges(0, []), 1)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(1, 14),
    st.fractions(min_value=Fraction(1, 2), max_value=8, max_denominator=4),
    st.integers(0, 10**6),
    st.sampled_from([Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)]),
)
def test_independent_or_hub_contract(n, K, seed, p):
    G = random_graph(n, p, seed)
    res = independent_or_hub(G, K)
    if isinstance(res, IndependentSet):
        assert len(res.vertices) >= K
        assert all(v not in G.adjacency[u] for u, v in combinations(res.vertices, 2))
    else:
        assert len(res.members) * K >= n
        assert G.degree(res.vertex) == res.degree
        for u in res.members:
            assert u == res.vertex or u in G.adjacency[res.vertex]
        if not res.closed:
            assert res.degree * K >= n


# -- covering dichotomy -----------------------------------------------------------------------

def test_covering_far_apart_is_disjoint():
    X, Y = S(0, 1, 2, 3), S(0, 100)
    out = covering_split(X, Y, 2)
    assert out.case == DISJOINT
    assert len(out.subset) >= 2
    assert verify_cover_outcome(out, X, Y)


def test_covering_dense_is_covered():
    X = NumberSet(range(10))
    out = covering_split(X, X, 2)
    assert out.case == COVERED
    dX = {u - v for u in out.subset for v in out.subset}
    two = oracles.hfold_sum(oracles.difference_set(X, X), 2)
    assert dX <= two
    # differences factor through the hub
    a = out.hub
    dY = oracles.difference_set(X, X)
    for u in out.subset:
        for v in out.subset:
            assert u - a in dY or u == a
            assert (u - a) + (a - v) == u - v


def test_covering_singleton():
    X = S(Fraction(7, 3))
    out = covering_split(X, S(1, 2, 9), 1)
    assert out.case == DISJOINT and out.subset == X


def test_covering_empty_x():
    with pytest.raises(EmptyInput):
        covering_split(S(), S(1), 1)


def test_cover_outcome_json_and_tamper():
    X, Y = S(0, 1, 2, 3), S(0, 100)
    out = covering_split(X, Y, 2)
    again = CoverOutcome.from_json(out.to_json())
    assert again == out
    bad = CoverOutcome(COVERED, S(0, 3), out.K, Fraction(0))
    assert not verify_cover_outcome(bad, X, Y)


def test_folded_cover():
    X = NumberSet(range(10))
    out = covering_split(X, X, 2)
    assert folded_cover_holds(out, X, 1)
    assert folded_cover_holds(out, X, 2)


small = st.lists(st.integers(-30, 30), min_size=1, max_size=9).map(NumberSet)


@settings(max_examples=150, deadline=None)
@given(small, small, st.fractions(min_value=Fraction(1, 2), max_value=6, max_denominator=3))
def test_covering_split_always_verifies(X, Y, K):
    out = covering_split(X, Y, K)
    assert verify_cover_outcome(out, X, Y)
    if out.case == COVERED:
        assert folded_cover_holds(out, Y, 1)


# -- bipartite graphs ----------------------------------------------------------------------------

def test_common_neighborhood_examples():
    assert common_neighborhood(complete_bipartite(3, 3), range(3)) == frozenset(range(3))
    assert common_neighborhood(perfect_matching(3), [0]) == frozenset({0})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sets(st.integers(0, 7)), st.sets(st.integers(0, 7)))
def test_common_neighborhood_union_identity(seed, T1, T2):
    G = random_bipartite(8, 8, Fraction(1, 2), seed)
    assert common_neighborhood(G, T1 | T2) == common_neighborhood(G, T1) & common_neighborhood(G, T2)
    assert common_neighborhood(G, T1) == {y for y in range(8) if all(y in G.left_adj[x] for x in T1)}
    assert right_common_neighborhood(G, T1) == oracles.common_neighbors(G.left_adj, 8, T1)


def test_drc_feasible_complete():
    n = 5
    G = complete_bipartite(n, n)
    f = drc_feasible(G, 1, 1, n, 0)
    # n**2/n - n*(n/n) = 0
    assert f.lhs == 0 and f.margin == 0 and f.feasible
    assert not drc_feasible(G, 1, 1, n, 1).feasible


def test_drc_feasible_empty_graph():
    G = BipartiteGraph.from_edges(4, 4, [])
    for t, r, m, a in [(1, 1, 1, 1), (2, 2, 0, 1), (3, 1, 2, 5)]:
        assert not drc_feasible(G, t, r, m, a).feasible


def test_drc_feasible_toy_instantiation():
    # t = 2r(N+1) with r = 1, N = 0 on K_{4,4} minus a matching
    G = BipartiteGraph.from_edges(4, 4, [(x, y) for x in range(4) for y in range(4) if x != y])
    f = drc_feasible(G, 2, 1, 1, 1)
    assert f.lhs == Fraction(12 ** 2, 4 ** 2 * 4) - 4 * Fraction(1, 4) ** 2
    assert f.feasible


def test_drc_select_complete():
    n = 6
    res = drc_select(complete_bipartite(n, n), 1, 1, n, n, seed=0)
    assert res.selected == tuple(range(n))


def test_drc_isolated_vertex_never_survives():
    edges = [(x, y) for x in range(5) for y in range(1, 5)]
    G = BipartiteGraph.from_edges(5, 5, edges)
    for seed in range(10):
        res = drc_select(G, 2, 1, 1, 1, seed=seed)
        assert 0 not in res.selected


def test_drc_select_random_instance():
    G = random_bipartite(20, 20, Fraction(4, 5), 7)
    res = drc_select(G, 4, 2, 2, 2, seed=7)
    assert len(res.selected) >= 2
    for pair in combinations(res.selected, 2):
        common = [x for x in range(20) if all(y in G.left_adj[x] for y in pair)]
        assert len(common) >= 2
    assert drc_select(G, 4, 2, 2, 2, seed=7) == res


def test_drc_retries_exhausted():
    G = BipartiteGraph.from_edges(3, 3, [(0, 0)])
    with pytest.raises(RetriesExhausted):
        drc_select(G, 1, 1, 2, 3, seed=1, max_retries=5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_drc_outputs_verify(seed, r, m):
    G = random_bipartite(12, 12, Fraction(3, 4), seed)
    try:
        res = drc_select(G, 2, r, m, 1, seed=seed, max_retries=20)
    except RetriesExhausted:
        return
    assert verify_drc(G, res.selected, r, m)
