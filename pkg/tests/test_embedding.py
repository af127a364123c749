import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import petersen, random_graph, to_nx
from cyclegood.embedding import (
    RootedTreeSpec,
    connect_avoiding,
    connect_pairs,
    embed_forest,
    long_odd_cycle,
    short_path_expansion_preserving,
    shortest_odd_cycle,
)
from cyclegood.errors import ConstructionError, ParameterError
from cyclegood.expansion import ExpansionParams
from cyclegood.graph import Graph


def is_path_in(g, path):
    return len(set(path)) == len(path) and all(g.has_edge(a, b) for a, b in zip(path, path[1:]))


def test_connect_avoiding_complete_graph_uses_direct_edge():
    k10 = Graph.complete(10)
    assert connect_avoiding(k10, range(10), ExpansionParams(4, 2, 2), [0], [9], [5]) == [0, 9]


def test_connect_avoiding_goes_the_long_way_round_a_cycle():
    c8 = Graph.cycle(8)
    path = connect_avoiding(c8, range(8), ExpansionParams(3, 2, 1), [0], [4], [1])
    assert path == [0, 7, 6, 5, 4]


def test_connect_avoiding_rejects_large_forbidden_set():
    k10 = Graph.complete(10)
    with pytest.raises(ParameterError):
        connect_avoiding(k10, range(10), ExpansionParams(4, 2, 2), [0], [9], [1, 2, 3])


def test_embed_star_in_clique():
    k30 = Graph.complete(30)
    forest = embed_forest(k30, range(1, 30), ExpansionParams(12, 60, 2), [(0, RootedTreeSpec.star(3))])
    image = forest.trees[0].image
    assert image[0] == 0 and len(set(image)) == 4
    assert forest.verify(k30)


def test_embed_two_paths_are_disjoint():
    k30 = Graph.complete(30)
    roots = [(0, RootedTreeSpec.path(3)), (1, RootedTreeSpec.path(3))]
    forest = embed_forest(k30, range(2, 30), ExpansionParams(12, 60, 2), roots)
    a, b = forest.trees[0].image, forest.trees[1].image
    assert not set(a) & set(b)
    assert forest.verify(k30)


def test_embed_forest_refuses_oversized_trees():
    k30 = Graph.complete(30)
    with pytest.raises(ParameterError):
        embed_forest(k30, range(1, 30), ExpansionParams(12, 60, 2), [(0, RootedTreeSpec.path(200))])
    with pytest.raises(ParameterError):
        embed_forest(k30, range(1, 30), ExpansionParams(4, 60, 2), [(0, RootedTreeSpec.star(3))])


def test_connect_pairs_in_clique():
    k60 = Graph.complete(60)
    system = connect_pairs(k60, range(4, 60), ExpansionParams(16, 1000, 2), [(0, 1), (2, 3)])
    assert system.verify(k60)
    ends = {(p[0], p[-1]) for p in system.paths}
    assert ends == {(0, 1), (2, 3)}
    used = [v for p in system.paths for v in p]
    assert len(used) == len(set(used))


def test_connect_pairs_checks_hypothesis():
    with pytest.raises(ParameterError):
        connect_pairs(Graph.complete(10), range(2, 10), ExpansionParams(16, 81, 2), [(0, 1)])


def test_shortest_odd_cycle_examples():
    assert len(shortest_odd_cycle(Graph.complete(4)).vertices) == 3
    assert len(shortest_odd_cycle(petersen()).vertices) == 5
    with pytest.raises(ParameterError):
        shortest_odd_cycle(Graph.cycle(6))


def brute_shortest_odd_cycle(g):
    h = to_nx(g)
    best = None
    for c in nx.simple_cycles(h, length_bound=g.order):
        if len(c) % 2 and (best is None or len(c) < best):
            best = len(c)
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.floats(0.2, 0.7), st.integers(0, 10_000))
def test_shortest_odd_cycle_matches_brute_force(n, p, seed):
    g = random_graph(n, p, seed)
    want = brute_shortest_odd_cycle(g)
    if want is None:
        with pytest.raises(ParameterError):
            shortest_odd_cycle(g)
        return
    cyc = shortest_odd_cycle(g).vertices
    assert len(cyc) == want
    assert g.is_cycle(list(cyc))


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 30), st.floats(0.1, 0.5), st.integers(0, 10_000))
def test_shortest_odd_cycle_is_geodesic(n, p, seed):
    g = random_graph(n, p, seed)
    try:
        cyc = list(shortest_odd_cycle(g).vertices)
    except ParameterError:
        assert nx.is_bipartite(to_nx(g))
        return
    dist = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    L = len(cyc)
    for i, j in itertools.combinations(range(L), 2):
        along = min(j - i, L - (j - i))
        assert dist[cyc[i]][cyc[j]] == along


def test_short_path_in_clique_keeps_expansion():
    path, verdict = short_path_expansion_preserving(Graph.complete(10), range(10), ExpansionParams(6, 1, 1), 0, 1)
    assert path == [0, 1]
    assert verdict.status == "verified-exhaustively"


def test_short_path_on_odd_cycle():
    path, _ = short_path_expansion_preserving(Graph.cycle(7), range(7), ExpansionParams(0, 0, 1), 0, 3)
    assert path == [0, 1, 2, 3]


def test_short_path_disconnected():
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(ConstructionError):
        short_path_expansion_preserving(g, range(4), ExpansionParams(0, 0, 1), 0, 3)


def test_long_odd_cycle_in_clique():
    k40 = Graph.complete(40)
    res = long_odd_cycle(k40, ExpansionParams(20, 160, 8), 3)
    cyc = list(res.cycle.vertices)
    assert len(cyc) % 2 == 1 and len(cyc) >= 5
    assert k40.is_cycle(cyc)
    short = long_odd_cycle(k40, ExpansionParams(20, 160, 8), 1)
    assert len(short.cycle.vertices) % 2 == 1 and k40.is_cycle(list(short.cycle.vertices))


def test_long_odd_cycle_rejects_even_r():
    with pytest.raises(ParameterError):
        long_odd_cycle(Graph.complete(40), ExpansionParams(20, 160, 8), 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(6, 14), st.floats(0.3, 0.9), st.integers(0, 10_000))
def test_connect_avoiding_output_is_valid(n, p, seed):
    g = random_graph(n, p, seed)
    try:
        path = connect_avoiding(g, range(n), ExpansionParams(3, 2, 1), [0], [n - 1], [1])
    except (ParameterError, ConstructionError):
        return
    assert path[0] == 0 and path[-1] == n - 1 and 1 not in path
    assert is_path_in(g, path)
