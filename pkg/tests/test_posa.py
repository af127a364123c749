from collections import deque

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import petersen, random_graph, to_nx
from cyclegood.errors import ConstructionError, HypothesisFalsified, ParameterError
from cyclegood.graph import Graph, complement
from cyclegood.posa import (
    check_posa_bound,
    connect_exact_length,
    ending_vertices,
    longest_path_from,
    max_path_from,
    rotations,
)


def brute_ending_set(g, p):
    """Independent rotation closure over full path sequences."""
    h = to_nx(g)
    start = tuple(p)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        end = cur[-1]
        for i in range(len(cur) - 2):
            if h.has_edge(end, cur[i]):
                q = cur[: i + 1] + cur[i + 1:][::-1]
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    return {q[-1] for q in seen}


def brute_longest_from(g, v):
    h = to_nx(g)
    best = 1
    for u in h.nodes:
        if u != v:
            for path in nx.all_simple_paths(h, v, u):
                best = max(best, len(path))
    return best


def test_path_graph_has_single_ending_vertex():
    p5 = Graph(5, [(i, i + 1) for i in range(4)])
    assert ending_vertices(p5, range(5)).ending == {4}


def test_five_cycle_ending_set():
    st_ = ending_vertices(Graph.cycle(5), [0, 1, 2, 3, 4])
    assert st_.ending == {1, 4}
    assert st_.ending == brute_ending_set(Graph.cycle(5), [0, 1, 2, 3, 4])


def test_k4_ending_set():
    assert ending_vertices(Graph.complete(4), [0, 1, 2, 3]).ending == {1, 2, 3}


def test_invalid_path_raises():
    with pytest.raises(ParameterError):
        ending_vertices(Graph.cycle(5), [0, 2, 4])


def test_posa_bound_examples():
    v = check_posa_bound(Graph.cycle(5), [0, 1, 2, 3, 4])
    assert v.holds and v.neighborhood == 3
    assert check_posa_bound(Graph.complete(6), range(6)).holds


def test_posa_bound_reported_as_computed_for_short_paths():
    # a one-edge path inside a star: the endpoint rotates nowhere, N(S) is the centre only
    star = Graph(6, [(0, i) for i in range(1, 6)])
    v = check_posa_bound(star, [1, 0])
    assert v.ending == {0} and v.neighborhood == 5 and not v.holds


def test_longest_path_examples():
    assert len(longest_path_from(Graph.complete(7), 3).path) == 7
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert len(longest_path_from(star, 0).path) == 2
    assert len(longest_path_from(star, 1).path) == 3
    res = longest_path_from(petersen(), 0, certify=True)
    assert len(res.path) >= 9
    assert len(max_path_from(petersen(), 0)) == 10


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.floats(0.2, 0.8), st.integers(0, 10_000))
def test_ending_set_matches_brute_closure(n, p, seed):
    g = random_graph(n, p, seed)
    path = max_path_from(g, 0)
    st_ = ending_vertices(g, path, "exact")
    assert st_.ending == brute_ending_set(g, path)
    for v in st_.ending:
        q = st_.path_to(v)
        assert q[0] == path[0] and set(q) == set(path) and g.is_path(list(q))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.floats(0.2, 0.8), st.integers(0, 10_000))
def test_max_path_and_posa_bound(n, p, seed):
    g = random_graph(n, p, seed)
    path = max_path_from(g, 0)
    assert len(path) == brute_longest_from(g, 0)
    assert check_posa_bound(g, path, "exact").holds


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 12), st.floats(0.2, 0.8), st.integers(0, 10_000))
def test_rotations_preserve_vertex_set(n, p, seed):
    g = random_graph(n, p, seed)
    path = list(longest_path_from(g, 0).path)
    for q in rotations(g, path):
        assert q[0] == path[0] and sorted(q) == sorted(path) and g.is_path(list(q))


def test_endpoint_mode_is_a_subset_of_exact():
    g = random_graph(11, 0.5, 3)
    path = max_path_from(g, 0)
    assert ending_vertices(g, path, "endpoint").ending <= ending_vertices(g, path, "exact").ending


@pytest.fixture(scope="module")
def seed_path(dense_host):
    return list(longest_path_from(dense_host, 0, allowed=(1 << 40) - 1).path)


@pytest.mark.parametrize("n", [200, 300])
def test_connect_exact_length_hits_every_requested_order(dense_host, seed_path, n):
    x, y = seed_path[0], seed_path[-1]
    res = connect_exact_length(dense_host, x, y, seed_path, 4, n)
    path = list(res.path)
    assert len(path) == n and path[0] == x and path[-1] == y
    assert dense_host.is_path(path)


def test_connect_exact_length_fails_loudly_when_n_is_too_large(dense_host, seed_path):
    with pytest.raises(ConstructionError):
        connect_exact_length(dense_host, seed_path[0], seed_path[-1], seed_path, 4, 400)


def test_connect_exact_length_argument_checks(dense_host, seed_path):
    x, y = seed_path[0], seed_path[-1]
    with pytest.raises(ParameterError):
        connect_exact_length(dense_host, x, y, seed_path[:20], 4, 200)
    with pytest.raises(ParameterError):
        connect_exact_length(dense_host, x, y, seed_path, 4, 401)


def test_planted_complement_biclique_is_surfaced(dense_host, seed_path):
    planted = Graph(400, [e for e in dense_host.edges() if not (e[0] in range(100, 104) and e[1] in range(104, 108))])
    with pytest.raises(HypothesisFalsified) as info:
        connect_exact_length(planted, seed_path[0], seed_path[-1], seed_path, 4, 200, check_hypotheses=True)
    a, b = info.value.witness.parts
    blue = complement(planted)
    assert all(blue.has_edge(u, w) for u in a for w in b)
