import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclegood.errors import ParameterError, SearchBudgetExhausted
from cyclegood.graph import Graph, components
from cyclegood.search import (
    MultipartiteWitness,
    blocks,
    find_complete_multipartite,
    find_cycle_at_least,
    find_cycle_exact,
    vertex_disjoint_paths,
)

from conftest import from_nx, petersen, random_graph, to_nx


def brute_cycle_lengths(g: Graph) -> set[int]:
    """Every cycle length, by trying all vertex orderings of all subsets."""
    found = set()
    for size in range(3, g.order + 1):
        for sub in itertools.combinations(range(g.order), size):
            first = sub[0]
            for rest in itertools.permutations(sub[1:]):
                if g.is_cycle((first,) + rest):
                    found.add(size)
                    break
            if size in found:
                break
    return found


def brute_multipartite(g: Graph, sizes) -> bool:
    n = g.order
    k = len(sizes)
    for labels in itertools.product(range(k + 1), repeat=n):
        parts = [[v for v in range(n) if labels[v] == i] for i in range(k)]
        if [len(p) for p in parts] != list(sizes):
            continue
        if all(g.has_edge(u, v) for i, j in itertools.combinations(range(k), 2) for u in parts[i] for v in parts[j]):
            return True
    return False


def nx_max_disjoint(g: Graph, a, b) -> int:
    h = to_nx(g)
    h.add_edges_from(("s", x) for x in a)
    h.add_edges_from((y, "t") for y in b)
    return nx.node_connectivity(h, "s", "t")


@st.composite
def small_graphs(draw, lo=0, hi=7):
    n = draw(st.integers(lo, hi))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


def test_cycle_examples():
    tri = find_cycle_exact(Graph.complete(4), 3)
    assert len(tri) == 3 and tri.verify(Graph.complete(4))
    assert find_cycle_exact(Graph.cycle(5), 4) is None
    pg = petersen()
    assert find_cycle_exact(pg, 5).verify(pg)
    assert find_cycle_exact(pg, 3) is None and find_cycle_exact(pg, 4) is None


def test_cycle_at_least_examples():
    assert len(find_cycle_at_least(Graph.complete(6), 6)) == 6
    assert find_cycle_at_least(from_nx(nx.balanced_tree(2, 3)), 3) is None
    two_k4 = Graph(8, list(itertools.combinations(range(4), 2)) + list(itertools.combinations(range(4, 8), 2)))
    assert find_cycle_at_least(two_k4, 5) is None
    assert len(find_cycle_at_least(two_k4, 4)) >= 4


def test_cycle_length_below_three_is_rejected():
    with pytest.raises(ParameterError):
        find_cycle_exact(Graph.complete(4), 2)


def test_budget_exhaustion_is_not_absence():
    with pytest.raises(SearchBudgetExhausted):
        find_cycle_exact(petersen(), 9, budget=3)


@given(small_graphs(3, 7))
@settings(max_examples=80, deadline=None)
def test_cycle_finders_agree_with_brute_force(g):
    lengths = brute_cycle_lengths(g)
    for n in range(3, g.order + 1):
        w = find_cycle_exact(g, n)
        assert (w is not None) == (n in lengths)
        if w is not None:
            assert len(w) == n and w.verify(g)
        w = find_cycle_at_least(g, n)
        assert (w is not None) == any(L >= n for L in lengths)
        if w is not None:
            assert len(w) >= n and w.verify(g)


def test_no_cycle_shorter_than_girth():
    for seed in range(30):
        g = random_graph(11, 0.3, seed)
        h = to_nx(g)
        try:
            girth = nx.girth(h)
        except AttributeError:  # pragma: no cover
            pytest.skip("networkx without girth")
        for n in range(3, min(int(girth), 12)):
            assert find_cycle_exact(g, n) is None
        if girth != float("inf"):
            assert find_cycle_exact(g, int(girth)) is not None


def test_multipartite_examples():
    k33 = from_nx(nx.complete_bipartite_graph(3, 3))
    w = find_complete_multipartite(k33, [2, 2])
    assert w is not None and w.verify(k33, [2, 2])
    assert find_complete_multipartite(petersen(), [1, 1, 1]) is None
    g = random_graph(5, 0.5, 3)
    w = find_complete_multipartite(g, [5])
    assert w is not None and sorted(w.parts[0]) == [0, 1, 2, 3, 4]


def test_multipartite_rejects_empty_sizes():
    with pytest.raises(ParameterError):
        find_complete_multipartite(Graph.complete(3), [])


@given(small_graphs(2, 6), st.sampled_from([[1, 1], [1, 2], [2, 2], [1, 1, 1], [1, 1, 2], [1, 3]]))
@settings(max_examples=80, deadline=None)
def test_multipartite_agrees_with_brute_force(g, sizes):
    w = find_complete_multipartite(g, sizes)
    assert (w is not None) == brute_multipartite(g, sizes)
    if w is not None:
        assert w.verify(g, sizes)


def test_disjoint_paths_examples():
    res = vertex_disjoint_paths(Graph.complete(4), [0], [3], 3)
    assert res.found and len(res.paths.paths) == 3
    assert sorted(len(p) for p in res.paths.paths) == [2, 3, 3]
    res = vertex_disjoint_paths(Graph.path(3), [0], [2], 2)
    assert not res.found and res.separator == {1}
    c6 = Graph.cycle(6)
    res = vertex_disjoint_paths(c6, [0], [3], 2)
    assert res.found and {len(p) for p in res.paths.paths} == {4}
    res = vertex_disjoint_paths(c6, [0], [3], 3)
    assert not res.found and len(res.separator) == 2


def test_disjoint_paths_agree_with_networkx_connectivity():
    for seed in range(60):
        g = random_graph(12, 0.35, seed)
        a, b = [0, 1, 2], [9, 10, 11]
        best = nx_max_disjoint(g, a, b)
        for want in (1, 2, 3):
            res = vertex_disjoint_paths(g, a, b, want)
            assert res.found == (best >= want)
            if res.found:
                assert res.paths.verify(g) and len(res.paths.paths) == want
                for p in res.paths.paths:
                    assert p[0] in a and p[-1] in b
            else:
                sep = set(res.separator)
                assert len(sep) < want
                left = g.full_mask & ~g.to_mask(sep)
                for comp in components(g, left):
                    assert not (comp & g.to_mask([v for v in a if v not in sep]) and comp & g.to_mask([v for v in b if v not in sep]))


def test_blocks_find_the_cut_vertex():
    g = Graph(7, list(itertools.combinations(range(4), 2)) + list(itertools.combinations(range(3, 7), 2)))
    blist, cut = blocks(g)
    assert cut == 1 << 3
    assert sorted(bin(b).count("1") for b in blist) == [4, 4]


def test_witness_json_shape():
    w = MultipartiteWitness(((0,), (1, 2)))
    assert w.to_json() == {"kind": "multipartite", "parts": [[0], [1, 2]]}
    c = find_cycle_exact(Graph.complete(3), 3)
    assert c.to_json()["kind"] == "cycle"
