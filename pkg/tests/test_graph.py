import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclegood.errors import ParameterError, VertexRangeError
from cyclegood.formats import (
    format_coloring,
    format_edge_list,
    from_graph6,
    parse_coloring,
    parse_edge_list,
    to_graph6,
)
from cyclegood.graph import Graph, TwoColoring, complement, induced_subgraph, neighborhood, neighborhood_in

from conftest import to_nx


@st.composite
def graphs(draw, max_order=12):
    n = draw(st.integers(0, max_order))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, chosen) if keep])


C5 = Graph.cycle(5)


def test_neighborhood_of_a_single_cycle_vertex():
    assert neighborhood(C5, {0}) == {1, 4}


def test_neighborhood_may_contain_the_set_itself():
    assert neighborhood(C5, {0, 1}) == {0, 1, 2, 4}


def test_neighborhood_of_empty_set():
    assert neighborhood(Graph.complete(4), set()) == frozenset()


def test_neighborhood_in_examples():
    assert neighborhood_in(C5, {0}, {1, 2}) == {1}
    assert neighborhood_in(C5, {0}, range(5)) == {1, 4}
    assert neighborhood_in(C5, {2}, set()) == frozenset()


def test_out_of_range_vertex_is_rejected():
    with pytest.raises(VertexRangeError):
        neighborhood(C5, {5})
    with pytest.raises(VertexRangeError):
        Graph(3, [(0, 3)])
    with pytest.raises(ParameterError):
        Graph(3, [(1, 1)])


def test_induced_subgraph_examples():
    k3, rel = induced_subgraph(Graph.complete(4), {0, 1, 2})
    assert k3 == Graph.complete(3)
    assert rel.to_child == {0: 0, 1: 1, 2: 2}
    p3, _ = induced_subgraph(C5, {0, 1, 2})
    assert p3 == Graph.path(3)
    same, rel = induced_subgraph(C5, range(5))
    assert same == C5 and rel.to_parent == tuple(range(5))


def test_induced_subgraph_lifts_back_to_parent_labels():
    sub, rel = induced_subgraph(C5, {1, 3, 4})
    assert sub.edges() == [(1, 2)]
    assert rel.lift([1, 2]) == [3, 4]


def test_complement_examples():
    c = complement(C5)
    assert nx.is_isomorphic(to_nx(c), to_nx(C5))
    assert complement(Graph.complete(5)).edge_count() == 0
    assert complement(Graph(3)) == Graph.complete(3)


@given(graphs())
def test_complement_is_an_involution(g):
    assert complement(complement(g)) == g


@given(graphs(), st.data())
def test_neighborhood_in_is_intersection(g, data):
    s = data.draw(st.sets(st.integers(0, max(g.order - 1, 0)))) if g.order else set()
    u = data.draw(st.sets(st.integers(0, max(g.order - 1, 0)))) if g.order else set()
    assert neighborhood_in(g, s, u) == neighborhood(g, s) & frozenset(u)
    expected = set()
    for v in s:
        expected |= set(to_nx(g).neighbors(v))
    assert neighborhood(g, s) == expected


@given(graphs(max_order=10), st.data())
def test_closed_neighborhood_is_monotone(g, data):
    if g.order == 0:
        return
    big = data.draw(st.sets(st.integers(0, g.order - 1)))
    small = data.draw(st.sets(st.sampled_from(sorted(big)))) if big else set()
    assert neighborhood(g, small) | small <= neighborhood(g, big) | big


@given(graphs())
def test_edge_list_round_trip(g):
    assert parse_edge_list(format_edge_list(g)) == g


@given(graphs(max_order=20))
@settings(max_examples=60)
def test_graph6_matches_networkx(g):
    ours = to_graph6(g)
    theirs = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert ours == theirs
    assert from_graph6(ours) == g


def test_coloring_file_round_trip_and_header():
    c = TwoColoring(Graph(4, [(0, 1), (2, 3)]))
    text = format_coloring(c)
    assert text.splitlines()[0] == "red-of-complete 4"
    back = parse_coloring(text)
    assert back.red == c.red
    assert back.blue.edge_count() == 4


def test_malformed_inputs_raise_parameter_errors():
    with pytest.raises(ParameterError):
        parse_edge_list("3\n0 1 2\n")
    with pytest.raises(ParameterError):
        parse_coloring("3\n0 1\n")
    with pytest.raises(ParameterError):
        parse_edge_list("")
