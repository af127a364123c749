import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_graph, to_nx
from cyclegood.errors import ParameterError
from cyclegood.gadgets import (
    EXACT,
    UPTO,
    build_doubling_gadget,
    build_gadget_with_return,
    build_small_gadget,
    verify_gadget,
)
from cyclegood.graph import Graph


def path_orders(g, j, a, b):
    h = to_nx(g).subgraph(j)
    return {len(p) for p in nx.all_simple_paths(h, a, b)}


def test_five_cycle_is_a_three_gadget():
    res = verify_gadget(Graph.cycle(5), range(5), 0, 1, 3)
    assert res.status == "verified"
    assert sorted(len(w) for w in res.gadget.witnesses) == [2, 5]
    assert res.gadget.check(Graph.cycle(5)) == []


def test_k4_is_upto_two_gadget():
    k4 = Graph.complete(4)
    res = verify_gadget(k4, range(4), 0, 1, 2, UPTO)
    assert res.status == "verified"
    assert sorted(len(w) for w in res.gadget.witnesses) == [2, 3, 4]


def test_path_is_refused():
    p4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
    res = verify_gadget(p4, range(4), 0, 3, 1)
    assert res.status == "refused"
    assert res.missing == (3,)


def test_verify_gadget_argument_checks():
    k4 = Graph.complete(4)
    with pytest.raises(ParameterError):
        verify_gadget(k4, range(4), 0, 0, 1)
    with pytest.raises(ParameterError):
        verify_gadget(k4, [0, 1, 2], 0, 3, 1)
    with pytest.raises(ParameterError):
        verify_gadget(k4, range(4), 0, 1, 3)


def test_budget_gives_indeterminate():
    g = Graph.complete(12)
    res = verify_gadget(g, range(12), 0, 1, 5, UPTO, budget=3)
    assert res.status == "indeterminate"


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9), st.floats(0.3, 0.9), st.integers(0, 10_000), st.integers(1, 5), st.sampled_from([EXACT, UPTO]))
def test_verify_gadget_agrees_with_path_enumeration(n, p, seed, k, kind):
    g = random_graph(n, p, seed)
    if k > n - 2:
        return
    res = verify_gadget(g, range(n), 0, 1, k, kind)
    orders = path_orders(g, range(n), 0, 1)
    want = {n, n - k} if kind == EXACT else {n - t for t in range(k + 1)}
    assert (res.status == "verified") == want.issubset(orders)
    if res.status == "verified":
        assert res.gadget.check(g) == []
    else:
        assert set(res.missing) == want - orders


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 8), st.floats(0.4, 0.9), st.integers(0, 10_000), st.integers(1, 4))
def test_pendant_path_keeps_gadget_property(n, p, seed, k):
    g = random_graph(n, p, seed)
    if k > n - 2 or verify_gadget(g, range(n), 0, 1, k).status != "verified":
        return
    longer = Graph(n + 1, list(g.edges()) + [(1, n)])
    res = verify_gadget(longer, range(n + 1), 0, n, k)
    assert res.status == "verified"


def test_small_gadget_on_dense_host(dense_host):
    for r in (1, 3):
        b = build_small_gadget(dense_host, 4, 2, r)
        assert b.gadget.shortfall == r and b.gadget.kind == EXACT
        assert b.gadget.check(dense_host) == []
        again = verify_gadget(dense_host, b.gadget.vertices, b.gadget.a, b.gadget.b, r)
        assert again.status == "verified"


def test_small_gadget_argument_checks(dense_host):
    with pytest.raises(ParameterError):
        build_small_gadget(dense_host, 4, 2, 2)
    with pytest.raises(ParameterError):
        build_small_gadget(dense_host, 4, 2, 5)
    with pytest.raises(ParameterError):
        build_small_gadget(Graph.complete(20), 4, 2, 1)


def test_doubling_gadget_on_dense_host(dense_host):
    b = build_doubling_gadget(dense_host, 8, 2, 3)
    assert b.gadget.kind == UPTO and b.gadget.shortfall == 8
    assert b.gadget.check(dense_host) == []
    with pytest.raises(ParameterError):
        build_doubling_gadget(dense_host, 8, 2, 4)


def test_return_gadget_on_dense_host(dense_host):
    b = build_gadget_with_return(dense_host, 4, 2, 16, 8)
    res = b.result
    assert res.check(dense_host) == []
    assert res.gadget.order == (16 + 8) * 4
    assert res.gadget.shortfall == 16 * 4
    assert len(res.return_path) == 8 * 4
    with pytest.raises(ParameterError):
        build_gadget_with_return(dense_host, 4, 2, 10, 8)


def test_gadget_json_round_trip(dense_host):
    gd = build_small_gadget(dense_host, 4, 2, 3).gadget
    body = gd.to_json()
    assert body["a"] == gd.a and body["b"] == gd.b
    assert sorted(body["vertices"]) == sorted(gd.vertices)
