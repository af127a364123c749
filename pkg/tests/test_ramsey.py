import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_graph
from cyclegood.errors import ConstructionError, HypothesisFalsified, ParameterError
from cyclegood.graph import Graph, TwoColoring
from cyclegood.oracle import refuting_level
from cyclegood.profile import PAPER
from cyclegood.ramsey import (
    BLUE,
    RED,
    REFUTES,
    RamseyInstance,
    bipartite_engine,
    clique_coloring,
    connected_engine,
    lower_bound_coloring,
    partition_structure,
    prove_main,
    refuting_coloring_general,
    verify_refutation,
)


def all_colorings(order):
    pairs = list(itertools.combinations(range(order), 2))
    for bits in range(1 << len(pairs)):
        yield TwoColoring(Graph(order, [e for i, e in enumerate(pairs) if bits >> i & 1]))


def red_component_sizes(c):
    import networkx as nx

    from conftest import to_nx

    return sorted(len(x) for x in nx.connected_components(to_nx(c.red)))


def test_instance_validation():
    assert RamseyInstance(6, (2, 2, 2)).lower_bound == 12
    with pytest.raises(ParameterError):
        RamseyInstance(2, (1, 1))
    with pytest.raises(ParameterError):
        RamseyInstance(5, (2, 1))
    with pytest.raises(ParameterError):
        RamseyInstance(5, ())


def test_lower_bound_coloring_examples():
    c = lower_bound_coloring(RamseyInstance(6, (2, 2, 2)))
    assert c.order == 11 and red_component_sizes(c) == [1, 5, 5]
    c = lower_bound_coloring(RamseyInstance(5, (1, 1)))
    assert c.order == 4 and red_component_sizes(c) == [4]


def test_lower_bound_coloring_refutes_on_grid():
    for n in range(4, 9):
        for k in (2, 3):
            for sizes in itertools.combinations_with_replacement(range(1, 4), k):
                inst = RamseyInstance(n, sizes)
                assert verify_refutation(lower_bound_coloring(inst), inst).status == REFUTES


def test_general_refuting_coloring():
    inst = RamseyInstance(6, (2, 3, 4))
    c = refuting_coloring_general(inst, 2)
    assert c.order == 9 and red_component_sizes(c) == [2, 2, 5]
    assert verify_refutation(c, inst).status == REFUTES
    assert refuting_coloring_general(inst, 1).order == lower_bound_coloring(inst).order
    with pytest.raises(ParameterError):
        refuting_coloring_general(inst, 4)
    with pytest.raises(ParameterError):
        refuting_coloring_general(RamseyInstance(3, (2, 3, 4)), 3)


def test_verify_refutation_finds_witnesses():
    red = verify_refutation(TwoColoring(Graph.complete(6)), RamseyInstance(6, (1, 1)))
    assert red.status == RED and len(red.witness.vertices) == 6
    blue = verify_refutation(TwoColoring(Graph(5)), RamseyInstance(4, (1, 2, 2)))
    assert blue.status == BLUE


def test_bipartite_engine_all_red():
    c = TwoColoring(Graph.complete(7))
    v = bipartite_engine(c, 6, 2, 2)
    assert v.kind == "red-cycle" and v.check(c, RamseyInstance(6, (2, 2)))


def test_bipartite_engine_on_lower_bound_coloring_refutes():
    inst = RamseyInstance(5, (2, 2))
    c = lower_bound_coloring(inst)
    assert bipartite_engine(c, 5, 2, 2).kind == "refuted"


def test_bipartite_engine_every_coloring_of_k5():
    inst = RamseyInstance(5, (1, 2))
    for c in all_colorings(5):
        v = bipartite_engine(c, 5, 1, 2)
        assert v.decided and v.kind != "refuted" and v.check(c, inst)


def test_bipartite_engine_dense_red_host():
    c = TwoColoring(random_graph(300, 0.97, 11))
    v = bipartite_engine(c, 300, 4, 4)
    assert v.decided and v.check(c, RamseyInstance(300, (4, 4)))


def test_bipartite_engine_refuses_paper_profile_on_large_host():
    c = TwoColoring(random_graph(30, 0.9, 1))
    with pytest.raises(ParameterError):
        bipartite_engine(c, 25, 2, 2, PAPER)


def test_prove_main_delegates_for_two_parts():
    c = TwoColoring(random_graph(12, 0.5, 3))
    a = prove_main(c, RamseyInstance(6, (2, 3)))
    b = bipartite_engine(c, 6, 2, 3)
    assert a.kind == b.kind
    assert a.to_json()["witness"] == b.to_json()["witness"]
    assert any(e.get("stage") == "delegate" for e in a.trace)


def test_prove_main_on_lower_bound_coloring_refutes():
    inst = RamseyInstance(5, (1, 1, 2))
    assert prove_main(lower_bound_coloring(inst), inst).kind == "refuted"


def test_prove_main_every_extension_of_refuting_colorings():
    """Every coloring of K_9 restricts to a refuting coloring of K_8 or already has a witness there."""
    inst = RamseyInstance(5, (1, 1, 2))
    level = refuting_level(5, [1, 1, 2], 8)
    for red in level:
        for nb in range(1 << 8):
            ext = TwoColoring(Graph.from_masks([a | ((nb >> v & 1) << 8) for v, a in enumerate(red.adj)] + [nb]))
            v = prove_main(ext, inst)
            assert v.decided and v.kind != "refuted" and v.check(ext, inst)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_prove_main_witnesses_always_reverify(seed):
    c = TwoColoring(random_graph(10, 0.5, seed))
    inst = RamseyInstance(4, (1, 2, 2))
    v = prove_main(c, inst)
    assert v.check(c, inst)


def test_partition_two_cliques():
    res = partition_structure(clique_coloring([20, 20]), 20, 5, 3)
    assert sorted(map(sorted, res.parts)) == [list(range(20)), list(range(20, 40))]
    assert not res.separator
    assert res.certification["no_cross_edges"]


def test_partition_finds_cut_vertex():
    edges = [(i, j) for i, j in itertools.combinations(range(40), 2) if (i < 20) == (j < 20)]
    edges += [(40, i) for i in range(40)]
    res = partition_structure(TwoColoring(Graph(41, edges)), 20, 5, 3)
    assert res.separator == {40}
    assert sorted(len(p) for p in res.parts) == [20, 20]


def test_partition_with_too_many_parts_returns_blue_witness():
    c = clique_coloring([20, 20, 20])
    with pytest.raises(HypothesisFalsified) as info:
        partition_structure(c, 20, 5, 3)
    w = info.value.witness
    assert w.verify(c.blue, [5, 5, 5])


def test_partition_with_one_part_is_an_error():
    with pytest.raises(ConstructionError):
        partition_structure(TwoColoring(Graph.complete(30)), 20, 5, 3)


def test_connected_engine_planted_blue():
    red = random_graph(60, 0.95, 1)
    parts = [range(0, 3), range(3, 6), range(6, 9)]
    edges = [e for e in red.edges() if not any(e[0] in a and e[1] in b for a, b in itertools.permutations(parts, 2))]
    c = TwoColoring(Graph(60, edges))
    v = connected_engine(c, 50, 3, 3)
    assert v.kind == "blue-multipartite" and v.check(c, RamseyInstance(50, (3, 3, 3)))


def test_connected_engine_flags_disconnected_red():
    v = connected_engine(clique_coloring([40, 40]), 30, 3, 3)
    assert v.kind == "inconclusive"
    assert v.reason == "connectivity hypothesis falsified"


def test_connected_engine_dense_red_host():
    c = TwoColoring(random_graph(800, 0.95, 3))
    v = connected_engine(c, 150, 4, 3)
    assert v.kind == "red-cycle"
    assert len(v.witness.vertices) == 150 and v.check(c, RamseyInstance(150, (4, 4, 4)))
