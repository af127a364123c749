import itertools
import random

import pytest

from cyclegood.errors import ParameterError
from cyclegood.graph import Graph
from cyclegood.oracle import canonical_key, exact_ramsey_oracle, refuting_level
from cyclegood.ramsey import REFUTES, RamseyInstance, verify_refutation


@pytest.mark.parametrize(
    "n, sizes, value",
    [(3, [1, 1], 3), (5, [1, 2], 5), (4, [2, 2], 6)],
)
def test_known_values(n, sizes, value):
    res = exact_ramsey_oracle(n, sizes, 8)
    assert res.value == value and res.complete
    # the refuter sits one level below the answer and really refutes
    assert res.refuter.order == value - 1
    assert verify_refutation(res.refuter, RamseyInstance(n, tuple(sizes))).status == REFUTES


@pytest.mark.parametrize("n, sizes", [(3, [1, 1]), (3, [1, 2]), (4, [1, 2]), (4, [2, 2]), (5, [1, 2]), (3, [1, 1, 1])])
def test_full_and_pruned_agree(n, sizes):
    assert exact_ramsey_oracle(n, sizes, 6, "full").value == exact_ramsey_oracle(n, sizes, 6, "pruned").value


def test_unreached_value_reports_lower_bound():
    res = exact_ramsey_oracle(5, [2, 2], 5)
    assert res.value is None and res.bound == ">= 6"
    assert res.refuter.order == 5


def test_oracle_argument_checks():
    with pytest.raises(ParameterError):
        exact_ramsey_oracle(2, [1, 1], 5)
    with pytest.raises(ParameterError):
        exact_ramsey_oracle(4, [2, 1], 5)
    with pytest.raises(ParameterError):
        exact_ramsey_oracle(4, [1, 1], 8, "full")
    with pytest.raises(ParameterError):
        exact_ramsey_oracle(4, [1, 1], 12)
    with pytest.raises(ParameterError):
        exact_ramsey_oracle(4, [1, 1], 5, "sat")


def test_monotone_in_part_sizes():
    grid = {}
    for n in (3, 4, 5):
        for sizes in ([1, 1], [1, 2], [2, 2]):
            grid[n, tuple(sizes)] = exact_ramsey_oracle(n, sizes, 9).value
    for n in (3, 4, 5):
        assert grid[n, (1, 1)] <= grid[n, (1, 2)] <= grid[n, (2, 2)]


def test_two_part_grid_against_formula():
    """Where the oracle departs from n+m_1-1 the refuter one level down must really refute."""
    deviations = []
    for n in (3, 4, 5):
        for sizes in ([1, 1], [1, 2], [2, 2]):
            res = exact_ramsey_oracle(n, sizes, 9)
            formula = n + sizes[0] - 1
            assert res.value >= formula
            if res.value != formula:
                inst = RamseyInstance(n, tuple(sizes))
                assert verify_refutation(res.refuter, inst).status == REFUTES
                deviations.append((n, tuple(sizes), res.value))
    assert deviations == [(3, (1, 2), 5), (3, (2, 2), 7), (4, (2, 2), 6), (5, (2, 2), 7)]


def test_three_part_tiny_instance_matches_formula():
    assert exact_ramsey_oracle(5, [1, 1, 2], 9).value == 9


def test_canonical_key_is_label_invariant():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randrange(2, 9)
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5]
        perm = list(range(n))
        rng.shuffle(perm)
        relabeled = Graph(n, [(perm[u], perm[v]) for u, v in edges])
        assert canonical_key(Graph(n, edges)) == canonical_key(relabeled)


def test_canonical_key_separates_non_isomorphic_graphs():
    import networkx as nx

    graphs = [g for g in nx.graph_atlas_g() if g.number_of_nodes() == 5]
    keys = {canonical_key(Graph(5, list(g.edges()))) for g in graphs}
    assert len(keys) == len(graphs)


def test_refuting_level_classes_all_refute():
    inst = RamseyInstance(5, (1, 1, 2))
    level = refuting_level(5, [1, 1, 2], 8)
    assert level
    from cyclegood.graph import TwoColoring

    for red in level:
        assert verify_refutation(TwoColoring(red), inst).status == REFUTES
