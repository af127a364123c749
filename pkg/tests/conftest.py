import itertools
import random

import networkx as nx
import pytest

from cyclegood.gadget_cycles import GadgetCycle
from cyclegood.gadgets import UPTO, GadgetWithReturn, verify_gadget
from cyclegood.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.empty_graph(g.order)
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    mapping = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph(len(mapping), [(mapping[u], mapping[v]) for u, v in h.edges()])


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def petersen() -> Graph:
    return from_nx(nx.petersen_graph())


def clique_block_cycle(g, blocks, k=2, a=None, b=None, m=None):
    """Gadget-cycle whose gadgets are the given 4-cliques, joined by single edges."""
    gadgets = [verify_gadget(g, blk, blk[0], blk[-1], k, UPTO).gadget for blk in blocks]
    t = len(gadgets)
    connectors = tuple((gadgets[i].b, gadgets[(i + 1) % t].a) for i in range(t))
    total = sum(len(blk) for blk in blocks)
    return GadgetCycle(
        tuple(gadgets),
        connectors,
        total - t * k if a is None else a,
        total if b is None else b,
        max(len(blk) for blk in blocks) if m is None else m,
        k,
    )


def random_join(seed, blocks_each=4, extra=0):
    rng = random.Random(seed)
    size = 8 * blocks_each + 40 + extra
    g = Graph.complete(size)
    verts = list(range(size))
    rng.shuffle(verts)
    half = 4 * blocks_each
    side1, side2, rest = verts[:half], verts[half:2 * half], verts[2 * half:]
    c1 = clique_block_cycle(g, [side1[i:i + 4] for i in range(0, half, 4)])
    c2 = clique_block_cycle(g, [side2[i:i + 4] for i in range(0, half, 4)])
    r = 16 + rng.randrange(0, min(half, 2 * half) - 15)
    ends1 = rng.sample(side1, r)
    ends2 = rng.sample(side2, r)
    mids = rng.sample(rest, rng.randrange(0, min(r, len(rest)) + 1))
    paths = []
    for i, (x, y) in enumerate(zip(ends1, ends2)):
        paths.append((x, mids[i], y) if i < len(mids) else (x, y))
    return g, c1, c2, paths


def synthetic_unit(g, block, ret):
    gd = verify_gadget(g, block, block[0], block[-1], 2, UPTO).gadget
    return GadgetWithReturn(gd, tuple([block[-1], *ret, block[0]]))


@pytest.fixture(scope="session")
def dense_host():
    return random_graph(400, 0.75, 7)


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
