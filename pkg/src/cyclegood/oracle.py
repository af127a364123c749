"""Exact Ramsey numbers R(C_n, K_{m_1..m_k}) for tiny instances.

Two modes. ``full`` enumerates every labeled coloring of K_N (N <= 7).
``pruned`` uses that refuting colorings are hereditary: every coloring of
K_N without a red C_n and without a blue K_{m_1..m_k} restricts to such a
coloring on any N-1 vertices. Level N is grown from level N-1 by adding one
vertex with every possible red neighborhood, keeping refuting results, and
merging isomorphic red graphs through a canonical form.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ParameterError, SearchBudgetExhausted
from .graph import Graph, TwoColoring, complement
from .search import find_complete_multipartite, find_cycle_exact

FULL_LIMIT = 7
PRUNED_LIMIT = 11
LEAF_CAP = 2000


# ---------------------------------------------------------------- canonical form

def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Split cells by neighbor counts into every cell until stable; order is label-free."""
    while True:
        index = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                index[v] = ci
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new: list[list[int]] = []
        for ci, cell in enumerate(cells):
            if len(cell) == 1:
                new.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                sig = tuple((adj[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            for sig in sorted(groups):
                new.append(groups[sig])
        if len(new) == len(cells):
            return new
        cells = new


def _key_for_order(adj: Sequence[int], order: Sequence[int]) -> int:
    key = 0
    n = len(order)
    bit = 0
    for i in range(n):
        row = adj[order[i]]
        for j in range(i + 1, n):
            if row >> order[j] & 1:
                key |= 1 << bit
            bit += 1
    return key


def canonical_key(g: Graph) -> tuple[int, int]:
    """(order, key) equal for isomorphic graphs whenever the search stays under the leaf cap.

    Past the cap the key falls back to a fixed labeling, which can only split
    an isomorphism class, never merge two different classes.
    """
    adj = g.adj
    n = g.order
    if n == 0:
        return (0, 0)
    degs: dict[int, list[int]] = {}
    for v in range(n):
        degs.setdefault(adj[v].bit_count(), []).append(v)
    start = _refine(adj, [degs[d] for d in sorted(degs)])
    best = [None]
    leaves = [0]

    def search(cells: list[list[int]]) -> bool:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaves[0] += 1
            k = _key_for_order(adj, [c[0] for c in cells])
            if best[0] is None or k < best[0]:
                best[0] = k
            return leaves[0] <= LEAF_CAP
        cell = cells[target]
        for v in cell:
            split = cells[:target] + [[v], [u for u in cell if u != v]] + cells[target + 1:]
            if not search(_refine(adj, split)):
                return False
        return True

    if not search(start):
        flat = [v for c in start for v in c]
        return (n, -1 - _key_for_order(adj, flat))
    return (n, best[0])


# ---------------------------------------------------------------- refutation test

def _refutes(red: Graph, n: int, sizes: Sequence[int], budget: int | None) -> bool:
    if red.order >= n and find_cycle_exact(red, n, budget) is not None:
        return False
    if red.order >= sum(sizes) and find_complete_multipartite(complement(red), sizes, budget) is not None:
        return False
    return True


def _extend(args) -> list[tuple[tuple[int, int], tuple[int, ...]]]:
    adj, n, sizes, budget = args
    base = len(adj)
    out = []
    seen = set()
    for nb in range(1 << base):
        new_adj = [a | ((nb >> v & 1) << base) for v, a in enumerate(adj)] + [nb]
        g = Graph.from_masks(new_adj)
        key = canonical_key(g)
        if key in seen:
            continue
        seen.add(key)
        if _refutes(g, n, sizes, budget):
            out.append((key, tuple(new_adj)))
    return out


@dataclass
class OracleResult:
    value: int | None
    bound: str
    refuter: TwoColoring | None
    mode: str
    levels: list[dict] = field(default_factory=list)
    complete: bool = True

    def to_json(self) -> dict:
        ref = None
        if self.refuter is not None:
            ref = {"order": self.refuter.order, "red_edges": [list(e) for e in self.refuter.red.edges()]}
        return {"R": self.value, "bound": self.bound, "refuter": ref, "mode": self.mode, "levels": self.levels}


def _check_instance(n: int, sizes: Sequence[int]) -> list[int]:
    sizes = list(sizes)
    if n < 3:
        raise ParameterError("cycle length must be >= 3")
    if not sizes or any(s < 1 for s in sizes) or sizes != sorted(sizes):
        raise ParameterError("sizes must be positive and ascending")
    return sizes


def exact_ramsey_oracle(
    n: int,
    sizes: Sequence[int],
    n_max: int,
    mode: str = "pruned",
    budget: int | None = None,
    threads: int = 1,
) -> OracleResult:
    """Smallest N <= n_max forcing a red C_n or a blue K_sizes, else a lower bound with a refuter."""
    sizes = _check_instance(n, sizes)
    if mode == "full":
        if n_max > FULL_LIMIT:
            raise ParameterError(f"full enumeration is limited to N <= {FULL_LIMIT}")
        return _full(n, sizes, n_max, budget)
    if mode == "pruned":
        if n_max > PRUNED_LIMIT:
            raise ParameterError(f"pruned enumeration is limited to N <= {PRUNED_LIMIT}")
        return _pruned(n, sizes, n_max, budget, threads)
    raise ParameterError(f"unknown oracle mode {mode!r}")


def _full(n: int, sizes: list[int], n_max: int, budget: int | None) -> OracleResult:
    levels = []
    refuter = None
    for order in range(1, n_max + 1):
        pairs = list(itertools.combinations(range(order), 2))
        found = None
        checked = 0
        try:
            for bits in range(1 << len(pairs)):
                red = Graph(order, [e for i, e in enumerate(pairs) if bits >> i & 1])
                checked += 1
                if _refutes(red, n, sizes, budget):
                    found = red
                    break
        except SearchBudgetExhausted:
            levels.append({"N": order, "checked": checked, "status": "budget"})
            return OracleResult(None, f"> {order - 1} (undecided at {order})", refuter, "full", levels, False)
        levels.append({"N": order, "checked": checked, "refuting": found is not None})
        if found is None:
            return OracleResult(order, f"= {order}", refuter, "full", levels)
        refuter = TwoColoring(found)
    return OracleResult(None, f">= {n_max + 1}", refuter, "full", levels)


def refuting_level(n: int, sizes: Sequence[int], order: int, budget: int | None = None) -> list[Graph]:
    """Canonical representatives of every refuting coloring on ``order`` vertices (as red graphs)."""
    sizes = _check_instance(n, sizes)
    level = [Graph(1)] if _refutes(Graph(1), n, sizes, budget) else []
    for _ in range(2, order + 1):
        level = _grow(level, n, sizes, budget, 1)
    return level


def _grow(level: list[Graph], n: int, sizes: list[int], budget: int | None, threads: int) -> list[Graph]:
    jobs = [(tuple(g.adj), n, sizes, budget) for g in level]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            chunks = list(ex.map(_extend, jobs))
    else:
        chunks = [_extend(j) for j in jobs]
    merged: dict[tuple[int, int], tuple[int, ...]] = {}
    for chunk in chunks:
        for key, adj in chunk:
            merged.setdefault(key, adj)
    return [Graph.from_masks(list(merged[k])) for k in sorted(merged)]


def _pruned(n: int, sizes: list[int], n_max: int, budget: int | None, threads: int) -> OracleResult:
    levels = []
    level: list[Graph] = []
    refuter = None
    for order in range(1, n_max + 1):
        try:
            if order == 1:
                level = [Graph(1)] if _refutes(Graph(1), n, sizes, budget) else []
            else:
                level = _grow(level, n, sizes, budget, threads)
        except SearchBudgetExhausted:
            levels.append({"N": order, "status": "budget"})
            return OracleResult(None, f"> {order - 1} (undecided at {order})", refuter, "pruned", levels, False)
        levels.append({"N": order, "refuting_classes": len(level)})
        if not level:
            return OracleResult(order, f"= {order}", refuter, "pruned", levels)
        refuter = TwoColoring(level[0])
    return OracleResult(None, f">= {n_max + 1}", refuter, "pruned", levels)
