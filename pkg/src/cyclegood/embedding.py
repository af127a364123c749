"""Embedding paths, rooted trees and odd cycles inside expanding graphs.

Public functions check the stated side conditions and certify residual
expansion where the statement promises it. The ``*_core`` variants skip both
and are what the gadget builders call at desk scale, where outputs are checked
directly instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConstructionError, ParameterError, SearchBudgetExhausted
from .expansion import ExpansionParams, ExpansionVerdict, expands_into_mask
from .graph import Graph, bfs_distances, iter_bits, members, shortest_path
from .profile import DESK, ConstantsProfile
from .search import CycleWitness, PathSystem


def log2_ceil(x: float) -> int:
    return 0 if x <= 1 else int(math.ceil(math.log2(x) - 1e-12))


def _log2(x: float) -> float:
    return math.log2(x) if x > 1 else 0.0


# ---------------------------------------------------------------- rooted trees

@dataclass(frozen=True)
class RootedTreeSpec:
    """Shape of a rooted tree; node 0 is the root, nodes are numbered breadth-first."""

    parents: tuple[int, ...]  # parents[0] == -1

    def __post_init__(self):
        if not self.parents or self.parents[0] != -1:
            raise ParameterError("node 0 must be the root")
        for i, p in enumerate(self.parents[1:], start=1):
            if not 0 <= p < i:
                raise ParameterError("parents must precede children")

    @classmethod
    def single(cls) -> "RootedTreeSpec":
        return cls((-1,))

    @classmethod
    def path(cls, order: int) -> "RootedTreeSpec":
        if order < 1:
            raise ParameterError("tree order must be >= 1")
        return cls(tuple([-1] + list(range(order - 1))))

    @classmethod
    def star(cls, leaves: int) -> "RootedTreeSpec":
        return cls(tuple([-1] + [0] * leaves))

    @classmethod
    def binary(cls, order: int) -> "RootedTreeSpec":
        """Heap-shaped binary tree: depth is ceil(log2(order+1)) - 1."""
        if order < 1:
            raise ParameterError("tree order must be >= 1")
        return cls(tuple([-1] + [(i - 1) // 2 for i in range(1, order)]))

    @property
    def order(self) -> int:
        return len(self.parents)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.parents]
        for i, p in enumerate(self.parents[1:], start=1):
            out[p].append(i)
        return out

    @property
    def max_degree(self) -> int:
        ch = self.children()
        return max(len(c) + (1 if i else 0) for i, c in enumerate(ch))

    @property
    def depth(self) -> int:
        d = [0] * self.order
        for i in range(1, self.order):
            d[i] = d[self.parents[i]] + 1
        return max(d)

    def path_to_root(self, node: int) -> list[int]:
        out = [node]
        while self.parents[out[-1]] != -1:
            out.append(self.parents[out[-1]])
        return out


@dataclass(frozen=True)
class EmbeddedTree:
    spec: RootedTreeSpec
    image: tuple[int, ...]  # image[node] = graph vertex

    @property
    def root(self) -> int:
        return self.image[0]

    @property
    def mask(self) -> int:
        out = 0
        for v in self.image:
            out |= 1 << v
        return out

    def path_from_root(self, vertex: int) -> list[int]:
        node = self.image.index(vertex)
        return [self.image[i] for i in reversed(self.spec.path_to_root(node))]

    def to_json(self) -> dict:
        return {"root": self.root, "nodes": list(self.image), "parents": list(self.spec.parents)}


@dataclass
class EmbeddedForest:
    trees: dict[int, EmbeddedTree]
    residual: ExpansionVerdict | None = None

    @property
    def mask(self) -> int:
        out = 0
        for t in self.trees.values():
            out |= t.mask
        return out

    def verify(self, g: Graph) -> bool:
        seen = 0
        for root, t in self.trees.items():
            if t.image[0] != root or len(set(t.image)) != len(t.image):
                return False
            for i, p in enumerate(t.spec.parents[1:], start=1):
                if not g.has_edge(t.image[i], t.image[p]):
                    return False
            if seen & t.mask:
                return False
            seen |= t.mask
        return True

    def to_json(self) -> dict:
        out = {"trees": [t.to_json() for _, t in sorted(self.trees.items())]}
        if self.residual is not None:
            out["residual"] = self.residual.to_json()
        return out


def embed_forest_core(
    g: Graph,
    allowed: int,
    roots: Sequence[tuple[int, RootedTreeSpec]],
    budget: int = 200_000,
) -> dict[int, EmbeddedTree]:
    """Disjoint copies of the trees, each rooted at its vertex, using only ``allowed`` vertices.

    Nodes are placed breadth-first; each child goes to the free neighbor of its
    parent with the most free neighbors of its own (ties to lowest id), with
    budgeted backtracking.
    """
    root_mask = 0
    for v, _ in roots:
        if root_mask >> v & 1:
            raise ParameterError(f"root {v} listed twice")
        root_mask |= 1 << v
    free0 = allowed & ~root_mask
    jobs = []  # (tree index, node, parent node)
    for ti, (_, spec) in enumerate(roots):
        for node in range(1, spec.order):
            jobs.append((ti, node, spec.parents[node]))
    images = [[v] + [-1] * (spec.order - 1) for v, spec in roots]
    adj = g.adj
    expanded = 0

    def place(idx: int, free: int) -> bool:
        nonlocal expanded
        if idx == len(jobs):
            return True
        expanded += 1
        if expanded > budget:
            raise SearchBudgetExhausted("tree embedding budget exhausted", expanded)
        ti, node, par = jobs[idx]
        cand = adj[images[ti][par]] & free
        ranked = sorted(iter_bits(cand), key=lambda v: (-(adj[v] & free).bit_count(), v))
        for v in ranked:
            images[ti][node] = v
            if place(idx + 1, free & ~(1 << v)):
                return True
        images[ti][node] = -1
        return False

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(jobs) + 1000))
    try:
        ok = place(0, free0)
    finally:
        sys.setrecursionlimit(old)
    if not ok:
        raise ConstructionError("embed-forest", "no disjoint embedding of the trees exists in the allowed set")
    return {v: EmbeddedTree(spec, tuple(images[i])) for i, (v, spec) in enumerate(roots)}


def embed_forest(
    g: Graph,
    w: Iterable[int],
    p: ExpansionParams,
    roots: Sequence[tuple[int, RootedTreeSpec]],
    profile: ConstantsProfile = DESK,
    certify: bool = True,
    seed: int = 0,
    check_pre: bool = True,
) -> EmbeddedForest:
    """Embed T(x) rooted at each x outside W; ``p`` is the (4D, beta, m) expansion the caller claims.

    Roots of V∖W without a listed tree get the single-vertex tree. The residual
    (D, beta, m)-expansion into W minus the images is certified when requested.
    """
    wmask = g.to_mask(w)
    xmask = g.full_mask & ~wmask
    given = {}
    for v, spec in roots:
        if not xmask >> v & 1:
            raise ParameterError(f"root {v} lies in W; roots must be the vertices outside W")
        given[v] = spec
    full_roots = [(v, given.get(v, RootedTreeSpec.single())) for v in members(xmask)]
    tree_delta = p.delta / 4
    if check_pre and 20 * tree_delta > p.beta:
        raise ParameterError("need 20*D <= beta where the claimed expansion ratio is 4D")
    for v, spec in full_roots:
        if spec.max_degree > tree_delta:
            raise ParameterError(f"tree at {v} has max degree {spec.max_degree} > {tree_delta}")
    total = sum(spec.order for _, spec in full_roots)
    if check_pre and total > (p.beta - 10 * tree_delta) * p.m:
        raise ParameterError(f"total tree order {total} exceeds (beta-10D)m = {(p.beta - 10 * tree_delta) * p.m}")
    trees = embed_forest_core(g, g.full_mask, full_roots, profile.search_budget)
    forest = EmbeddedForest(trees)
    if certify:
        rest = wmask & ~forest.mask
        forest.residual = expands_into_mask(
            g, g.full_mask, rest, ExpansionParams(tree_delta, p.beta, p.m), "auto", profile, seed
        )
    return forest


# ---------------------------------------------------------------- paths

def path_bound(m: int, n: int, beta: float, log_coeff: float, size_coeff: float) -> float:
    """log_coeff*log m + size_coeff*n/(beta*m); infinite when beta*m is zero."""
    if beta * m <= 0:
        return math.inf
    return log_coeff * _log2(m) + size_coeff * n / (beta * m)


def connect_avoiding(
    g: Graph,
    w: Iterable[int],
    p: ExpansionParams,
    a: Iterable[int],
    b: Iterable[int],
    c: Iterable[int],
    profile: ConstantsProfile = DESK,
) -> list[int]:
    """Shortest A–B path avoiding C, checked against 8 log m + 2|G|/(beta m)."""
    wmask, amask, bmask, cmask = (g.to_mask(x) for x in (w, a, b, c))
    if amask & bmask or amask & cmask or bmask & cmask:
        raise ParameterError("A, B, C must be disjoint")
    cw = (cmask & wmask).bit_count()
    if (p.delta - 2) * amask.bit_count() < cw or (p.delta - 2) * bmask.bit_count() < cw:
        raise ParameterError("need (delta-2)|A| >= |C ∩ W| and (delta-2)|B| >= |C ∩ W|")
    if p.beta * p.m < 2 * cmask.bit_count():
        raise ParameterError("need beta*m >= 2|C|")
    path = shortest_path(g, amask, bmask, g.full_mask & ~cmask)
    if path is None:
        raise ConstructionError("connect-avoiding", "A and B are disconnected once C is removed")
    bound = path_bound(p.m, g.order, p.beta, 8, 2)
    if len(path) > profile.bound(bound):
        raise ConstructionError("connect-avoiding", f"path order {len(path)} exceeds bound {bound:.2f}+slack")
    return path


def pair_path_bound(n: int, beta: float, m: int) -> float:
    """The pair-connection length l = 4|G|/(beta m) + 10 log(beta m)."""
    if beta * m <= 0:
        return math.inf
    return 4 * n / (beta * m) + 10 * _log2(beta * m)


def connect_pairs_core(
    g: Graph,
    allowed: int,
    pairs: Sequence[tuple[int, int]],
    reserved: int,
    tree_order: int,
    profile: ConstantsProfile = DESK,
) -> PathSystem:
    """Vertex-disjoint x_i–y_i paths inside ``allowed``.

    Binary trees of ``tree_order`` are embedded at every endpoint first (the
    vertices in ``reserved`` act as single-vertex trees); then each pair is
    joined by a shortest path through its own two trees and still-free vertices.
    """
    ends = []
    for x, y in pairs:
        ends += [x, y]
    if len(set(ends)) != len(ends):
        raise ParameterError("pair endpoints must be distinct")
    spec = RootedTreeSpec.binary(max(1, tree_order))
    roots = [(v, spec) for v in ends]
    endmask = 0
    for v in ends:
        endmask |= 1 << v
    roots += [(v, RootedTreeSpec.single()) for v in iter_bits(reserved & ~endmask)]
    try:
        trees = embed_forest_core(g, allowed | reserved | endmask, roots, profile.search_budget)
    except (ConstructionError, SearchBudgetExhausted):
        trees = embed_forest_core(
            g, allowed | reserved | endmask, [(v, RootedTreeSpec.single()) for v, _ in roots], profile.search_budget
        )
    tree_union = 0
    for t in trees.values():
        tree_union |= t.mask
    free = allowed & ~tree_union & ~reserved
    paths = []
    for x, y in pairs:
        own = trees[x].mask | trees[y].mask
        path = shortest_path(g, 1 << x, 1 << y, free | own)
        if path is None:
            raise ConstructionError("connect-pairs", f"no path for pair ({x},{y}) avoiding earlier paths")
        paths.append(path)
        used = 0
        for v in path:
            used |= 1 << v
        free &= ~used
    return PathSystem(tuple(tuple(pth) for pth in paths))


def connect_pairs(
    g: Graph,
    w: Iterable[int],
    p: ExpansionParams,
    pairs: Sequence[tuple[int, int]],
    profile: ConstantsProfile = DESK,
) -> PathSystem:
    """Disjoint x_i–y_i paths of order at most l = 4|G|/(beta m) + 10 log(beta m), plus slack."""
    wmask = g.to_mask(w)
    xmask = g.full_mask & ~wmask
    t = len(pairs)
    for x, y in pairs:
        if not (xmask >> x & 1 and xmask >> y & 1):
            raise ParameterError("pair endpoints must lie outside W")
    ell = pair_path_bound(g.order, p.beta, p.m)
    if (p.beta - 80) * p.m < 4 * ell * t * t + xmask.bit_count():
        raise ParameterError("need (beta-80)m >= 4*l*t^2 + |G∖W|")
    order = int(t * ell) if math.isfinite(ell) else 1
    if profile.tree_order_cap is not None:
        order = min(order, profile.tree_order_cap)
    system = connect_pairs_core(g, wmask, pairs, xmask, max(order, 1), profile)
    limit = profile.bound(ell)
    for pth in system.paths:
        if len(pth) > limit:
            raise ConstructionError("connect-pairs", f"path order {len(pth)} exceeds l={ell:.2f}+slack")
    assert system.verify(g)
    return system


def short_path_expansion_preserving(
    g: Graph,
    w: Iterable[int],
    p: ExpansionParams,
    x: int,
    y: int,
    profile: ConstantsProfile = DESK,
    certify: bool = True,
    seed: int = 0,
) -> tuple[list[int], ExpansionVerdict | None]:
    """Shortest x–y path plus the (delta-5, beta, m) expansion verdict into W minus the path."""
    wmask = g.to_mask(w)
    path = shortest_path(g, 1 << x, 1 << y)
    if path is None:
        raise ConstructionError("short-path", f"{x} and {y} are disconnected")
    bound = path_bound(p.m, g.order, p.beta, 16, 4)
    if len(path) > profile.bound(bound):
        raise ConstructionError("short-path", f"order {len(path)} exceeds bound {bound:.2f}+slack")
    verdict = None
    if certify:
        pm = g.to_mask(path)
        verdict = expands_into_mask(
            g, g.full_mask, wmask & ~pm, ExpansionParams(max(0.0, p.delta - 5), p.beta, p.m), "auto", profile, seed
        )
    return path, verdict


# ---------------------------------------------------------------- odd cycles

def _two_coloring(g: Graph) -> dict[int, int] | None:
    color: dict[int, int] = {}
    for s in range(g.order):
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in iter_bits(g.adj[u]):
                if v not in color:
                    color[v] = color[u] ^ 1
                    stack.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def is_bipartite(g: Graph) -> bool:
    return _two_coloring(g) is not None


def shortest_odd_cycle_core(g: Graph, allowed: int | None = None) -> list[int] | None:
    allowed = g.full_mask if allowed is None else allowed
    best = None
    adj = g.adj
    for v in iter_bits(allowed):
        if best is not None and best[0] <= 3:
            break
        dist = {v: 0}
        parent = {v: -1}
        frontier = [v]
        seen = 1 << v
        found = None
        d = 0
        while frontier and found is None:
            if best is not None and 2 * d + 1 >= best[0]:
                break
            # same-layer edge at depth d closes an odd walk of length 2d+1
            layer = 0
            for u in frontier:
                layer |= 1 << u
            for u in frontier:
                hit = adj[u] & layer
                if hit:
                    found = (u, (hit & -hit).bit_length() - 1)
                    break
            if found:
                break
            nxt = []
            for u in frontier:
                new = adj[u] & allowed & ~seen
                for w in iter_bits(new):
                    parent[w] = u
                    dist[w] = d + 1
                    nxt.append(w)
                seen |= new
            frontier = nxt
            d += 1
        if found is not None and (best is None or 2 * d + 1 < best[0]):
            best = (2 * d + 1, v, found[0], found[1], parent)
    if best is None:
        return None
    _, v, u, w, parent = best

    def up(x):
        out = [x]
        while parent[out[-1]] != -1:
            out.append(parent[out[-1]])
        return out

    pu, pw = up(u), up(w)
    cyc = list(reversed(pu)) + pw[:-1]
    return cyc


def _check_geodesic(g: Graph, cyc: list[int]) -> None:
    L = len(cyc)
    cmask = g.to_mask(cyc)
    for i, x in enumerate(cyc):
        dist = bfs_distances(g, x)
        for j, y in enumerate(cyc):
            dc = min((i - j) % L, (j - i) % L)
            if dist.get(y) != dc:
                raise ConstructionError("short-cycle", f"cycle not geodesic between {x} and {y}")
    for v in range(g.order):
        if (g.adj[v] & cmask).bit_count() > 5:
            raise ConstructionError("short-cycle", f"vertex {v} has more than 5 neighbors on the cycle")


def shortest_odd_cycle(g: Graph, check: bool = True) -> CycleWitness:
    """A shortest odd cycle; its geodesic and at-most-5-neighbor properties are re-checked."""
    if is_bipartite(g):
        raise ParameterError("graph is bipartite; it has no odd cycle")
    cyc = shortest_odd_cycle_core(g)
    assert cyc is not None
    w = CycleWitness(tuple(cyc))
    if not w.verify(g) or len(cyc) % 2 == 0:
        raise ConstructionError("short-cycle", "reconstructed closed walk is not an odd cycle")
    if check:
        _check_geodesic(g, cyc)
    return w


@dataclass
class LongOddCycle:
    cycle: CycleWitness  # positions 1..r hold the reserved path
    residual: frozenset[int]  # vertex set of G'
    reserved: tuple[int, ...]
    case: str
    verdict: ExpansionVerdict | None = None

    def to_json(self) -> dict:
        out = {
            "cycle": list(self.cycle.vertices),
            "reserved": list(self.reserved),
            "case": self.case,
            "residual_order": len(self.residual),
        }
        if self.verdict is not None:
            out["residual_verdict"] = self.verdict.to_json()
        return out


def _rotate_to_window(cyc: list[int], start: int, r: int) -> list[int]:
    """Rotate so the window cyc[start:start+r] (cyclically) sits at positions 1..r."""
    L = len(cyc)
    return [cyc[(start - 1 + i) % L] for i in range(L)]


def long_odd_cycle_core(g: Graph, r: int, profile: ConstantsProfile = DESK) -> LongOddCycle:
    n = g.order
    c_odd = shortest_odd_cycle_core(g)
    if c_odd is None:
        raise ConstructionError("long-cycle", "graph is bipartite")
    c = len(c_odd)
    if c >= r + 2:
        cyc = _rotate_to_window(c_odd, 1, r)
        reserved = cyc[1: r + 1]
        return LongOddCycle(
            CycleWitness(tuple(cyc)), frozenset(range(n)) - set(reserved), tuple(reserved), "short-cycle-long-enough"
        )
    h = (c - 1) // 2
    x, y = c_odd[0], c_odd[h]
    short_arc = c_odd[: h + 1]  # order (c+1)/2
    long_arc = [c_odd[0]] + list(reversed(c_odd[h:]))  # order (c+3)/2
    p_order = r - (c - 5) // 2
    cmask = g.to_mask(c_odd)
    allowed = g.full_mask & ~cmask | (1 << x)
    try:
        tree = embed_forest_core(g, allowed, [(x, RootedTreeSpec.path(p_order))], profile.search_budget)[x]
    except SearchBudgetExhausted as exc:
        raise ConstructionError("long-cycle/path", str(exc)) from None
    except ConstructionError as exc:
        raise ConstructionError("long-cycle/path", exc.args[0] if exc.args else str(exc)) from None
    P = list(tree.image)  # x ... z
    z = P[-1]
    pmask = g.to_mask(P)
    if g.has_edge(z, y):
        # z P x, short arc x..y, back to z
        cyc = list(reversed(P)) + short_arc[1:]
        case = "closing-edge"
        assert len(cyc) == r + 2
        # reserve r consecutive vertices starting right after z
        cyc = _rotate_to_window(cyc, 1, r)
        reserved = cyc[1: r + 1]
        residual = frozenset(range(n)) - set(reserved)
    else:
        g1 = (g.full_mask & ~cmask & ~pmask) | (1 << z) | (1 << y)
        Q = shortest_path(g, 1 << z, 1 << y, g1)
        if Q is None:
            raise ConstructionError("long-cycle/connect", "z and y are disconnected outside the cycle and path")
        assert len(Q) >= 3
        arc = short_arc if len(Q) % 2 == 0 else long_arc
        # cycle: x P z, Q to y, arc back to x
        cyc = P + Q[1:] + list(reversed(arc))[1:-1]
        case = "connecting-path"
        extra = len(cyc) - r - len(Q)
        assert extra in (0, 1)
        # U: |C|-r consecutive vertices, Q plus (for the long arc) its successor y' on the arc
        q_start = len(P) - 1
        u_len = len(cyc) - r
        window_start = (q_start + u_len) % len(cyc)
        cyc = _rotate_to_window(cyc, window_start, r)
        reserved = cyc[1: r + 1]
        keep_u = set(cyc) - set(reserved)
        residual = frozenset(members(g1 & ~g.to_mask(Q))) | keep_u
    w = CycleWitness(tuple(cyc))
    if not w.verify(g) or len(cyc) % 2 == 0 or len(cyc) < r + 2:
        raise ConstructionError("long-cycle", f"assembled cycle invalid (order {len(cyc)})")
    return LongOddCycle(w, frozenset(residual), tuple(reserved), case)


def long_odd_cycle(
    g: Graph,
    p: ExpansionParams,
    r: int,
    profile: ConstantsProfile = DESK,
    strict: bool = True,
    certify: bool = True,
    seed: int = 0,
) -> LongOddCycle:
    """Odd cycle with r+2 <= |C| <= r + 16 log m + 5|G|/(beta m) and r reserved consecutive vertices."""
    if r < 1 or r % 2 == 0:
        raise ParameterError("r must be a positive odd integer")
    if r > p.m:
        raise ParameterError("need r <= m")
    if strict and (p.delta < 20 or p.beta < 8 * p.delta):
        raise ParameterError("need delta >= 20 and beta >= 8*delta")
    if is_bipartite(g):
        raise ParameterError("graph is bipartite")
    out = long_odd_cycle_core(g, r, profile)
    L = len(out.cycle.vertices)
    bound = r + path_bound(p.m, g.order, p.beta, 16, 5)
    if L > profile.bound(bound):
        raise ConstructionError("long-cycle", f"cycle order {L} exceeds {bound:.2f}+slack")
    C = set(out.cycle.vertices)
    removed = C - out.residual
    assert removed == set(out.reserved) and len(removed) == r
    if certify:
        rmask = g.to_mask(out.residual)
        wmask = g.full_mask & ~g.to_mask(C)
        out.verdict = expands_into_mask(
            g, rmask, wmask, ExpansionParams(max(0.0, p.delta / 4 - 7), max(0.0, p.beta - 3), p.m), "auto", profile, seed
        )
    return out
