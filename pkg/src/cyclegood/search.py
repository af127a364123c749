"""Exact witness finders: cycles of given length, complete multipartite subgraphs, disjoint paths.

Every finder takes an optional ``budget`` (node expansions). Running out raises
``SearchBudgetExhausted``; returning ``None`` always means proved absent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParameterError, SearchBudgetExhausted
from .graph import Graph, iter_bits, lowest, members


@dataclass(frozen=True)
class CycleWitness:
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def verify(self, g: Graph) -> bool:
        return g.is_cycle(self.vertices)

    def to_json(self) -> dict:
        return {"kind": "cycle", "vertices": list(self.vertices)}


@dataclass(frozen=True)
class MultipartiteWitness:
    parts: tuple[tuple[int, ...], ...]

    def verify(self, g: Graph, sizes: Sequence[int] | None = None) -> bool:
        seen: set[int] = set()
        for p in self.parts:
            if seen & set(p) or len(set(p)) != len(p):
                return False
            seen |= set(p)
            if any(not 0 <= v < g.order for v in p):
                return False
        if sizes is not None and sorted(len(p) for p in self.parts) != sorted(sizes):
            return False
        for i, p in enumerate(self.parts):
            for q in self.parts[i + 1:]:
                if any(not g.has_edge(u, v) for u in p for v in q):
                    return False
        return True

    def to_json(self) -> dict:
        return {"kind": "multipartite", "parts": [list(p) for p in self.parts]}


@dataclass(frozen=True)
class PathSystem:
    paths: tuple[tuple[int, ...], ...]

    def verify(self, g: Graph) -> bool:
        used: set[int] = set()
        for p in self.paths:
            if not g.is_path(p) or used & set(p):
                return False
            used |= set(p)
        return True

    def to_json(self) -> dict:
        return {"kind": "paths", "paths": [list(p) for p in self.paths]}


class _Budget:
    __slots__ = ("cap", "used")

    def __init__(self, cap: int | None):
        self.cap = cap
        self.used = 0

    def tick(self, what: str) -> None:
        self.used += 1
        if self.cap is not None and self.used > self.cap:
            raise SearchBudgetExhausted(f"{what}: node budget {self.cap} exhausted", self.used)


def blocks(g: Graph, mask: int | None = None) -> tuple[list[int], int]:
    """Biconnected components (masks, each with ≥2 vertices) and the articulation-point mask."""
    mask = g.full_mask if mask is None else mask
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: list[int] = []
    cut = 0
    timer = 0
    for root in iter_bits(mask):
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(members(g.adj[root] & mask)))]
        estack: list[tuple[int, int]] = []
        root_children = 0
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    estack.append((v, w))
                    if v == root:
                        root_children += 1
                    stack.append((w, v, iter(members(g.adj[w] & mask))))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[v]:
                    low[v] = min(low[v], disc[w])
                    estack.append((v, w))
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    if u != root:
                        cut |= 1 << u
                    comp = 0
                    while estack:
                        e = estack.pop()
                        comp |= (1 << e[0]) | (1 << e[1])
                        if e == (u, v):
                            break
                    out.append(comp)
        if root_children > 1:
            cut |= 1 << root
    return out, cut


def _reach(g: Graph, src: int, allowed: int) -> tuple[int, list[int]]:
    """Closed reachable set from ``src`` within ``allowed`` plus BFS layers (layer 0 = {src})."""
    seen = 1 << src
    frontier = seen
    layers = [frontier]
    while True:
        frontier = g.nbr_mask(frontier) & allowed & ~seen
        if not frontier:
            return seen, layers
        layers.append(frontier)
        seen |= frontier


def _cycle_search(g: Graph, n: int, at_least: bool, budget: int | None, what: str) -> CycleWitness | None:
    if n < 3:
        raise ParameterError("cycle length must be at least 3")
    bud = _Budget(budget)
    adj = g.adj
    for blk in sorted(blocks(g)[0], key=lowest):
        if blk.bit_count() < n:
            continue
        if not at_least and n == 3:
            for u in iter_bits(blk):
                for v in iter_bits(adj[u] & blk & ~((2 << u) - 1)):
                    common = adj[u] & adj[v] & blk & ~((2 << v) - 1)
                    if common:
                        return CycleWitness((u, v, lowest(common)))
            continue
        # the cycle's smallest vertex is the start; later starts ignore smaller ids
        avail_all = blk
        for s in iter_bits(blk):
            avail_all &= ~(1 << s)
            res = _cycle_from(g, s, avail_all, n, at_least, bud, what)
            if res is not None:
                return CycleWitness(tuple(res))
            if avail_all.bit_count() + 1 < n:
                break
    return None


def _cycle_from(g: Graph, s: int, avail: int, n: int, at_least: bool, bud: _Budget, what: str) -> list[int] | None:
    adj = g.adj
    sbit = 1 << s
    # vertices that can sit on a cycle through s must reach s and have ≥ 2 usable neighbors
    changed = True
    while changed:
        changed = False
        for v in iter_bits(avail):
            if (adj[v] & (avail | sbit)).bit_count() < 2:
                avail &= ~(1 << v)
                changed = True
    if not adj[s] & avail or (adj[s] & avail).bit_count() < 2:
        return None
    reach, _ = _reach(g, s, avail | sbit)
    avail &= reach
    if avail.bit_count() + 1 < n:
        return None
    path = [s]

    def feasible(end: int, free: int) -> bool:
        # vertices still needed after ``end``: n - len(path); they must be reachable
        need = n - len(path)
        if need <= 0:
            return True
        seen, layers = _reach(g, end, free | sbit)
        if (seen & free).bit_count() < need:
            return False
        if at_least:
            return bool(seen & sbit)
        # s must be within need+1 steps of end avoiding used vertices
        for d, layer in enumerate(layers):
            if layer & sbit:
                return d <= need + 1
        return False

    def dfs(end: int, free: int) -> bool:
        bud.tick(what)
        length = len(path)
        if length >= n and adj[end] & sbit:
            if at_least or length == n:
                return True
        if not at_least and length == n:
            return False
        cands = adj[end] & free
        # fewest onward options first, lowest id on ties
        order = sorted(iter_bits(cands), key=lambda v: ((adj[v] & free).bit_count(), v))
        for v in order:
            nfree = free & ~(1 << v)
            path.append(v)
            if feasible(v, nfree) and dfs(v, nfree):
                return True
            path.pop()
        return False

    if dfs(s, avail):
        return list(path)
    return None


def find_cycle_exact(g: Graph, n: int, budget: int | None = None) -> CycleWitness | None:
    """A cycle on exactly ``n`` vertices, or ``None`` if none exists."""
    return _cycle_search(g, n, False, budget, "find_cycle_exact")


def find_cycle_at_least(g: Graph, n: int, budget: int | None = None) -> CycleWitness | None:
    return _cycle_search(g, n, True, budget, "find_cycle_at_least")


def twin_classes(g: Graph, mask: int | None = None) -> list[int]:
    """Class id per vertex: vertices with equal open or equal closed neighborhoods share a class."""
    mask = g.full_mask if mask is None else mask
    cls = list(range(g.order))
    by_open: dict[int, int] = {}
    by_closed: dict[int, int] = {}
    for v in iter_bits(mask):
        op = g.adj[v] & mask
        cl = op | (1 << v)
        if op in by_open:
            cls[v] = by_open[op]
        elif cl in by_closed:
            cls[v] = by_closed[cl]
        else:
            by_open[op] = v
            by_closed[cl] = v
    return cls


def find_complete_multipartite(
    g: Graph, sizes: Sequence[int], budget: int | None = None, within: int | None = None
) -> MultipartiteWitness | None:
    """Disjoint parts of the given sizes with every cross-part pair adjacent.

    Parts are placed largest first; twin vertices are used in id order, which
    removes the symmetric branches that dominate structured inputs.
    """
    sizes = list(sizes)
    if not sizes:
        raise ParameterError("sizes must be non-empty")
    if any(s < 1 for s in sizes):
        raise ParameterError("part sizes must be ≥ 1")
    if sizes != sorted(sizes):
        raise ParameterError("sizes must be sorted ascending")
    universe = g.full_mask if within is None else within
    bud = _Budget(budget)
    adj = g.adj
    order = sorted(range(len(sizes)), key=lambda i: -sizes[i])
    want = [sizes[i] for i in order]
    cls = twin_classes(g, universe)
    lower_twins = [0] * g.order
    for v in iter_bits(universe):
        c = cls[v]
        for u in range(c, v):
            if cls[u] == c and universe >> u & 1:
                lower_twins[v] |= 1 << u
    chosen_parts: list[int] = [0] * len(want)

    def peel(cand: int, rest: list[int]) -> int:
        if not rest:
            return cand
        need = sum(rest) - max(rest)
        while True:
            drop = 0
            for v in iter_bits(cand):
                if (adj[v] & cand).bit_count() < need:
                    drop |= 1 << v
            if not drop:
                return cand
            cand &= ~drop

    def place(idx: int, cand: int, used: int) -> bool:
        if idx == len(want):
            return True
        rest = want[idx + 1:]
        cand = peel(cand, want[idx:])
        if cand.bit_count() < sum(want[idx:]):
            return False
        size = want[idx]
        after = sum(rest)
        pickable = 0
        for v in iter_bits(cand):
            if (adj[v] & cand).bit_count() >= after:
                pickable |= 1 << v
        return choose(idx, size, pickable, cand, used, 0, cand, after)

    def choose(idx: int, left: int, pickable: int, cand: int, used: int, part: int, common: int, after: int) -> bool:
        bud.tick("find_complete_multipartite")
        if left == 0:
            chosen_parts[idx] = part
            return place(idx + 1, common & ~part, used | part)
        pool = pickable
        while pool:
            if pool.bit_count() < left:
                return False
            v = lowest(pool)
            pool &= ~(1 << v)
            vb = 1 << v
            if lower_twins[v] & ~(used | part):
                continue
            ncommon = common & adj[v]
            if (ncommon & ~part & ~vb).bit_count() < after:
                continue
            if choose(idx, left - 1, pool, cand, used, part | vb, ncommon, after):
                return True
        return False

    if not place(0, universe, 0):
        return None
    parts_by_input = [()] * len(sizes)
    for pos, i in enumerate(order):
        parts_by_input[i] = tuple(members(chosen_parts[pos]))
    return MultipartiteWitness(tuple(parts_by_input))


@dataclass
class DisjointPathsResult:
    paths: PathSystem | None
    separator: frozenset[int] | None
    flow: int = 0

    @property
    def found(self) -> bool:
        return self.paths is not None


def vertex_disjoint_paths(
    g: Graph,
    a: Iterable[int] | int,
    b: Iterable[int] | int,
    want: int,
    allowed: int | None = None,
) -> DisjointPathsResult:
    """``want`` vertex-disjoint a–b paths, or a separator of size < want.

    When both ``a`` and ``b`` are single vertices the paths share those two
    endpoints and are otherwise disjoint (Menger for a vertex pair); an edge
    ab then counts as one path and cannot be separated. Otherwise paths are
    fully disjoint and the separator may contain vertices of a or b.
    """
    if want < 1:
        raise ParameterError("want must be ≥ 1")
    amask = g.to_mask(a)
    bmask = g.to_mask(b)
    if amask & bmask:
        raise ParameterError("a and b must be disjoint")
    allowed = g.full_mask if allowed is None else allowed | amask | bmask
    pair_mode = amask.bit_count() == 1 and bmask.bit_count() == 1
    uncapped = (amask | bmask) if pair_mode else 0
    adj = [x & allowed for x in g.adj]
    out_flow = [0] * g.order   # bit w of out_flow[v]: arc v_out -> w_in carries flow
    in_flow = [0] * g.order    # bit u of in_flow[v]: arc u_out -> v_in carries flow
    through = 0                # capacitated vertices whose split arc carries flow
    sourced = 0                # set mode: a-vertices used as path starts
    flow = 0

    def augment(cut_mode: bool = False) -> tuple[bool, int, int]:
        # BFS over split nodes; returns (found, reachable_in, reachable_out).
        # cut_mode treats edge arcs as uncapacitated so the min cut is made of vertices.
        nonlocal through, sourced
        seen_in = 0
        seen_out = 0
        par: dict[tuple[int, int], tuple[int, int] | None] = {}
        queue: list[tuple[int, int]] = []
        for v in iter_bits(amask):
            if pair_mode or not sourced >> v & 1:
                seen_in |= 1 << v
                par[(v, 0)] = None
                queue.append((v, 0))
        head = 0
        end = None
        while head < len(queue):
            v, side = queue[head]
            head += 1
            if side == 0:
                # v_in -> v_out, or cancel flow u_out -> v_in
                if (uncapped >> v & 1 or not through >> v & 1) and not seen_out >> v & 1:
                    seen_out |= 1 << v
                    par[(v, 1)] = (v, 0)
                    queue.append((v, 1))
                for u in iter_bits(in_flow[v] & ~seen_out):
                    seen_out |= 1 << u
                    par[(u, 1)] = (v, 0)
                    queue.append((u, 1))
            else:
                if bmask >> v & 1:
                    end = v
                    break
                if through >> v & 1 and not uncapped >> v & 1 and not seen_in >> v & 1:
                    # cancel split arc: v_out -> v_in
                    seen_in |= 1 << v
                    par[(v, 0)] = (v, 1)
                    queue.append((v, 0))
                if cut_mode:
                    fwd = adj[v] & ~(out_flow[v] & uncapped if uncapped >> v & 1 else 0)
                else:
                    fwd = adj[v] & ~out_flow[v]
                for w in iter_bits(fwd & ~seen_in):
                    seen_in |= 1 << w
                    par[(w, 0)] = (v, 1)
                    queue.append((w, 0))
        if end is None:
            return False, seen_in, seen_out
        node = (end, 1)
        while True:
            prev = par[node]
            if prev is None:
                if not pair_mode:
                    sourced |= 1 << node[0]
                break
            (pv, ps), (cv, cs) = prev, node
            if pv == cv:
                if ps == 0 and cs == 1:
                    if not uncapped >> cv & 1:
                        through |= 1 << cv
                else:
                    through &= ~(1 << cv)
            elif ps == 1 and cs == 0:
                out_flow[pv] |= 1 << cv
                in_flow[cv] |= 1 << pv
            else:
                # ps == 0, cs == 1: cancel flow cv_out -> pv_in
                out_flow[cv] &= ~(1 << pv)
                in_flow[pv] &= ~(1 << cv)
            node = prev
        return True, 0, 0

    while flow < want:
        ok, _, _ = augment()
        if not ok:
            break
        flow += 1
    if flow >= want:
        paths = _decompose(amask, bmask, out_flow, pair_mode)[:want]
        ps = PathSystem(tuple(tuple(p) for p in paths))
        return DisjointPathsResult(ps, None, flow)
    found, reach_in, reach_out = augment(cut_mode=True)
    assert not found, "cut-mode residual found an augmenting path"
    sep = 0
    for v in iter_bits(reach_in & ~reach_out):
        if not uncapped >> v & 1:
            sep |= 1 << v
    if not pair_mode:
        # sources whose unit supply is used and not re-reachable are cut at the source arc
        sep |= amask & ~reach_in
    return DisjointPathsResult(None, frozenset(members(sep)), flow)


def _decompose(amask: int, bmask: int, out_flow: list[int], pair_mode: bool) -> list[list[int]]:
    out = [x for x in out_flow]
    paths = []
    for s in iter_bits(amask):
        while out[s]:
            path = [s]
            pos = {s: 0}
            v = s
            while not bmask >> v & 1:
                if not out[v]:
                    break
                w = lowest(out[v])
                out[v] &= ~(1 << w)
                if w in pos:
                    # drop a flow cycle
                    for x in path[pos[w] + 1:]:
                        del pos[x]
                    path = path[: pos[w] + 1]
                    v = w
                    continue
                pos[w] = len(path)
                path.append(w)
                v = w
            if not bmask >> path[-1] & 1:
                continue
            if not pair_mode:
                # keep the segment after the last a-vertex
                last_a = max(i for i, x in enumerate(path) if amask >> x & 1)
                path = path[last_a:]
            paths.append(path)
            if not pair_mode:
                break
    return paths
