"""Pósa rotations, rotation-extension longest paths, and exact-length connection.

A rotation of p_1 ... p_t pivots on an edge p_t p_j (j < t-1) and returns
p_1 ... p_j p_t p_{t-1} ... p_{j+1}. Paths reachable by rotations keep the
first vertex and the vertex set; their final vertices are the ending vertices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConstructionError, HypothesisFalsified, ParameterError, SearchBudgetExhausted
from .expansion import chord_shorten, extract_bipartite_expander
from .gadget_cycles import reversed_gadget
from .gadgets import build_gadget_with_return
from .graph import Graph, complement, iter_bits, members
from .profile import DESK, ConstantsProfile
from .search import MultipartiteWitness, find_complete_multipartite

EXACT_LIMIT = 12


@dataclass(frozen=True)
class RotationState:
    base_path: tuple[int, ...]
    ending: frozenset[int]
    derived: dict  # ending vertex -> one derived path ending there
    exact: bool  # False when paths were merged by endpoint (a subset of the true ending set)
    explored: int

    def path_to(self, v: int) -> tuple[int, ...]:
        return self.derived[v]

    def to_json(self) -> dict:
        return {
            "base_path": list(self.base_path),
            "ending_vertices": sorted(self.ending),
            "exact": self.exact,
            "explored": self.explored,
        }


def rotations(g: Graph, path: Sequence[int]) -> list[tuple[int, ...]]:
    """All single rotations of ``path``, pivot order by position."""
    t = len(path)
    end = path[-1]
    adj = g.adj[end]
    out = []
    for j in range(t - 2):
        if adj >> path[j] & 1:
            out.append(tuple(path[: j + 1]) + tuple(reversed(path[j + 1:])))
    return out


def ending_vertices(
    g: Graph, p: Sequence[int], mode: str = "auto", budget: int | None = None
) -> RotationState:
    """Close ``p`` under rotations and collect the final vertices.

    ``exact`` explores every distinct derived path. ``endpoint`` keeps one
    path per final vertex, which is fast but may miss ending vertices. ``auto``
    is exact for paths of at most 12 vertices and falls back to endpoint
    merging when the exact closure exceeds the budget.
    """
    p = tuple(p)
    if not g.is_path(list(p)):
        raise ParameterError("p is not a path in the graph")
    if mode not in ("auto", "exact", "endpoint"):
        raise ParameterError(f"unknown mode {mode!r}")
    cap = budget if budget is not None else DESK.rotation_budget * 50
    if mode in ("exact", "auto") and (mode == "exact" or len(p) <= EXACT_LIMIT):
        try:
            return _closure(g, p, by_endpoint=False, cap=cap)
        except SearchBudgetExhausted:
            if mode == "exact":
                raise
    return _closure(g, p, by_endpoint=True, cap=None)


def _closure(g: Graph, p: tuple[int, ...], by_endpoint: bool, cap: int | None) -> RotationState:
    derived = {p[-1]: p}
    seen: set = {p[-1]} if by_endpoint else {p}
    queue = deque([p])
    explored = 0
    while queue:
        cur = queue.popleft()
        explored += 1
        if cap is not None and explored > cap:
            raise SearchBudgetExhausted("rotation closure exceeded its budget", explored)
        for q in rotations(g, cur):
            key = q[-1] if by_endpoint else q
            if key in seen:
                continue
            seen.add(key)
            derived.setdefault(q[-1], q)
            queue.append(q)
    return RotationState(p, frozenset(derived), derived, not by_endpoint, explored)


@dataclass(frozen=True)
class PosaVerdict:
    holds: bool
    ending: frozenset[int]
    neighborhood: int
    exact: bool

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "ending_vertices": sorted(self.ending),
            "S": len(self.ending),
            "N(S)": self.neighborhood,
            "exact": self.exact,
        }


def check_posa_bound(g: Graph, p: Sequence[int], mode: str = "auto") -> PosaVerdict:
    """Whether |N(S)| <= 3|S| for the ending set S of p.

    The inequality is only promised when p is a longest path from its first
    vertex; for other paths the verdict is reported as computed.
    """
    st = ending_vertices(g, p, mode)
    nb = g.nbr_mask(g.to_mask(st.ending)).bit_count()
    return PosaVerdict(nb <= 3 * len(st.ending), st.ending, nb, st.exact)


def max_path_from(g: Graph, v: int, allowed: int | None = None) -> tuple[int, ...]:
    """A longest path starting at v, by dynamic programming over vertex subsets (small graphs)."""
    allowed = g.full_mask if allowed is None else allowed | 1 << v
    verts = members(allowed)
    if len(verts) > 20:
        raise ParameterError("exhaustive longest path is limited to 20 vertices")
    idx = {u: i for i, u in enumerate(verts)}
    adj = [0] * len(verts)
    for u in verts:
        for w in iter_bits(g.adj[u] & allowed):
            adj[idx[u]] |= 1 << idx[w]
    start = idx[v]
    ends: dict[int, int] = {1 << start: 1 << start}
    best = (1, 1 << start, start)
    for mask in sorted(range(1 << len(verts)), key=int.bit_count):
        e = ends.get(mask)
        if not e:
            continue
        size = mask.bit_count()
        for i in iter_bits(e):
            if size > best[0] or (size == best[0] and (mask, i) < best[1:]):
                best = (size, mask, i)
            ext = adj[i] & ~mask
            for j in iter_bits(ext):
                nm = mask | 1 << j
                ends[nm] = ends.get(nm, 0) | 1 << j
    # walk back from the best (mask, end)
    size, mask, end = best
    seq = [end]
    while mask != 1 << start:
        prev_mask = mask & ~(1 << end)
        cands = ends.get(prev_mask, 0) & adj[end]
        end = (cands & -cands).bit_length() - 1
        mask = prev_mask
        seq.append(end)
    return tuple(verts[i] for i in reversed(seq))


@dataclass(frozen=True)
class LongPath:
    path: tuple[int, ...]
    rotation_closed: bool
    certified_maximum: bool | None  # None when not certified


def longest_path_from(
    g: Graph,
    v: int,
    allowed: int | None = None,
    profile: ConstantsProfile = DESK,
    certify: bool = False,
) -> LongPath:
    """Rotation-extension from v: extend while possible, rotate when stuck.

    The result has no derived path (endpoint merging) whose final vertex has a
    neighbor off the path inside ``allowed``. With ``certify`` and at most 14
    allowed vertices the order is compared against the exhaustive maximum.
    """
    allowed = g.full_mask if allowed is None else allowed
    if not (0 <= v < g.order and allowed >> v & 1):
        raise ParameterError("v must be an allowed vertex")
    path = [v]
    on = 1 << v
    closed = False
    budget = profile.rotation_budget
    while True:
        free = g.adj[path[-1]] & allowed & ~on
        if free:
            u = (free & -free).bit_length() - 1
            path.append(u)
            on |= 1 << u
            continue
        switched = False
        seen = {path[-1]}
        queue = deque([tuple(path)])
        explored = 0
        while queue and not switched:
            cur = queue.popleft()
            explored += 1
            if explored > budget:
                break
            for q in rotations(g, cur):
                if q[-1] in seen:
                    continue
                seen.add(q[-1])
                if g.adj[q[-1]] & allowed & ~on:
                    path = list(q)
                    switched = True
                    break
                queue.append(q)
        if not switched:
            closed = not queue
            break
    certified = None
    if certify:
        if allowed.bit_count() > 14:
            raise ParameterError("certification is limited to 14 vertices")
        certified = len(max_path_from(g, v, allowed)) == len(path)
    return LongPath(tuple(path), closed, certified)


# ------------------------------------------------------------ exact-length connection

@dataclass
class ConnectResult:
    path: tuple[int, ...]
    trace: list = field(default_factory=list)


def _kmm_witness(g: Graph, left: Sequence[int], right: Sequence[int], m: int) -> MultipartiteWitness | None:
    """m vertices from each side with no edge between them, if they exist greedily."""
    left = [u for u in left if u not in right]
    a, b = list(left[:m]), [w for w in right if w not in left][:m]
    if len(a) == m and len(b) == m and all(not g.has_edge(x, y) for x in a for y in b):
        return MultipartiteWitness((tuple(sorted(a)), tuple(sorted(b))))
    return None


def _two_disjoint_edges(g: Graph, side_p: Sequence[int], side_q: Sequence[int]) -> list[tuple[int, int]] | None:
    for u in side_p:
        for w in side_q:
            if g.has_edge(u, w):
                for u2 in side_p:
                    if u2 == u:
                        continue
                    for w2 in side_q:
                        if w2 != w and g.has_edge(u2, w2):
                            return [(u, w), (u2, w2)]
    return None


def _middle(seq: Sequence[int], size: int) -> list[int]:
    start = max(0, (len(seq) - size) // 2)
    return list(seq[start:start + size])


def connect_exact_length(
    g: Graph,
    x: int,
    y: int,
    p: Sequence[int],
    m: int,
    n: int,
    profile: ConstantsProfile = DESK,
    seed: int = 0,
    check_hypotheses: bool = False,
) -> ConnectResult:
    """An x–y path of exactly n vertices, grown from the seed path p.

    Stages: trim p by chords; build a gadget-with-return off p; reroute p
    through the return path; take a bipartite expander in what is left;
    rotation-extend into it from p; cut back by chords to within the gadget's
    range of n; pick the gadget witness that lands on n exactly.
    """
    trace: list = []
    p = list(p)
    if not p or p[0] != x or p[-1] != y or not g.is_path(p):
        raise ParameterError("p must be an x–y path in the graph")
    if m < profile.connect_min_m:
        raise ParameterError(f"need m >= {profile.connect_min_m}")
    if len(p) < 8 * m:
        raise ParameterError(f"seed path has order {len(p)} < 8m = {8 * m}")
    if n < profile.N2 * m:
        raise ParameterError(f"need n >= N2*m = {profile.N2 * m:g}")
    if n > g.order:
        raise ParameterError("n exceeds the graph order")
    if check_hypotheses:
        wit = find_complete_multipartite(complement(g), [m, m], budget=profile.search_budget)
        if wit is not None:
            raise HypothesisFalsified("hypothesis", f"complement contains K_{{{m},{m}}}", wit, trace)

    def stage(name, fn, *a, **kw):
        try:
            return fn(*a, **kw)
        except HypothesisFalsified as exc:
            raise HypothesisFalsified(f"{name}/{exc.stage}", str(exc), exc.witness, trace + exc.trace) from None
        except ConstructionError as exc:
            raise ConstructionError(f"{name}/{exc.stage}", str(exc), trace + exc.trace, exc.verdict) from None
        except (ParameterError, SearchBudgetExhausted) as exc:
            raise ConstructionError(name, str(exc), trace) from None

    if len(p) > 10 * m:
        p = stage("trim-seed", chord_shorten, g, p, 8 * m, 10 * m, span=m)
    trace.append({"stage": "trim-seed", "order": len(p)})

    lam, mu = int(profile.connect_lambda), int(profile.connect_mu)
    pmask = g.to_mask(p)
    build = stage("gadget", build_gadget_with_return, g, m, 2, lam, mu, profile, seed, within=members(g.full_mask & ~pmask))
    unit = build.result
    jg = unit.gadget
    q = list(unit.return_path)
    if q[0] != jg.a:
        q.reverse()
    trace.append({"stage": "gadget", "order": jg.order, "shortfall": jg.shortfall, "return": len(q)})
    if n < jg.order - jg.shortfall:
        raise ConstructionError("gadget", f"n = {n} below the gadget's shortest witness", trace)

    mid_p, mid_q = _middle(p, m + 1), _middle(q, m + 1)
    pair = _two_disjoint_edges(g, mid_p, mid_q)
    if pair is None:
        wit = _kmm_witness(g, mid_p[1:], mid_q[1:], m)
        if wit is not None:
            raise HypothesisFalsified("reroute", "no two disjoint middle edges", wit, trace)
        raise ConstructionError("reroute", "no two disjoint edges between path middles", trace)
    ppos = {v: i for i, v in enumerate(p)}
    qpos = {v: i for i, v in enumerate(q)}
    (u1, w1), (u2, w2) = sorted(pair, key=lambda e: ppos[e[0]])
    i1, i2, j1, j2 = ppos[u1], ppos[u2], qpos[w1], qpos[w2]
    if j1 < j2:
        px = p[: i1 + 1] + q[j1::-1]          # x ... a
        py = list(reversed(p[i2:])) + q[j2:]  # y ... b
        gadget = jg
    else:
        px = p[: i1 + 1] + q[j1:]             # x ... b
        py = list(reversed(p[i2:])) + q[j2::-1]
        gadget = reversed_gadget(jg)
    trace.append({"stage": "reroute", "Px": len(px), "Py": len(py)})

    used = g.to_mask(px) | g.to_mask(py) | g.to_mask(gadget.vertices)
    u_set = members(g.full_mask & ~used)
    b_set, h_set, verdict = stage("bipartite-expander", extract_bipartite_expander, g, u_set, m, 4, n, profile, seed)
    hmask = g.to_mask(h_set)
    trace.append({"stage": "bipartite-expander", "B": len(b_set), "H": len(h_set), "verdict": verdict.status})

    # escape edge from the far part of Px into H
    esc = None
    for r in range(m + 1, len(px)):
        nb = g.adj[px[r]] & hmask
        if nb:
            esc = (r, (nb & -nb).bit_length() - 1)
            break
    if esc is None:
        wit = _kmm_witness(g, px[m + 1:], sorted(h_set), m)
        if wit is not None:
            raise HypothesisFalsified("escape", "no edge from Px into H", wit, trace)
        raise ConstructionError("escape", "no edge from Px into H", trace)
    r, v = esc
    longp = longest_path_from(g, v, hmask, profile)
    state = ending_vertices(g, longp.path, mode="endpoint")
    s_mask = g.to_mask(state.ending)
    trace.append({"stage": "rotation", "R": len(longp.path), "S": len(state.ending), "closed": longp.rotation_closed})
    last = None
    for i in range(r - 1, -1, -1):
        if g.adj[px[i]] & s_mask:
            last = i
            break
    if last is None:
        wit = _kmm_witness(g, px[:r], sorted(state.ending), m)
        if wit is not None:
            raise HypothesisFalsified("land", "ending set misses the start of Px", wit, trace)
        raise ConstructionError("land", "ending set has no neighbor before the escape vertex", trace)
    s = min(iter_bits(g.adj[px[last]] & s_mask))
    r_prime = state.path_to(s)
    xs = px[: last + 1] + list(reversed(r_prime)) + px[r:]
    ys = list(reversed(py))  # b ... y
    full = gadget.witness_of_order(gadget.order)
    total = len(xs) + gadget.order + len(ys) - 2
    trace.append({"stage": "long-path", "order": total})
    if total < n:
        raise ConstructionError("long-path", f"rotation path reaches order {total} < n = {n}", trace)

    excess = total - n - gadget.shortfall
    if excess > 0:
        xs, ys = _cut_back(g, xs, ys, excess, total - n, m, stage)
    total = len(xs) + gadget.order + len(ys) - 2
    drop = total - n
    if not 0 <= drop <= gadget.shortfall:
        raise ConstructionError("cut-back", f"order {total} not within the gadget range of n", trace)
    mid = gadget.witness_of_order(gadget.order - drop)
    out = tuple(xs[:-1]) + tuple(mid) + tuple(ys[1:])
    assert out[0] == x and out[-1] == y and len(out) == n and g.is_path(list(out)), "exact-length path failed its check"
    trace.append({"stage": "exact", "order": len(out), "gadget_drop": drop, "full_gadget": len(full)})
    return ConnectResult(out, trace)


def _cut_back(g: Graph, xs: list[int], ys: list[int], excess: int, room: int, m: int, stage) -> tuple[list[int], list[int]]:
    """Shorten the two outer segments by chords by at least ``excess`` and at most ``room`` vertices."""
    for which in (0, 1):
        if excess <= 0:
            break
        seg = xs if which == 0 else ys
        lo = max(2, len(seg) - room)
        hi = max(lo, len(seg) - excess)
        try:
            new = chord_shorten(g, seg, lo, hi)
        except ConstructionError:
            new = _partial_shorten(g, seg, lo)
        cut = len(seg) - len(new)
        excess -= cut
        room -= cut
        if which == 0:
            xs = new
        else:
            ys = new
    if excess > 0:
        # a chordless stretch on the b side exhibits K_{m,m} in the complement
        ys = stage("cut-back", chord_shorten, g, ys, max(2, len(ys) - room), len(ys) - excess, span=m)
    return xs, ys


def _partial_shorten(g: Graph, seg: list[int], lo: int) -> list[int]:
    """Apply chords greedily while staying at order >= lo."""
    seg = list(seg)
    while True:
        pos = {v: i for i, v in enumerate(seg)}
        best = None
        for i, u in enumerate(seg):
            for w in iter_bits(g.adj[u]):
                j = pos.get(w)
                if j is not None and j > i + 1 and len(seg) - (j - i - 1) >= lo:
                    if best is None or j - i > best[1] - best[0]:
                        best = (i, j)
        if best is None:
            return seg
        seg = seg[: best[0] + 1] + seg[best[1]:]
