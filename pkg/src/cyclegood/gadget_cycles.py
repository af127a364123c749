"""Gadget-cycles: gadgets strung on a cycle by connector paths.

A gadget-cycle alternates gadgets J_1..J_t with connectors Q_1..Q_t, where Q_i
runs from b_i to a_{i+1} (indices mod t). Replacing each gadget's full path by
a shorter witness shortens the cycle, so one gadget-cycle carries cycles of
every length in a window [a, b].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import ConstructionError, ParameterError
from .gadgets import UPTO, Gadget, GadgetWithReturn
from .graph import Graph
from .search import CycleWitness


def reversed_gadget(j: Gadget) -> Gadget:
    """The same gadget read from b to a."""
    return Gadget(j.vertices, j.b, j.a, j.shortfall, j.kind, tuple(tuple(reversed(w)) for w in j.witnesses))


def shortening_capacity(j: Gadget) -> int:
    """Largest s such that j has every order |J|, |J|-1, ..., |J|-s."""
    if j.kind == UPTO:
        return j.shortfall
    return 1 if j.shortfall == 1 else 0


@dataclass(frozen=True)
class GadgetCycle:
    gadgets: tuple[Gadget, ...]
    connectors: tuple[tuple[int, ...], ...]  # connectors[i] runs from gadgets[i].b to gadgets[i+1].a
    a: int
    b: int
    m: int
    k: int

    @property
    def t(self) -> int:
        return len(self.gadgets)

    @property
    def vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for j, q in zip(self.gadgets, self.connectors):
            out |= j.vertices
            out.update(q)
        return frozenset(out)

    @property
    def total(self) -> int:
        return len(self.vertices)

    def common_shortfall(self) -> int:
        return min((shortening_capacity(j) for j in self.gadgets), default=0)

    def recomputed_window(self) -> tuple[int, int]:
        """(a', b') implied by the contents alone: the tightest window the extraction covers."""
        total = self.total
        return max(3, total - self.t * self.common_shortfall()), total

    def traversal(self) -> list[int]:
        """The full-length cycle: each gadget's longest witness followed by its connector interior."""
        seq: list[int] = []
        for j, q in zip(self.gadgets, self.connectors):
            seq.extend(j.witness_of_order(j.order))
            seq.extend(q[1:-1])
        return seq

    def to_json(self) -> dict:
        ra, rb = self.recomputed_window()
        return {
            "gadgets": [j.to_json() for j in self.gadgets],
            "connectors": [list(q) for q in self.connectors],
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "k": self.k,
            "order": self.total,
            "recomputed_a": ra,
            "recomputed_b": rb,
        }


@dataclass(frozen=True)
class GadgetCycleVerdict:
    failed: tuple[str, ...]
    messages: tuple[str, ...]
    total: int
    recomputed_a: int
    recomputed_b: int

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {
            "verified": self.ok,
            "failed_clauses": list(self.failed),
            "messages": list(self.messages),
            "order": self.total,
            "recomputed_a": self.recomputed_a,
            "recomputed_b": self.recomputed_b,
        }


def verify_gadget_cycle(g: Graph, c: GadgetCycle) -> GadgetCycleVerdict:
    """Check the four defining clauses plus every gadget witness; report which clauses fail."""
    failed: list[str] = []
    msgs: list[str] = []

    def fail(clause: str, msg: str) -> None:
        if clause not in failed:
            failed.append(clause)
        msgs.append(f"({clause}) {msg}")

    t = c.t
    if t == 0:
        fail("i", "no gadgets")
    if len(c.connectors) != t:
        fail("i", f"{t} gadgets but {len(c.connectors)} connectors")
    gadget_union: set[int] = set()
    for i, j in enumerate(c.gadgets):
        if gadget_union & j.vertices:
            fail("i", f"gadget {i} overlaps an earlier gadget")
        gadget_union |= j.vertices
        for e in j.check(g):
            fail("witness", f"gadget {i}: {e}")
    seen_inner: set[int] = set()
    for i, q in enumerate(c.connectors[:t]):
        j, nxt = c.gadgets[i], c.gadgets[(i + 1) % t]
        if len(q) < 2 or q[0] != j.b or q[-1] != nxt.a:
            fail("i", f"connector {i} does not run from b_{i} to a_{(i + 1) % t}")
            continue
        if not g.is_path(list(q)):
            fail("i", f"connector {i} is not a path in the graph")
        inner = set(q[1:-1])
        if inner & gadget_union:
            fail("i", f"connector {i} meets a gadget away from its endpoints")
        if inner & seen_inner:
            fail("i", f"connector {i} meets another connector")
        seen_inner |= inner
    for i, q in enumerate(c.connectors[:t]):
        for v in (q[0], q[-1]) if q else ():
            if v in seen_inner:
                fail("i", f"connector {i} endpoint lies inside another connector")
    total = c.total
    for i, j in enumerate(c.gadgets):
        if j.order > c.m:
            fail("ii", f"|J_{i}| = {j.order} > m = {c.m}")
    if total < c.b:
        fail("iii", f"order {total} < b = {c.b}")
    for i, j in enumerate(c.gadgets):
        if c.k > 0 and shortening_capacity(j) < c.k:
            fail("iv", f"gadget {i} is not a (<= {c.k})-gadget")
    if total - t * c.k > c.a:
        fail("iv", f"order - t*k = {total - t * c.k} > a = {c.a}")
    ra, rb = c.recomputed_window() if t else (total, total)
    return GadgetCycleVerdict(tuple(failed), tuple(msgs), total, ra, rb)


def shortening_plan(c: GadgetCycle, n: int) -> list[int]:
    """Per-gadget shortenings summing to order - n; largest first, lowest index first."""
    cap = c.common_shortfall()
    need = c.total - n
    plan = []
    for _ in c.gadgets:
        take = min(cap, need)
        plan.append(take)
        need -= take
    if need:
        raise ParameterError(f"cycle length {n} is below the window of this gadget-cycle")
    return plan


def extract_cycle_of_length(g: Graph, c: GadgetCycle, n: int) -> CycleWitness:
    """A cycle of exactly n vertices built from shortened gadget witnesses.

    n is accepted anywhere in the window recomputed from the contents, which
    contains the declared [a, b] whenever the gadget-cycle verifies.
    """
    lo, hi = c.recomputed_window()
    if not lo <= n <= hi:
        raise ParameterError(f"n = {n} outside [{lo}, {hi}]")
    seq: list[int] = []
    for j, q, s in zip(c.gadgets, c.connectors, shortening_plan(c, n)):
        seq.extend(j.witness_of_order(j.order - s))
        seq.extend(q[1:-1])
    w = CycleWitness(tuple(seq))
    if len(seq) != n or not w.verify(g):
        raise ConstructionError("extract", f"spliced sequence is not a cycle of length {n}")
    return w


def gadget_cycle_from_sequence(
    seq: Sequence[int], gadgets: Sequence[Gadget], a: int, b: int, m: int, k: int
) -> GadgetCycle:
    """Cut a cyclic vertex sequence at the gadgets whose full witness appears in it as a block.

    Gadgets whose longest witness is not a contiguous block of ``seq`` (in
    either direction) are dropped and their vertices become connector material.
    """
    pos = {v: i for i, v in enumerate(seq)}
    n = len(seq)
    placed: list[tuple[int, Gadget]] = []
    for j in gadgets:
        full = j.witness_of_order(j.order)
        if j.a not in pos:
            continue
        start = pos[j.a]
        fwd = all(seq[(start + i) % n] == v for i, v in enumerate(full))
        if fwd:
            placed.append((start, j))
            continue
        rstart = pos.get(j.b)
        if rstart is None:
            continue
        rev = reversed_gadget(j)
        if all(seq[(rstart + i) % n] == v for i, v in enumerate(rev.witness_of_order(rev.order))):
            placed.append((rstart, rev))
    if not placed:
        raise ConstructionError("assemble", "no gadget survives on the cycle")
    placed.sort(key=lambda x: x[0])
    kept = [j for _, j in placed]
    connectors = []
    for i, (start, j) in enumerate(placed):
        end = start + j.order - 1
        nxt = placed[(i + 1) % len(placed)][0]
        if nxt <= end:
            nxt += n
        connectors.append(tuple(seq[x % n] for x in range(end, nxt + 1)))
    return GadgetCycle(tuple(kept), tuple(connectors), a, b, m, k)


@dataclass(frozen=True)
class JoinResult:
    cycle: GadgetCycle
    chosen: tuple[int, int]
    removed: frozenset[int]
    formula_a: int
    formula_b: int
    trace: list = field(default_factory=list)


def _trim_connection(path: Sequence[int], in1: set[int], in2: set[int]) -> tuple[int, ...] | None:
    """The part of ``path`` from its last c1 vertex to the next c2 vertex."""
    for p in (list(path), list(reversed(path))):
        last1 = max((i for i, v in enumerate(p) if v in in1), default=None)
        if last1 is None:
            continue
        for j in range(last1 + 1, len(p)):
            if p[j] in in2:
                return tuple(p[last1:j + 1])
    return None


def _grid_positions(c: GadgetCycle) -> list[int]:
    """Cycle order starting at the lowest-id gadget endpoint, in stored direction."""
    seq = c.traversal()
    ends = {v for j in c.gadgets for v in (j.a, j.b)}
    start = seq.index(min(ends))
    return seq[start:] + seq[:start]


def join_gadget_cycles(
    g: Graph,
    c1: GadgetCycle,
    c2: GadgetCycle,
    paths: Sequence[Sequence[int]],
    ell: int | None = None,
) -> JoinResult:
    """Merge two gadget-cycles through the closest pair among >= 16 disjoint connecting paths."""
    r = len(paths)
    if r < 16:
        raise ParameterError(f"joining needs at least 16 paths, got {r}")
    for c in (c1, c2):
        v = verify_gadget_cycle(g, c)
        if not v.ok:
            raise ParameterError(f"input gadget-cycle fails clauses {list(v.failed)}")
    if c1.k != c2.k:
        raise ParameterError("gadget-cycles must share the shortfall bound k")
    v1, v2 = set(c1.vertices), set(c2.vertices)
    if v1 & v2:
        raise ParameterError("gadget-cycles must be vertex-disjoint")
    used: set[int] = set()
    trimmed = []
    for p in paths:
        if set(p) & used:
            raise ParameterError("connecting paths must be vertex-disjoint")
        used |= set(p)
        if not g.is_path(list(p)) and len(p) > 1:
            raise ParameterError("a connecting path is not a path in the graph")
        q = _trim_connection(p, v1, v2)
        if q is None:
            raise ParameterError("a connecting path does not run from c1 to c2")
        trimmed.append(q)
    longest = max(len(q) - 1 for q in trimmed)
    if ell is None:
        ell = longest
    elif longest > ell:
        raise ParameterError(f"a connecting path has length {longest} > {ell}")

    seq1, seq2 = _grid_positions(c1), _grid_positions(c2)
    p1 = {v: i for i, v in enumerate(seq1)}
    p2 = {v: i for i, v in enumerate(seq2)}
    coords = [(p1[q[0]], p2[q[-1]]) for q in trimmed]
    best = None
    for i in range(r):
        for j in range(i + 1, r):
            d = abs(coords[i][0] - coords[j][0]) + abs(coords[i][1] - coords[j][1])
            if best is None or d < best[0]:
                best = (d, i, j)
    size1, size2 = len(seq1), len(seq2)
    limit = 2 * (size1 + size2) / math.sqrt(r)
    assert best is not None and best[0] <= limit + 1e-9, "pigeonhole violated: no close pair of paths"
    _, i, j = best
    if coords[i][0] > coords[j][0]:
        i, j = j, i
    (s_i, t_i), (s_j, t_j) = coords[i], coords[j]
    # keep c1 from s_j forward around to s_i; keep c2 from t_i away from t_j to t_j
    arc1 = [seq1[x % size1] for x in range(s_j, s_i + size1 + 1)]
    if t_i < t_j:
        arc2 = [seq2[x % size2] for x in range(t_i, t_j - size2 - 1, -1)]
    else:
        arc2 = [seq2[x % size2] for x in range(t_i, t_j + size2 + 1)]
    pi, pj = trimmed[i], trimmed[j]
    cyc = arc1 + list(pi[1:-1]) + arc2 + list(reversed(pj))[1:-1]
    removed = frozenset(seq1[s_i + 1:s_j]) | frozenset(
        seq2[min(t_i, t_j) + 1:max(t_i, t_j)]
    )
    m = max(c1.m, c2.m)
    formula_a = c1.a + c2.a + 4 * m + 2 * ell
    formula_b = math.ceil((c1.b + c2.b) * (1 - 2 / math.sqrt(r)) - 1e-9)
    out = gadget_cycle_from_sequence(cyc, list(c1.gadgets) + list(c2.gadgets), formula_a, formula_b, m, c1.k)
    verdict = verify_gadget_cycle(g, out)
    if not verdict.ok:
        raise ConstructionError("join", f"joined gadget-cycle fails clauses {list(verdict.failed)}: {verdict.messages}")
    assert 2 * out.total >= c1.total + c2.total, "joined gadget-cycle lost more than half its material"
    trace = [{"stage": "join", "paths": r, "chosen": [i, j], "l1": best[0], "removed": len(removed)}]
    return JoinResult(out, (i, j), removed, formula_a, formula_b, trace)


def _separate(s_pos: Sequence[int], t_pos: Sequence[int]) -> tuple[set[int], set[int]]:
    """Largest subsets S', T' (by their smaller size) lying on opposite sides of a threshold."""
    best = (-1, set(), set())
    for sp, tp in ((s_pos, t_pos), (t_pos, s_pos)):
        for x in sorted(set(sp) | set(tp)):
            left = {p for p in sp if p <= x}
            right = {p for p in tp if p > x}
            score = min(len(left), len(right))
            if score > best[0]:
                best = (score, left, right) if sp is s_pos else (score, right, left)
    return best[1], best[2]


def _return_from_a(u: GadgetWithReturn) -> list[int]:
    q = list(u.return_path)
    return q if q[0] == u.gadget.a else q[::-1]


def _unit_cycle(u: GadgetWithReturn) -> list[int]:
    """J's full witness closed by the return path, starting at a along the return path."""
    q = _return_from_a(u)
    full = u.gadget.witness_of_order(u.gadget.order)
    return q + list(reversed(full))[1:-1]


def path_to_gadget_cycle(
    g: Graph,
    units: Sequence[GadgetWithReturn],
    matchings: Sequence[Sequence[tuple[int, int]]],
    a_fraction: float = 0.01,
    b_fraction: float = 0.99,
    min_matching: int = 12,
) -> GadgetCycle:
    """Close a chain of gadgets-with-return into one gadget-cycle containing every gadget.

    ``matchings[i]`` holds disjoint edges from units[i]'s return path to
    units[i+1]'s. Two edges are kept from each matching, chosen so that on
    every return path the two incoming ends lie on one side of the two
    outgoing ends; cutting the return paths between paired ends threads one
    cycle through all units.
    """
    p = len(units)
    if p == 0:
        raise ParameterError("need at least one unit")
    if len(matchings) != p - 1:
        raise ParameterError(f"{p} units need {p - 1} matchings")
    qpos = []
    for u in units:
        errs = u.check(g)
        if errs:
            raise ParameterError(f"invalid gadget-with-return: {errs}")
        qpos.append({v: i for i, v in enumerate(_return_from_a(u))})
    cand: list[list[tuple[int, int]]] = []
    for i, mt in enumerate(matchings):
        if len(mt) < min_matching:
            raise ParameterError(f"matching {i} has {len(mt)} < {min_matching} edges")
        edges = []
        for x, y in mt:
            if x in qpos[i + 1] and y in qpos[i]:
                x, y = y, x
            if x not in qpos[i] or y not in qpos[i + 1] or not g.has_edge(x, y):
                raise ParameterError(f"matching {i} has an edge not joining consecutive return paths")
            edges.append((x, y))
        ends = [x for x, _ in edges] + [y for _, y in edges]
        if len(set(ends)) != len(ends):
            raise ParameterError(f"matching {i} is not a matching")
        cand.append(edges)

    if p == 1:
        u = units[0]
        conn = tuple(reversed(_return_from_a(u)))
        parts = [u]
    else:
        # matching i touches return path i (left ends) and i+1 (right ends)
        for i in range(1, p - 1):
            incoming = [qpos[i][y] for _, y in cand[i - 1]]
            outgoing = [qpos[i][x] for x, _ in cand[i]]
            keep_in, keep_out = _separate(incoming, outgoing)
            cand[i - 1] = [e for e in cand[i - 1] if qpos[i][e[1]] in keep_in]
            cand[i] = [e for e in cand[i] if qpos[i][e[0]] in keep_out]
        for i, edges in enumerate(cand):
            if len(edges) < 2:
                raise ConstructionError("path-to-cycle", f"matching {i} left fewer than two separated edges")
        chosen = [edges[:2] for edges in cand]
        parts = list(units)
    if p == 1:
        seq = [*u.gadget.witness_of_order(u.gadget.order), *conn[1:-1]]
    else:
        seq = _thread(units, qpos, chosen)

    sizes = [len(u.gadget.vertices | set(u.return_path)) for u in parts]
    ks = [shortening_capacity(u.gadget) for u in parts]
    k = min(ks)
    mass = sum(sizes)
    m = max(u.gadget.order for u in parts)
    out = gadget_cycle_from_sequence(seq, [u.gadget for u in parts], 0, 0, m, k)
    # the fractional window where it is valid, else the tightest valid one
    a = max(math.ceil(a_fraction * mass - 1e-9), out.total - out.t * k)
    b = min(math.floor(b_fraction * mass + 1e-9), out.total)
    out = replace(out, a=a, b=b)
    if out.t != p:
        raise ConstructionError("path-to-cycle", f"only {out.t} of {p} gadgets survived")
    verdict = verify_gadget_cycle(g, out)
    if not verdict.ok:
        raise ConstructionError("path-to-cycle", f"gadget-cycle fails clauses {list(verdict.failed)}: {verdict.messages}")
    return out


def _thread(units: Sequence[GadgetWithReturn], qpos: list[dict], chosen: list[list[tuple[int, int]]]) -> list[int]:
    """Walk the port graph: arcs of each cut unit cycle alternate with kept matching edges."""
    p = len(units)
    arc_of: dict[int, tuple[int, ...]] = {}
    for i, u in enumerate(units):
        cyc = _unit_cycle(u)
        size = len(cyc)
        cuts = []
        if i > 0:
            cuts.append(sorted(qpos[i][y] for _, y in chosen[i - 1]))
        if i < p - 1:
            cuts.append(sorted(qpos[i][x] for x, _ in chosen[i]))
        cuts.sort()
        if len(cuts) == 1:
            (lo, hi), = cuts
            arcs = [[cyc[x % size] for x in range(hi, lo + size + 1)]]
        else:
            (l1, l2), (r1, r2) = cuts
            if l2 >= r1:
                raise ConstructionError("path-to-cycle", f"cuts overlap on unit {i}")
            arcs = [cyc[l2:r1 + 1], [cyc[x % size] for x in range(r2, l1 + size + 1)]]
        for arc in arcs:
            arc_of[arc[0]] = tuple(arc)
            arc_of[arc[-1]] = tuple(reversed(arc))
    partner = {}
    for edges in chosen:
        for x, y in edges:
            partner[x] = y
            partner[y] = x
    start = chosen[0][0][0]
    seq: list[int] = []
    port = start
    while True:
        arc = arc_of[port]
        seq.extend(arc)
        port = partner[arc[-1]]
        if port == start:
            break
        if len(seq) > sum(len(a) for a in arc_of.values()):
            raise ConstructionError("path-to-cycle", "port walk does not close")
    if len(set(seq)) != len(seq):
        raise ConstructionError("path-to-cycle", "port walk repeats a vertex")
    return seq
