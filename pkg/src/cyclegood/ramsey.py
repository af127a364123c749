"""Ramsey-level constructions and engines for R(C_n, K_{m_1..m_k}).

Every engine returns a verdict whose witness has been re-checked in the right
color: a red cycle of exactly n vertices, a blue complete multipartite graph
with the requested part sizes, or a proof of refutation by exhaustive search.
When no stage succeeds the verdict is inconclusive and carries the trace.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConstructionError, CycleGoodError, HypothesisFalsified, ParameterError, SearchBudgetExhausted
from .expansion import DmnParams, expander_long_path, extract_bipartite_expander
from .gadget_cycles import (
    extract_cycle_of_length,
    join_gadget_cycles,
    path_to_gadget_cycle,
)
from .gadgets import GadgetWithReturn, build_gadget_with_return
from .graph import Graph, TwoColoring, components, induced_subgraph, iter_bits, members
from .posa import connect_exact_length
from .profile import DESK, ConstantsProfile
from .search import (
    CycleWitness,
    MultipartiteWitness,
    blocks,
    find_complete_multipartite,
    find_cycle_at_least,
    find_cycle_exact,
    vertex_disjoint_paths,
)

SMALL_ORDER = 14


@dataclass(frozen=True)
class RamseyInstance:
    n: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if self.n < 3:
            raise ParameterError("cycle length must be >= 3")
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ParameterError("part sizes must be positive")
        if list(self.sizes) != sorted(self.sizes):
            raise ParameterError("part sizes must be ascending")
        object.__setattr__(self, "sizes", tuple(self.sizes))

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def sigma(self) -> int:
        return self.sizes[0]

    @property
    def lower_bound(self) -> int:
        """(n-1)(k-1) + m_1, the order at which the goodness bound says a witness is forced."""
        return (self.n - 1) * (self.k - 1) + self.sigma

    def to_json(self) -> dict:
        return {"n": self.n, "sizes": list(self.sizes), "k": self.k, "sigma": self.sigma, "lower_bound": self.lower_bound}


# ---------------------------------------------------------------- verdicts

@dataclass(frozen=True, eq=False)
class Verdict:
    trace: tuple = ()
    kind = "verdict"
    decided = True

    def check(self, c: TwoColoring, inst: RamseyInstance) -> bool:
        return True

    def witness_json(self):
        return None

    def to_json(self) -> dict:
        return {"verdict": self.kind, "witness": self.witness_json(), "trace": list(self.trace)}


@dataclass(frozen=True, eq=False)
class RedCycle(Verdict):
    witness: CycleWitness = None
    kind = "red-cycle"

    def check(self, c: TwoColoring, inst: RamseyInstance) -> bool:
        return len(self.witness) == inst.n and self.witness.verify(c.red)

    def witness_json(self):
        return self.witness.to_json()


@dataclass(frozen=True, eq=False)
class BlueMultipartite(Verdict):
    witness: MultipartiteWitness = None
    kind = "blue-multipartite"

    def check(self, c: TwoColoring, inst: RamseyInstance) -> bool:
        return self.witness.verify(c.blue, inst.sizes)

    def witness_json(self):
        return self.witness.to_json()


@dataclass(frozen=True, eq=False)
class Refuted(Verdict):
    coloring: TwoColoring = None
    kind = "refuted"

    def check(self, c: TwoColoring, inst: RamseyInstance) -> bool:
        return verify_refutation(self.coloring, inst).status == REFUTES

    def witness_json(self):
        return {"kind": "coloring", "order": self.coloring.order, "red_edges": [list(e) for e in self.coloring.red.edges()]}


@dataclass(frozen=True, eq=False)
class Inconclusive(Verdict):
    stage: str = ""
    reason: str = ""
    kind = "inconclusive"
    decided = False

    def to_json(self) -> dict:
        out = super().to_json()
        out["stage"] = self.stage
        out["reason"] = self.reason
        return out


# ---------------------------------------------------------------- colorings

def clique_coloring(clique_sizes: Sequence[int]) -> TwoColoring:
    """Red disjoint cliques of the given sizes, blue between them."""
    edges = []
    start = 0
    for s in clique_sizes:
        edges.extend(itertools.combinations(range(start, start + s), 2))
        start += s
    return TwoColoring(Graph(start, edges))


def lower_bound_coloring(inst: RamseyInstance, g_order: int | None = None) -> TwoColoring:
    """k-1 red cliques of order |G|-1 and one of order m_1-1: no red G, no blue K_{m_1..m_k}."""
    g_order = inst.n if g_order is None else g_order
    if g_order < inst.sigma:
        raise ParameterError("need |G| >= sigma")
    return clique_coloring([g_order - 1] * (inst.k - 1) + [inst.sigma - 1])


def refuting_coloring_general(inst: RamseyInstance, r: int) -> TwoColoring:
    """k-r red cliques of order n-1 and r of order m_r-1 (valid when n >= m_r)."""
    if not 1 <= r <= inst.k:
        raise ParameterError("need 1 <= r <= k")
    m_r = inst.sizes[r - 1]
    if inst.n < m_r:
        raise ParameterError("need n >= m_r")
    return clique_coloring([inst.n - 1] * (inst.k - r) + [m_r - 1] * r)


REFUTES = "refutes"
RED = "red-cycle"
BLUE = "blue-multipartite"
UNDECIDED = "indeterminate"


@dataclass(frozen=True)
class RefutationReport:
    status: str
    witness: object = None
    reason: str = ""

    def to_json(self) -> dict:
        w = self.witness.to_json() if self.witness is not None else None
        return {"status": self.status, "witness": w, "reason": self.reason}


def verify_refutation(c: TwoColoring, inst: RamseyInstance, budget: int | None = None) -> RefutationReport:
    """Exhaustive: refutes iff there is no red C_n and no blue K_{m_1..m_k}."""
    try:
        cyc = find_cycle_exact(c.red, inst.n, budget) if c.order >= inst.n else None
    except SearchBudgetExhausted as exc:
        return RefutationReport(UNDECIDED, None, f"red search: {exc}")
    if cyc is not None:
        return RefutationReport(RED, cyc)
    try:
        blue = find_complete_multipartite(c.blue, inst.sizes, budget) if c.order >= sum(inst.sizes) else None
    except SearchBudgetExhausted as exc:
        return RefutationReport(UNDECIDED, None, f"blue search: {exc}")
    if blue is not None:
        return RefutationReport(BLUE, blue)
    return RefutationReport(REFUTES)


# ---------------------------------------------------------------- shared helpers

class _Run:
    """Per-call trace and stage runner that turns failures into trace entries."""

    def __init__(self, c: TwoColoring, inst: RamseyInstance, profile: ConstantsProfile, seed: int):
        self.c = c
        self.inst = inst
        self.profile = profile
        self.seed = seed
        self.trace: list[dict] = []
        self.blue_absent = False
        self.red_absent = False

    def note(self, stage: str, **kw) -> None:
        self.trace.append({"stage": stage, **kw})

    def attempt(self, stage: str, fn, *args, **kw):
        try:
            return fn(*args, **kw)
        except HypothesisFalsified as exc:
            self.note(stage, status="hypothesis-falsified", error=str(exc))
            fitted = fit_blue_witness(self.c, self.inst, exc.witness)
            if fitted is not None:
                raise _Found(self.finish(BlueMultipartite, fitted)) from None
            return None
        except (CycleGoodError, AssertionError) as exc:
            self.note(stage, status="failed", error=str(exc))
            return None

    def finish(self, cls, witness) -> Verdict:
        if cls is RedCycle:
            v = RedCycle(tuple(self.trace), witness)
        elif cls is BlueMultipartite:
            v = BlueMultipartite(tuple(self.trace), witness)
        else:
            v = Refuted(tuple(self.trace), witness)
        if not v.check(self.c, self.inst):
            raise AssertionError(f"{v.kind} witness failed re-verification")
        return v

    def inconclusive(self, stage: str, reason: str) -> Inconclusive:
        return Inconclusive(tuple(self.trace), stage, reason)

    def blue_search(self) -> MultipartiteWitness | None:
        inst = self.inst
        if self.c.order < sum(inst.sizes):
            self.blue_absent = True
            self.note("blue-search", status="absent", reason="too few vertices")
            return None
        try:
            w = find_complete_multipartite(self.c.blue, inst.sizes, self.profile.search_budget)
        except SearchBudgetExhausted:
            self.note("blue-search", status="budget")
            return None
        self.blue_absent = w is None
        self.note("blue-search", status="absent" if w is None else "found")
        return w

    def red_exact(self) -> CycleWitness | None:
        n = self.inst.n
        if self.c.order < n:
            self.red_absent = True
            self.note("red-exact", status="absent", reason="too few vertices")
            return None
        try:
            w = find_cycle_exact(self.c.red, n, self.profile.search_budget)
        except SearchBudgetExhausted:
            self.note("red-exact", status="budget")
            return None
        self.red_absent = w is None
        self.note("red-exact", status="absent" if w is None else "found")
        return w

    def closing(self, stage: str) -> Verdict:
        if self.red_absent and self.blue_absent:
            self.note(stage, status="refuted")
            return self.finish(Refuted, self.c)
        if self.red_absent is False and self.blue_absent is False:
            pass
        return self.inconclusive(stage, "no stage produced a witness")


class _Found(Exception):
    def __init__(self, verdict: Verdict):
        super().__init__(verdict.kind)
        self.verdict = verdict


def fit_blue_witness(c: TwoColoring, inst: RamseyInstance, witness) -> MultipartiteWitness | None:
    """Trim a blue multipartite witness with large parts down to the instance's part sizes."""
    if not isinstance(witness, MultipartiteWitness) or len(witness.parts) < inst.k:
        return None
    parts = sorted(witness.parts, key=len, reverse=True)[: inst.k]
    want = sorted(inst.sizes, reverse=True)
    if any(len(p) < s for p, s in zip(parts, want)):
        return None
    fitted = MultipartiteWitness(tuple(tuple(sorted(p)[:s]) for p, s in zip(parts, want))[::-1])
    return fitted if fitted.verify(c.blue, inst.sizes) else None


def _lift_cycle(rel, w: CycleWitness) -> CycleWitness:
    return CycleWitness(tuple(rel.lift(w.vertices)))


def _require(ok: bool, c: TwoColoring, what: str) -> None:
    """Refuse runs whose scaled hypotheses fail, except tiny hosts that exact search settles."""
    if not ok and c.order > SMALL_ORDER:
        raise ParameterError(f"hypothesis {what} fails for this profile; the engine refuses to run")


# ---------------------------------------------------------------- k = 2

def bipartite_engine(
    c: TwoColoring, n: int, m1: int, m2: int, profile: ConstantsProfile = DESK, seed: int = 0
) -> Verdict:
    """Red C_n or blue K_{m1,m2}: long red cycle, then exact-length reconnection between two of its neighbors."""
    inst = RamseyInstance(n, (m1, m2))
    _require(n >= profile.N2 * m2, c, f"n >= N2*m = {profile.N2 * m2:g}")
    run = _Run(c, inst, profile, seed)
    run.note("instance", order=c.order, lower_bound=n + m1 - 1)
    try:
        return _bipartite(run)
    except _Found as f:
        return f.verdict


def _bipartite(run: _Run) -> Verdict:
    c, inst, profile = run.c, run.inst, run.profile
    n, m = inst.n, inst.sizes[-1]
    blue = run.blue_search()
    if blue is not None:
        return run.finish(BlueMultipartite, blue)
    if c.order < n:
        run.red_absent = True
        run.note("red-exact", status="absent", reason="too few vertices")
        return run.closing("close")
    pipeline_ok = (
        c.order > SMALL_ORDER
        and m >= profile.connect_min_m
        and n >= profile.N2 * m
        and n >= 8 * m
    )
    if pipeline_ok:
        try:
            long_cycle = find_cycle_at_least(c.red, n, profile.search_budget)
        except SearchBudgetExhausted:
            long_cycle = "budget"
        if long_cycle is None:
            run.red_absent = True
            run.note("long-cycle", status="absent")
            return run.closing("close")
        if long_cycle != "budget":
            cyc = list(long_cycle.vertices)
            run.note("long-cycle", status="found", order=len(cyc))
            if len(cyc) == n:
                return run.finish(RedCycle, long_cycle)
            if len(cyc) >= 8 * m:
                res = run.attempt("connect", connect_exact_length, c.red, cyc[0], cyc[-1], cyc, m, n, profile, run.seed)
                if res is not None:
                    run.note("connect", status="ok", steps=len(res.trace))
                    return run.finish(RedCycle, CycleWitness(res.path))
        else:
            run.note("long-cycle", status="budget")
    else:
        run.note("pipeline", status="skipped", reason="instance below the desk-scale hypotheses")
    w = run.red_exact()
    if w is not None:
        return run.finish(RedCycle, w)
    return run.closing("close")


# ---------------------------------------------------------------- connected case

def max_matching_between(g: Graph, left: Sequence[int], right: Sequence[int]) -> list[tuple[int, int]]:
    """Maximum matching of g-edges between two disjoint vertex lists (augmenting paths)."""
    rmask = g.to_mask(right)
    match_r: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in iter_bits(g.adj[u] & rmask):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_r or augment(match_r[w], seen):
                match_r[w] = u
                return True
        return False

    for u in left:
        augment(u, set())
    return sorted((u, w) for w, u in match_r.items())


def _path_cover(nodes: list[int], adj: dict[int, set[int]]) -> list[list[int]]:
    """Greedy path cover, then merge paths whose endpoints are adjacent until none are."""
    left = set(nodes)
    paths: list[list[int]] = []
    for v in nodes:
        if v not in left:
            continue
        path = [v]
        left.discard(v)
        while True:
            nxt = next((u for u in sorted(adj[path[-1]]) if u in left), None)
            if nxt is None:
                break
            path.append(nxt)
            left.discard(nxt)
        paths.append(path)
    merged = True
    while merged and len(paths) > 1:
        merged = False
        for i, j in itertools.permutations(range(len(paths)), 2):
            p, q = paths[i], paths[j]
            for pp in (p, p[::-1]):
                for qq in (q, q[::-1]):
                    if qq[0] in adj[pp[-1]]:
                        paths[i] = pp + qq
                        del paths[j]
                        merged = True
                        break
                if merged:
                    break
            if merged:
                break
    return sorted(paths, key=len, reverse=True)


def connected_engine(
    c: TwoColoring, n: int, m: int, k: int, profile: ConstantsProfile = DESK, seed: int = 0, budget_units: int | None = None
) -> Verdict:
    """Red C_n or blue K_m^k for a red graph that is highly connected between large sets.

    Pipeline: a maximal family of gadgets-with-return, the auxiliary graph of
    units joined by large matchings, a path cover of it, gadget-cycles along
    the cover paths, joins between them, and extraction of an n-cycle.
    """
    inst = RamseyInstance(n, tuple([m] * k))
    _require(n >= profile.N3_connected * m, c, f"n >= N3*m = {profile.N3_connected * m:g}")
    run = _Run(c, inst, profile, seed)
    run.note("instance", order=c.order, size_hypothesis=c.order >= 0.07 * k * n + n)
    try:
        return _connected(run, m, k, budget_units)
    except _Found as f:
        return f.verdict


def _spot_check(run: _Run, g: Graph, m: int, k: int, allowed: int | None = None) -> bool:
    profile = run.profile
    rng = random.Random(run.seed)
    pool = members(g.full_mask if allowed is None else allowed)
    want = min(k ** profile.connectivity_exponent, 2 * m)
    if len(pool) < 4 * m:
        run.note("connectivity", status="skipped", reason="too few vertices for two 2m-sets")
        return True
    for trial in range(profile.spot_check_pairs):
        picked = rng.sample(pool, 4 * m)
        a, b = picked[: 2 * m], picked[2 * m:]
        res = vertex_disjoint_paths(g, a, b, want, allowed=allowed)
        if not res.found:
            run.note(
                "connectivity",
                status="falsified",
                trial=trial,
                want=want,
                separator=sorted(res.separator or ()),
            )
            return False
    run.note("connectivity", status="spot-checked", pairs=profile.spot_check_pairs, want=want)
    return True


def _connected(run: _Run, m: int, k: int, budget_units: int | None) -> Verdict:
    red = run.c.red
    blue = run.blue_search()
    if blue is not None:
        return run.finish(BlueMultipartite, blue)
    if not _spot_check(run, red, m, k):
        return run.inconclusive("connectivity", "connectivity hypothesis falsified")
    res = _gadget_cycle_pipeline(run, red, red.full_mask, m, k, budget_units)
    if res is not None:
        return res
    return run.inconclusive("connected", "no gadget-cycle window contains n")


def _gadget_cycle_pipeline(run: _Run, red: Graph, within: int, m: int, k: int, budget_units: int | None) -> Verdict | None:
    profile, n = run.profile, run.inst.n
    lam, mu = int(profile.connected_lambda), int(profile.connected_mu)
    free = within
    units: list[GadgetWithReturn] = []
    cap = budget_units if budget_units is not None else 64
    while len(units) < cap and free.bit_count() >= (lam + 2 * mu) * m:
        b = run.attempt("gadget-family", build_gadget_with_return, red, m, k, lam, mu, profile,
                        run.seed + 1000 * len(units), within=members(free))
        if b is None:
            break
        u = b.result
        units.append(u)
        free &= ~red.to_mask(u.gadget.vertices) & ~red.to_mask(u.return_path)
    run.note("gadget-family", units=len(units), leftover=free.bit_count())
    if not units:
        return None
    inner = [list(u.return_path[1:-1]) for u in units]
    t = len(units)
    adj: dict[int, set[int]] = {i: set() for i in range(t)}
    matchings: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i, j in itertools.combinations(range(t), 2):
        mt = max_matching_between(red, inner[i], inner[j])
        matchings[(i, j)] = mt
        if len(mt) >= profile.matching_size:
            adj[i].add(j)
            adj[j].add(i)
    run.note("auxiliary-graph", nodes=t, edges=sum(len(s) for s in adj.values()) // 2)

    # an independent k-set of units yields a blue K_m^k
    if t >= k:
        for ind in itertools.combinations(range(t), k):
            if any(j in adj[i] for i, j in itertools.combinations(ind, 2)):
                continue
            used: set[int] = set()
            for i, j in itertools.combinations(ind, 2):
                for e in matchings[(i, j)]:
                    used.update(e)
            parts = [tuple(v for v in inner[i] if v not in used)[:m] for i in ind]
            if all(len(p) == m for p in parts):
                w = fit_blue_witness(run.c, run.inst, MultipartiteWitness(tuple(parts)))
                if w is not None:
                    run.note("independence", status="blue witness from independent units", units=list(ind))
                    return run.finish(BlueMultipartite, w)
    cover = _path_cover(list(range(t)), adj)
    run.note("path-cover", paths=[len(p) for p in cover])

    def pair_matching(i: int, j: int) -> list[tuple[int, int]]:
        if (i, j) in matchings:
            return matchings[(i, j)]
        return [(y, x) for x, y in matchings[(j, i)]]

    cycles = []
    for path in cover:
        # contiguous runs of units, shortest first from each start
        for s in range(len(path)):
            for e in range(s, len(path)):
                sub = path[s:e + 1]
                gc = run.attempt(
                    "path-to-cycle",
                    path_to_gadget_cycle,
                    red,
                    [units[i] for i in sub],
                    [pair_matching(sub[q], sub[q + 1]) for q in range(len(sub) - 1)],
                    profile.gadget_cycle_a_fraction,
                    profile.gadget_cycle_b_fraction,
                    profile.matching_size,
                )
                if gc is None:
                    continue
                lo, hi = gc.recomputed_window()
                if s == 0 and e == len(path) - 1:
                    cycles.append(gc)
                if lo <= n <= hi:
                    run.note("extract", units=len(sub), window=[lo, hi])
                    return run.finish(RedCycle, extract_cycle_of_length(red, gc, n))
                if lo > n:
                    break
    # join whole-path gadget-cycles one at a time
    if len(cycles) < 2:
        return None
    d = cycles[0]
    taken = red.to_mask(d.vertices)
    for other in cycles[1:]:
        omask = red.to_mask(other.vertices)
        rest = within & ~taken & ~omask
        for oc in cycles:
            if oc is not other and oc is not d:
                rest &= ~red.to_mask(oc.vertices)
        res = vertex_disjoint_paths(red, members(taken), members(omask), profile.join_min_paths,
                                    allowed=rest | taken | omask)
        if not res.found:
            run.note("join", status="too few disjoint paths", found=res.flow)
            continue
        joined = run.attempt("join", join_gadget_cycles, red, d, other, list(res.paths.paths))
        if joined is None:
            continue
        d = joined.cycle
        taken = red.to_mask(d.vertices)
        lo, hi = d.recomputed_window()
        run.note("join", status="joined", order=d.total, window=[lo, hi])
        if lo <= n <= hi:
            return run.finish(RedCycle, extract_cycle_of_length(red, d, n))
    return None


# ---------------------------------------------------------------- partition lemma

@dataclass
class PartitionResult:
    parts: tuple[frozenset[int], ...]
    separator: frozenset[int]
    certification: dict
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "parts": [sorted(p) for p in self.parts],
            "separator": sorted(self.separator),
            "certification": self.certification,
            "trace": self.trace,
        }


def _bfs_ball(g: Graph, src: int, size: int, allowed: int) -> list[int]:
    out = [src]
    seen = 1 << src
    i = 0
    while i < len(out) and len(out) < size:
        for w in iter_bits(g.adj[out[i]] & allowed & ~seen):
            seen |= 1 << w
            out.append(w)
            if len(out) == size:
                break
        i += 1
    return out


def _far_vertex(g: Graph, src: int, allowed: int) -> int:
    from .graph import bfs_distances

    dist = bfs_distances(g, src, allowed)
    return max(sorted(dist), key=lambda v: dist[v])


def _find_separator(g: Graph, alive: int, m: int, bound: int, rng: random.Random, tries: int) -> tuple[int, list[int], list[int]] | None:
    for comp in components(g, alive):
        if comp.bit_count() < 2 * m + 1:
            continue
        verts = members(comp)
        starts = [verts[0]] + [rng.choice(verts) for _ in range(tries)]
        for u in starts:
            v = _far_vertex(g, u, comp)
            a = _bfs_ball(g, u, m, comp)
            b = _bfs_ball(g, v, m, comp & ~g.to_mask(a))
            if len(a) < m or len(b) < m or set(a) & set(b):
                continue
            res = vertex_disjoint_paths(g, a, b, bound + 1, allowed=comp)
            if res.found or not res.separator:
                continue
            sep = g.to_mask(res.separator)
            pieces = components(g, comp & ~sep)
            big = [p for p in pieces if p.bit_count() >= m]
            if len(big) >= 2:
                return sep, a, b
    return None


def partition_structure(
    c: TwoColoring, n: int, m: int, k: int, profile: ConstantsProfile = DESK, seed: int = 0
) -> PartitionResult:
    """Split the red graph into k-1 large parts with no red edges between them plus a small separator."""
    if k < 2:
        raise ParameterError("need k >= 2")
    if n < profile.N3_partition * m or m < k ** profile.partition_m_exponent:
        raise ParameterError("instance below the profile's partition hypotheses")
    g = c.red
    rng = random.Random(seed)
    bound = k ** profile.separator_exponent
    alive = g.full_mask
    removed = 0
    trace: list = []
    for round_no in range(k):
        found = _find_separator(g, alive, m, bound, rng, profile.spot_check_pairs)
        if found is None:
            trace.append({"round": round_no, "separator": None})
            break
        sep, a, b = found
        alive &= ~sep
        removed |= sep
        trace.append({"round": round_no, "separator": members(sep), "anchors": [a, b]})
    comps = sorted(components(g, alive), key=lambda x: (-x.bit_count(), x & -x))
    big = [x for x in comps if x.bit_count() >= m]
    small = [x for x in comps if x.bit_count() < m]
    groups = list(big)
    pool = 0
    for x in small:
        pool |= x
        if pool.bit_count() >= m:
            groups.append(pool)
            pool = 0
    if pool:
        if groups:
            groups[-1] |= pool
        else:
            groups.append(pool)
    surplus = [max(0, x.bit_count() - n) for x in groups]
    trace.append({"parts": len(groups), "sizes": [x.bit_count() for x in groups], "surplus": surplus})
    if len(groups) >= k and all(x.bit_count() >= m for x in groups[:k]):
        parts = tuple(tuple(members(x)[:m]) for x in groups[:k])
        raise HypothesisFalsified("partition", f"{k} red-separated parts of order >= m", MultipartiteWitness(parts), trace)
    if len(groups) != k - 1:
        raise ConstructionError("partition", f"found {len(groups)} parts, expected {k - 1}", trace)
    for i, j in itertools.combinations(range(len(groups)), 2):
        assert not g.nbr_mask(groups[i]) & groups[j], "red edge between partition parts"
    cert = {
        "no_cross_edges": True,
        "min_part": min(x.bit_count() for x in groups),
        "parts_at_least_m": all(x.bit_count() >= m for x in groups),
        "separator_size": removed.bit_count(),
        "separator_bound": k ** profile.separator_total_exponent,
        "separator_within_bound": removed.bit_count() <= k ** profile.separator_total_exponent,
        "complement_kmm_free": "assumed",
    }
    if not cert["parts_at_least_m"] or not cert["separator_within_bound"]:
        raise ConstructionError("partition", f"certification failed: {cert}", trace)
    return PartitionResult(tuple(frozenset(members(x)) for x in groups), frozenset(members(removed)), cert, trace)


# ---------------------------------------------------------------- main theorem

def prove_main(c: TwoColoring, inst: RamseyInstance, profile: ConstantsProfile = DESK, seed: int = 0) -> Verdict:
    """Red C_n or blue K_{m_1..m_k}, following the induction on k."""
    if inst.k == 2:
        v = bipartite_engine(c, inst.n, inst.sizes[0], inst.sizes[1], profile, seed)
        return _retag(v, {"stage": "delegate", "to": "bipartite_engine"})
    m = inst.sizes[-1]
    _require(
        inst.n >= profile.N3_main * m and m >= inst.k ** profile.main_exponent,
        c,
        f"n >= N3*m = {profile.N3_main * m:g} and m >= k^{profile.main_exponent}",
    )
    run = _Run(c, inst, profile, seed)
    run.note("instance", order=c.order, lower_bound=inst.lower_bound)
    try:
        return _main(run)
    except _Found as f:
        return f.verdict


def _retag(v: Verdict, entry: dict) -> Verdict:
    trace = (entry,) + tuple(v.trace)
    if isinstance(v, RedCycle):
        return RedCycle(trace, v.witness)
    if isinstance(v, BlueMultipartite):
        return BlueMultipartite(trace, v.witness)
    if isinstance(v, Refuted):
        return Refuted(trace, v.coloring)
    return Inconclusive(trace, v.stage, v.reason)


def _main(run: _Run) -> Verdict:
    c, inst, profile = run.c, run.inst, run.profile
    n, sizes = inst.n, inst.sizes
    if inst.k == 1:
        if c.order >= sizes[0]:
            return run.finish(BlueMultipartite, MultipartiteWitness((tuple(range(sizes[0])),)))
        run.blue_absent = True
        w = run.red_exact()
        return run.finish(RedCycle, w) if w is not None else run.closing("close")
    blue = run.blue_search()
    if blue is not None:
        return run.finish(BlueMultipartite, blue)
    if c.order <= SMALL_ORDER or c.order < n:
        w = run.red_exact()
        if w is not None:
            return run.finish(RedCycle, w)
        return run.closing("close")

    # induction: a set W of m_k vertices whose closed red neighborhood is below n
    red = c.red
    w_set = _small_closed_neighborhood(red, sizes[-1], n)
    if w_set is not None:
        closed = red.nbr_mask(red.to_mask(w_set)) | red.to_mask(w_set)
        rest = members(red.full_mask & ~closed)
        run.note("induction", W=sorted(w_set), closed=closed.bit_count(), rest=len(rest))
        sub_red, rel = induced_subgraph(red, rest)
        sub_inst = RamseyInstance(n, sizes[:-1])
        sub = prove_main(TwoColoring(sub_red), sub_inst, profile, run.seed + 1)
        run.note("induction", sub_verdict=sub.kind)
        if isinstance(sub, RedCycle):
            return run.finish(RedCycle, _lift_cycle(rel, sub.witness))
        if isinstance(sub, BlueMultipartite):
            parts = tuple(tuple(rel.lift(p)) for p in sub.witness.parts) + (tuple(sorted(w_set)),)
            return run.finish(BlueMultipartite, MultipartiteWitness(parts))

    m = sizes[-1]
    part = run.attempt("partition", partition_structure, c, n, m, inst.k, profile, run.seed)
    if part is not None:
        run.note("partition", parts=[len(p) for p in part.parts], separator=len(part.separator))
        v = _partitioned_case(run, part, m)
        if v is not None:
            return v
    # highly connected red graph: gadget-cycle pipeline
    if _spot_check(run, red, m, inst.k):
        v = _gadget_cycle_pipeline(run, red, red.full_mask, m, inst.k, None)
        if v is not None:
            return v
    w = run.red_exact()
    if w is not None:
        return run.finish(RedCycle, w)
    return run.closing("close")


def _small_closed_neighborhood(g: Graph, size: int, n: int) -> list[int] | None:
    """Greedy: grow W from low-degree vertices, always adding the vertex that adds least."""
    if g.order < size:
        return None
    order = sorted(range(g.order), key=lambda v: (g.degree(v), v))
    for start in order[: min(8, g.order)]:
        w = [start]
        wm = 1 << start
        closed = g.adj[start] | wm
        while len(w) < size:
            best = None
            for v in iter_bits(g.full_mask & ~wm):
                grow = ((g.adj[v] | 1 << v) & ~closed).bit_count()
                if best is None or grow < best[0]:
                    best = (grow, v)
            v = best[1]
            w.append(v)
            wm |= 1 << v
            closed |= g.adj[v] | 1 << v
        if closed.bit_count() <= n - 1:
            return sorted(w)
    return None


def _partitioned_case(run: _Run, part: PartitionResult, m: int) -> Verdict | None:
    c, profile, n = run.c, run.profile, run.inst.n
    red = c.red
    smask = red.to_mask(part.separator)
    hs = []
    for i, a in enumerate(part.parts):
        amask = red.to_mask(a)
        sub, rel = induced_subgraph(red, amask | smask)
        child = rel.to_child
        got = run.attempt(f"part-{i}/expander", extract_bipartite_expander, sub, [child[v] for v in a], m, 3, n,
                          profile, run.seed, strict=False)
        if got is None:
            return None
        _, h, verdict = got
        run.note(f"part-{i}/expander", order=len(h), status=verdict.status)
        # an empty expander at desk scale falls back to the whole part
        hs.append(red.to_mask(rel.lift(sorted(h))) if h else amask)
    gprime = smask
    for h in hs:
        gprime |= h
    # two disjoint paths between two expanders give a spliced cycle
    for i, j in itertools.permutations(range(len(hs)), 2):
        res = vertex_disjoint_paths(red, members(hs[i]), members(hs[j]), 2, allowed=gprime)
        if not res.found:
            continue
        v = run.attempt(f"splice-{i}-{j}", _splice_two_parts, run, hs[i], hs[j], res.paths.paths, m)
        if v is not None:
            return v
    # cut-vertex case
    for a_idx in range(len(hs)):
        v = run.attempt(f"cut-vertex-{a_idx}", _cut_vertex_case, run, hs, a_idx, gprime, m)
        if v is not None:
            return v
    return None


def _trim(path: Sequence[int], amask: int, bmask: int) -> list[int]:
    last = max(i for i, v in enumerate(path) if amask >> v & 1)
    first = next(j for j in range(last, len(path)) if bmask >> path[j] & 1)
    return list(path[last:first + 1])


def _splice_two_parts(run: _Run, hi: int, hj: int, paths, m: int) -> Verdict:
    red, profile, n = run.c.red, run.profile, run.inst.n
    p1, p2 = (_trim(p, hi, hj) if hi >> p[0] & 1 else _trim(p[::-1], hi, hj) for p in paths)
    q_i = expander_long_path(red, members(hi), DmnParams(3, m, n), p1[0], p2[0], profile, strict=False)
    n_rest = n - (len(q_i) + len(p1) + len(p2) - 4) + 2
    sub, rel = induced_subgraph(red, hj)
    child = rel.to_child
    seed_path = expander_long_path(sub, range(sub.order), DmnParams(3, m, n), child[p1[-1]], child[p2[-1]], profile, strict=False)
    q_j = connect_exact_length(sub, child[p1[-1]], child[p2[-1]], seed_path, m, n_rest, profile, run.seed)
    q_j_parent = rel.lift(q_j.path)
    cyc = list(reversed(q_i)) + p1[1:-1] + q_j_parent + list(reversed(p2))[1:-1]
    run.note("splice", order=len(cyc))
    return run.finish(RedCycle, CycleWitness(tuple(cyc)))


def _cut_vertex_case(run: _Run, hs: list[int], a_idx: int, gprime: int, m: int) -> Verdict:
    red, profile, n = run.c.red, run.profile, run.inst.n
    ha = hs[a_idx]
    others = 0
    for i, h in enumerate(hs):
        if i != a_idx:
            others |= h
    blist, cut = blocks(red, gprime)
    blist = [b for b in blist if b & ha]
    if not ha or not blist:
        raise ConstructionError("cut-vertex", "expander meets no block")
    d = max(blist, key=lambda b: ((b & ha).bit_count(), -(b & -b)))
    comp = next(x for x in components(red, gprime) if x & ha)
    v = None
    area = comp
    for cand in iter_bits(d & cut):
        pieces = components(red, comp & ~(1 << cand))
        home = next((x for x in pieces if x & ha), 0)
        if not home & others:
            v, area = cand, home | 1 << cand
            break
    if v is None:
        if comp & others:
            raise ConstructionError("cut-vertex", "no cut vertex isolates this expander")
        v = min(iter_bits(d))
    u = min(iter_bits(red.adj[v] & d))
    sub, rel = induced_subgraph(red, area)
    child = rel.to_child
    inner = ha & ~(1 << u) & ~(1 << v)
    hsub, hrel = induced_subgraph(red, inner)
    cyc = find_cycle_at_least(hsub, min(inner.bit_count(), 20 * m), profile.search_budget)
    if cyc is None:
        raise ConstructionError("cut-vertex", "no long cycle inside the expander")
    cycle = hrel.lift(cyc.vertices)
    res = vertex_disjoint_paths(red, [u, v], cycle, 2, allowed=area)
    if not res.found:
        raise ConstructionError("cut-vertex", "u and v cannot reach the cycle disjointly")
    pu, pv = sorted(res.paths.paths, key=lambda p: p[0] != u)
    pu = list(pu) if pu[0] == u else list(pu[::-1])
    pv = list(pv) if pv[0] == v else list(pv[::-1])
    L = len(cycle)
    iu, iv = cycle.index(pu[-1]), cycle.index(pv[-1])
    fwd = [cycle[(iu + s) % L] for s in range((iv - iu) % L + 1)]
    bwd = [cycle[(iu - s) % L] for s in range((iu - iv) % L + 1)]
    arc = max(fwd, bwd, key=len)
    seed_path = pu + arc[1:-1] + list(reversed(pv))
    res2 = connect_exact_length(sub, child[u], child[v], [child[x] for x in seed_path], m, n, profile, run.seed)
    path = rel.lift(res2.path)
    run.note("cut-vertex", v=v, u=u, order=len(path))
    return run.finish(RedCycle, CycleWitness(tuple(path)))
