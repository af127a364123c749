"""Gadgets: graphs with two endpoints joined by paths of several prescribed orders.

A k-gadget on vertex set J with endpoints a, b has a–b paths of orders |J| and
|J|-k. A (<=k)-gadget has every order |J|, |J|-1, ..., |J|-k. Every gadget
built here carries its witness paths, and they are checked edge by edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .embedding import (
    EmbeddedTree,
    RootedTreeSpec,
    connect_pairs_core,
    embed_forest_core,
    log2_ceil,
    long_odd_cycle_core,
)
from .errors import ConstructionError, HypothesisFalsified, ParameterError, SearchBudgetExhausted
from .expansion import multipartite_expander_core
from .graph import Graph, induced_subgraph, iter_bits, members, shortest_path
from .profile import DESK, ConstantsProfile, ExpanderConstants

EXACT = "exact"
UPTO = "upto"


@dataclass(frozen=True)
class Gadget:
    vertices: frozenset[int]
    a: int
    b: int
    shortfall: int
    kind: str
    witnesses: tuple[tuple[int, ...], ...]  # exact: (long, short); upto: orders |J|, |J|-1, ..., |J|-k

    @property
    def order(self) -> int:
        return len(self.vertices)

    def required_orders(self) -> list[int]:
        n = self.order
        if self.kind == EXACT:
            return [n, n - self.shortfall]
        return [n - t for t in range(self.shortfall + 1)]

    def witness_of_order(self, order: int) -> tuple[int, ...]:
        for w in self.witnesses:
            if len(w) == order:
                return w
        raise KeyError(order)

    def check(self, g: Graph) -> list[str]:
        """Problems with the stored witnesses; empty when the gadget is valid."""
        errs = []
        if self.a == self.b:
            errs.append("endpoints coincide")
        if self.a not in self.vertices or self.b not in self.vertices:
            errs.append("endpoints outside the vertex set")
        want = self.required_orders()
        if sorted((len(w) for w in self.witnesses), reverse=True) != sorted(want, reverse=True):
            errs.append(f"witness orders {[len(w) for w in self.witnesses]} != required {want}")
        for w in self.witnesses:
            if w[0] != self.a or w[-1] != self.b:
                errs.append(f"witness of order {len(w)} does not run from a to b")
            if not set(w) <= self.vertices:
                errs.append(f"witness of order {len(w)} leaves the gadget")
            if not g.is_path(list(w)):
                errs.append(f"witness of order {len(w)} is not a path in the graph")
        return errs

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "a": self.a,
            "b": self.b,
            "shortfall": self.shortfall,
            "kind": self.kind,
            "witnesses": [list(w) for w in self.witnesses],
        }


@dataclass(frozen=True)
class GadgetWithReturn:
    gadget: Gadget
    return_path: tuple[int, ...]

    def check(self, g: Graph) -> list[str]:
        errs = self.gadget.check(g)
        q = self.return_path
        ends = {self.gadget.a, self.gadget.b}
        if {q[0], q[-1]} != ends or len(q) < 2:
            errs.append("return path does not join the gadget endpoints")
        if not g.is_path(list(q)):
            errs.append("return path is not a path in the graph")
        if set(q[1:-1]) & self.gadget.vertices:
            errs.append("return path meets the gadget internally")
        return errs

    def to_json(self) -> dict:
        out = self.gadget.to_json()
        out["return_path"] = list(self.return_path)
        return out


# ---------------------------------------------------------------- verification

@dataclass
class GadgetCheck:
    status: str  # verified | refused | indeterminate
    gadget: Gadget | None = None
    missing: tuple[int, ...] = ()
    expanded: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status, "missing": list(self.missing), "expanded": self.expanded}
        if self.gadget is not None:
            out["gadget"] = self.gadget.to_json()
        return out


def ab_path_orders(
    g: Graph, jmask: int, a: int, b: int, wanted: set[int], budget: int | None = None
) -> tuple[dict[int, tuple[int, ...]], bool]:
    """Find a–b paths inside J for each wanted order; returns (found, complete).

    ``complete`` is False when the budget ran out before the search finished.
    """
    found: dict[int, tuple[int, ...]] = {}
    adj = g.adj
    expanded = 0
    stack_path = [a]
    top = max(wanted) if wanted else 0

    def reach_count(end: int, free: int) -> int:
        seen = 1 << end
        frontier = seen
        while frontier:
            frontier = g.nbr_mask(frontier) & free & ~seen
            seen |= frontier
        return seen

    def dfs(end: int, free: int) -> bool:
        nonlocal expanded
        expanded += 1
        if budget is not None and expanded > budget:
            raise SearchBudgetExhausted("path-order search budget", expanded)
        depth = len(stack_path)
        if end == b:
            if depth in wanted and depth not in found:
                found[depth] = tuple(stack_path)
            return len(found) == len(wanted)
        seen = reach_count(end, free | (1 << b))
        if not seen >> b & 1:
            return False
        # longest still-possible order
        if depth + (seen & free).bit_count() + (1 if b != end else 0) < min(o for o in wanted if o not in found):
            return False
        for v in iter_bits(adj[end] & (free | (1 << b))):
            if v != b and depth + 1 >= top:
                continue
            stack_path.append(v)
            done = dfs(v, free & ~(1 << v))
            stack_path.pop()
            if done:
                return True
        return False

    try:
        dfs(a, jmask & ~(1 << a) & ~(1 << b))
    except SearchBudgetExhausted:
        return found, False
    return found, True


def verify_gadget(
    g: Graph,
    j: Iterable[int],
    a: int,
    b: int,
    k: int,
    kind: str = EXACT,
    budget: int | None = 1_000_000,
) -> GadgetCheck:
    jmask = g.to_mask(j)
    if not (jmask >> a & 1 and jmask >> b & 1):
        raise ParameterError("a and b must lie in J")
    if a == b:
        raise ParameterError("a and b must differ")
    if kind not in (EXACT, UPTO):
        raise ParameterError(f"unknown gadget kind {kind}")
    n = jmask.bit_count()
    if k < 1 or k > n - 2:
        raise ParameterError("need 1 <= k <= |J|-2")
    wanted = {n, n - k} if kind == EXACT else {n - t for t in range(k + 1)}
    found, complete = ab_path_orders(g, jmask, a, b, wanted, budget)
    missing = tuple(sorted(wanted - set(found), reverse=True))
    if not missing:
        ws = tuple(found[o] for o in sorted(wanted, reverse=True))
        return GadgetCheck("verified", Gadget(frozenset(members(jmask)), a, b, k, kind, ws))
    return GadgetCheck("refused" if complete else "indeterminate", None, missing)


# ---------------------------------------------------------------- builders

@dataclass
class GadgetBuild:
    gadget: Gadget
    tree_a: EmbeddedTree
    tree_b: EmbeddedTree
    trace: list = field(default_factory=list)

    @property
    def reserved_mask(self) -> int:
        out = self.tree_a.mask | self.tree_b.mask
        for v in self.gadget.vertices:
            out |= 1 << v
        return out


def _stage(name: str, fn, *args, trace=None, **kw):
    try:
        return fn(*args, **kw)
    except HypothesisFalsified:
        raise
    except SearchBudgetExhausted as exc:
        raise ConstructionError(name, f"budget exhausted: {exc}", trace) from None
    except ConstructionError as exc:
        raise ConstructionError(f"{name}/{exc.stage}", exc.args[0] if exc.args else str(exc), trace) from None


def _expander(
    g: Graph, within: int, m: int, k_parts: int, consts: ExpanderConstants, profile: ConstantsProfile, seed: int, trace: list
) -> int:
    if profile.expander_m_cap is not None:
        m = max(1, min(m, profile.expander_m_cap))
    _, hmask, _ = _stage(
        "expander",
        multipartite_expander_core,
        g,
        within,
        m,
        consts.M,
        consts.delta,
        consts.beta,
        k_parts,
        profile,
        seed,
        cap_to_available=True,
        trace=trace,
    )
    return hmask


def _tree_order(m: int, profile: ConstantsProfile) -> int:
    return m if profile.tree_order_cap is None else max(1, min(m, profile.tree_order_cap))


def _zigzag(a: int, j: Sequence[int], xs: Sequence[int], ys: Sequence[int], b: int, paths: Sequence[Sequence[int]], start_x: bool) -> list[int]:
    """Traverse the rungs alternately; ``paths[i]`` runs x_i to y_i."""
    out = [a] + list(j)
    side_x = start_x
    for i, pth in enumerate(paths):
        out += list(pth) if side_x else list(reversed(pth))
        side_x = not side_x
    out.append(b)
    return out


def small_gadget_core(
    g: Graph,
    within: int,
    m: int,
    k_parts: int,
    r: int,
    profile: ConstantsProfile,
    seed: int = 0,
    trace: list | None = None,
) -> GadgetBuild:
    trace = [] if trace is None else trace
    g1mask = _expander(g, within, m, k_parts, profile.small_gadget, profile, seed, trace)
    h, rel = induced_subgraph(g, g1mask)
    lifted = rel.to_parent
    cyc = _stage("long-cycle", long_odd_cycle_core, h, r, profile, trace=trace)
    C = list(cyc.cycle.vertices)
    L = len(C)
    t = (L - r - 2) // 2
    a, js, rest = C[0], C[1: r + 1], C[r + 1:]
    xs, b, ys = rest[:t], rest[t], [rest[2 * t + 1 - i] for i in range(1, t + 1)]
    trace.append({"step": "cycle", "order": L, "t": t, "case": cyc.case})
    g2mask = h.to_mask(cyc.residual)
    cmask = h.to_mask(C)
    tree_spec = RootedTreeSpec.binary(_tree_order(m, profile))
    roots = [(a, tree_spec), (b, tree_spec)] + [(v, RootedTreeSpec.single()) for v in C if v not in (a, b) and g2mask >> v & 1]
    trees = _stage("trees", embed_forest_core, h, g2mask, roots, profile.search_budget, trace=trace)
    ta, tb = trees[a], trees[b]
    g3mask = g2mask & ~ta.mask & ~tb.mask
    pairs = list(zip(xs, ys))
    rungs = []
    if pairs:
        system = _stage(
            "pairs",
            connect_pairs_core,
            h,
            g3mask & ~cmask,
            pairs,
            g3mask & cmask,
            max(1, min(_tree_order(m, profile), 2 * t)),
            profile,
            trace=trace,
        )
        rungs = [list(p) for p in system.paths]
    q1 = _zigzag(a, js, xs, ys, b, rungs, True)
    q2 = _zigzag(a, [], xs, ys, b, rungs, False)
    # q2 starts on the y side: a, y_1 P_1 x_1, x_2 P_2 y_2, ...
    jset = set(C)
    for p in rungs:
        jset |= set(p)
    J = frozenset(lifted[v] for v in jset)
    gadget = Gadget(J, lifted[a], lifted[b], r, EXACT, (tuple(lifted[v] for v in q1), tuple(lifted[v] for v in q2)))
    errs = gadget.check(g)
    if errs:
        raise ConstructionError("small-gadget", "; ".join(errs), trace)
    lift_tree = lambda tr: EmbeddedTree(tr.spec, tuple(lifted[v] for v in tr.image))
    trace.append({"step": "small-gadget", "r": r, "order": gadget.order})
    return GadgetBuild(gadget, lift_tree(ta), lift_tree(tb), trace)


def _check_host(g: Graph, within: int, factor: float, k_parts: int, m: int) -> None:
    need = factor * k_parts * m
    if within.bit_count() < need:
        raise ParameterError(f"host has {within.bit_count()} vertices; the profile needs {need:g}")


def build_small_gadget(
    g: Graph,
    m: int,
    k_parts: int,
    r: int,
    profile: ConstantsProfile = DESK,
    seed: int = 0,
    within: Iterable[int] | None = None,
) -> GadgetBuild:
    """An r-gadget (r odd) with binary trees hanging off both endpoints."""
    if r < 1 or r % 2 == 0:
        raise ParameterError("r must be a positive odd integer")
    if r > m:
        raise ParameterError("need r <= m")
    wmask = g.full_mask if within is None else g.to_mask(within)
    _check_host(g, wmask, profile.small_gadget_factor, k_parts, m)
    return small_gadget_core(g, wmask, m, k_parts, r, profile, seed)


def doubling_gadget_core(
    g: Graph,
    within: int,
    m: int,
    k_parts: int,
    r: int,
    profile: ConstantsProfile,
    seed: int = 0,
    trace: list | None = None,
) -> GadgetBuild:
    trace = [] if trace is None else trace
    gmask = _expander(g, within, m, k_parts, profile.large_gadget, profile, seed, trace)
    cur = small_gadget_core(g, gmask, m, k_parts, 1, profile, seed + 1, trace)
    J = cur.gadget
    # a 1-gadget is a (<=1)-gadget: orders |J|, |J|-1
    witnesses = {len(w): w for w in J.witnesses}
    tree_a, tree_b = cur.tree_a, cur.tree_b
    for s in range(1, r + 1):
        r_new = 1 if s == 1 else 2 ** (s - 1) + 1
        taken = tree_a.mask | tree_b.mask
        for v in J.vertices:
            taken |= 1 << v
        nxt = small_gadget_core(g, gmask & ~taken, m, k_parts, r_new, profile, seed + 1 + s, trace)
        J2 = nxt.gadget
        jm = g.to_mask(J.vertices)
        j2m = g.to_mask(J2.vertices)
        # connector a -> b' through T_a, T'_b and free vertices
        blocked = (jm | j2m | tree_b.mask | nxt.tree_a.mask) & ~(1 << J.a) & ~(1 << J2.b)
        q = shortest_path(g, 1 << J.a, 1 << J2.b, gmask & ~blocked)
        if q is None:
            raise ConstructionError("doubling/connector", f"no connector at level {s}", trace)
        n_hat = J.order + J2.order + len(q) - 2
        long2 = J2.witness_of_order(J2.order)
        short2 = J2.witness_of_order(J2.order - J2.shortfall)
        q_back = list(reversed(q))  # b' ... a
        new_w = {}
        half = 2 ** (s - 1)
        for t in range(2 ** s + 1):
            if s == 1:
                # (<=1)+(1): Q0 Q R0, Q0 Q R1, Q1 Q R1
                outer, inner_cut = (long2, 0) if t == 0 else (short2, t - 1)
            elif t <= half:
                outer, inner_cut = long2, t
            else:
                outer, inner_cut = short2, t - half - 1
            inner = witnesses[J.order - inner_cut]
            path = list(outer) + q_back[1:-1] + list(inner)
            if len(path) != n_hat - t:
                raise ConstructionError("doubling/compose", f"composed order {len(path)} != {n_hat - t}", trace)
            new_w[len(path)] = tuple(path)
        verts = J.vertices | J2.vertices | frozenset(q)
        J = Gadget(verts, J2.a, J.b, 2 ** s, UPTO, tuple(new_w[n_hat - t] for t in range(2 ** s + 1)))
        errs = J.check(g)
        if errs:
            raise ConstructionError("doubling", "; ".join(errs), trace)
        witnesses = new_w
        tree_a, tree_b = nxt.tree_a, tree_b
        trace.append({"step": "doubling", "s": s, "order": J.order, "connector": len(q)})
    if r == 0:
        J = Gadget(J.vertices, J.a, J.b, 1, UPTO, tuple(witnesses[J.order - t] for t in range(2)))
    return GadgetBuild(J, tree_a, tree_b, trace)


def build_doubling_gadget(
    g: Graph,
    m: int,
    k_parts: int,
    r: int,
    profile: ConstantsProfile = DESK,
    seed: int = 0,
    within: Iterable[int] | None = None,
) -> GadgetBuild:
    """A (<=2^r)-gadget assembled by repeated doubling."""
    if r < 0 or r > log2_ceil(m):
        raise ParameterError("need 0 <= r <= ceil(log2 m)")
    wmask = g.full_mask if within is None else g.to_mask(within)
    _check_host(g, wmask, profile.large_gadget_factor, k_parts, m)
    return doubling_gadget_core(g, wmask, m, k_parts, r, profile, seed)


@dataclass
class ReturnBuild:
    result: GadgetWithReturn
    trace: list


def build_gadget_with_return(
    g: Graph,
    m: int,
    k_parts: int,
    lam: int,
    mu: int,
    profile: ConstantsProfile = DESK,
    seed: int = 0,
    within: Iterable[int] | None = None,
) -> ReturnBuild:
    """A (<=lam*m)-gadget of order (lam+mu)m with an internally disjoint return path of order mu*m."""
    if lam < 2 * mu:
        raise ParameterError("need lambda >= 2*mu")
    if 2 * mu < profile.lambda_min:
        raise ParameterError(f"need 2*mu >= {profile.lambda_min:g}")
    if mu * m < profile.return_size_coeff * (lam * m) ** 0.75:
        raise ParameterError("need mu*m >= coeff*(lambda*m)^(3/4)")
    wmask = g.full_mask if within is None else g.to_mask(within)
    need = profile.N1 * lam * mu * k_parts * m
    if wmask.bit_count() < need:
        raise ParameterError(f"host has {wmask.bit_count()} vertices; the profile needs {need:g}")
    trace: list = []
    return ReturnBuild(return_gadget_core(g, wmask, m, k_parts, lam, mu, profile, seed, trace), trace)


def return_gadget_core(
    g: Graph,
    within: int,
    m: int,
    k_parts: int,
    lam: int,
    mu: int,
    profile: ConstantsProfile,
    seed: int = 0,
    trace: list | None = None,
) -> GadgetWithReturn:
    trace = [] if trace is None else trace
    mt = lam * m
    r = log2_ceil(mt)
    gmask = _expander(g, within, mt, k_parts, profile.gadget_existence, profile, seed, trace)
    b1 = doubling_gadget_core(g, gmask, mt, k_parts, r, profile, seed + 100, trace)
    b2 = doubling_gadget_core(g, gmask & ~b1.reserved_mask, mt, k_parts, r, profile, seed + 200, trace)
    J1, J2 = b1.gadget, b2.gadget
    j12 = g.to_mask(J1.vertices) | g.to_mask(J2.vertices)
    blocked = (j12 | b1.tree_b.mask | b2.tree_b.mask) & ~(1 << J1.a) & ~(1 << J2.a)
    qa = shortest_path(g, 1 << J1.a, 1 << J2.a, gmask & ~blocked)
    if qa is None:
        raise ConstructionError("return/connector-a", "no a1-a2 connector", trace)
    blocked = (j12 | b1.tree_a.mask | b2.tree_a.mask | g.to_mask(qa)) & ~(1 << J1.b) & ~(1 << J2.b)
    qb = shortest_path(g, 1 << J1.b, 1 << J2.b, gmask & ~blocked)
    if qb is None:
        raise ConstructionError("return/connector-b", "no b1-b2 connector", trace)
    union = J1.order + J2.order + len(qa) + len(qb) - 4
    surplus = union - (lam + 2 * mu) * m + 2
    trace.append({"step": "sandwich", "union": union, "surplus": surplus, "J1": J1.order, "J2": J2.order,
                  "Qa": len(qa), "Qb": len(qb)})
    if not 0 <= surplus <= lam * m:
        raise ConstructionError("return/sandwich", f"surplus {surplus} outside [0, {lam * m}]", trace)
    if surplus > J1.shortfall:
        raise ConstructionError("return/sandwich", f"surplus {surplus} exceeds the gadget range {J1.shortfall}", trace)
    q1 = J1.witness_of_order(J1.order - surplus)
    line = list(reversed(qa)) + list(q1[1:]) + list(qb[1:])  # a2 ... a1 ... b1 ... b2
    if len(line) < mu * m:
        raise ConstructionError("return/cut", f"line of order {len(line)} shorter than mu*m", trace)
    qpath = line[: mu * m]
    a, b = qpath[0], qpath[-1]
    tail = line[mu * m - 1:]  # b ... b2
    new_w = []
    for t in range(lam * m + 1):
        inner = J2.witness_of_order(J2.order - t)  # a2 ... b2
        path = list(inner) + list(reversed(tail))[1:]
        new_w.append(tuple(path))
    verts = J2.vertices | frozenset(tail)
    gadget = Gadget(verts, a, b, lam * m, UPTO, tuple(new_w))
    res = GadgetWithReturn(gadget, tuple(reversed(qpath)))
    errs = res.check(g)
    if gadget.order != (lam + mu) * m:
        errs.append(f"gadget order {gadget.order} != (lambda+mu)m = {(lam + mu) * m}")
    if len(qpath) != mu * m:
        errs.append("return path order mismatch")
    if errs:
        raise ConstructionError("return", "; ".join(errs), trace)
    trace.append({"step": "gadget-with-return", "order": gadget.order, "return": len(qpath)})
    return res
