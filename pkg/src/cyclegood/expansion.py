"""Vertex-expansion notions, their checkers, and expander extraction.

Two notions are checked:

* ``(delta, beta, m)``-expansion into ``W``: sets S with |S| < m have
  |N(S) ∩ W| >= delta|S|, and sets with m <= |S| <= |G|/2 have
  |N(S) ∪ S| >= |S| + beta*m.
* ``(d, m, n)``-expander H inside G: sets S ⊆ H with |S| < m have
  |N(S) ∩ H| >= d|S|, and sets with |S| >= m have |N_G(S) ∪ S| >= n.

Verdicts are three-valued. A falsified verdict always carries a set that has
been re-checked by direct neighborhood computation.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, HypothesisFalsified, ParameterError, SearchBudgetExhausted
from .graph import Graph, components, iter_bits, lowest, members, shortest_path
from .profile import DESK, ConstantsProfile
from .search import (
    MultipartiteWitness,
    find_complete_multipartite,
    find_cycle_at_least,
    vertex_disjoint_paths,
)

VERIFIED = "verified-exhaustively"
FALSIFIED = "falsified"
NOT_FALSIFIED = "not-falsified"


@dataclass(frozen=True)
class ExpansionParams:
    delta: float
    beta: float
    m: int

    def __post_init__(self):
        if self.delta < 0 or self.beta < 0 or self.m < 1:
            raise ParameterError("expansion params need delta >= 0, beta >= 0, m >= 1")

    def to_json(self) -> dict:
        return {"delta": self.delta, "beta": self.beta, "m": self.m}


@dataclass(frozen=True)
class DmnParams:
    d: float
    m: int
    n: int

    def __post_init__(self):
        if self.d < 0 or self.m < 1 or self.n < 1:
            raise ParameterError("(d,m,n) params need d >= 0, m >= 1, n >= 1")

    def to_json(self) -> dict:
        return {"d": self.d, "m": self.m, "n": self.n}


@dataclass
class ExpansionVerdict:
    status: str
    params: dict
    mode: str
    budget_used: int = 0
    violating_set: tuple[int, ...] | None = None
    clause: str | None = None

    @property
    def holds(self) -> bool:
        """True unless a violating set was found."""
        return self.status != FALSIFIED

    def to_json(self) -> dict:
        out = {"status": self.status, "params": self.params, "mode": self.mode, "budget_used": self.budget_used}
        if self.violating_set is not None:
            out["violating_set"] = list(self.violating_set)
            out["clause"] = self.clause
        return out


# ---------------------------------------------------------------- direct clause evaluation

def _expands_violation(g: Graph, vmask: int, wmask: int, p: ExpansionParams, s: int) -> str | None:
    """Which clause of (delta,beta,m)-expansion of G[vmask] into W the set ``s`` violates."""
    k = s.bit_count()
    if k == 0:
        return None
    n = vmask.bit_count()
    nb = g.nbr_mask(s) & vmask
    if k < p.m and (nb & wmask).bit_count() < p.delta * k:
        return "i"
    if p.m <= k <= n / 2 and (nb | s).bit_count() < k + p.beta * p.m:
        return "ii"
    return None


def _dmn_violation(g: Graph, hmask: int, gmask: int, p: DmnParams, s: int) -> str | None:
    k = s.bit_count()
    if k == 0:
        return None
    nb = g.nbr_mask(s)
    if k < p.m and (nb & hmask).bit_count() < p.d * k:
        return "i"
    if k >= p.m and ((nb & gmask) | s).bit_count() < p.n:
        return "ii"
    return None


# ---------------------------------------------------------------- exact enumeration

def _subset_tables(local_adj: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    n = len(local_adj)
    nbr = np.zeros(1 << n, dtype=np.uint32)
    for i, a in enumerate(local_adj):
        lo = 1 << i
        nbr[lo: lo << 1] = nbr[:lo] | np.uint32(a)
    size = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int32)
    return nbr, size


def _first_violation(bad: np.ndarray, size: np.ndarray) -> int | None:
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return None
    # smallest set first, then lowest index
    best = idx[np.lexsort((idx, size[idx]))[0]]
    return int(best)


def _localize(g: Graph, vmask: int) -> tuple[list[int], list[int]]:
    verts = members(vmask)
    index = {v: i for i, v in enumerate(verts)}
    local = []
    for v in verts:
        a = 0
        for w in iter_bits(g.adj[v] & vmask):
            a |= 1 << index[w]
        local.append(a)
    return verts, local


def _lift(verts: list[int], local_mask: int) -> int:
    out = 0
    for i in iter_bits(local_mask):
        out |= 1 << verts[i]
    return out


def _exact_expands(g: Graph, vmask: int, wmask: int, p: ExpansionParams) -> tuple[int | None, int]:
    verts, local = _localize(g, vmask)
    n = len(verts)
    wl = 0
    for i, v in enumerate(verts):
        if wmask >> v & 1:
            wl |= 1 << i
    nbr, size = _subset_tables(local)
    idx = np.arange(1 << n, dtype=np.uint32)
    nw = np.bitwise_count(nbr & np.uint32(wl)).astype(np.int64)
    closed = np.bitwise_count(nbr | idx).astype(np.int64)
    bad_i = (size >= 1) & (size < p.m) & (nw < p.delta * size)
    bad_ii = (size >= p.m) & (size <= n / 2) & (closed < size + p.beta * p.m)
    hit = _first_violation(bad_i | bad_ii, size)
    return (None if hit is None else _lift(verts, hit)), 1 << n


def _exact_dmn(g: Graph, hmask: int, gmask: int, p: DmnParams) -> tuple[int | None, int]:
    verts, local = _localize(g, hmask)
    n = len(verts)
    nbr, size = _subset_tables(local)
    idx = np.arange(1 << n, dtype=np.uint32)
    n_in_h = np.bitwise_count(nbr).astype(np.int64)
    closed_in_h = np.bitwise_count(nbr | idx).astype(np.int64)
    # vertices of G outside H adjacent to S, grouped by their trace on H
    traces: dict[int, int] = {}
    index = {v: i for i, v in enumerate(verts)}
    for u in iter_bits(gmask & ~hmask):
        t = 0
        for w in iter_bits(g.adj[u] & hmask):
            t |= 1 << index[w]
        if t:
            traces[t] = traces.get(t, 0) + 1
    outside = np.zeros(1 << n, dtype=np.int64)
    for t, count in traces.items():
        outside += count * ((idx & np.uint32(t)) != 0)
    bad_i = (size >= 1) & (size < p.m) & (n_in_h < p.d * size)
    bad_ii = (size >= p.m) & (closed_in_h + outside < p.n)
    hit = _first_violation(bad_i | bad_ii, size)
    return (None if hit is None else _lift(verts, hit)), 1 << n


# ---------------------------------------------------------------- randomized falsifier

class _Falsifier:
    """Seeded local search for a set violating one of the two clauses.

    ``score(s, nb)`` gets the set and its neighborhood and returns
    (value, clause) where value < 0 means violation.
    """

    def __init__(self, g: Graph, vmask: int, score, lo: int, hi: int, profile: ConstantsProfile, seed: int):
        self.g = g
        self.vmask = vmask
        self.verts = members(vmask)
        self.score = score
        self.lo, self.hi = lo, hi
        self.rng = random.Random(seed)
        self.prof = profile
        self.evals = 0
        self.perm = list(self.verts)
        self.rng.shuffle(self.perm)
        self.cursor = 0

    def _eval(self, s: int, nb: int):
        self.evals += 1
        return self.score(s, nb)

    def run(self, seeds: Iterable[int]) -> int | None:
        for s in seeds:
            if self.lo <= s.bit_count() <= self.hi:
                val, _ = self._eval(s, self.g.nbr_mask(s))
                if val < 0:
                    return s
        if not self.verts:
            return None
        for _ in range(self.prof.falsifier_restarts):
            start = 1 << self.rng.choice(self.verts)
            hit = self._grow(start)
            if hit is not None:
                return hit
        return None

    def _sample(self, mask: int) -> list[int]:
        """Up to ``falsifier_pool`` members of ``mask``, read off a seeded cyclic permutation."""
        want = self.prof.falsifier_pool
        if mask.bit_count() <= want:
            return members(mask)
        perm, n = self.perm, len(self.perm)
        out = []
        i = self.cursor
        for _ in range(n):
            v = perm[i]
            i = i + 1 if i + 1 < n else 0
            if mask >> v & 1:
                out.append(v)
                if len(out) == want:
                    break
        self.cursor = i
        return out

    def _grow(self, s: int) -> int | None:
        g, vmask = self.g, self.vmask
        adj = g.adj
        nb = g.nbr_mask(s)
        steps = 0
        limit = max(self.hi, 1)
        while s.bit_count() < limit and steps < limit + self.prof.falsifier_moves:
            steps += 1
            near = (nb & vmask) & ~s
            if not near:
                near = vmask & ~s
            if not near:
                return None
            pool = self._sample(near)
            best = None
            for v in pool:
                t = s | (1 << v)
                val, _ = self._eval(t, nb | adj[v])
                if self.lo <= t.bit_count() <= self.hi and val < 0:
                    return t
                key = (val, v)
                if best is None or key < best[0]:
                    best = (key, t, nb | adj[v])
            _, s, nb = best
        return None


def _mode_for(n_subsets_log2: float, mode: str, threshold: int) -> str:
    if mode == "auto":
        return "exact" if n_subsets_log2 <= threshold else "randomized"
    if mode == "exact" and n_subsets_log2 > threshold:
        raise ParameterError(
            f"exact mode needs at most 2^{threshold} subsets; this instance needs 2^{n_subsets_log2:.1f}"
        )
    if mode not in ("exact", "randomized"):
        raise ParameterError(f"unknown mode {mode}")
    return mode


def expands_into_mask(
    g: Graph,
    vmask: int,
    wmask: int,
    p: ExpansionParams,
    mode: str = "auto",
    profile: ConstantsProfile = DESK,
    seed: int = 0,
) -> ExpansionVerdict:
    """(delta,beta,m)-expansion of the induced subgraph G[vmask] into W (W ⊆ vmask)."""
    n = vmask.bit_count()
    mode = _mode_for(n, mode, profile.exhaustive_threshold)
    params = p.to_json()
    if mode == "exact":
        hit, used = _exact_expands(g, vmask, wmask, p)
        if hit is None:
            return ExpansionVerdict(VERIFIED, params, mode, used)
        clause = _expands_violation(g, vmask, wmask, p, hit)
        assert clause is not None, "exact enumeration reported a non-violating set"
        return ExpansionVerdict(FALSIFIED, params, mode, used, tuple(members(hit)), clause)

    def score(s: int, nb: int):
        k = s.bit_count()
        nb &= vmask
        if k < p.m:
            return (nb & wmask).bit_count() - p.delta * k, "i"
        return (nb | s).bit_count() - k - p.beta * p.m, "ii"

    seeds = [1 << v for v in iter_bits(vmask)]
    comps = sorted(components(g, vmask), key=lambda c: (c.bit_count(), lowest(c)))
    acc = 0
    for c in comps:
        acc |= c
        seeds.append(c)
        seeds.append(acc)
    fals = _Falsifier(g, vmask, score, 1, n // 2, profile, seed)
    hit = fals.run(seeds)
    if hit is not None:
        clause = _expands_violation(g, vmask, wmask, p, hit)
        if clause is not None:
            return ExpansionVerdict(FALSIFIED, params, mode, fals.evals, tuple(members(hit)), clause)
    return ExpansionVerdict(NOT_FALSIFIED, params, mode, fals.evals)


def check_expands_into(
    g: Graph,
    w: Iterable[int],
    p: ExpansionParams,
    mode: str = "exact",
    profile: ConstantsProfile = DESK,
    seed: int = 0,
) -> ExpansionVerdict:
    """Check that ``g`` (delta,beta,m)-expands into ``w``."""
    wmask = g.to_mask(w)
    return expands_into_mask(g, g.full_mask, wmask, p, mode, profile, seed)


def dmn_mask(
    g: Graph,
    hmask: int,
    gmask: int,
    p: DmnParams,
    mode: str = "auto",
    profile: ConstantsProfile = DESK,
    seed: int = 0,
) -> ExpansionVerdict:
    n = hmask.bit_count()
    mode = _mode_for(n, mode, profile.exhaustive_threshold)
    params = p.to_json()
    if mode == "exact":
        hit, used = _exact_dmn(g, hmask, gmask, p)
        if hit is None:
            return ExpansionVerdict(VERIFIED, params, mode, used)
        clause = _dmn_violation(g, hmask, gmask, p, hit)
        assert clause is not None, "exact enumeration reported a non-violating set"
        return ExpansionVerdict(FALSIFIED, params, mode, used, tuple(members(hit)), clause)

    def score(s: int, nb: int):
        k = s.bit_count()
        if k < p.m:
            return (nb & hmask).bit_count() - p.d * k, "i"
        return ((nb & gmask) | s).bit_count() - p.n, "ii"

    seeds = [1 << v for v in iter_bits(hmask)]
    for c in components(g, hmask):
        seeds.append(c)
    # clause (ii) is monotone in S, so growth stops once |S| = m
    fals = _Falsifier(g, hmask, score, 1, min(p.m, n), profile, seed)
    hit = fals.run(seeds)
    if hit is not None:
        clause = _dmn_violation(g, hmask, gmask, p, hit)
        if clause is not None:
            return ExpansionVerdict(FALSIFIED, params, mode, fals.evals, tuple(members(hit)), clause)
    return ExpansionVerdict(NOT_FALSIFIED, params, mode, fals.evals)


def check_dmn_expander(
    h_vertices: Iterable[int],
    g: Graph,
    p: DmnParams,
    mode: str = "exact",
    profile: ConstantsProfile = DESK,
    seed: int = 0,
) -> ExpansionVerdict:
    """Check that G[h_vertices] is a (d,m,n)-expander in ``g``."""
    hmask = g.to_mask(h_vertices)
    return dmn_mask(g, hmask, g.full_mask, p, mode, profile, seed)


# ---------------------------------------------------------------- multipartite-free extraction

def _target_order(M: float, k: int, m: int) -> float:
    return M * (k - 1.5) * m


def _part_count(size: int, M: float, m: int) -> int:
    """Largest s with size >= M(s-1.5)m."""
    return int(math.floor(size / (M * m) + 1.5 + 1e-12))


def _find_split_set(g: Graph, vmask: int, m: int, beta: float, profile: ConstantsProfile, seed: int) -> int | None:
    """A set S with m <= |S| <= |G|/2 and |N(S) ∪ S| < |S| + (beta+1)m, if the heuristics find one."""
    n = vmask.bit_count()
    if n // 2 < m:
        return None
    limit = (beta + 1) * m

    def score(s: int, nb: int):
        k = s.bit_count()
        if k < m:
            return 1, "split"
        return ((nb & vmask) | s).bit_count() - k - limit, "split"

    seeds = []
    comps = sorted(components(g, vmask), key=lambda c: (c.bit_count(), lowest(c)))
    acc = 0
    for c in comps:
        acc |= c
        seeds += [c, acc]
    fals = _Falsifier(g, vmask, score, m, n // 2, profile, seed)
    return fals.run(seeds)


def _grow_sparse_set(g: Graph, vmask: int, limit: int, ratio: float, base: int = 0) -> int:
    """Greedily enlarge ``base`` by vertices while |S| <= limit and |N(S)∖S| < ratio|S|."""
    s = base
    changed = True
    order = sorted(iter_bits(vmask & ~base), key=lambda v: ((g.adj[v] & vmask).bit_count(), v))
    while changed:
        changed = False
        for v in order:
            if s >> v & 1:
                continue
            t = s | (1 << v)
            if t.bit_count() > limit:
                return s
            if ((g.nbr_mask(t) & vmask) & ~t).bit_count() < ratio * t.bit_count():
                s = t
                changed = True
    return s


def _trim_to(g: Graph, vmask: int, size: int) -> int:
    if vmask.bit_count() <= size:
        return vmask
    ranked = sorted(iter_bits(vmask), key=lambda v: (-(g.adj[v] & vmask).bit_count(), v))
    out = 0
    for v in ranked[:size]:
        out |= 1 << v
    return out


def smallest_part_count(g: Graph, vmask: int, m: int, kmax: int, budget: int | None) -> int | None:
    """Smallest k with the complement of G[vmask] free of K_m^k (None if not within kmax)."""
    from .graph import complement

    comp = complement(g)
    for k in range(1, kmax + 1):
        if find_complete_multipartite(comp, [m] * k, budget=budget, within=vmask) is None:
            return k
    return None


def multipartite_expander_core(
    g: Graph,
    vmask: int,
    m: int,
    M: float,
    delta: float,
    beta: float,
    k: int,
    profile: ConstantsProfile,
    seed: int = 0,
    cap_to_available: bool = False,
    trace: list | None = None,
    max_rounds: int = 64,
) -> tuple[int, int, list]:
    """Recursive extraction; returns (k', H mask, trace).

    With ``cap_to_available`` the target order is clipped to the vertices at
    hand, which is how desk-scale builders run the recipe on small hosts.
    """
    from .graph import complement

    trace = [] if trace is None else trace
    params = ExpansionParams(delta, beta, m)
    comp = None
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise ConstructionError("expander", "no certified expander within the round budget", trace)
        target = _target_order(M, k, m)
        if cap_to_available:
            target = min(target, vmask.bit_count())
        size = int(math.floor(target + 1e-9))
        if vmask.bit_count() < size or size < 1:
            raise ConstructionError("expander", f"only {vmask.bit_count()} vertices for target {target:.1f}", trace)
        vmask = _trim_to(g, vmask, size)
        split = _find_split_set(g, vmask, m, beta, profile, seed + rounds)
        if split is not None:
            rest = vmask & ~(split | g.nbr_mask(split))
            s_cnt = _part_count(split.bit_count(), M, m)
            s_new = max(1, min(s_cnt, k - 1))
            t_new = k - s_new
            trace.append({"step": "split", "k": k, "S": split.bit_count(), "T": rest.bit_count(), "s": s_new, "t": t_new})
            if comp is None:
                comp = complement(g)
            wit_s = find_complete_multipartite(comp, [m] * s_new, budget=profile.search_budget, within=split)
            if wit_s is None:
                vmask, k = split, s_new
                continue
            wit_t = find_complete_multipartite(comp, [m] * t_new, budget=profile.search_budget, within=rest) if rest else None
            if wit_t is None and rest.bit_count() >= m * t_new and t_new >= 1:
                vmask, k = rest, t_new
                continue
            if wit_t is not None:
                # no edges between S and T, so the two complement witnesses combine
                parts = tuple(sorted(wit_s.parts + wit_t.parts))
                raise HypothesisFalsified(
                    "expander", f"complement contains K_{m}^{k}", MultipartiteWitness(parts), trace
                )
            raise ConstructionError("expander", "split set found but neither side admits recursion", trace)
        removed = _grow_sparse_set(g, vmask, 2 * m, delta + 1)
        hmask = vmask & ~removed
        if removed:
            trace.append({"step": "remove-sparse", "k": k, "removed": removed.bit_count()})
        while True:
            verdict = expands_into_mask(g, hmask, hmask, params, "auto", profile, seed + rounds)
            if verdict.status != FALSIFIED:
                break
            bad = g.to_mask(verdict.violating_set)
            if verdict.clause == "i" and (removed | bad).bit_count() <= 2 * m:
                removed |= bad
                hmask &= ~bad
                trace.append({"step": "remove-violator", "k": k, "size": bad.bit_count()})
                continue
            break
        if verdict.status == FALSIFIED:
            # a clause (ii) violator is a split set for the next round
            trace.append({"step": "recheck", "k": k, "clause": verdict.clause})
            vmask = hmask
            continue
        lo = _target_order(M, k, m) - m
        hi = _target_order(M, k, m)
        if cap_to_available:
            hi = size
            lo = size - m
        trace.append({"step": "certified", "k": k, "order": hmask.bit_count(), "status": verdict.status})
        if not lo - 1e-9 <= hmask.bit_count() <= hi + 1e-9:
            raise ConstructionError(
                "expander", f"order {hmask.bit_count()} outside [{lo:.1f}, {hi:.1f}]", trace, verdict
            )
        return k, hmask, trace


def extract_multipartite_expander(
    g: Graph,
    m: int,
    M: float,
    delta: float,
    beta: float,
    k: int | None = None,
    profile: ConstantsProfile = DESK,
    seed: int = 0,
) -> tuple[int, frozenset[int], list]:
    """Find k' and H ⊆ V(g) such that H (delta,beta,m)-expands into itself.

    ``k`` is the caller's claim that the complement of g is K_m^k-free; when
    omitted the smallest such k is found by exhaustive search.
    """
    if not beta + 2 < M / 4:
        raise ParameterError("need beta + 2 < M/4")
    if not 3 * delta < beta:
        raise ParameterError("need 3*delta < beta")
    if m < 1:
        raise ParameterError("m must be >= 1")
    if k is None:
        kmax = max(1, int(g.order // m))
        k = smallest_part_count(g, g.full_mask, m, kmax, profile.search_budget)
        if k is None:
            raise ParameterError("complement contains K_m^k for every k that fits")
    if k < 2:
        raise ParameterError("k must be >= 2 (K_m^1-freeness forces fewer than m vertices)")
    if g.order < max(m, _target_order(M, k, m)):
        raise ParameterError(f"need |g| >= max(m, M(k-1.5)m) = {max(m, _target_order(M, k, m)):.1f}")
    kk, hmask, trace = multipartite_expander_core(g, g.full_mask, m, M, delta, beta, k, profile, seed)
    return kk, frozenset(members(hmask)), trace


# ---------------------------------------------------------------- (d,m,n)-expanders

def bipartite_expander_core(
    g: Graph,
    umask: int,
    m: int,
    d: float,
    n: int,
    profile: ConstantsProfile,
    seed: int = 0,
    trace: list | None = None,
) -> tuple[int, int, ExpansionVerdict]:
    trace = [] if trace is None else trace
    b = _grow_sparse_set(g, umask, int((d + 3) * m), d + 1)
    params = DmnParams(d, int((d + 2) * m), n)
    for _ in range(4 * m + 4):
        hmask = umask & ~b
        verdict = dmn_mask(g, hmask, g.full_mask & ~b, params, "auto", profile, seed)
        if verdict.status != FALSIFIED:
            trace.append({"step": "bipartite-expander", "removed": b.bit_count(), "status": verdict.status})
            return b, hmask, verdict
        if verdict.clause != "i":
            raise ConstructionError(
                "bipartite-expander", "absorption clause falsified; the n-absorption claim is false", trace, verdict
            )
        b |= g.to_mask(verdict.violating_set)
    raise ConstructionError("bipartite-expander", "removal did not converge", trace)


def extract_bipartite_expander(
    g: Graph,
    u: Iterable[int],
    m: int,
    d: float,
    n: int,
    profile: ConstantsProfile = DESK,
    seed: int = 0,
    strict: bool = True,
) -> tuple[frozenset[int], frozenset[int], ExpansionVerdict]:
    """Return (B, H = U∖B, verdict) with G[H] certified as a (d,(d+2)m,n)-expander in G∖B."""
    umask = g.to_mask(u)
    if strict:
        if not n > (d + 2) * (d + 3) * m:
            raise ParameterError("need n > (d+2)(d+3)m")
        if umask.bit_count() < (d + 3) ** 2 * m:
            raise ParameterError("need |U| >= (d+3)^2 m")
    trace: list = []
    b, hmask, verdict = bipartite_expander_core(g, umask, m, d, n, profile, seed, trace)
    if strict and b.bit_count() >= m:
        raise ConstructionError("bipartite-expander", f"|B| = {b.bit_count()} >= m", trace, verdict)
    return frozenset(members(b)), frozenset(members(hmask)), verdict


def expander_short_path(g: Graph, h: Iterable[int], p: DmnParams, x: int, y: int, profile: ConstantsProfile = DESK) -> list[int]:
    hmask = g.to_mask(h)
    if not (hmask >> x & 1 and hmask >> y & 1):
        raise ParameterError("x and y must lie in h")
    path = shortest_path(g, 1 << x, 1 << y, hmask)
    if path is None:
        raise ConstructionError("short-path", "no x-y path inside h")
    bound = profile.bound(3 * math.log2(p.m)) if p.m > 1 else profile.slack
    if len(path) > max(bound, 2 if x != y else 1):
        raise ConstructionError("short-path", f"shortest path has order {len(path)} > {bound}")
    return path


@dataclass
class ConnectivityVerdict:
    connected: bool
    d: int
    cut: tuple[int, ...] | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"connected": self.connected, "d": self.d, "cut": None if self.cut is None else list(self.cut), "reason": self.reason}


def expander_connectivity(g: Graph, h: Iterable[int], d: int) -> ConnectivityVerdict:
    """Exact d-connectivity of G[h] by Menger over every non-adjacent pair."""
    hmask = g.to_mask(h)
    verts = members(hmask)
    if len(verts) <= d:
        return ConnectivityVerdict(False, d, None, f"only {len(verts)} vertices")
    for i, x in enumerate(verts):
        for y in verts[i + 1:]:
            if g.has_edge(x, y):
                continue
            res = vertex_disjoint_paths(g, [x], [y], d, allowed=hmask)
            if not res.found:
                return ConnectivityVerdict(False, d, tuple(sorted(res.separator)), f"separates {x} and {y}")
    return ConnectivityVerdict(True, d)


def chord_shorten(g: Graph, path: list[int], lo: int, hi: int, span: int | None = None) -> list[int]:
    """Shortcut ``path`` along chords (endpoints fixed) until its order is <= hi, never below lo.

    Raises HypothesisFalsified when a window of 2*span+1 consecutive vertices
    has no chord, which exhibits K_{span,span} in the complement.
    """
    path = list(path)
    while len(path) > hi:
        pos = {v: i for i, v in enumerate(path)}
        allowance = len(path) - lo
        best = None
        for i, u in enumerate(path):
            for v in iter_bits(g.adj[u]):
                j = pos.get(v)
                if j is None or j <= i + 1:
                    continue
                drop = j - i - 1
                if drop <= allowance and (best is None or drop > best[0]):
                    best = (drop, i, j)
        if best is None:
            if span is not None:
                raise _no_chord_witness(g, path, span)
            raise ConstructionError("chord-shorten", f"no usable chord; order stuck at {len(path)}")
        _, i, j = best
        path = path[: i + 1] + path[j:]
    return path


def _no_chord_witness(g: Graph, path: list[int], span: int) -> CycleGoodErrorLike:
    for start in range(0, len(path) - 2 * span):
        a = path[start: start + span]
        b = path[start + span + 1: start + 2 * span + 1]
        if len(b) == span and all(not g.has_edge(x, y) for x in a for y in b):
            wit = MultipartiteWitness((tuple(sorted(a)), tuple(sorted(b))))
            return HypothesisFalsified("chord-shorten", f"complement contains K_{{{span},{span}}}", wit)
    return ConstructionError("chord-shorten", "no usable chord")


CycleGoodErrorLike = Exception


def expander_long_path(
    g: Graph,
    h: Iterable[int],
    p: DmnParams,
    x: int,
    y: int,
    profile: ConstantsProfile = DESK,
    strict: bool = True,
) -> list[int]:
    """x-y path inside h with 10m <= order <= 12m."""
    hmask = g.to_mask(h)
    m = p.m
    if strict and hmask.bit_count() < 61 * m:
        raise ParameterError("need |h| >= 61m")
    if not (hmask >> x & 1 and hmask >> y & 1) or x == y:
        raise ParameterError("x, y must be distinct vertices of h")
    from .graph import induced_subgraph

    inner = hmask & ~(1 << x) & ~(1 << y)
    sub, rel = induced_subgraph(g, inner)
    try:
        cyc = find_cycle_at_least(sub, 20 * m, budget=profile.search_budget)
    except SearchBudgetExhausted as exc:
        raise ConstructionError("long-path", f"cycle search: {exc}") from None
    if cyc is None:
        raise ConstructionError("long-path", f"no cycle of order >= {20 * m} avoiding x, y")
    cycle = rel.lift(cyc.vertices)
    cmask = g.to_mask(cycle)
    res = vertex_disjoint_paths(g, [x, y], cmask, 2, allowed=hmask)
    if not res.found:
        raise ConstructionError("long-path", "x and y cannot reach the cycle disjointly")
    px = next(pth for pth in res.paths.paths if pth[0] == x)
    py = next(pth for pth in res.paths.paths if pth[0] == y)
    cx, cy = px[-1], py[-1]
    i, j = cycle.index(cx), cycle.index(cy)
    L = len(cycle)
    fwd = [cycle[(i + t) % L] for t in range((j - i) % L + 1)]
    bwd = [cycle[(i - t) % L] for t in range((i - j) % L + 1)]
    arc = fwd if len(fwd) >= len(bwd) else bwd
    path = list(px[:-1]) + arc + list(reversed(py[:-1]))
    assert g.is_path(path) and path[0] == x and path[-1] == y
    path = chord_shorten(g, path, 10 * m, 12 * m, span=m)
    if not 10 * m <= len(path) <= 12 * m:
        raise ConstructionError("long-path", f"order {len(path)} outside [{10 * m}, {12 * m}]")
    assert g.is_path(path)
    return path
