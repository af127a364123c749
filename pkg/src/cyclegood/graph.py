"""Immutable simple graphs over dense vertex ids with bitset neighborhoods.

A vertex set is passed around either as any iterable of ints (public API) or as
a Python int bitmask (internal hot loops). ``to_mask``/``members`` convert.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParameterError, VertexRangeError


def members(mask: int) -> list[int]:
    """Sorted vertex ids of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Graph:
    """Simple undirected graph on ``0..order-1``; adjacency stored as bitmasks."""

    __slots__ = ("order", "adj", "_full")

    def __init__(self, order: int, edges: Iterable[tuple[int, int]] = ()):
        if order < 0:
            raise ParameterError("order must be non-negative")
        adj = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise VertexRangeError(f"edge ({u},{v}) outside 0..{order - 1}")
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.order = order
        self.adj: tuple[int, ...] = tuple(adj)
        self._full = (1 << order) - 1

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.order = len(masks)
        g.adj = tuple(masks)
        g._full = (1 << g.order) - 1
        for v, a in enumerate(g.adj):
            if a >> v & 1 or a & ~g._full:
                raise ParameterError("adjacency masks not irreflexive/in range")
        for v, a in enumerate(g.adj):
            for u in iter_bits(a):
                if not g.adj[u] >> v & 1:
                    raise ParameterError("adjacency masks not symmetric")
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls.from_masks([full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @property
    def full_mask(self) -> int:
        return self._full

    def vertices(self) -> range:
        return range(self.order)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def to_mask(self, vs: Iterable[int] | int) -> int:
        if isinstance(vs, int):
            if vs & ~self._full:
                raise VertexRangeError("mask has bits outside the vertex range")
            return vs
        m = 0
        for v in vs:
            if not 0 <= v < self.order:
                raise VertexRangeError(f"vertex {v} outside 0..{self.order - 1}")
            m |= 1 << v
        return m

    def nbr_mask(self, mask: int) -> int:
        out = 0
        adj = self.adj
        while mask:
            low = mask & -mask
            out |= adj[low.bit_length() - 1]
            mask ^= low
        return out

    def is_path(self, seq: Sequence[int]) -> bool:
        if len(set(seq)) != len(seq) or not seq:
            return False
        if any(not 0 <= v < self.order for v in seq):
            return False
        return all(self.has_edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1))

    def is_cycle(self, seq: Sequence[int]) -> bool:
        return len(seq) >= 3 and self.is_path(seq) and self.has_edge(seq[-1], seq[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.edge_count()})"


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    return frozenset(members(g.nbr_mask(g.to_mask(s))))


def neighborhood_in(g: Graph, s: Iterable[int], u: Iterable[int]) -> frozenset[int]:
    return frozenset(members(g.nbr_mask(g.to_mask(s)) & g.to_mask(u)))


@dataclass(frozen=True)
class Relabel:
    """Bijection between a vertex subset of a parent graph and ``0..len-1``."""

    to_parent: tuple[int, ...]

    @property
    def to_child(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.to_parent)}

    def lift(self, seq: Iterable[int]) -> list[int]:
        return [self.to_parent[v] for v in seq]


def _compress_rows(rows: Sequence[int], cols: Sequence[int], order: int) -> list[int]:
    """Re-index each bitmask row onto the positions listed in ``cols``."""
    if not rows:
        return []
    nbytes = (order + 7) // 8 or 1
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(len(rows), nbytes), axis=1, bitorder="little")
    packed = np.packbits(bits[:, np.asarray(cols, dtype=np.intp)], axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def induced_subgraph(g: Graph, u: Iterable[int] | int) -> tuple[Graph, Relabel]:
    mask = g.to_mask(u)
    verts = members(mask)
    masks = _compress_rows([g.adj[v] & mask for v in verts], verts, g.order)
    sub = Graph.__new__(Graph)
    sub.order = len(verts)
    sub.adj = tuple(masks)
    sub._full = (1 << sub.order) - 1
    return sub, Relabel(tuple(verts))


def complement(g: Graph) -> Graph:
    full = g.full_mask
    h = Graph.__new__(Graph)
    h.order = g.order
    h.adj = tuple(full ^ a ^ (1 << v) for v, a in enumerate(g.adj))
    h._full = full
    return h


def restrict(g: Graph, mask: int) -> Graph:
    """Same vertex ids, only edges inside ``mask`` kept (vertices outside become isolated)."""
    h = Graph.__new__(Graph)
    h.order = g.order
    h.adj = tuple((a & mask) if mask >> v & 1 else 0 for v, a in enumerate(g.adj))
    h._full = g.full_mask
    return h


def bfs_distances(g: Graph, src: int, allowed: int | None = None) -> dict[int, int]:
    allowed = g.full_mask if allowed is None else allowed
    dist = {src: 0}
    seen = 1 << src
    frontier = 1 << src
    d = 0
    while frontier:
        d += 1
        nxt = g.nbr_mask(frontier) & allowed & ~seen
        for v in iter_bits(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def shortest_path(g: Graph, src_mask: int, dst_mask: int, allowed: int | None = None) -> list[int] | None:
    """Shortest path from any vertex of ``src_mask`` to any of ``dst_mask`` inside ``allowed``.

    Ties resolve to the lowest ids (parents are assigned in increasing order).
    Endpoints must themselves lie in ``allowed``.
    """
    allowed = g.full_mask if allowed is None else allowed
    src_mask &= allowed
    dst_mask &= allowed
    if not src_mask or not dst_mask:
        return None
    hit = src_mask & dst_mask
    if hit:
        return [lowest(hit)]
    parent: dict[int, int] = {}
    seen = src_mask
    frontier = src_mask
    adj = g.adj
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            new = adj[u] & allowed & ~seen & ~nxt
            for v in iter_bits(new):
                parent[v] = u
            nxt |= new
        if not nxt:
            return None
        hit = nxt & dst_mask
        if hit:
            v = lowest(hit)
            path = [v]
            while v in parent:
                v = parent[v]
                path.append(v)
            path.reverse()
            return path
        seen |= nxt
        frontier = nxt
    return None


def components(g: Graph, mask: int | None = None) -> list[int]:
    """Connected components (as masks) of the subgraph induced on ``mask``."""
    mask = g.full_mask if mask is None else mask
    out = []
    rest = mask
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            frontier = g.nbr_mask(frontier) & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


@dataclass(frozen=True)
class TwoColoring:
    """Red/blue coloring of the complete graph on ``order`` vertices, stored as the red graph."""

    red: Graph

    @property
    def order(self) -> int:
        return self.red.order

    @property
    def blue(self) -> Graph:
        return complement(self.red)

    @classmethod
    def all_red(cls, n: int) -> "TwoColoring":
        return cls(Graph.complete(n))

    @classmethod
    def all_blue(cls, n: int) -> "TwoColoring":
        return cls(Graph(n))
