"""Text formats: edge lists, graph6, and two-coloring files."""
from __future__ import annotations

from pathlib import Path

from .errors import ParameterError
from .graph import Graph, TwoColoring

COLORING_HEADER = "red-of-complete"


def _data_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]


def format_edge_list(g: Graph) -> str:
    lines = [str(g.order)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    lines = _data_lines(text)
    if not lines:
        raise ParameterError("empty edge list")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(ln)
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        raise ParameterError(f"malformed edge list line: {exc}") from None
    return Graph(n, edges)


def format_coloring(c: TwoColoring) -> str:
    body = format_edge_list(c.red).split("\n", 1)[1]
    return f"{COLORING_HEADER} {c.order}\n{body}"


def parse_coloring(text: str) -> TwoColoring:
    lines = _data_lines(text)
    if not lines or not lines[0].startswith(COLORING_HEADER):
        raise ParameterError(f"coloring file must start with '{COLORING_HEADER} N'")
    head = lines[0].split()
    if len(head) != 2:
        raise ParameterError("malformed coloring header")
    return TwoColoring(parse_edge_list("\n".join([head[1]] + lines[1:])))


def _encode_n(n: int) -> str:
    if n < 0:
        raise ParameterError("negative order")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bits = []
    for j in range(1, g.order):
        row = g.adj[j]
        for i in range(j):
            bits.append(row >> i & 1)
    bits += [0] * (-len(bits) % 6)
    chunks = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chunks.append(chr(val + 63))
    return _encode_n(g.order) + "".join(chunks)


def from_graph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise ParameterError("empty graph6 string")
    vals = [ord(ch) - 63 for ch in s]
    if any(v < 0 or v > 63 for v in vals):
        raise ParameterError("graph6 characters out of range")
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) > 1 and vals[1] == 63:
        if len(vals) < 8:
            raise ParameterError("truncated graph6 order")
        n, pos = 0, 8
        for v in vals[2:8]:
            n = (n << 6) | v
    else:
        if len(vals) < 4:
            raise ParameterError("truncated graph6 order")
        n, pos = 0, 4
        for v in vals[1:4]:
            n = (n << 6) | v
    need = n * (n - 1) // 2
    data = vals[pos:]
    if len(data) != (need + 5) // 6:
        raise ParameterError(f"graph6 body length {len(data)} does not match order {n}")
    bits = []
    for v in data:
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    if any(bits[need:]):
        raise ParameterError("graph6 padding bits must be zero")
    return Graph(n, edges)


def read_graph(path: str | Path) -> Graph:
    text = Path(path).read_text()
    stripped = text.strip()
    if stripped and "\n" not in stripped and " " not in stripped and not stripped.isdigit():
        return from_graph6(stripped)
    return parse_edge_list(text)


def read_coloring(path: str | Path) -> TwoColoring:
    return parse_coloring(Path(path).read_text())


def write_coloring(c: TwoColoring, path: str | Path) -> None:
    Path(path).write_text(format_coloring(c))
