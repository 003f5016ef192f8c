"""Simple undirected graphs on vertices ``1..n``, plus ingestion and BFS utilities."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from .linalg import ExactMatrix

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Malformed graph input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DisconnectedGraphError(ValueError):
    def __init__(self, u: int, v: int):
        self.pair = (u, v)
        super().__init__(f"graph is disconnected: vertex {v} unreachable from {u}")


@dataclass(frozen=True)
class Graph:
    """Labeled simple graph.  Vertices are ``1..n``; ``edges`` sorted ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n!r}")
        n = self.n
        canon = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u > v:
                u, v = v, u
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u < 1 or v > n:
                raise ValueError(f"edge {{{u},{v}}} out of range 1..{n}")
            canon.append((u, v))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {{{a[0]},{a[1]}}}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(1, self.n + 1)]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def to_edge_list(self) -> str:
        lines = [f"n {self.n}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# ingestion


def graph_from_edge_list(text: str) -> Graph:
    """Parse the ``n <count>`` / ``u v`` line format.  ``#`` starts a comment line."""
    n = None
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphFormatError("expected header 'n <count>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 1:
                raise GraphFormatError("vertex count must be positive", lineno)
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"vertex out of range 1..{n} in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno)
        e = (min(u, v), max(u, v))
        if e in seen:
            raise GraphFormatError(f"duplicate edge {{{e[0]},{e[1]}}} (first on line {seen[e]})", lineno)
        seen[e] = lineno
        edges.append(e)
    if n is None:
        raise GraphFormatError("missing 'n <count>' header")
    return Graph(n, tuple(edges))


_G6_HEADER = b">>graph6<<"


def graph_from_graph6(data: bytes | str) -> Graph:
    """Decode a single graph6 string (``n <= 62``), optional ``>>graph6<<`` header."""
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER):]
    if not data:
        raise GraphFormatError("empty graph6 string")
    if any(not 63 <= b <= 126 for b in data):
        raise GraphFormatError("graph6 byte outside 63..126")
    n = data[0] - 63
    if n > 62:
        raise GraphFormatError("only the single-byte size form (n <= 62) is supported")
    if n < 1:
        raise GraphFormatError("graph6 with zero vertices")
    body = data[1:]
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    if len(body) != need:
        raise GraphFormatError(f"graph6 body has {len(body)} bytes, expected {need}")
    bits = []
    for b in body:
        x = b - 63
        bits.extend((x >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphFormatError("nonzero padding bits in graph6 body")
    edges = []
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                edges.append((u + 1, v + 1))
            i += 1
    return Graph(n, tuple(edges))


def graph_to_graph6(g: Graph, header: bool = False) -> bytes:
    if g.n > 62:
        raise ValueError("graph6 encoding implemented for n <= 62 only")
    bits = [1 if g.has_edge(u + 1, v + 1) else 0 for v in range(1, g.n) for u in range(v)]
    bits += [0] * (-len(bits) % 6)
    out = bytearray([g.n + 63])
    for i in range(0, len(bits), 6):
        x = 0
        for b in bits[i:i + 6]:
            x = (x << 1) | b
        out.append(x + 63)
    return (_G6_HEADER if header else b"") + bytes(out)


def read_graph(text: str | bytes) -> Graph:
    """Sniff the format: ``>>graph6<<`` header or ``n`` header line, else bare graph6."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    stripped = text.strip()
    if stripped.startswith(">>graph6<<"):
        return graph_from_graph6(stripped)
    for line in stripped.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("n ") or s == "n":
            return graph_from_edge_list(text)
        return graph_from_graph6(s)
    raise GraphFormatError("empty input")


# ----------------------------------------------------------------------
# constructors


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(1, n + 1), 2)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, tuple((i, i + 1) for i in range(1, n)) + ((1, n),))


def elementary_graph(n: int, e: Iterable[int]) -> Graph:
    """``K_n(e)``: the single edge ``e`` plus ``n - 2`` isolated vertices."""
    u, v = sorted(e)
    return Graph(n, ((u, v),))


def complement(g: Graph) -> Graph:
    es = g.edge_set
    return Graph(g.n, tuple(e for e in combinations(range(1, g.n + 1), 2) if e not in es))


def all_graphs(n: int) -> Iterable[Graph]:
    """Every labeled graph on ``n`` vertices (``2**C(n,2)`` of them)."""
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, tuple(p for i, p in enumerate(pairs) if mask >> i & 1))


def random_graph(n: int, rng, p: float = 0.5) -> Graph:
    pairs = combinations(range(1, n + 1), 2)
    return Graph(n, tuple(e for e in pairs if rng.random() < p))


# ----------------------------------------------------------------------
# matrices


def adjacency(g: Graph) -> ExactMatrix:
    a = np.zeros((g.n, g.n), dtype=object)
    a[:] = 0
    for u, v in g.edges:
        a[u - 1, v - 1] = 1
        a[v - 1, u - 1] = 1
    return ExactMatrix._wrap(a, normalize=False)


def laplacian(g: Graph) -> ExactMatrix:
    a = np.zeros((g.n, g.n), dtype=object)
    a[:] = 0
    for u, v in g.edges:
        a[u - 1, v - 1] = -1
        a[v - 1, u - 1] = -1
        a[u - 1, u - 1] += 1
        a[v - 1, v - 1] += 1
    return ExactMatrix._wrap(a, normalize=False)


# ----------------------------------------------------------------------
# traversal


def bfs_distances(g: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    return len(bfs_distances(g, 1)) == g.n


def is_bipartite(g: Graph) -> bool:
    color: dict[int, int] = {}
    for s in range(1, g.n + 1):
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def distance_table(g: Graph) -> list[list[int]]:
    """All-pairs BFS distances (0-based indices); raises on disconnected input."""
    table = []
    for u in range(1, g.n + 1):
        d = bfs_distances(g, u)
        if len(d) != g.n:
            missing = next(v for v in range(1, g.n + 1) if v not in d)
            raise DisconnectedGraphError(u, missing)
        table.append([d[v] for v in range(1, g.n + 1)])
    return table


@dataclass(frozen=True)
class DistanceMatrices:
    diameter: int
    mats: tuple[ExactMatrix, ...]

    def __getitem__(self, i: int) -> ExactMatrix:
        return self.mats[i]


def distance_matrices(g: Graph) -> DistanceMatrices:
    table = distance_table(g)
    diameter = max(max(row) for row in table)
    mats = []
    for i in range(diameter + 1):
        mats.append(ExactMatrix([[1 if x == i else 0 for x in row] for row in table]))
    return DistanceMatrices(diameter, tuple(mats))


def girth(g: Graph) -> float:
    """Length of a shortest cycle; ``inf`` for forests."""
    best = float("inf")
    for s in range(1, g.n + 1):
        dist = {s: 0}
        parent = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best
