"""Simple undirected graphs, d-regular graphs, multigraphs and the basic
edge-counting queries used throughout the package.

Vertices are the integers ``0 .. n-1``. Adjacency is stored as sorted
neighbor tuples plus frozensets for constant-time membership.
"""

from __future__ import annotations

import heapq
import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError


def vertex_set(ids: Iterable[int], n: int) -> tuple[int, ...]:
    """Normalize ``ids`` to a strictly increasing tuple of vertices in ``[0, n)``."""
    out = tuple(sorted(set(int(v) for v in ids)))
    if out and (out[0] < 0 or out[-1] >= n):
        raise InputError(f"vertex id out of range for n={n}: {out}")
    return out


class Graph:
    """Immutable simple undirected graph on ``range(n)``."""

    __slots__ = ("n", "_adj", "_sets")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InputError("n must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            if v in nbrs[u]:
                raise InputError(f"repeated edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self._adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._sets = tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        return [(u, v) for u in range(self.n) for v in self._adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the old labels."""
        labels = vertex_set(vertices, self.n)
        index = {v: i for i, v in enumerate(labels)}
        edges = [
            (index[u], index[w])
            for u in labels
            for w in self._adj[u]
            if u < w and w in index
        ]
        return Graph(len(labels), edges), labels

    def adjacency_matrix(self, dtype=float) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self):
        return hash((self.n, self._adj))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, m={self.num_edges})"


class RegularGraph(Graph):
    """Simple graph in which every vertex has exactly ``d`` neighbors."""

    __slots__ = ("d",)

    def __init__(self, n: int, d: int, edges: Iterable[tuple[int, int]] = ()):
        if d < 0:
            raise InputError("d must be non-negative")
        if (n * d) % 2:
            raise InputError(f"n*d must be even (n={n}, d={d})")
        super().__init__(n, edges)
        self.d = d
        for v in range(n):
            if len(self._adj[v]) != d:
                raise InputError(f"vertex {v} has degree {len(self._adj[v])}, expected {d}")

    @classmethod
    def from_graph(cls, g: Graph) -> RegularGraph:
        d = g.degree(0) if g.n else 0
        return cls(g.n, d, g.edges())

    def __repr__(self):
        return f"RegularGraph(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class MultiGraph:
    """d-regular multigraph; loops contribute 2 to their endpoint's degree."""

    n: int
    d: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        bad = [v for v in range(self.n) if deg[v] != self.d]
        if bad:
            raise InputError(f"multigraph degree mismatch at vertices {bad[:5]}")

    @property
    def loops(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    @property
    def repeated(self) -> int:
        """Number of surplus copies of parallel edges."""
        counts = Counter(e for e in self.edges if e[0] != e[1])
        return sum(c - 1 for c in counts.values() if c > 1)

    def to_graph(self) -> RegularGraph:
        return RegularGraph(self.n, self.d, self.edges)


@dataclass
class Coloring:
    """Partial map vertex -> color (positive integer) with palette size ``t``."""

    assignment: dict[int, int]
    t: int
    colors: frozenset[int] = field(init=False, repr=False)

    def __post_init__(self):
        self.colors = frozenset(self.assignment.values())

    def __getitem__(self, v):
        return self.assignment[v]

    def __contains__(self, v):
        return v in self.assignment

    def __len__(self):
        return len(self.assignment)

    def conflicts(self, g: Graph) -> list[tuple[int, int]]:
        a = self.assignment
        return [(u, v) for u, v in g.edges() if u in a and v in a and a[u] == a[v]]

    def is_proper(self, g: Graph) -> bool:
        return not self.conflicts(g)

    def to_json(self) -> dict[str, int]:
        return {str(v): c for v, c in sorted(self.assignment.items())}


def is_proper_coloring(g: Graph, assignment: Mapping[int, int], palette: int | None = None,
                       total: bool = True) -> bool:
    """Independent validator: proper, optionally total, colors in ``1..palette``."""
    if total and any(v not in assignment for v in range(g.n)):
        return False
    for v, c in assignment.items():
        if not (0 <= v < g.n) or c < 1 or (palette is not None and c > palette):
            return False
    for u, v in g.edges():
        if u in assignment and v in assignment and assignment[u] == assignment[v]:
            return False
    return True


# ---------------------------------------------------------------- queries


def edges_within(g: Graph, u: Iterable[int]) -> int:
    """Number of edges with both endpoints in ``u``."""
    s = set(vertex_set(u, g.n))
    return sum(1 for x in s for y in g.neighbors(x) if y in s) // 2


def edges_between(g: Graph, u: Iterable[int], w: Iterable[int]) -> int:
    """Edges ``{x, y}`` with ``x`` in ``u`` and ``y`` in ``w``.

    ``u`` and ``w`` may overlap; every qualifying edge is counted once, so an
    edge with both endpoints in ``u & w`` contributes 1.
    """
    us = set(vertex_set(u, g.n))
    ws = set(vertex_set(w, g.n))
    count = 0
    for x in us:
        for y in g.neighbors(x):
            if y not in ws:
                continue
            # edge seen from both ends when each end qualifies on the U side
            if y in us and x in ws and y < x:
                continue
            count += 1
    return count


def triangles_at(g: Graph, v: int) -> int:
    """Edges spanned by the neighborhood of ``v`` (triangles through ``v``)."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range")
    return edges_within(g, g.neighbors(v))


def paths3_count(g: Graph, u: int, w: int) -> int:
    """Paths ``u-a-b-w`` on four distinct vertices."""
    if u == w:
        raise InputError("paths3_count needs distinct endpoints")
    vertex_set((u, w), g.n)
    wn = g.neighbor_set(w)
    count = 0
    for a in g.neighbors(u):
        if a == w:
            continue
        for b in g.neighbors(a):
            if b != u and b != w and b in wn:
                count += 1
    return count


def degeneracy_order(g: Graph) -> tuple[list[int], int]:
    """Min-degree peeling, ties to the lowest id.

    Returns the removal order and the largest degree seen at removal time.
    """
    deg = [g.degree(v) for v in range(g.n)]
    heap = [(deg[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order: list[int] = []
    worst = 0
    while heap:
        dv, v = heapq.heappop(heap)
        if removed[v] or dv != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        worst = max(worst, dv)
        for x in g.neighbors(v):
            if not removed[x]:
                deg[x] -= 1
                heapq.heappush(heap, (deg[x], x))
    return order, worst


def degeneracy(g: Graph) -> int:
    return degeneracy_order(g)[1]


# ------------------------------------------------------------- constructors


def complete_graph(n: int) -> RegularGraph:
    return RegularGraph(n, max(n - 1, 0), combinations(range(n), 2))


def cycle_graph(n: int) -> RegularGraph:
    return RegularGraph(n, 2, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> RegularGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return RegularGraph(10, 3, outer + spokes + inner)


def prism_graph() -> RegularGraph:
    return RegularGraph(6, 3, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5),
                               (0, 3), (1, 4), (2, 5)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges())
        offset += h.n
    degs = {h.degree(v) for h in graphs for v in range(h.n)}
    if len(degs) == 1:
        return RegularGraph(offset, degs.pop(), edges)
    return Graph(offset, edges)


# ---------------------------------------------------------------- file I/O


def to_edgelist(g: RegularGraph) -> str:
    lines = [f"{g.n} {g.d}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> RegularGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise InputError("edge list must start with a line 'n d'")
    try:
        n, d = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed edge list: {exc}") from None
    return RegularGraph(n, d, edges)


def to_json(g: RegularGraph) -> dict:
    return {"n": g.n, "d": g.d, "edges": [list(e) for e in g.edges()]}


def from_json(obj: Mapping | str) -> RegularGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return RegularGraph(int(obj["n"]), int(obj["d"]), [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None


def load_graph(path: str) -> RegularGraph:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return from_json(text)
    return parse_edgelist(text)
