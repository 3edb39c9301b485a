"""Constructive extension of a ``t``-coloring of ``G - U0`` to a
``(t+1)``-coloring of ``G``.

Pipeline: grow the buffer ``U`` until outside vertices have few neighbors in
it, build the copy graph of the buffer neighborhoods, order its blocks,
choose per-buffer-vertex color lists whose classes are jointly independent,
recolor those classes with ``t+1`` and list-color ``G[U]``.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .coloring import list_coloring_greedy
from .errors import InputError
from .graph import Coloring, Graph, degeneracy_order, vertex_set
from .pairing import mix_seed


@dataclass(frozen=True)
class ExtensionParams:
    neighbor_threshold: int = 50
    list_size: int = 14
    prune_floor: int = 10
    availability_floor: float = 0.5
    retries: int = 20

    def __post_init__(self):
        if min(self.neighbor_threshold, self.list_size, self.prune_floor, self.retries) < 1:
            raise InputError("extension parameters must be positive")
        if not 0 < self.availability_floor <= 1:
            raise InputError("availability_floor must lie in (0, 1]")
        if self.prune_floor > self.list_size:
            raise InputError("prune_floor cannot exceed list_size")


@dataclass
class ExtensionInstance:
    g: Graph
    u0: tuple[int, ...]
    f: dict[int, int]
    t: int
    params: ExtensionParams = field(default_factory=ExtensionParams)

    def __post_init__(self):
        self.u0 = vertex_set(self.u0, self.g.n)
        _check_base_coloring(self.g, set(self.u0), self.f, self.t)
        if self.t < self.params.list_size:
            raise InputError(f"t={self.t} is smaller than list_size={self.params.list_size}")


def _check_base_coloring(g: Graph, removed: set[int], f: dict[int, int], t: int):
    for v in range(g.n):
        if v in removed:
            continue
        if v not in f:
            raise InputError(f"base coloring misses vertex {v}")
        if not 1 <= f[v] <= t:
            raise InputError(f"color {f[v]} of vertex {v} outside 1..{t}")
        for x in g.neighbors(v):
            if x not in removed and x in f and f[x] == f[v]:
                raise InputError(f"base coloring is improper on edge ({v}, {x})")


def grow_buffer_set(g: Graph, u0, threshold: int) -> tuple[int, ...]:
    """Add outside vertices with ``>= threshold`` neighbors in ``U`` (lowest id
    first) until none remains."""
    if threshold < 1:
        raise InputError("threshold must be >= 1")
    inside = [False] * g.n
    count = [0] * g.n
    for v in vertex_set(u0, g.n):
        inside[v] = True
    for v in range(g.n):
        if inside[v]:
            for x in g.neighbors(v):
                count[x] += 1
    heap = [v for v in range(g.n) if not inside[v] and count[v] >= threshold]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if inside[v]:
            continue
        inside[v] = True
        for x in g.neighbors(v):
            count[x] += 1
            if not inside[x] and count[x] == threshold:
                heapq.heappush(heap, x)
    return tuple(v for v in range(g.n) if inside[v])


@dataclass
class CopyGraph:
    """One block per buffer vertex holding copies of its colored neighbors.

    ``nodes[j] = (x, i)`` is the copy of ``x`` in block ``i``; two copies are
    adjacent iff the original vertices are adjacent.
    """

    buffer: tuple[int, ...]
    nodes: list[tuple[int, int]]
    edges: list[tuple[int, int]]
    color: list[int]

    @property
    def k(self) -> int:
        return len(self.buffer)

    def block(self, i: int) -> list[int]:
        return [j for j, (_, b) in enumerate(self.nodes) if b == i]

    def block_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for _, b in self.nodes:
            sizes[b] += 1
        return sizes

    def internal_edges(self, i: int) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.edges if self.nodes[a][1] == i == self.nodes[b][1]]

    def block_weights(self) -> dict[tuple[int, int], int]:
        """Edge counts between distinct blocks, keyed ``(i, j)`` with ``i < j``."""
        w: dict[tuple[int, int], int] = defaultdict(int)
        for a, b in self.edges:
            i, j = self.nodes[a][1], self.nodes[b][1]
            if i != j:
                w[min(i, j), max(i, j)] += 1
        return dict(w)


def build_copy_graph(g: Graph, buffer, f: dict[int, int]) -> CopyGraph:
    """Copies are made only for neighbors outside the buffer, which carry ``f``
    colors."""
    buffer = vertex_set(buffer, g.n)
    in_buffer = set(buffer)
    nodes: list[tuple[int, int]] = []
    copies: dict[int, list[int]] = defaultdict(list)
    for i, u in enumerate(buffer):
        for x in g.neighbors(u):
            if x in in_buffer:
                continue
            if x not in f:
                raise InputError(f"coloring misses vertex {x} next to the buffer")
            copies[x].append(len(nodes))
            nodes.append((x, i))
    for x in copies:
        for y in g.neighbors(x):
            if y in copies and f[x] == f[y]:
                raise InputError(f"coloring is improper on edge ({x}, {y})")
    edges = []
    for x in sorted(copies):
        for y in g.neighbors(x):
            if y > x and y in copies:
                edges.extend((a, b) for a in copies[x] for b in copies[y])
    return CopyGraph(buffer, nodes, edges, [f[x] for x, _ in nodes])


def order_blocks(h: CopyGraph) -> list[int]:
    """Repeatedly move the block with the fewest edges to the other remaining
    blocks to the back (ties: the highest index goes last)."""
    w = h.block_weights()
    nbr: dict[int, dict[int, int]] = defaultdict(dict)
    for (i, j), c in w.items():
        nbr[i][j] = c
        nbr[j][i] = c
    remaining = set(range(h.k))
    cut = {i: sum(nbr[i].values()) for i in remaining}
    back: list[int] = []
    while remaining:
        i = min(remaining, key=lambda b: (cut[b], -b))
        remaining.remove(i)
        back.append(i)
        for j, c in nbr[i].items():
            if j in remaining:
                cut[j] -= c
    return back[::-1]


def prefix_cuts(h: CopyGraph, order: list[int]) -> list[tuple[int, int]]:
    """For each position ``i`` (1-based), ``(edges from block i to earlier
    blocks, edges spanned by the first i blocks)``."""
    w = h.block_weights()
    internal = [0] * h.k
    for a, b in h.edges:
        if h.nodes[a][1] == h.nodes[b][1]:
            internal[h.nodes[a][1]] += 1
    placed: list[int] = []
    spanned = 0
    out = []
    for b in order:
        back = sum(w.get((min(b, p), max(b, p)), 0) for p in placed)
        spanned += back + internal[b]
        placed.append(b)
        out.append((back, spanned))
    return out


@dataclass
class ListChoice:
    lists: dict[int, frozenset[int]] | None
    drawn: dict[int, frozenset[int]] | None
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return self.lists is not None


def _attempt_lists(h: CopyGraph, order, t, params, rng, attempt):
    by_block: dict[int, list[int]] = defaultdict(list)
    for j, (_, b) in enumerate(h.nodes):
        by_block[b].append(j)
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in h.edges:
        adj[a].append(b)
        adj[b].append(a)
    drawn: dict[int, frozenset[int]] = {}
    kept: dict[int, frozenset[int]] = {}
    for pos, b in enumerate(order):
        blocked = set()
        for j in by_block[b]:
            for o in adj[j]:
                ob = h.nodes[o][1]
                if ob != b and ob in drawn and h.color[o] in drawn[ob]:
                    blocked.add(h.color[j])
        available = [c for c in range(1, t + 1) if c not in blocked]
        if len(available) < params.availability_floor * t or len(available) < params.list_size:
            return None, None, {"attempt": attempt, "stage": "availability", "block": b,
                                "position": pos, "available": len(available)}
        chosen = rng.choice(available, size=params.list_size, replace=False)
        drawn[b] = frozenset(int(c) for c in chosen)
        keep = set(drawn[b])
        for a, c in sorted(h.internal_edges(b)):
            ca, cc = h.color[a], h.color[c]
            if ca in keep and cc in keep:
                keep.discard(min(ca, cc))
        if len(keep) < params.prune_floor:
            return None, None, {"attempt": attempt, "stage": "prune", "block": b,
                                "position": pos, "kept": len(keep)}
        kept[b] = frozenset(keep)
    return kept, drawn, None


def choose_lists(h: CopyGraph, order: list[int], t: int, params: ExtensionParams,
                 seed: int = 0) -> ListChoice:
    """Draw a ``list_size`` subset of the available colors for each block in
    ``order``, then prune one color per conflicting internal edge.

    Up to ``params.retries`` attempts, each with its own derived seed.
    """
    if t < params.list_size:
        raise InputError(f"t={t} is smaller than list_size={params.list_size}")
    failures = []
    for attempt in range(params.retries):
        rng = np.random.default_rng(mix_seed(seed, attempt))
        kept, drawn, failure = _attempt_lists(h, order, t, params, rng, attempt)
        if kept is not None:
            return ListChoice(kept, drawn, failures)
        failures.append(failure)
    return ListChoice(None, None, failures)


def selected_nodes(h: CopyGraph, lists: dict[int, frozenset[int]]) -> set[int]:
    return {j for j, (_, b) in enumerate(h.nodes) if h.color[j] in lists[b]}


def is_independent(h: CopyGraph, nodes: set[int]) -> bool:
    return not any(a in nodes and b in nodes for a, b in h.edges)


@dataclass
class ExtensionResult:
    coloring: Coloring | None
    stage: str
    buffer: tuple[int, ...] = ()
    recolored: tuple[int, ...] = ()
    diagnostics: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coloring is not None


def extend_coloring(inst: ExtensionInstance, seed: int = 0) -> ExtensionResult:
    """Run the full pipeline; stage failures come back as a result with
    ``coloring=None`` and the name of the stage."""
    g, t, p = inst.g, inst.t, inst.params
    buffer = grow_buffer_set(g, inst.u0, p.neighbor_threshold)
    if not buffer:
        return ExtensionResult(Coloring(dict(inst.f), t), "ok")
    sub, labels = g.induced(buffer)
    _, degen = degeneracy_order(sub)
    if degen + 1 > p.prune_floor:
        return ExtensionResult(None, "degeneracy", buffer,
                               diagnostics=[{"degeneracy": degen, "prune_floor": p.prune_floor}])
    in_buffer = set(buffer)
    f = {v: c for v, c in inst.f.items() if v not in in_buffer}
    h = build_copy_graph(g, buffer, f)
    order = order_blocks(h)
    choice = choose_lists(h, order, t, p, seed)
    if not choice.ok:
        return ExtensionResult(None, "choose-lists", buffer, diagnostics=choice.failures)
    lists = {buffer[i]: choice.lists[i] for i in range(len(buffer))}
    recolor = sorted({x for x, i in h.nodes if f[x] in lists[buffer[i]]})
    colors = dict(f)
    for x in recolor:
        colors[x] = t + 1
    local = list_coloring_greedy(sub, {i: lists[v] for i, v in enumerate(labels)})
    if local is None:
        return ExtensionResult(None, "list-coloring", buffer, tuple(recolor),
                               choice.failures)
    for i, v in enumerate(labels):
        colors[v] = local[i]
    return ExtensionResult(Coloring(colors, t + 1), "ok", buffer, tuple(recolor),
                           choice.failures)
