"""Greedy, exact (DSATUR backtracking) and list coloring."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import Coloring, Graph, degeneracy_order

YES, NO, UNKNOWN = "yes", "no", "unknown"


def greedy_coloring(g: Graph, order: Iterable[int] | None = None) -> Coloring:
    """First-fit along ``order`` (default ``0..n-1``)."""
    order = list(range(g.n)) if order is None else list(order)
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    assignment: dict[int, int] = {}
    for v in order:
        used = {assignment[x] for x in g.neighbors(v) if x in assignment}
        c = 1
        while c in used:
            c += 1
        assignment[v] = c
    return Coloring(assignment, max(assignment.values(), default=0))


def dsatur_coloring(g: Graph) -> Coloring:
    """DSATUR heuristic: color the most saturated vertex next (ties: degree, then id)."""
    assignment: dict[int, int] = {}
    seen: list[set[int]] = [set() for _ in range(g.n)]
    for _ in range(g.n):
        v = max((x for x in range(g.n) if x not in assignment),
                key=lambda x: (len(seen[x]), g.degree(x), -x))
        c = 1
        while c in seen[v]:
            c += 1
        assignment[v] = c
        for x in g.neighbors(v):
            seen[x].add(c)
    return Coloring(assignment, max(assignment.values(), default=0))


def max_clique(g: Graph, budget: int = 1_000_000) -> list[int]:
    """Largest clique by neighborhood branch and bound; falls back to the best
    clique found if ``budget`` nodes are exceeded."""
    best: list[int] = [0] if g.n else []
    nodes = 0

    def expand(clique, cand):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            return
        if not cand:
            if len(clique) > len(best):
                best = clique
            return
        if len(clique) + len(cand) <= len(best):
            return
        for v in sorted(cand):
            if len(clique) + len(cand) <= len(best):
                return
            expand(clique + [v], cand & g.neighbor_set(v))
            cand = cand - {v}

    for v in range(g.n):
        expand([v], {x for x in g.neighbors(v) if x > v})
    return sorted(best)


class _Budget(Exception):
    pass


def k_colorable(g: Graph, k: int, budget: int | None = 1_000_000,
                deadline: float | None = None) -> tuple[str, Coloring | None]:
    """Decide ``k``-colorability by DSATUR-ordered backtracking.

    Returns ``("yes", coloring)``, ``("no", None)`` after an exhaustive search
    or a clique larger than ``k``, or ``("unknown", None)`` once ``budget``
    search nodes (or the monotonic-clock ``deadline``) are used up.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    if n == 0:
        return YES, Coloring({}, k)
    if len(max_clique(g)) > k:
        return NO, None
    color = [0] * n
    # counts[v][c]: colored neighbors of v holding color c
    counts = [[0] * (k + 1) for _ in range(n)]
    sat = [0] * n
    adj = [g.neighbors(v) for v in range(n)]
    deg = [len(a) for a in adj]
    nodes = 0

    def pick():
        best, key = -1, None
        for v in range(n):
            if color[v] == 0:
                kv = (sat[v], deg[v], -v)
                if key is None or kv > key:
                    best, key = v, kv
        return best

    def assign(v, c):
        color[v] = c
        for x in adj[v]:
            counts[x][c] += 1
            if counts[x][c] == 1:
                sat[x] += 1

    def unassign(v, c):
        color[v] = 0
        for x in adj[v]:
            counts[x][c] -= 1
            if counts[x][c] == 0:
                sat[x] -= 1

    def search(colored, used):
        nonlocal nodes
        nodes += 1
        if (budget is not None and nodes > budget) or (
                deadline is not None and nodes % 256 == 0 and time.monotonic() > deadline):
            raise _Budget
        if colored == n:
            return True
        v = pick()
        # a fresh color beyond ``used`` is interchangeable with any other unused one
        for c in range(1, min(k, used + 1) + 1):
            if counts[v][c]:
                continue
            assign(v, c)
            if all(color[x] or sat[x] < k for x in adj[v]):
                if search(colored + 1, max(used, c)):
                    return True
            unassign(v, c)
        return False

    try:
        found = search(0, 0)
    except _Budget:
        return UNKNOWN, None
    if not found:
        return NO, None
    return YES, Coloring({v: color[v] for v in range(n)}, k)


@dataclass
class ChromaticResult:
    chi: int | None
    certificate: Coloring | None
    lower: int
    upper: int

    @property
    def resolved(self) -> bool:
        return self.chi is not None


def chromatic_number(g: Graph, budget: int | None = 1_000_000,
                     deadline: float | None = None) -> ChromaticResult:
    """Least ``k`` with a yes answer from :func:`k_colorable`; ``chi=None`` if a
    needed decision came back unknown."""
    if g.n == 0:
        return ChromaticResult(0, Coloring({}, 0), 0, 0)
    upper_col = dsatur_coloring(g)
    upper = upper_col.t
    if g.num_edges == 0:
        return ChromaticResult(1, upper_col, 1, 1)
    lower = max(len(max_clique(g)), 2)
    for k in range(lower, upper):
        verdict, cert = k_colorable(g, k, budget, deadline)
        if verdict == YES:
            return ChromaticResult(k, cert, lower, upper)
        if verdict == UNKNOWN:
            return ChromaticResult(None, None, k, upper)
    return ChromaticResult(upper, upper_col, lower, upper)


def list_coloring_greedy(g: Graph, lists: Mapping[int, Iterable[int]]) -> Coloring | None:
    """Color in reverse degeneracy order, each vertex taking the smallest color
    of its own list unused by colored neighbors.

    Always succeeds when every list has at least ``degeneracy + 1`` colors;
    returns ``None`` on a dead end.
    """
    order, _ = degeneracy_order(g)
    assignment: dict[int, int] = {}
    for v in reversed(order):
        used = {assignment[x] for x in g.neighbors(v) if x in assignment}
        options = sorted(c for c in lists.get(v, ()) if c not in used)
        if not options:
            return None
        assignment[v] = options[0]
    return Coloring(assignment, max(assignment.values(), default=0))
