"""Exhaustive enumeration of labeled d-regular graphs (exactness oracle)."""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .errors import InputError, ScopeError
from .graph import RegularGraph


def in_scope(n: int, d: int) -> bool:
    return (d <= 2 and n <= 12) or (d == 3 and n <= 10)


def _check(n: int, d: int):
    if n < 1 or d < 0:
        raise InputError("need n >= 1 and d >= 0")
    if n * d % 2:
        raise InputError(f"d*n must be even (n={n}, d={d})")
    if not in_scope(n, d):
        raise ScopeError(f"enumeration of ({n}, {d}) is out of scope: "
                         "supported are d <= 2 with n <= 12 and d = 3 with n <= 10")


def enumerate_regular(n: int, d: int) -> Iterator[RegularGraph]:
    """Yield every labeled simple d-regular graph on ``0..n-1`` exactly once.

    Rows are filled in vertex order: vertex ``v`` picks all its still missing
    neighbors among ``w > v`` at once, so each edge set has one derivation.
    """
    _check(n, d)
    if d >= n and n * d > 0:
        return
    need = [d] * n
    edges: list[tuple[int, int]] = []

    def rec(v):
        if v == n:
            yield RegularGraph(n, d, list(edges))
            return
        k = need[v]
        later = [w for w in range(v + 1, n) if need[w] > 0]
        # everyone after v must still be completable
        if len(later) < k:
            return
        for chosen in combinations(later, k):
            for w in chosen:
                need[w] -= 1
                edges.append((v, w))
            need[v] = 0
            if all(need[w] <= n - v - 2 for w in range(v + 1, n)):
                yield from rec(v + 1)
            need[v] = k
            for w in chosen:
                need[w] += 1
                edges.pop()

    yield from rec(0)


def enumerate_regular_by_edges(n: int, d: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Independent enumerator: include/exclude branching over the vertex
    pairs in lexicographic order; yields edge tuples."""
    _check(n, d)
    pairs = list(combinations(range(n), 2))
    deg = [0] * n
    # remaining[p][v]: pairs at position >= p that touch v
    remaining = [[0] * n for _ in range(len(pairs) + 1)]
    for p in range(len(pairs) - 1, -1, -1):
        remaining[p] = list(remaining[p + 1])
        i, j = pairs[p]
        remaining[p][i] += 1
        remaining[p][j] += 1
    chosen: list[tuple[int, int]] = []

    def rec(p):
        if p == len(pairs):
            yield tuple(chosen)
            return
        i, j = pairs[p]
        if deg[i] < d and deg[j] < d:
            deg[i] += 1
            deg[j] += 1
            chosen.append((i, j))
            yield from rec(p + 1)
            chosen.pop()
            deg[i] -= 1
            deg[j] -= 1
        rest = remaining[p + 1]
        if deg[i] + rest[i] >= d and deg[j] + rest[j] >= d:
            yield from rec(p + 1)

    yield from rec(0)


def count_regular_by_edges(n: int, d: int) -> int:
    return sum(1 for _ in enumerate_regular_by_edges(n, d))
