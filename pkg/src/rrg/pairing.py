"""Configuration model: pairings of ``d*n`` elements grouped in ``n`` cells.

Element ``e`` belongs to cell (vertex) ``e // d``. A pairing is stored as an
involution ``partner`` with no fixed points.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InputError, SamplingError
from .graph import MultiGraph, RegularGraph

MASK64 = (1 << 64) - 1


def mix_seed(master_seed: int, index: int) -> int:
    """SplitMix64 finalizer over ``(master_seed, index)``; used for per-trial seeds."""
    z = (int(master_seed) * 0x9E3779B97F4A7C15 + int(index) + 1) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Pairing:
    n: int
    d: int
    partner: tuple[int, ...]

    def __post_init__(self):
        m = self.n * self.d
        if len(self.partner) != m:
            raise InputError(f"pairing needs {m} elements, got {len(self.partner)}")
        for e, p in enumerate(self.partner):
            if p == e or not 0 <= p < m or self.partner[p] != e:
                raise InputError(f"partner map is not a fixed-point-free involution at {e}")

    @classmethod
    def from_pairs(cls, n: int, d: int, pairs) -> Pairing:
        partner = [-1] * (n * d)
        for a, b in pairs:
            partner[a], partner[b] = b, a
        return cls(n, d, tuple(partner))

    def pairs(self) -> list[tuple[int, int]]:
        """Unordered pairs as sorted ``[a, b]`` with ``a < b``."""
        return [(e, p) for e, p in enumerate(self.partner) if e < p]

    def cell(self, e: int) -> int:
        return e // self.d

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.pairs()]


def double_factorial_pairings(m: int) -> int:
    """Number of perfect matchings on ``m`` labelled points, ``m!/((m/2)! 2^(m/2))``."""
    if m < 0 or m % 2:
        raise InputError(f"perfect matchings need an even non-negative count, got {m}")
    half = m // 2
    return math.factorial(m) // (math.factorial(half) * 2**half)


def count_pairings(n: int, d: int) -> int:
    """Exact size of the configuration space, ``(dn-1)!!``."""
    if n * d % 2:
        raise InputError(f"d*n must be even (n={n}, d={d})")
    return double_factorial_pairings(n * d)


def _check_nd(n, d):
    if n < 1 or d < 0:
        raise InputError(f"need n >= 1 and d >= 0 (n={n}, d={d})")
    if n * d % 2:
        raise InputError(f"d*n must be even (n={n}, d={d})")


def _random_partner(m: int, rng: np.random.Generator) -> np.ndarray:
    perm = rng.permutation(m)
    partner = np.empty(m, dtype=np.int64)
    partner[perm[0::2]] = perm[1::2]
    partner[perm[1::2]] = perm[0::2]
    return partner


def random_pairing(n: int, d: int, seed=None) -> Pairing:
    """Uniform random pairing: shuffle the elements and pair consecutive entries."""
    _check_nd(n, d)
    partner = _random_partner(n * d, _rng(seed))
    return Pairing(n, d, tuple(int(x) for x in partner))


def project_multigraph(p: Pairing) -> MultiGraph:
    d = p.d
    edges = tuple(sorted((min(a // d, b // d), max(a // d, b // d)) for a, b in p.pairs()))
    return MultiGraph(p.n, p.d, edges)


def is_simple(m: MultiGraph) -> bool:
    seen = set()
    for e in m.edges:
        if e[0] == e[1] or e in seen:
            return False
        seen.add(e)
    return True


@dataclass(frozen=True)
class SampleStats:
    attempts: int
    accepted: bool
    elapsed: float


def default_max_attempts(n: int, d: int) -> int:
    from .counts import prob_simple

    if d == 0:
        return 1
    return min(10**6, math.ceil(20 / prob_simple(d, n)))


def _simple_edges(perm: np.ndarray, d: int, n: int):
    """Cell pairs for a shuffled element array, or ``None`` if not simple."""
    cells = perm // d
    a = cells[0::2]
    b = cells[1::2]
    if np.any(a == b):
        return None
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    keys = lo * n + hi
    keys.sort()
    if keys.size > 1 and np.any(keys[1:] == keys[:-1]):
        return None
    return keys


def sample_simple(n: int, d: int, seed=None, max_attempts: int | None = None
                  ) -> tuple[RegularGraph, SampleStats]:
    """Draw pairings until the projection is simple; the result is uniform over
    labelled simple d-regular graphs on ``n`` vertices."""
    _check_nd(n, d)
    if d >= n:
        raise InputError(f"no simple {d}-regular graph on {n} vertices")
    if max_attempts is None:
        max_attempts = default_max_attempts(n, d)
    if max_attempts < 1:
        raise InputError("max_attempts must be >= 1")
    rng = _rng(seed)
    start = time.perf_counter()
    m = n * d
    for attempt in range(1, max_attempts + 1):
        keys = _simple_edges(rng.permutation(m), d, n) if m else np.empty(0, dtype=np.int64)
        if keys is not None:
            edges = [(int(k) // n, int(k) % n) for k in keys]
            stats = SampleStats(attempt, True, time.perf_counter() - start)
            return RegularGraph(n, d, edges), stats
    raise SamplingError(f"no simple pairing after {max_attempts} attempts (n={n}, d={d})",
                        max_attempts)


def simple_edge_keys(n: int, d: int, seed=None, max_attempts: int | None = None
                     ) -> tuple[np.ndarray, int]:
    """Same rejection loop as :func:`sample_simple` but returns the sorted edge
    keys ``u*n + v`` and the attempt count; avoids building a graph object in
    hot Monte Carlo loops."""
    _check_nd(n, d)
    if max_attempts is None:
        max_attempts = default_max_attempts(n, d)
    rng = _rng(seed)
    m = n * d
    for attempt in range(1, max_attempts + 1):
        keys = _simple_edges(rng.permutation(m), d, n)
        if keys is not None:
            return keys, attempt
    raise SamplingError(f"no simple pairing after {max_attempts} attempts (n={n}, d={d})",
                        max_attempts)


def pairing_switch(p: Pairing, ea: int, eb: int) -> Pairing:
    """Replace ``{ea, ea'}, {eb, eb'}`` by ``{ea, eb}, {ea', eb'}``."""
    m = len(p.partner)
    if not (0 <= ea < m and 0 <= eb < m):
        raise InputError("element out of range")
    pa, pb = p.partner[ea], p.partner[eb]
    if eb == ea or eb == pa:
        raise InputError("switch needs two distinct pairs")
    partner = list(p.partner)
    partner[ea], partner[eb] = eb, ea
    partner[pa], partner[pb] = pb, pa
    return Pairing(p.n, p.d, tuple(partner))


def two_switch(g: RegularGraph, a: int, x: int, b: int, y: int) -> RegularGraph:
    """2-switch ``{a,x},{b,y} -> {a,b},{x,y}``."""
    verts = (a, x, b, y)
    if any(not 0 <= v < g.n for v in verts):
        raise InputError("vertex out of range")
    if len(set(verts)) != 4:
        raise InputError("a, x, b, y must be pairwise distinct")
    if not g.has_edge(a, x):
        raise InputError(f"{{a,x}} = {{{a},{x}}} is not an edge")
    if not g.has_edge(b, y):
        raise InputError(f"{{b,y}} = {{{b},{y}}} is not an edge")
    if g.has_edge(a, b):
        raise InputError(f"{{a,b}} = {{{a},{b}}} is already an edge")
    if g.has_edge(x, y):
        raise InputError(f"{{x,y}} = {{{x},{y}}} is already an edge")
    drop = {(min(a, x), max(a, x)), (min(b, y), max(b, y))}
    edges = [e for e in g.edges() if e not in drop] + [(a, b), (x, y)]
    return RegularGraph(g.n, g.d, edges)


def enumerate_pairings(n: int, d: int) -> Iterator[Pairing]:
    """Every pairing of ``d*n`` elements exactly once (lowest free element is
    matched first)."""
    _check_nd(n, d)
    m = n * d
    partner = [-1] * m

    def rec(first):
        while first < m and partner[first] != -1:
            first += 1
        if first == m:
            yield Pairing(n, d, tuple(partner))
            return
        for other in range(first + 1, m):
            if partner[other] == -1:
                partner[first], partner[other] = other, first
                yield from rec(first + 1)
                partner[first] = partner[other] = -1

    yield from rec(0)
