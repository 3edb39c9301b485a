"""Spectral gap, expander-mixing validation and deciders for the five
structural properties used in the coloring argument.

Every property record carries a ``checked_scope`` string so that a
"holds" verdict states exactly what was searched.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import InputError, NumericalError
from .graph import Graph, RegularGraph, degeneracy_order, edges_within, paths3_count, triangles_at

DENSE_LIMIT = 2000
EXHAUSTIVE_SUBSETS = 20
HOLDS, VIOLATED, INCONCLUSIVE = "holds", "violated", "inconclusive"


@dataclass(frozen=True)
class SpectralSummary:
    lam: float
    lambda1: float
    lambda2: float
    lambda_min: float
    iterations: int
    residual: float
    method: str


def _sparse_adjacency(g: Graph) -> sp.csr_matrix:
    edges = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    data = np.ones(rows.size)
    return sp.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def _deflated_power(m, n, tolerance, max_iter, rng):
    """Top eigenvalue of PSD ``m`` on the complement of the all-ones vector."""
    x = rng.standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    theta_prev = np.inf
    for it in range(1, max_iter + 1):
        y = m @ x
        y -= y.mean()
        theta = float(x @ y)
        residual = float(np.linalg.norm(y - theta * x))
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0, it, 0.0
        if residual <= tolerance or (abs(theta - theta_prev) <= tolerance * 1e-3 and it > 10):
            return theta, it, residual
        theta_prev = theta
        x = y / norm
    raise NumericalError(f"power iteration did not converge in {max_iter} steps", residual)


def spectral_lambda(g: RegularGraph, tolerance: float = 1e-8, method: str = "auto",
                    max_iter: int = 100_000, seed: int = 0) -> SpectralSummary:
    """``lambda = max(|lambda_2|, |lambda_n|)`` of the adjacency matrix.

    Dense symmetric eigensolve up to ``n = 2000``; above that (or with
    ``method="power"``) two deflated power iterations: one on ``A + dI`` for
    ``lambda_2`` and one on ``dI - A`` for ``lambda_n``.
    """
    if tolerance <= 0:
        raise InputError("tolerance must be positive")
    n, d = g.n, g.d
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "power"
    if n == 1:
        return SpectralSummary(0.0, 0.0, 0.0, 0.0, 0, 0.0, method)
    if method == "dense":
        vals = np.linalg.eigvalsh(g.adjacency_matrix())
        l1, l2, ln = float(vals[-1]), float(vals[-2]), float(vals[0])
        return SpectralSummary(max(abs(l2), abs(ln)), l1, l2, ln, 0, abs(l1 - d), method)
    if method != "power":
        raise InputError(f"unknown method {method!r}")
    a = _sparse_adjacency(g)
    eye = sp.identity(n, format="csr")
    rng = np.random.default_rng(seed)
    top, it1, r1 = _deflated_power(a + d * eye, n, tolerance, max_iter, rng)
    bottom, it2, r2 = _deflated_power(d * eye - a, n, tolerance, max_iter, rng)
    l2, ln = top - d, d - bottom
    ones = np.ones(n) / math.sqrt(n)
    l1 = float(ones @ (a @ ones))
    return SpectralSummary(max(abs(l2), abs(ln)), l1, l2, ln, it1 + it2, max(r1, r2), method)


# ------------------------------------------------------------------ subsets


def all_subset_edge_counts(g: Graph) -> np.ndarray:
    """``e(U)`` for every bitmask ``U`` (bit ``v`` set iff ``v in U``)."""
    n = g.n
    if n > 26:
        raise InputError("exhaustive subset table limited to n <= 26")
    e = np.zeros(1 << n, dtype=np.int32)
    for v in range(n):
        low = sum(1 << w for w in g.neighbors(v) if w < v)
        size = 1 << v
        masks = np.arange(size, dtype=np.int64)
        e[size:2 * size] = e[:size] + np.bitwise_count(masks & low)
    return e


def _mask_to_set(mask: int, n: int) -> list[int]:
    return [v for v in range(n) if mask >> v & 1]


def random_subsets(n: int, count: int, rng: np.random.Generator, sizes=None) -> np.ndarray:
    """``count`` random indicator rows; sizes uniform in ``sizes`` (default 1..n)."""
    if sizes is None:
        sizes = np.arange(1, n + 1)
    chosen = rng.choice(np.asarray(sizes), size=count)
    keys = rng.random((count, n))
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
    return (ranks < chosen[:, None]).astype(np.float64)


def subset_edge_counts(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.rint(np.einsum("ij,jk,ik->i", x, a, x) / 2).astype(np.int64)


def mixing_check(g: RegularGraph, lam: float, subsets=None, samples: int = 20000,
                 seed: int = 0) -> tuple[float, list[int]]:
    """Largest ``|e(U) - C(|U|,2) d/n| - lam*|U|`` over the tested sets.

    ``subsets=None`` means every subset when ``n <= 20`` and ``samples``
    random subsets otherwise; an explicit iterable of vertex sets is also
    accepted. A positive result contradicts the expander mixing bound.
    """
    n, d = g.n, g.d
    if subsets is None and n <= EXHAUSTIVE_SUBSETS:
        e = all_subset_edge_counts(g).astype(np.float64)
        sizes = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.float64)
        viol = np.abs(e - sizes * (sizes - 1) / 2 * d / n) - lam * sizes
        idx = int(np.argmax(viol))
        return float(viol[idx]), _mask_to_set(idx, n)
    if subsets is None:
        rng = np.random.default_rng(seed)
        x = random_subsets(n, samples, rng)
        e = subset_edge_counts(g.adjacency_matrix(), x).astype(np.float64)
        sizes = x.sum(axis=1)
        viol = np.abs(e - sizes * (sizes - 1) / 2 * d / n) - lam * sizes
        idx = int(np.argmax(viol))
        return float(viol[idx]), [int(v) for v in np.flatnonzero(x[idx])]
    worst, worst_set = -math.inf, []
    for s in subsets:
        s = sorted(set(s))
        u = len(s)
        v = abs(edges_within(g, s) - comb(u, 2) * d / n) - lam * u
        if v > worst:
            worst, worst_set = v, s
    return worst, worst_set


# --------------------------------------------------------------- properties


@dataclass
class PropertyRecord:
    id: int
    status: str
    witness: list[int] | None
    checked_scope: str
    parameters: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool | None:
        if self.status == INCONCLUSIVE:
            return None
        return self.status == HOLDS


def _default_u_max(n, d, c=1.0):
    return math.ceil(c * math.sqrt(n * d**3))


def _connected_sets(g: Graph, allowed: set[int], k_max: int, budget: int):
    """Connected vertex sets inside ``allowed`` of size ``<= k_max``, each once
    (ESU enumeration rooted at the minimum vertex).

    Yields ``(members, edges_inside)``; raises ``_BudgetExhausted`` after
    ``budget`` sets.
    """
    state = {"visited": 0}

    def extend(members, inside, ext, root, excl):
        state["visited"] += 1
        if state["visited"] > budget:
            raise _BudgetExhausted
        yield members, inside
        if len(members) == k_max:
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new = [x for x in g.neighbors(w)
                   if x in allowed and x > root and x not in excl]
            gained = sum(1 for x in g.neighbors(w) if x in members)
            yield from extend(members | {w}, inside + gained, ext + new, root,
                              excl | set(new) | {w})

    for root in sorted(allowed):
        start = [x for x in g.neighbors(root) if x in allowed and x > root]
        yield from extend(frozenset([root]), 0, start, root, {root} | set(start))


class _BudgetExhausted(Exception):
    pass


def _core(g: Graph, k: int) -> set[int]:
    """Vertices of the k-core."""
    deg = [g.degree(v) for v in range(g.n)]
    alive = [True] * g.n
    stack = [v for v in range(g.n) if deg[v] < k]
    for v in stack:
        alive[v] = False
    while stack:
        v = stack.pop()
        for x in g.neighbors(v):
            if alive[x]:
                deg[x] -= 1
                if deg[x] < k:
                    alive[x] = False
                    stack.append(x)
    return {v for v in range(g.n) if alive[v]}


def _peel_candidates(g: Graph, vertices: set[int]):
    """Successive sets of greedy min-degree peeling, largest first."""
    current = set(vertices)
    deg = {v: sum(1 for x in g.neighbors(v) if x in current) for v in current}
    inside = sum(deg.values()) // 2
    while current:
        yield sorted(current), inside
        v = min(current, key=lambda x: (deg[x], x))
        current.remove(v)
        inside -= deg[v]
        for x in g.neighbors(v):
            if x in current:
                deg[x] -= 1
        del deg[v]


def check_property1(g: RegularGraph, u_max: int | None = None, coeff: int = 5,
                    exhaustive_cap: int = 12, budget: int = 100_000) -> PropertyRecord:
    """No set of ``u <= u_max`` vertices spans ``coeff*u`` or more edges."""
    n, d = g.n, g.d
    if u_max is None:
        u_max = _default_u_max(n, d)
    if u_max > n:
        u_max = n
    params = {"coeff": coeff, "u_max": u_max, "C": 1.0, "exhaustive_cap": exhaustive_cap}
    _, degen = degeneracy_order(g)
    metrics = {"degeneracy": degen}
    # A minimal set with e(S) >= c|S| has all inner degrees >= c+1, so it lives
    # in the (c+1)-core; an empty core (degeneracy <= c) certifies every size.
    if degen <= coeff:
        return PropertyRecord(1, HOLDS, None,
                              f"degeneracy certificate: degeneracy {degen} <= {coeff}, "
                              f"so every S has e(S) < {coeff}|S| (all sizes)", params, metrics)
    core = _core(g, coeff + 1)
    metrics["core_size"] = len(core)
    for s, inside in _peel_candidates(g, core):
        if len(s) <= u_max and inside >= coeff * len(s):
            return PropertyRecord(1, VIOLATED, s, "greedy peeling of the "
                                  f"{coeff + 1}-core", params, metrics)
    k = min(u_max, exhaustive_cap)
    try:
        for members, inside in _connected_sets(g, core, k, budget):
            if inside >= coeff * len(members):
                return PropertyRecord(1, VIOLATED, sorted(members),
                                      f"connected subsets of the {coeff + 1}-core, size <= {k}",
                                      params, metrics)
    except _BudgetExhausted:
        return PropertyRecord(1, INCONCLUSIVE, None,
                              f"search budget {budget} exhausted below size {k}", params, metrics)
    if u_max <= exhaustive_cap or len(core) <= exhaustive_cap:
        return PropertyRecord(1, HOLDS, None,
                              f"exhaustive: all connected subsets of the {coeff + 1}-core "
                              f"up to size {k}", params, metrics)
    return PropertyRecord(1, INCONCLUSIVE, None,
                          f"exhaustive only up to size {k} < u_max={u_max}", params, metrics)


def check_property2(g: RegularGraph, u_max: int | None = None, lam: float | None = None,
                    samples: int = 20000, seed: int = 0) -> PropertyRecord:
    """``e(U) <= C(u,2) d/n + lam*u`` on the tested family, with the graph's own lambda."""
    n, d = g.n, g.d
    if u_max is None:
        u_max = math.ceil(n ** 0.9)
    u_max = min(u_max, n)
    if lam is None:
        lam = spectral_lambda(g).lam
    ratio = lam / math.sqrt(d) if d else 0.0
    params = {"u_max": u_max, "C": 1.0, "samples": samples, "seed": seed}
    metrics = {"lambda": lam, "lambda_over_sqrt_d": ratio, "constant_flag": ratio > 3}
    if n <= EXHAUSTIVE_SUBSETS:
        e = all_subset_edge_counts(g).astype(np.float64)
        sizes = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.float64)
        ok = sizes <= u_max
        scope = f"exhaustive over all subsets of size <= {u_max}"
    else:
        rng = np.random.default_rng(seed)
        x = random_subsets(n, samples, rng, sizes=np.arange(1, u_max + 1))
        e = subset_edge_counts(g.adjacency_matrix(), x).astype(np.float64)
        sizes = x.sum(axis=1)
        ok = np.ones(len(sizes), dtype=bool)
        scope = f"{samples} random subsets of size <= {u_max}"
    excess = e - (sizes * (sizes - 1) / 2 * d / n + lam * sizes)
    excess[~ok] = -np.inf
    idx = int(np.argmax(excess))
    metrics["max_excess"] = float(excess[idx])
    if excess[idx] > 1e-9:
        if n <= EXHAUSTIVE_SUBSETS:
            witness = _mask_to_set(idx, n)
        else:
            witness = [int(v) for v in np.flatnonzero(x[idx])]
        return PropertyRecord(2, VIOLATED, witness, scope, params, metrics)
    return PropertyRecord(2, HOLDS, None, scope, params, metrics)


def check_property3(g: RegularGraph, coeff: float = 5, samples: int = 10000,
                    n_sizes: int = 8, seed: int = 0) -> PropertyRecord:
    """Sets of ``u >= n ln n / d`` vertices span fewer than ``coeff*u^2 d/n`` edges."""
    n, d = g.n, g.d
    u0 = math.ceil(n * math.log(n) / d) if d and n > 1 else n + 1
    params = {"coeff": coeff, "u_min": u0, "samples_per_size": samples, "seed": seed}
    if u0 > n:
        return PropertyRecord(3, HOLDS, None,
                              f"vacuous: n ln n / d = {n * math.log(max(n, 1)) / max(d, 1):.2f} > n",
                              params)
    sizes = sorted({int(round(s)) for s in np.geomspace(u0, n, n_sizes)} | {n})
    params["sizes"] = sizes
    a = g.adjacency_matrix()
    rng = np.random.default_rng(seed)
    for u in sizes:
        limit = coeff * u * u * d / n
        if u == n:
            if g.num_edges >= limit:
                return PropertyRecord(3, VIOLATED, list(range(n)), "u = n", params)
            continue
        x = random_subsets(n, samples, rng, sizes=[u])
        e = subset_edge_counts(a, x)
        bad = np.flatnonzero(e >= limit)
        if bad.size:
            return PropertyRecord(3, VIOLATED, [int(v) for v in np.flatnonzero(x[bad[0]])],
                                  f"sampled size {u}", params)
    for s, inside in _peel_candidates(g, set(range(n))):
        if len(s) >= u0 and inside >= coeff * len(s) ** 2 * d / n:
            return PropertyRecord(3, VIOLATED, s, "greedy peeling", params)
    return PropertyRecord(3, HOLDS, None,
                          f"{samples} random subsets at each size {sizes} (u = n exact) "
                          "plus greedy peeling", params)


def check_property4(g: Graph, limit: int = 4) -> PropertyRecord:
    """Every neighborhood spans at most ``limit`` edges."""
    counts = [triangles_at(g, v) for v in range(g.n)]
    worst = max(range(g.n), key=lambda v: (counts[v], -v)) if g.n else None
    top = counts[worst] if g.n else 0
    params, metrics = {"limit": limit}, {"max_triangles": top}
    scope = "exhaustive over all vertices"
    if top > limit:
        return PropertyRecord(4, VIOLATED, [worst], scope, params, metrics)
    return PropertyRecord(4, HOLDS, None, scope, params, metrics)


def paths3_matrix(g: Graph) -> sp.csr_matrix:
    """Counts of 3-edge paths between distinct vertices, from ``A^3`` with
    the non-path walks ``u-a-u-w`` and ``u-w-b-w`` removed."""
    a = _sparse_adjacency(g)
    cube = (a @ a @ a).tolil()
    deg = np.asarray(a.sum(axis=1)).ravel()
    for u, w in g.edges():
        fix = deg[u] + deg[w] - 1
        cube[u, w] -= fix
        cube[w, u] -= fix
    cube.setdiag(0)
    out = cube.tocsr()
    out.eliminate_zeros()
    return out


def check_property5(g: Graph, limit: int = 4) -> PropertyRecord:
    """At most ``limit`` paths of length three between any two vertices."""
    params = {"limit": limit}
    scope = "exhaustive over all vertex pairs (A^3 with walk correction)"
    if g.n < 2:
        return PropertyRecord(5, HOLDS, None, scope, params, {"max_paths3": 0})
    m = paths3_matrix(g).tocoo()
    if m.nnz == 0:
        return PropertyRecord(5, HOLDS, None, scope, params, {"max_paths3": 0})
    idx = int(np.argmax(m.data))
    top = int(round(m.data[idx]))
    u, w = int(m.row[idx]), int(m.col[idx])
    metrics = {"max_paths3": top}
    if top > limit:
        return PropertyRecord(5, VIOLATED, sorted([u, w]), scope, params, metrics)
    return PropertyRecord(5, HOLDS, None, scope, params, metrics)


def verify_witness(g: RegularGraph, rec: PropertyRecord) -> bool:
    """Re-check that a violation witness really violates its property."""
    if rec.status != VIOLATED or not rec.witness:
        return False
    w, p = rec.witness, rec.parameters
    if rec.id == 1:
        return len(w) <= p["u_max"] and edges_within(g, w) >= p["coeff"] * len(w)
    if rec.id == 2:
        lam = rec.metrics["lambda"]
        u = len(w)
        return edges_within(g, w) > comb(u, 2) * g.d / g.n + lam * u + 1e-9
    if rec.id == 3:
        u = len(w)
        return u >= p["u_min"] and edges_within(g, w) >= p["coeff"] * u * u * g.d / g.n
    if rec.id == 4:
        return triangles_at(g, w[0]) > p["limit"]
    if rec.id == 5:
        return paths3_count(g, w[0], w[1]) > p["limit"]
    return False


# ----------------------------------------------------------------- report


@dataclass
class GammaConfig:
    c: float = 1.0
    coeff1: int = 5
    u_max1: int | None = None
    u_max2: int | None = None
    coeff3: float = 5
    samples2: int = 20000
    samples3: int = 10000
    triangle_limit: int = 4
    path_limit: int = 4
    seed: int = 0


@dataclass
class GammaReport:
    n: int
    d: int
    status: str
    records: list[PropertyRecord]
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool | None:
        if self.status == INCONCLUSIVE:
            return None
        return self.status == HOLDS

    def record(self, pid: int) -> PropertyRecord:
        return next(r for r in self.records if r.id == pid)

    def to_json(self) -> dict:
        return {"schema": 1, "n": self.n, "d": self.d, "status": self.status,
                "notes": self.notes, "records": [asdict(r) for r in self.records]}

    @classmethod
    def from_json(cls, obj) -> GammaReport:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["n"], obj["d"], obj["status"],
                   [PropertyRecord(**r) for r in obj["records"]], list(obj.get("notes", [])))


def gamma_report(g: RegularGraph, config: GammaConfig | None = None) -> GammaReport:
    cfg = config or GammaConfig()
    n, d = g.n, g.d
    u1 = cfg.u_max1 if cfg.u_max1 is not None else _default_u_max(n, d, cfg.c)
    u2 = cfg.u_max2 if cfg.u_max2 is not None else math.ceil(cfg.c * n ** 0.9)
    records = [
        check_property1(g, u1, cfg.coeff1),
        check_property2(g, u2, samples=cfg.samples2, seed=cfg.seed),
        check_property3(g, cfg.coeff3, samples=cfg.samples3, seed=cfg.seed + 1),
        check_property4(g, cfg.triangle_limit),
        check_property5(g, cfg.path_limit),
    ]
    states = {r.status for r in records}
    status = VIOLATED if VIOLATED in states else INCONCLUSIVE if INCONCLUSIVE in states else HOLDS
    notes = [f"properties 1-2 quantify over every constant C; this run fixes C = {cfg.c}",
             "property 2 is instantiated with the graph's computed lambda"]
    return GammaReport(n, d, status, records, notes)
