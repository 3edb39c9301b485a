"""Seeded experiment runners that compare measurements with the closed-form
counts and bounds of :mod:`rrg.counts`.

Trial ``i`` of a run with master seed ``s`` uses ``mix_seed(s, i)``, so any
trial can be replayed alone. Heavy Monte Carlo loops (``xti``, switch ratios)
draw in batches instead; batch ``b`` uses ``mix_seed(s, b)``.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import counts
from .coloring import YES, chromatic_number, k_colorable
from .enumerate import enumerate_regular, enumerate_regular_by_edges, in_scope
from .errors import InputError, ScopeError
from .extension import ExtensionInstance, ExtensionParams, extend_coloring
from .graph import is_proper_coloring
from .pairing import _simple_edges, mix_seed, sample_simple
from .structure import GammaConfig, gamma_report

SCHEMA = 1
KINDS = ("concentration", "simple-rate", "xti", "gamma-frequency", "switch-ratio",
         "extend-stress")

# formula ids used in comparisons, resolved to the evaluators in ``counts``
FORMULAS = {
    "prob-simple": counts.prob_simple,
    "class-size": counts.class_size,
    "expected-internal": counts.expected_internal_pairs,
    "internal-tail-a": counts.tail_bound_internal,
    "internal-tail-b": counts.tail_bound_internal,
    "switch-ratio": counts.switch_ratio_bound,
    "switch-ratio-intermediate": counts.switch_ratio_intermediate,
    "cross-ratio": counts.cross_ratio_bound,
    "chi-band": counts.chi_band,
}


@dataclass
class ExperimentSpec:
    kind: str
    n: int
    d: int
    trials: int = 100
    master_seed: int = 0
    params: dict = field(default_factory=dict)
    workers: int = 1
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if self.n < 1 or self.d < 0:
            raise InputError("need n >= 1 and d >= 0")
        if self.n * self.d % 2:
            raise InputError(f"d*n must be even (n={self.n}, d={self.d})")
        if self.workers < 1:
            raise InputError("workers must be >= 1")

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("out")
        return out


@dataclass
class ExperimentResult:
    spec: dict
    data: dict = field(default_factory=dict)
    comparisons: list[dict] = field(default_factory=list)
    trials: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)
    acceptable: bool = True
    elapsed: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {"schema": SCHEMA, "spec": self.spec, "data": self.data,
               "comparisons": self.comparisons, "trials": dict(self.trials),
               "flags": self.flags, "acceptable": self.acceptable}
        if timing:
            out["elapsed"] = self.elapsed
        else:
            out["trials"].pop("elapsed", None)
        return out


def comparison(formula_id: str, empirical, reference, tolerance=None, note: str = "",
               **params) -> dict:
    """Record an empirical value next to a formula value; ``within`` is set
    only when a tolerance is given."""
    if formula_id not in FORMULAS:
        raise KeyError(formula_id)
    emp, ref = float(empirical), float(reference)
    gap = emp - ref
    row = {"formula_id": formula_id, "params": params, "empirical": emp, "reference": ref,
           "abs_gap": abs(gap), "rel_gap": abs(gap) / abs(ref) if ref else None,
           "tolerance": tolerance, "note": note}
    if tolerance is not None:
        row["within"] = abs(gap) <= tolerance
    return row


def binomial_se(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / trials)


def _map(fn, args: list, workers: int) -> list:
    if workers <= 1 or len(args) < 2:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * workers))))


def _columns(rows: list[dict]) -> dict:
    keys = rows[0].keys() if rows else ()
    return {k: [r[k] for r in rows] for k in keys}


# ---------------------------------------------------------------- concentration


def _chi_trial(args):
    n, d, index, seed, budget, budget_ms = args
    start = time.perf_counter()
    g, stats = sample_simple(n, d, seed)
    deadline = time.monotonic() + budget_ms / 1000 if budget_ms else None
    res = chromatic_number(g, budget, deadline)
    return {"index": index, "seed": seed, "chi": res.chi, "attempts": stats.attempts,
            "elapsed": time.perf_counter() - start}


def best_window(hist: dict[int, int]) -> tuple[int | None, int]:
    """``(t, mass)`` of the window ``{t, t+1}`` with the most mass (ties: smaller t)."""
    best_t, best = None, -1
    for t in sorted(hist):
        mass = hist[t] + hist.get(t + 1, 0)
        if mass > best:
            best_t, best = t, mass
    return best_t, max(best, 0)


def empirical_tau(values: list[int], eps: float) -> int | None:
    """Least ``x`` with empirical ``P[value <= x] >= eps``."""
    if not values:
        return None
    ordered = sorted(values)
    need = math.ceil(eps * len(ordered) - 1e-12)
    return ordered[max(need, 1) - 1]


def run_concentration(spec: ExperimentSpec) -> ExperimentResult:
    start = time.perf_counter()
    budget = int(spec.params.get("budget", 1_000_000))
    budget_ms = spec.params.get("budget_ms")
    args = [(spec.n, spec.d, i, mix_seed(spec.master_seed, i), budget, budget_ms)
            for i in range(spec.trials)]
    rows = _map(_chi_trial, args, spec.workers)
    resolved = [r["chi"] for r in rows if r["chi"] is not None]
    unknown = len(rows) - len(resolved)
    hist = Counter(resolved)
    t, mass = best_window(hist)
    data = {
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "resolved": len(resolved),
        "unknown": unknown,
        "window": [t, t + 1] if t is not None else None,
        "window_coverage": mass / len(resolved) if resolved else None,
        "tau": {str(eps): empirical_tau(resolved, eps) for eps in (0.1, 0.01)},
        "budget": budget,
        "budget_ms": budget_ms,
    }
    result = ExperimentResult(spec.echo(), data, trials=_columns(rows))
    if unknown > 0.05 * spec.trials:
        result.flags.append(f"{unknown} of {spec.trials} trials unresolved (> 5%)")
        result.acceptable = False
    if spec.d >= 16 and t is not None:
        lo, hi = counts.chi_band(spec.d)
        inside = sum(c for k, c in hist.items() if lo <= k <= hi)
        result.comparisons.append(comparison(
            "chi-band", inside / len(resolved), 1.0,
            note=f"fraction of resolved chi inside [{lo:.3f}, {hi:.3f}]; asymptotic band",
            d=spec.d))
    if budget_ms:
        result.flags.append("wall-clock budget set: unknown outcomes may vary between runs")
    result.elapsed = time.perf_counter() - start
    return result


# ----------------------------------------------------------------- simple rate


def _simple_trial(args):
    n, d, index, seed = args
    perm = np.random.default_rng(seed).permutation(n * d)
    return {"index": index, "seed": seed, "simple": _simple_edges(perm, d, n) is not None}


def run_simple_rate(spec: ExperimentSpec) -> ExperimentResult:
    start = time.perf_counter()
    if spec.d < 1:
        raise InputError("simple-rate needs d >= 1")
    args = [(spec.n, spec.d, i, mix_seed(spec.master_seed, i)) for i in range(spec.trials)]
    rows = _map(_simple_trial, args, spec.workers)
    hits = sum(r["simple"] for r in rows)
    rate = hits / spec.trials
    ref = counts.prob_simple(spec.d, spec.n)
    se = binomial_se(ref, spec.trials)
    tol = spec.params.get("tolerance", 3 * se)
    result = ExperimentResult(spec.echo(), {"simple": hits, "rate": rate, "se": se},
                              trials=_columns(rows))
    result.comparisons.append(comparison(
        "prob-simple", rate, ref, tol,
        note="correction term O(d^2/n) dropped; tolerance "
             + ("given" if "tolerance" in spec.params else "= 3 binomial SE"),
        d=spec.d, n=spec.n))
    result.elapsed = time.perf_counter() - start
    return result


# ------------------------------------------------------------------------- xti


def _tail_grid(n, d, t, points=20):
    e = counts.expected_internal_pairs(n, d, t)
    lo, hi = counts.k_range(n, d, t)
    top = max(hi - e, e - lo)
    return [top * j / points for j in range(1, points + 1)] if top > 0 else []


def xti_invariants(n: int, d: int, t: int) -> dict:
    """Partition, expectation, mode and tail-domination checks for one ``(n, d, t)``."""
    table = counts.class_size_table(n, d, t)
    e = counts.expected_internal_pairs(n, d, t)
    ks = sorted(table.sizes)
    sizes = [table.sizes[k] for k in ks]
    peak = sizes.index(max(sizes))
    unimodal = all(a <= b for a, b in zip(sizes[:peak], sizes[1:peak + 1])) and \
        all(a >= b for a, b in zip(sizes[peak:], sizes[peak + 1:]))
    failures = {"a": [], "b": []}
    checked = 0
    for delta in _tail_grid(n, d, t):
        tail = counts.internal_tail(n, d, t, delta)
        for variant in ("a", "b"):
            if variant == "b" and delta <= e:
                continue
            checked += 1
            bound = counts.tail_bound_internal(n, d, t, float(delta), variant).value
            if bound < float(tail):
                failures[variant].append({"delta": float(delta), "tail": float(tail),
                                          "bound": bound})
    return {
        "partition": table.total == counts.count_pairings(n, d),
        "expectation": table.mean() == e,
        "mode_near_mean": counts.mode_location(n, d, t) in {math.floor(e), math.ceil(e)},
        "unimodal": unimodal,
        "tail_points": checked,
        "tail_failures": failures,
    }


def internal_pair_counts(n: int, d: int, t: int, samples: int, seed: int,
                         batch: int = 2000) -> tuple[np.ndarray, list[int]]:
    """Histogram (indexed by k) of internal pairs among the first ``t`` cells
    over ``samples`` random pairings, with the batch seeds used."""
    m, dt = n * d, d * t
    hist = np.zeros(dt // 2 + 1, dtype=np.int64)
    seeds = []
    for b in range((samples + batch - 1) // batch):
        size = min(batch, samples - b * batch)
        s = mix_seed(seed, b)
        seeds.append(s)
        rng = np.random.default_rng(s)
        perms = rng.permuted(np.tile(np.arange(m), (size, 1)), axis=1)
        inside = perms < dt
        k = np.sum(inside[:, 0::2] & inside[:, 1::2], axis=1)
        hist += np.bincount(k, minlength=hist.size)
    return hist, seeds


def run_xti_check(n: int, d: int, t: int, trials: int | None = None,
                  master_seed: int = 0) -> ExperimentResult:
    start = time.perf_counter()
    spec = {"kind": "xti", "n": n, "d": d, "t": t, "trials": trials,
            "master_seed": master_seed}
    exact = n * d <= 30
    if not exact and not trials:
        raise ScopeError(f"exact mode needs dn <= 30 (dn={n * d}); pass trials for Monte Carlo")
    e = counts.expected_internal_pairs(n, d, t)
    result = ExperimentResult(spec, {"expectation": str(e), "mode": "exact" if exact else "mc"})
    probs = {}
    if exact:
        table = counts.class_size_table(n, d, t)
        probs = {k: table.probability(k) for k in sorted(table.sizes)}
        result.data["distribution"] = {str(k): str(p) for k, p in probs.items()}
        result.data["mode_k"] = counts.mode_location(n, d, t)
        inv = xti_invariants(n, d, t)
        result.data["invariants"] = inv
        broken = [k for k in ("partition", "expectation", "mode_near_mean", "unimodal")
                  if not inv[k]]
        broken += [f"tail-{v}" for v, f in inv["tail_failures"].items() if f]
        if broken:
            result.flags.append("invariant failures: " + ", ".join(broken))
    if trials:
        hist, seeds = internal_pair_counts(n, d, t, trials, master_seed)
        result.trials = {"batch_seeds": seeds}
        result.data["empirical"] = {str(k): int(c) for k, c in enumerate(hist) if c}
        mean = float(np.dot(np.arange(hist.size), hist)) / trials
        result.comparisons.append(comparison("expected-internal", mean, e, n=n, d=d, t=t))
        for k, p in probs.items():
            freq = hist[k] / trials if k < hist.size else 0.0
            result.comparisons.append(comparison(
                "class-size", freq, p, 3 * binomial_se(float(p), trials),
                note="class_size / (dn-1)!!; tolerance = 3 binomial SE", n=n, d=d, t=t, k=k))
    result.elapsed = time.perf_counter() - start
    return result


# --------------------------------------------------------------------- gamma


def _gamma_trial(args):
    n, d, index, seed, samples = args
    start = time.perf_counter()
    g, _ = sample_simple(n, d, seed)
    cfg = GammaConfig(samples2=samples, samples3=samples, seed=seed % (2**32))
    rep = gamma_report(g, cfg)
    return {"index": index, "seed": seed,
            "status": [r.status for r in rep.records],
            "degeneracy": rep.record(1).metrics.get("degeneracy"),
            "elapsed": time.perf_counter() - start}


def run_gamma_frequency(spec: ExperimentSpec) -> ExperimentResult:
    start = time.perf_counter()
    samples = int(spec.params.get("samples", 5000))
    args = [(spec.n, spec.d, i, mix_seed(spec.master_seed, i), samples)
            for i in range(spec.trials)]
    rows = _map(_gamma_trial, args, spec.workers)
    per = {}
    for p in range(5):
        states = Counter(r["status"][p] for r in rows)
        per[str(p + 1)] = {"holds": states["holds"], "violated": states["violated"],
                           "inconclusive": states["inconclusive"],
                           "rate": states["holds"] / spec.trials}
    joint = sum(all(s == "holds" for s in r["status"]) for r in rows)
    data = {"properties": per, "joint": joint, "joint_rate": joint / spec.trials,
            "max_degeneracy": max(r["degeneracy"] for r in rows)}
    result = ExperimentResult(spec.echo(), data, trials=_columns(rows))
    inconclusive = sum(v["inconclusive"] for v in per.values())
    if inconclusive:
        result.flags.append(f"{inconclusive} inconclusive property checks")
    result.elapsed = time.perf_counter() - start
    return result


# -------------------------------------------------------------- switch ratios


def _ratios(hist: dict[int, int]) -> list[dict]:
    out = []
    for i in sorted(hist):
        if i - 1 in hist and hist[i - 1] > 0 and hist[i] > 0:
            out.append({"i": i, "count": hist[i], "previous": hist[i - 1],
                        "ratio": hist[i] / hist[i - 1],
                        "exact": str(Fraction(hist[i], hist[i - 1]))})
    return out


def _default_w(n, u_set, size):
    rest = [v for v in range(n) if v not in set(u_set)]
    return tuple(rest[:size])


def class_histograms(graphs, u_set, w_set) -> tuple[dict[int, int], dict[int, int]]:
    """Counts of ``e(U)`` and ``e(U, W)`` values over an iterable of edge lists."""
    u_mask = set(u_set)
    w_mask = set(w_set)
    inner, cross = Counter(), Counter()
    for edges in graphs:
        a = b = 0
        for x, y in edges:
            if x in u_mask and y in u_mask:
                a += 1
            elif (x in u_mask and y in w_mask) or (x in w_mask and y in u_mask):
                b += 1
        inner[a] += 1
        cross[b] += 1
    return dict(inner), dict(cross)


def exact_switch_histograms(n: int, d: int, u_set, w_set, independent: bool = False):
    """Class histograms from the row enumerator, or from the independent
    edge-branching enumerator when ``independent`` is set."""
    if independent:
        graphs = enumerate_regular_by_edges(n, d)
    else:
        graphs = (g.edges() for g in enumerate_regular(n, d))
    return class_histograms(graphs, u_set, w_set)


def mc_switch_histograms(n: int, d: int, u_set, w_set, samples: int, seed: int,
                         batch: int = 4000):
    """Same histograms over ``samples`` uniform simple graphs (vectorized
    rejection sampling); returns the batch seeds as well."""
    m = n * d
    in_u = np.zeros(n, dtype=bool)
    in_u[list(u_set)] = True
    in_w = np.zeros(n, dtype=bool)
    in_w[list(w_set)] = True
    inner, cross = Counter(), Counter()
    got, b, seeds = 0, 0, []
    while got < samples:
        s = mix_seed(seed, b)
        seeds.append(s)
        b += 1
        rng = np.random.default_rng(s)
        cells = rng.permuted(np.tile(np.arange(m), (batch, 1)), axis=1) // d
        x, y = cells[:, 0::2], cells[:, 1::2]
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        keys = np.sort(lo * n + hi, axis=1)
        ok = ~np.any(x == y, axis=1) & ~np.any(keys[:, 1:] == keys[:, :-1], axis=1)
        x, y = x[ok][: samples - got], y[ok][: samples - got]
        got += len(x)
        a = np.sum(in_u[x] & in_u[y], axis=1)
        c = np.sum((in_u[x] & in_w[y]) | (in_w[x] & in_u[y]), axis=1)
        inner.update(a.tolist())
        cross.update(c.tolist())
    return dict(inner), dict(cross), seeds


def run_switch_ratio(n: int, d: int, u_set, samples: int | None = None, master_seed: int = 0,
                     w_set=None, min_samples: int = 100_000) -> ExperimentResult:
    """Class sizes by ``e(U)`` (and by ``e(U, W)``) and their consecutive ratios,
    checked against the switching bounds where those bounds apply."""
    start = time.perf_counter()
    u_set = tuple(sorted(set(u_set)))
    u = len(u_set)
    if w_set is None:
        w_set = _default_w(n, u_set, u)
    w_set = tuple(sorted(set(w_set)))
    w = len(w_set)
    if set(u_set) & set(w_set):
        raise InputError("U and W must be disjoint")
    spec = {"kind": "switch-ratio", "n": n, "d": d, "u_set": list(u_set),
            "w_set": list(w_set), "samples": samples, "master_seed": master_seed}
    if samples is None:
        if not in_scope(n, d):
            raise ScopeError(f"({n}, {d}) is outside enumeration scope; give >= "
                             f"{min_samples} Monte Carlo samples")
        inner, cross = exact_switch_histograms(n, d, u_set, w_set)
        mode, seeds, total = "exact", [], sum(inner.values())
    else:
        if samples < min_samples:
            raise ScopeError(f"Monte Carlo needs >= {min_samples} samples (got {samples})")
        inner, cross, seeds = mc_switch_histograms(n, d, u_set, w_set, samples, master_seed)
        mode, total = "mc", samples
    result = ExperimentResult(spec, {"mode": mode, "graphs": total,
                                     "inner": {str(k): v for k, v in sorted(inner.items())},
                                     "cross": {str(k): v for k, v in sorted(cross.items())}})
    if seeds:
        result.trials = {"batch_seeds": seeds}
    pre = counts.switch_ratio_precondition(n, d, u)
    result.data["switch_precondition"] = pre
    inner_ratios = _ratios(inner)
    for r in inner_ratios:
        i = r["i"]
        se = r["ratio"] * math.sqrt(1 / r["count"] + 1 / r["previous"]) if mode == "mc" else 0.0
        r["se"] = se
        bound = counts.switch_ratio_bound(n, d, u, i)
        if pre:
            tol = 3 * se
            row = comparison("switch-ratio", r["ratio"], bound, note="checked: ratio <= bound + tol",
                             n=n, d=d, u=u, i=i)
            row["tolerance"] = tol
            row["within"] = r["ratio"] <= float(bound) + tol
        else:
            row = comparison("switch-ratio", r["ratio"], bound,
                             note="precondition fails at this scale; not checked",
                             n=n, d=d, u=u, i=i)
        result.comparisons.append(row)
        mid = counts.switch_ratio_intermediate(n, d, u, i)
        if mid is not None:
            result.comparisons.append(comparison(
                "switch-ratio-intermediate", r["ratio"], mid, note="informational",
                n=n, d=d, u=u, i=i))
    result.data["inner_ratios"] = inner_ratios
    cross_pre = w > 0 and counts.cross_ratio_precondition(n, d, u, w)
    result.data["cross_precondition"] = cross_pre
    cross_ratios = _ratios(cross)
    for r in cross_ratios:
        i = r["i"]
        se = r["ratio"] * math.sqrt(1 / r["count"] + 1 / r["previous"]) if mode == "mc" else 0.0
        bound = counts.cross_ratio_bound(n, d, u, w, i)
        row = comparison("cross-ratio", r["ratio"], bound,
                         note="checked" if cross_pre else
                         "precondition fails at this scale; not checked",
                         n=n, d=d, u=u, w=w, i=i)
        if cross_pre:
            row["tolerance"] = 3 * se
            row["within"] = r["ratio"] <= float(bound) + 3 * se
        result.comparisons.append(row)
    result.data["cross_ratios"] = cross_ratios
    threshold = Fraction(2 * u * w * d, n)
    tail = [r for r in cross_ratios if r["i"] > threshold]
    result.data["cross_monotone_beyond"] = {"threshold": float(threshold),
                                            "holds": all(r["ratio"] < 1 for r in tail)}
    if any(c.get("within") is False for c in result.comparisons):
        result.flags.append("bound exceeded where its precondition holds")
        result.acceptable = False
    result.elapsed = time.perf_counter() - start
    return result


# ------------------------------------------------------------ extend stress


def _stress_params(spec_params: dict, d: int, rng: np.random.Generator) -> dict:
    if not spec_params.get("mixed"):
        return {k: spec_params[k] for k in ("t", "u0_size", "neighbor_threshold", "list_size",
                                            "prune_floor", "availability_floor", "retries")
                if k in spec_params}
    t = int(rng.integers(max(d, 2), d + 4))
    list_size = int(rng.integers(1, t + 1))
    return {"t": t, "u0_size": int(rng.integers(0, 6)),
            "neighbor_threshold": int(rng.choice([1, 2, 3, 50])),
            "list_size": list_size,
            "prune_floor": int(rng.integers(1, list_size + 1)),
            "availability_floor": float(rng.choice([0.25, 0.5, 0.75])),
            "retries": int(rng.integers(1, 6))}


def _validate_extension(g, inst, res) -> bool:
    """Independent check of a reported success."""
    a = res.coloring.assignment
    if not is_proper_coloring(g, a, palette=inst.t + 1):
        return False
    exempt = set(res.buffer) | set(res.recolored)
    return all(a[v] == c for v, c in inst.f.items() if v not in exempt)


def _extend_trial(args):
    n, d, index, seed, spec_params = args
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    p = _stress_params(spec_params, d, rng)
    t = p.get("t", d + 1)
    u0_size = p.get("u0_size", 3)
    params = ExtensionParams(
        neighbor_threshold=p.get("neighbor_threshold", 2),
        list_size=p.get("list_size", min(t, 2)),
        prune_floor=p.get("prune_floor", 1),
        availability_floor=p.get("availability_floor", 0.5),
        retries=p.get("retries", 20))
    row = {"index": index, "seed": seed, "t": t, "u0_size": u0_size,
           "params": asdict(params), "stage": None, "validated": None}
    g, _ = sample_simple(n, d, int(rng.integers(2**63)))
    u0 = sorted(rng.choice(n, size=u0_size, replace=False).tolist()) if u0_size else []
    rest = [v for v in range(n) if v not in set(u0)]
    sub, labels = g.induced(rest)
    verdict, col = k_colorable(sub, t, budget=200_000)
    if verdict != YES:
        row["stage"] = "base-coloring"
    else:
        f = {labels[i]: c for i, c in col.assignment.items()}
        inst = ExtensionInstance(g, tuple(u0), f, t, params)
        res = extend_coloring(inst, int(rng.integers(2**63)))
        row["stage"] = res.stage
        if res.ok:
            row["validated"] = _validate_extension(g, inst, res)
    row["elapsed"] = time.perf_counter() - start
    return row


def run_extend_stress(spec: ExperimentSpec) -> ExperimentResult:
    start = time.perf_counter()
    args = [(spec.n, spec.d, i, mix_seed(spec.master_seed, i), dict(spec.params))
            for i in range(spec.trials)]
    rows = _map(_extend_trial, args, spec.workers)
    stages = Counter(r["stage"] for r in rows)
    ok = stages["ok"]
    false_ok = sum(1 for r in rows if r["stage"] == "ok" and not r["validated"])
    attempted = spec.trials - stages["base-coloring"]
    data = {"stages": dict(sorted(stages.items())), "successes": ok,
            "false_successes": false_ok,
            "success_rate": ok / attempted if attempted else None}
    result = ExperimentResult(spec.echo(), data, trials=_columns(rows))
    if false_ok:
        result.flags.append(f"{false_ok} reported successes failed validation")
        result.acceptable = False
    result.elapsed = time.perf_counter() - start
    return result


# ------------------------------------------------------------------- dispatch


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    if spec.kind == "concentration":
        return run_concentration(spec)
    if spec.kind == "simple-rate":
        return run_simple_rate(spec)
    if spec.kind == "gamma-frequency":
        return run_gamma_frequency(spec)
    if spec.kind == "extend-stress":
        return run_extend_stress(spec)
    if spec.kind == "xti":
        if "t" not in spec.params:
            raise InputError("xti needs params['t']")
        return run_xti_check(spec.n, spec.d, int(spec.params["t"]),
                             spec.params.get("mc_trials"), spec.master_seed)
    u = spec.params.get("u_set") or list(range(int(spec.params.get("u", 4))))
    return run_switch_ratio(spec.n, spec.d, u, spec.params.get("samples"), spec.master_seed,
                            spec.params.get("w_set"))


def simple_pairing_multiplicity(n: int, d: int) -> int:
    """Simple pairings projecting onto one fixed simple d-regular graph: each
    vertex orders its ``d`` incident edges over its ``d`` elements."""
    return math.factorial(d) ** n

