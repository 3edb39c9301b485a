"""Exact counts, expectations, ratios and probability bounds for the
configuration model and for edge counts in random regular graphs.

Counting and expectations use ``int``/``Fraction`` throughout. Only the
exp/log bound evaluators return floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import InputError, UndefinedRatioError
from .pairing import count_pairings, double_factorial_pairings


@dataclass(frozen=True)
class BoundValue:
    value: float
    formula_id: str
    params: dict = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        return {"value": self.value, "formula_id": self.formula_id,
                "params": self.params, "note": self.note}


def _check_t(n, d, t):
    if n * d % 2:
        raise InputError(f"d*n must be even (n={n}, d={d})")
    if not 0 <= t <= n:
        raise InputError(f"t={t} outside [0, {n}]")


def expected_internal_pairs(n: int, d: int, t: int) -> Fraction:
    """E[X], X = number of pairs inside the union of ``t`` cells."""
    if d * n < 2:
        raise InputError("need d*n >= 2")
    _check_t(n, d, t)
    return Fraction(comb(d * t, 2), d * n - 1)


def expected_cross_pairs(n: int, d: int, s: int, t: int) -> Fraction:
    """E[number of pairs between disjoint groups of ``s`` and ``t`` cells]."""
    if d * n < 2:
        raise InputError("need d*n >= 2")
    if s < 0 or t < 0 or s + t > n:
        raise InputError(f"s+t={s + t} exceeds n={n}")
    return Fraction(d * d * s * t, d * n - 1)


def k_range(n: int, d: int, t: int) -> tuple[int, int]:
    """Inclusive range of possible internal-pair counts for ``t`` cells."""
    _check_t(n, d, t)
    dt, dn = d * t, d * n
    return max(0, dt - dn // 2), dt // 2


def conditional_cross_expectation(n: int, d: int, s: int, t: int, i: int) -> Fraction:
    """E[cross pairs | exactly ``i`` internal pairs among the ``t`` cells]."""
    if s < 0 or s + t > n:
        raise InputError(f"s+t={s + t} exceeds n={n}")
    lo, hi = k_range(n, d, t)
    if not lo <= i <= hi:
        raise InputError(f"i={i} outside [{lo}, {hi}]")
    if t == n:
        return Fraction(0)
    return Fraction(d * s * (d * t - 2 * i), d * n - d * t)


def class_size(n: int, d: int, t: int, k: int) -> int:
    """Number of pairings with exactly ``k`` pairs inside ``t`` fixed cells.

    Choose ``2k`` of the ``dt`` inside elements and match them, inject the
    remaining ``dt-2k`` into the outside elements, then match what is left.
    """
    _check_t(n, d, t)
    dt, dn = d * t, d * n
    rest = dn - 2 * dt + 2 * k
    if k < 0 or 2 * k > dt or rest < 0:
        return 0
    inside = comb(dt, 2 * k) * factorial(2 * k) // (factorial(k) * 2**k)
    crossing = comb(dn - dt, dt - 2 * k) * factorial(dt - 2 * k)
    return inside * crossing * double_factorial_pairings(rest)


@dataclass(frozen=True)
class ClassSizeTable:
    n: int
    d: int
    t: int
    sizes: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.sizes.values())

    def probability(self, k: int) -> Fraction:
        return Fraction(self.sizes.get(k, 0), count_pairings(self.n, self.d))

    def mean(self) -> Fraction:
        return Fraction(sum(k * c for k, c in self.sizes.items()), self.total)


@lru_cache(maxsize=4096)
def class_size_table(n: int, d: int, t: int) -> ClassSizeTable:
    lo, hi = k_range(n, d, t)
    return ClassSizeTable(n, d, t, {k: class_size(n, d, t, k) for k in range(lo, hi + 1)})


def ratio_f(n: int, d: int, t: int, k: int, as_printed: bool = False) -> Fraction:
    """``|C_{k+1}| / |C_k|`` from the exact class sizes.

    ``as_printed=True`` evaluates the closed form with the factor
    ``(dt-2k)(dt-2k+1)``, which disagrees with the exact quotient
    (the correct factor is ``(dt-2k)(dt-2k-1)``); kept for comparison only.
    """
    dt, dn = d * t, d * n
    if as_printed:
        den = 4 * (k + 1) * Fraction(dn - 2 * dt + 2 * k + 2, 2)
        if den == 0:
            raise UndefinedRatioError(f"printed ratio has zero denominator at k={k}")
        return Fraction((dt - 2 * k) * (dt - 2 * k + 1)) / den
    here = class_size(n, d, t, k)
    if here == 0:
        raise UndefinedRatioError(f"class of size 0 at k={k} (n={n}, d={d}, t={t})")
    return Fraction(class_size(n, d, t, k + 1), here)


def mode_location(n: int, d: int, t: int) -> int:
    """Most likely internal-pair count; ties go to the smaller ``k``."""
    sizes = class_size_table(n, d, t).sizes
    best = max(sizes.values())
    return min(k for k, c in sizes.items() if c == best)


def internal_tail(n: int, d: int, t: int, delta) -> Fraction:
    """Exact ``P[|X - E[X]| >= delta]`` from the class sizes."""
    e = expected_internal_pairs(n, d, t)
    delta = Fraction(delta)
    table = class_size_table(n, d, t)
    hit = sum(c for k, c in table.sizes.items() if abs(k - e) >= delta)
    return Fraction(hit, table.total)


def tail_bound_internal(n: int, d: int, t: int, delta: float, variant: str = "a") -> BoundValue:
    """Upper bound on ``P[|X - E[X]| >= delta]`` for internal pairs of ``t`` cells."""
    if delta <= 0:
        raise InputError("delta must be positive")
    e = float(expected_internal_pairs(n, d, t))
    delta = float(delta)
    pre = d * t / 2
    if variant == "a":
        value = pre * math.exp(-delta**2 / (4 * e + 2 * delta + 4))
    elif variant == "b":
        if delta <= e:
            raise InputError(f"variant b needs delta > E[X] = {e}")
        value = pre * math.exp(-(delta / 2) * math.log((2 * e + delta + 2) / (2 * e + 2)))
    else:
        raise InputError(f"unknown variant {variant!r}")
    return BoundValue(value, f"internal-tail-{variant}",
                      {"n": n, "d": d, "t": t, "delta": delta, "expectation": e})


def _edge_expectation(n, d, u) -> Fraction:
    return Fraction(comb(u, 2) * d, n)


def switch_ratio_bound(n: int, d: int, u: int, i: int) -> Fraction:
    """Upper bound on ``|C_i| / |C_{i-1}|``, ``C_i`` = graphs with ``e(U) = i``."""
    if i < 1:
        raise InputError("i must be >= 1")
    return Fraction(1, i) * _edge_expectation(n, d, u) * (1 + Fraction(2 * u + 4 * d, n))


def switch_ratio_precondition(n: int, d: int, u: int) -> bool:
    """Scale condition ``dn/2 - ud - 2d^2 > ud + 2d^2`` under which the bound is derived."""
    return Fraction(d * n, 2) - u * d - 2 * d * d > u * d + 2 * d * d


def switch_ratio_intermediate(n: int, d: int, u: int, i: int) -> Fraction | None:
    """Double-counting bound before simplification; needs ``dn/2 - ud - 2d^2 > 0``."""
    slack = Fraction(d * n, 2) - u * d - 2 * d * d
    if slack <= 0 or i < 1:
        return None
    return Fraction(comb(u, 2) * d * d, 2 * i) / slack


def cross_ratio_bound(n: int, d: int, u: int, w: int, i: int) -> Fraction:
    """Upper bound ``2uwd/(in)`` on ``|E_i| / |E_{i-1}|`` (edges between two sets)."""
    if i < 1:
        raise InputError("i must be >= 1")
    return Fraction(2 * u * w * d, i * n)


def cross_ratio_precondition(n: int, d: int, u: int, w: int) -> bool:
    """``w <= u <= n/10`` and the double-counting slack condition."""
    slack = Fraction(d * n, 2) - (u + w) * d - 2 * d * d
    return w <= u and 10 * u <= n and slack > (u + w) * d + 2 * d * d


def deviation_bound_graph(n: int, d: int, u: int, delta: float, variant: str = "a") -> BoundValue:
    """Bound on ``P[e(U) >= E[e(U)] + delta]`` for a fixed ``u``-set of a random
    d-regular graph, with the ``exp(o(delta))`` factor dropped."""
    e = float(_edge_expectation(n, d, u))
    if delta < e:
        raise InputError(f"delta must be at least E[e(U)] = {e}")
    if delta <= 0:
        raise InputError("delta must be positive")
    pre = d * u / 2
    if variant == "a":
        value = pre * math.exp(-delta**2 / (4 * e + 2 * delta))
    elif variant == "b":
        value = pre * math.exp(-(delta / 2) * math.log1p(delta / (2 * e))) if e > 0 else 0.0
    else:
        raise InputError(f"unknown variant {variant!r}")
    return BoundValue(value, f"edge-deviation-{variant}",
                      {"n": n, "d": d, "u": u, "delta": float(delta), "expectation": e},
                      "exp(o(delta)) factor omitted")


def prob_simple(d: int, n: int) -> float:
    """Asymptotic probability that a random pairing is simple, without the
    ``O(d^2/n)`` correction."""
    if d < 1:
        raise InputError("d must be >= 1")
    return math.exp((1 - d * d) / 4 - d**3 / (12 * n))


def azuma_tail(n: int, d: int, c: float, lam: float, conditioned: bool = False) -> float:
    """One-sided martingale tail for a ``c``-Lipschitz (under switches) pairing
    statistic; ``conditioned=True`` transfers it to simple graphs by dividing
    by :func:`prob_simple`."""
    if lam <= 0 or c <= 0:
        raise InputError("lambda and c must be positive")
    value = math.exp(-lam * lam / (d * n * c * c))
    return value / prob_simple(d, n) if conditioned else value


def chi_band(d: int) -> tuple[float, float]:
    """Interval containing the chromatic number of a random d-regular graph (w.h.p.)."""
    if d < 16:
        raise InputError(f"band undefined for d={d} < 16")
    ln = math.log(d)
    width = 8 * d * math.log(ln) / ln**2
    center = d / (2 * ln) + width
    return center - width, center + width


def buffer_bound(n: int, d: int, epsilon: float) -> float:
    """``2*lam*sqrt(n)`` with ``lam = 2*sqrt(d*ln(1/(eps*P[simple])))``."""
    if not 0 < epsilon < 1:
        raise InputError("epsilon must be in (0, 1)")
    lam = 2 * math.sqrt(d * math.log(1 / (epsilon * prob_simple(d, n))))
    return 2 * lam * math.sqrt(n)


def counts_report(n: int, d: int, t: int, deltas=(1, 2, 3)) -> dict:
    """JSON-ready table of class sizes with expectation, mode and tail bounds."""
    table = class_size_table(n, d, t)
    e = expected_internal_pairs(n, d, t)
    rows = []
    for k, size in table.sizes.items():
        rows.append({"k": k, "size": str(size), "probability": float(table.probability(k))})
    bounds = []
    for delta in deltas:
        row = {"delta": delta, "exact_tail": float(internal_tail(n, d, t, delta)),
               "bound_a": tail_bound_internal(n, d, t, delta, "a").value}
        row["bound_b"] = tail_bound_internal(n, d, t, delta, "b").value if delta > e else None
        bounds.append(row)
    return {
        "schema": 1,
        "n": n, "d": d, "t": t,
        "sizes": {str(k): str(c) for k, c in table.sizes.items()},
        "table": rows,
        "total": str(table.total),
        "expectation": str(e),
        "expectation_float": float(e),
        "mode": mode_location(n, d, t),
        "bounds": bounds,
    }
