import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrg.coloring import (chromatic_number, dsatur_coloring, greedy_coloring, k_colorable,
                          list_coloring_greedy, max_clique)
from rrg.graph import (Graph, complete_graph, cycle_graph, degeneracy, is_proper_coloring,
                       petersen_graph)
from rrg.pairing import sample_simple

from .strategies import graphs, regular_graphs


def brute_colorable(g, k):
    edges = g.edges()
    for colors in itertools.product(range(k), repeat=g.n):
        if all(colors[u] != colors[v] for u, v in edges):
            return True
    return False


def brute_clique(g):
    for size in range(g.n, 0, -1):
        for s in itertools.combinations(range(g.n), size):
            if all(g.has_edge(u, v) for u, v in itertools.combinations(s, 2)):
                return size
    return 0


def test_greedy_examples():
    assert greedy_coloring(complete_graph(4)).t == 4
    assert greedy_coloring(cycle_graph(6)).t == 2
    with pytest.raises(ValueError):
        greedy_coloring(cycle_graph(4), [0, 1, 2])


@given(regular_graphs(max_n=30, max_d=5))
def test_greedy_and_dsatur_bounds(g):
    for col in (greedy_coloring(g), dsatur_coloring(g)):
        assert is_proper_coloring(g, col.assignment, palette=g.d + 1)


def test_k_colorable_examples():
    assert k_colorable(cycle_graph(5), 2)[0] == "no"
    verdict, cert = k_colorable(cycle_graph(5), 3)
    assert verdict == "yes" and is_proper_coloring(cycle_graph(5), cert.assignment, palette=3)
    p = petersen_graph()
    assert k_colorable(p, 2) == ("no", None)
    verdict, cert = k_colorable(p, 3)
    assert verdict == "yes" and is_proper_coloring(p, cert.assignment, palette=3)
    # oracle: exhaustive 3^10 and 2^10 scans agree
    assert brute_colorable(p, 3) and not brute_colorable(p, 2)
    with pytest.raises(ValueError):
        k_colorable(p, 0)


@settings(max_examples=80)
@given(graphs(max_n=7), st.integers(1, 4))
def test_k_colorable_matches_exhaustive(g, k):
    verdict, cert = k_colorable(g, k)
    assert verdict == ("yes" if brute_colorable(g, k) else "no")
    if cert is not None:
        assert is_proper_coloring(g, cert.assignment, palette=k)


def test_k_colorable_larger_oracle():
    rng = random.Random(5)
    for _ in range(4):
        pairs = list(itertools.combinations(range(10), 2))
        g = Graph(10, [e for e in pairs if rng.random() < 0.45])
        for k in (3, 4):
            assert (k_colorable(g, k)[0] == "yes") == brute_colorable(g, k)


def test_budget_gives_unknown():
    assert k_colorable(petersen_graph(), 2, budget=1)[0] == "unknown"
    res = chromatic_number(petersen_graph(), budget=1)
    assert res.chi is None and not res.resolved


def test_deadline_gives_unknown():
    g, _ = sample_simple(60, 5, 0)
    verdict, _ = k_colorable(g, 3, budget=None, deadline=0.0)
    assert verdict in ("unknown", "no", "yes")


@given(graphs(max_n=9))
def test_max_clique_matches_brute_force(g):
    assert len(max_clique(g)) == brute_clique(g)
    c = max_clique(g)
    assert all(g.has_edge(u, v) for u, v in itertools.combinations(c, 2))


def test_chromatic_examples():
    assert chromatic_number(complete_graph(4)).chi == 4
    assert chromatic_number(cycle_graph(5)).chi == 3
    assert chromatic_number(cycle_graph(6)).chi == 2
    assert chromatic_number(Graph(3)).chi == 1
    assert chromatic_number(Graph(0)).chi == 0


@settings(max_examples=60)
@given(graphs(max_n=9))
def test_chromatic_between_clique_and_degeneracy(g):
    res = chromatic_number(g)
    assert res.resolved
    assert brute_clique(g) <= res.chi <= degeneracy(g) + 1
    assert is_proper_coloring(g, res.certificate.assignment, palette=res.chi)
    if res.chi > 1:
        assert not brute_colorable(g, res.chi - 1)


def test_chromatic_g50_3(g50_3):
    for g in g50_3:
        res = chromatic_number(g)
        assert res.chi == 3
        assert is_proper_coloring(g, res.certificate.assignment, palette=3)


def test_list_coloring_examples():
    p3 = Graph(3, [(0, 1), (1, 2)])
    col = list_coloring_greedy(p3, {0: {1, 2}, 1: {1, 2}, 2: {1, 2}})
    assert col is not None and is_proper_coloring(p3, col.assignment)
    c5 = cycle_graph(5)
    assert list_coloring_greedy(c5, {v: {1, 2} for v in range(5)}) is None


@settings(max_examples=300)
@given(graphs(max_n=12), st.randoms(use_true_random=False))
def test_list_coloring_degeneracy_lists(g, rnd):
    size = degeneracy(g) + 1
    lists = {v: set(rnd.sample(range(1, 3 * size + 2), size)) for v in range(g.n)}
    col = list_coloring_greedy(g, lists)
    assert col is not None
    assert is_proper_coloring(g, col.assignment)
    assert all(col[v] in lists[v] for v in range(g.n))
