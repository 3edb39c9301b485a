import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrg.coloring import greedy_coloring
from rrg.errors import InputError
from rrg.extension import (ExtensionInstance, ExtensionParams, build_copy_graph,
                           choose_lists, extend_coloring, grow_buffer_set, is_independent,
                           order_blocks, prefix_cuts, selected_nodes)
from rrg.graph import Graph, complete_graph, cycle_graph, is_proper_coloring
from rrg.pairing import sample_simple

from .strategies import graphs


def components(g, v):
    seen, stack = {v}, [v]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return tuple(sorted(seen))


def test_params_validation():
    with pytest.raises(InputError):
        ExtensionParams(list_size=3, prune_floor=4)
    with pytest.raises(InputError):
        ExtensionParams(retries=0)
    with pytest.raises(InputError):
        ExtensionParams(availability_floor=0)
    assert ExtensionParams().list_size == 14


def test_grow_buffer_examples():
    g, _ = sample_simple(30, 3, 0)
    assert grow_buffer_set(g, [4, 9], 4) == (4, 9)
    assert grow_buffer_set(g, [5], 1) == components(g, 5)
    assert grow_buffer_set(cycle_graph(6), [0, 2], 2) == (0, 1, 2)
    with pytest.raises(InputError):
        grow_buffer_set(g, [0], 0)


@given(graphs(max_n=12), st.data())
def test_grow_buffer_fixpoint(g, data):
    u0 = data.draw(st.sets(st.integers(0, g.n - 1)))
    thr = data.draw(st.integers(1, 4))
    u = set(grow_buffer_set(g, u0, thr))
    assert u0 <= u
    for v in range(g.n):
        if v not in u:
            assert len(g.neighbor_set(v) & u) < thr


def test_copy_graph_examples():
    g, _ = sample_simple(30, 3, 2)
    v = next(v for v in range(30)
             if not any(g.has_edge(a, b) for a, b in itertools.combinations(g.neighbors(v), 2)))
    f = {x: c for x, c in greedy_coloring(g).assignment.items() if x != v}
    h = build_copy_graph(g, [v], f)
    assert len(h.nodes) == 3 and h.edges == []
    k4 = complete_graph(4)
    h = build_copy_graph(k4, [0], {1: 1, 2: 2, 3: 3})
    assert len(h.nodes) == 3 and len(h.edges) == 3
    assert sorted(h.color) == [1, 2, 3]
    with pytest.raises(InputError):
        build_copy_graph(k4, [0], {1: 1, 2: 2})


@given(graphs(max_n=11), st.data())
def test_copy_graph_invariants(g, data):
    u = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    f = {x: c for x, c in greedy_coloring(g).assignment.items() if x not in u}
    h = build_copy_graph(g, u, f)
    buffer = sorted(u)
    expected = {(x, i) for i, b in enumerate(buffer) for x in g.neighbors(b) if x not in u}
    assert set(h.nodes) == expected and len(h.nodes) == len(expected)
    edge_set = {frozenset(e) for e in h.edges}
    for a, b in itertools.combinations(range(len(h.nodes)), 2):
        want = g.has_edge(h.nodes[a][0], h.nodes[b][0])
        assert (frozenset((a, b)) in edge_set) == want
    assert all(h.color[j] == f[x] for j, (x, _) in enumerate(h.nodes))
    assert sum(h.block_sizes()) == len(h.nodes)


def test_order_blocks_examples():
    g = Graph(6, [(0, 1), (2, 3), (4, 5)])
    f = {1: 1, 3: 1, 5: 1}
    h = build_copy_graph(g, [0, 2, 4], f)
    assert h.edges == [] and order_blocks(h) == [0, 1, 2]
    # two blocks joined by m = 2 copy edges
    g = Graph(6, [(0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (3, 5)])
    h = build_copy_graph(g, [0, 1], {2: 1, 3: 2, 4: 2, 5: 1})
    order = order_blocks(h)
    assert sorted(order) == [0, 1]
    cuts = prefix_cuts(h, order)
    assert cuts[1] == (2, 2)


def _random_instance(rnd, n, p, buffer_size):
    pairs = list(itertools.combinations(range(n), 2))
    g = Graph(n, [e for e in pairs if rnd.random() < p])
    u = set(rnd.sample(range(n), buffer_size))
    f = {x: c for x, c in greedy_coloring(g).assignment.items() if x not in u}
    return g, u, f


@settings(max_examples=150)
@given(st.randoms(use_true_random=False), st.integers(6, 30), st.floats(0.05, 0.6))
def test_order_blocks_prefix_bound(rnd, n, p):
    g, u, f = _random_instance(rnd, n, p, rnd.randint(1, max(1, n // 3)))
    h = build_copy_graph(g, u, f)
    order = order_blocks(h)
    assert sorted(order) == list(range(h.k))
    for i, (back, spanned) in enumerate(prefix_cuts(h, order), start=1):
        assert back * i <= 2 * spanned


def test_choose_lists_edgeless():
    g = Graph(8, [(0, 1), (0, 2), (3, 4), (3, 5)])
    f = {1: 1, 2: 2, 4: 3, 5: 4, 6: 1, 7: 2}
    h = build_copy_graph(g, [0, 3], f)
    params = ExtensionParams(50, 3, 3, 0.5, 1)
    res = choose_lists(h, order_blocks(h), 6, params, seed=1)
    assert res.ok and res.lists == res.drawn
    assert all(len(v) == 3 for v in res.lists.values())


def test_choose_lists_prune_failure():
    # one buffer vertex whose 10 neighbors carry colors 1..10 and span 5 edges
    edges = [(0, x) for x in range(1, 11)] + [(x, x + 1) for x in range(1, 11, 2)]
    g = Graph(11, edges)
    h = build_copy_graph(g, [0], {x: x for x in range(1, 11)})
    assert len(h.internal_edges(0)) == 5
    params = ExtensionParams(50, 10, 6, 0.5, 3)
    res = choose_lists(h, [0], 10, params, seed=0)
    assert not res.ok
    assert len(res.failures) == 3
    assert all(f["stage"] == "prune" and f["kept"] == 5 for f in res.failures)


def test_choose_lists_reproducible_and_independent():
    g, _ = sample_simple(60, 3, 4)
    u = [0, 17, 33]
    f = {x: c for x, c in greedy_coloring(g).assignment.items() if x not in u}
    h = build_copy_graph(g, u, f)
    params = ExtensionParams(50, 2, 1, 0.25, 5)
    a = choose_lists(h, order_blocks(h), 4, params, seed=9)
    b = choose_lists(h, order_blocks(h), 4, params, seed=9)
    assert a == b and a.ok
    assert is_independent(h, selected_nodes(h, a.lists))


@settings(max_examples=200)
@given(st.randoms(use_true_random=False), st.integers(6, 24))
def test_choose_lists_success_is_independent(rnd, n):
    g, u, f = _random_instance(rnd, n, 0.3, rnd.randint(1, 4))
    t = max(f.values(), default=1) + rnd.randint(0, 3)
    size = rnd.randint(1, t)
    params = ExtensionParams(50, size, rnd.randint(1, size), rnd.choice([0.25, 0.5]), 3)
    h = build_copy_graph(g, u, f)
    res = choose_lists(h, order_blocks(h), t, params, seed=rnd.randint(0, 99))
    if res.ok:
        assert is_independent(h, selected_nodes(h, res.lists))
        assert all(len(v) >= params.prune_floor for v in res.lists.values())
        assert all(res.lists[b] <= res.drawn[b] for b in res.lists)
    else:
        assert len(res.failures) == params.retries


def test_extend_empty_buffer():
    g, _ = sample_simple(20, 3, 1)
    f = greedy_coloring(g).assignment
    inst = ExtensionInstance(g, (), f, 4, ExtensionParams(50, 4, 1))
    res = extend_coloring(inst)
    assert res.ok and res.coloring.assignment == f


def test_extend_c5():
    c5 = cycle_graph(5)
    inst = ExtensionInstance(c5, (0,), {1: 1, 2: 2, 3: 1, 4: 2}, 2, ExtensionParams(2, 1, 1))
    res = extend_coloring(inst, 0)
    assert res.ok
    assert is_proper_coloring(c5, res.coloring.assignment, palette=3)


def test_extend_rejects_bad_input():
    c5 = cycle_graph(5)
    p = ExtensionParams(2, 1, 1)
    with pytest.raises(InputError):
        ExtensionInstance(c5, (0,), {1: 1, 2: 1, 3: 2, 4: 1}, 2, p)
    with pytest.raises(InputError):
        ExtensionInstance(c5, (0,), {1: 1, 2: 2, 3: 1}, 2, p)
    with pytest.raises(InputError):
        ExtensionInstance(c5, (0,), {1: 1, 2: 2, 3: 1, 4: 3}, 2, p)
    with pytest.raises(InputError):
        ExtensionInstance(c5, (0,), {1: 1, 2: 2, 3: 1, 4: 2}, 2, ExtensionParams(2, 3, 1))


def test_extend_reports_stage():
    g = complete_graph(6)
    inst = ExtensionInstance(g, (0, 1), {v: v - 1 for v in range(2, 6)}, 5,
                             ExtensionParams(50, 2, 1))
    res = extend_coloring(inst)
    assert not res.ok and res.stage == "degeneracy"


@settings(max_examples=200)
@given(st.randoms(use_true_random=False), st.integers(5, 20))
def test_extend_success_is_proper(rnd, n):
    g, u, _ = _random_instance(rnd, n, 0.3, rnd.randint(0, 3))
    rest = [v for v in range(n) if v not in u]
    sub, labels = g.induced(rest)
    base = greedy_coloring(sub)
    f = {labels[i]: c for i, c in base.assignment.items()}
    t = max(base.t, 1) + rnd.randint(0, 2)
    size = rnd.randint(1, t)
    params = ExtensionParams(rnd.choice([1, 2, 3, 50]), size, rnd.randint(1, size),
                             rnd.choice([0.25, 0.5, 1.0]), rnd.randint(1, 4))
    inst = ExtensionInstance(g, tuple(u), f, t, params)
    res = extend_coloring(inst, rnd.randint(0, 10**6))
    if res.ok:
        a = res.coloring.assignment
        assert is_proper_coloring(g, a, palette=t + 1)
        keep = set(res.buffer) | set(res.recolored)
        assert all(a[v] == c for v, c in f.items() if v not in keep)
    else:
        assert res.stage in ("degeneracy", "choose-lists", "list-coloring")


def test_extend_deterministic():
    g, _ = sample_simple(60, 3, 8)
    rnd = random.Random(1)
    u = rnd.sample(range(60), 3)
    sub, labels = g.induced([v for v in range(60) if v not in u])
    f = {labels[i]: c for i, c in greedy_coloring(sub).assignment.items()}
    inst = ExtensionInstance(g, tuple(u), f, 4, ExtensionParams(2, 2, 1))
    assert extend_coloring(inst, 3) == extend_coloring(inst, 3)
