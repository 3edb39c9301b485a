import itertools

from hypothesis import strategies as st

from rrg.graph import Graph
from rrg.pairing import sample_simple


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def regular_graphs(draw, max_n=14, max_d=4):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(d + 1, max_n).filter(lambda n: n * d % 2 == 0))
    seed = draw(st.integers(0, 2**32 - 1))
    g, _ = sample_simple(n, d, seed)
    return g
