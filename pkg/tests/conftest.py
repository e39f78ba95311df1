import itertools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cutquery import WeightedGraph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, max_n=7, max_w=3):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    ws = draw(st.lists(st.integers(0, max_w), min_size=len(pairs), max_size=len(pairs)))
    return WeightedGraph(n, {p: w for p, w in zip(pairs, ws) if w})


@st.composite
def graph_and_subset(draw, max_n=7, max_w=3):
    G = draw(graphs(max_n, max_w))
    S = draw(st.sets(st.integers(0, G.n - 1)))
    return G, S


def P(n):
    return WeightedGraph(n, {(i, i + 1): 1 for i in range(n - 1)})


def K(n, w=1):
    return WeightedGraph(n, {(u, v): w for u, v in itertools.combinations(range(n), 2)})
