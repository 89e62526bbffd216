import random

import hypothesis.strategies as st
from hypothesis import settings

from kmetric.randgen import (
    random_connected_graph,
    random_rational_metric,
    random_space,
)

settings.register_profile("dev", max_examples=40, deadline=None)
settings.load_profile("dev")


@st.composite
def connected_graphs(draw, min_n=3, max_n=8):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2**20))
    return random_connected_graph(n, random.Random(seed))


@st.composite
def rational_metric_spaces(draw, min_n=3, max_n=8):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2**20))
    return random_rational_metric(n, random.Random(seed))


@st.composite
def metric_spaces(draw, min_n=3, max_n=8):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2**20))
    return random_space(n, random.Random(seed))
