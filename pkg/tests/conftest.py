import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from tripack.graph import blowup, cycle_graph, graph_new

ACCEPTANCE_LINES = []


def random_graph(rng, n, p):
    return graph_new(n, [e for e in combinations(range(n), 2) if rng.random() < p])


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.integers(0, (1 << len(pairs)) - 1)) if pairs else 0
    return graph_new(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def c5_blowup():
    return blowup(cycle_graph(5), 5)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
