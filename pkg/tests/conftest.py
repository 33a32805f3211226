import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from bergetheta.hypergraph import build

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda s: (len(s), s)):
        passed, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")


def random_hypergraph(rng, r, n, m, simple=False):
    """m random r-subsets of range(n), in random order."""
    pool = list(combinations(range(n), r))
    if simple:
        edges = rng.sample(pool, min(m, len(pool)))
    else:
        edges = [rng.choice(pool) for _ in range(m)]
    return build(r, n, edges)


@st.composite
def hypergraphs(draw, r=st.sampled_from([2, 3, 4]), max_n=8, max_m=10, simple=False):
    r = draw(r)
    n = draw(st.integers(r, max_n))
    pool = list(combinations(range(n), r))
    edge = st.sampled_from(pool)
    if simple:
        edges = draw(st.lists(edge, max_size=min(max_m, len(pool)), unique=True))
    else:
        edges = draw(st.lists(edge, max_size=max_m))
    return build(r, n, edges)


@pytest.fixture
def c4():
    return build(2, 4, [[0, 1], [1, 2], [2, 3], [0, 3]])


@pytest.fixture
def c6():
    return build(2, 6, [[i, (i + 1) % 6] for i in range(6)])


@pytest.fixture
def single_edge():
    return build(3, 3, [[0, 1, 2]])


@pytest.fixture
def rng():
    return random.Random(20261019)
