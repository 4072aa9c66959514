import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from gbpflow.complex import Domain
from gbpflow.hypergraph import Hypergraph


def make_domain(regions, close=True, include_empty=False, card=2):
    X = Hypergraph.build(regions, close=close, include_empty=include_empty)
    cards = card if isinstance(card, dict) else {v: card for v in X.omega}
    return Domain(X, cards)


def cone_c1(card=2):
    return make_domain([(0, 1), (0,), (1,)], include_empty=True, card=card)


def chain_t1(card=2, include_empty=False):
    return make_domain([(0, 1), (1, 2)], include_empty=include_empty, card=card)


def triangle(card=2):
    return make_domain([(0, 1), (1, 2), (0, 2)], include_empty=True, card=card)


def tree7(card=2):
    return make_domain([(0, 1, 2), (2, 3), (3, 4, 5), (3, 6)], card=card)


def random_closed(seed, n=5, k=4, include_empty=True):
    """A random ∩-closed hypergraph on exactly n variables with mixed cardinalities."""
    rng = np.random.default_rng(seed)
    while True:
        regions = set()
        for _ in range(k):
            size = int(rng.integers(2, 4))
            regions.add(tuple(sorted(rng.choice(n, size=size, replace=False).tolist())))
        if set().union(*regions) == set(range(n)):
            break
    cards = {v: int(rng.integers(2, 4)) for v in range(n)}
    return make_domain(sorted(regions), include_empty=include_empty, card=cards)


FIXTURES = {
    "C1": cone_c1,
    "T1": chain_t1,
    "triangle": triangle,
    "random5": lambda: random_closed(7),
}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(FIXTURES))
def fixture_domain(request):
    return FIXTURES[request.param]()


@st.composite
def closed_domains(draw, max_vars=5, include_empty=None):
    """Hypothesis strategy: ∩-closed hypergraphs over at most ``max_vars`` variables."""
    n = draw(st.integers(1, max_vars))
    subsets = st.sets(st.integers(0, n - 1), min_size=1, max_size=min(n, 3))
    regions = draw(st.lists(subsets, min_size=1, max_size=4, unique_by=frozenset))
    empty = draw(st.booleans()) if include_empty is None else include_empty
    X = Hypergraph.build([tuple(sorted(r)) for r in regions], close=True, include_empty=empty)
    cards = {v: draw(st.integers(1, 3)) for v in X.omega}
    return Domain(X, cards)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
