import itertools

import pytest
from hypothesis import settings, strategies as st

from fuglede import tiling
from fuglede.cyclic_core import MultiSet, make_group

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(autouse=True, scope="session")
def _cross_check_tilings():
    # every tiling verification also runs the polynomial-product route
    tiling.CROSS_CHECK = True
    yield
    tiling.CROSS_CHECK = False


@pytest.fixture(scope="session")
def Z30():
    return make_group(30)


def S(N, elements):
    return MultiSet.from_elements(make_group(N), elements)


SMALL_SQUARE_FREE = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 21, 22, 30]


@st.composite
def subsets(draw, N, min_size=1, max_size=None):
    g = make_group(N)
    max_size = N if max_size is None else min(max_size, N)
    elems = draw(st.sets(st.integers(0, N - 1), min_size=min_size, max_size=max_size))
    return MultiSet.from_elements(g, elems)


@st.composite
def multisets(draw, N, max_mult=3, max_total=None):
    g = make_group(N)
    mult = draw(st.lists(st.integers(0, max_mult), min_size=N, max_size=N))
    if not any(mult):
        mult[draw(st.integers(0, N - 1))] = 1
    return MultiSet(g, tuple(mult))


def all_subsets(N, sizes=None):
    g = make_group(N)
    for k in sizes or range(1, N + 1):
        for c in itertools.combinations(range(N), k):
            yield MultiSet.from_elements(g, c)
