import math

import pytest
from hypothesis import given, strategies as st

from fuglede.cyclic_core import (
    MultiSet,
    cycle_elements,
    euler_phi,
    factorize,
    from_crt,
    make_cycle,
    make_group,
    scale_multiset,
    to_crt,
    units,
)
from fuglede.errors import InvalidDivisor, NotSquareFree

from conftest import S, SMALL_SQUARE_FREE


@pytest.mark.parametrize("N, primes", [(30, (2, 3, 5)), (105, (3, 5, 7)), (2, (2,)), (42, (2, 3, 7))])
def test_make_group(N, primes):
    assert make_group(N).primes == primes


@pytest.mark.parametrize("N", [12, 60, 4, 18, 50])
def test_not_square_free(N):
    with pytest.raises(NotSquareFree):
        make_group(N)


def test_bound_and_small_n():
    with pytest.raises(ValueError):
        make_group(1)
    with pytest.raises(ValueError):
        make_group(30, max_n=10)


@pytest.mark.parametrize("x, v", [(7, (1, 1, 2)), (0, (0, 0, 0)), (29, (1, 2, 4))])
def test_to_crt_examples(Z30, x, v):
    assert to_crt(x, Z30) == v


@pytest.mark.parametrize("v, x", [((1, 2, 3), 23), ((0, 0, 0), 0), ((1, 1, 2), 7)])
def test_from_crt_examples(Z30, v, x):
    assert from_crt(v, Z30) == x
    # oracle: linear scan for the residue pattern
    assert [y for y in range(30) if all(y % p == c for p, c in zip(Z30.primes, v))] == [x]


@pytest.mark.parametrize("N", SMALL_SQUARE_FREE + [42, 105])
def test_crt_is_bijective_homomorphism(N):
    g = make_group(N)
    images = {to_crt(x, g) for x in range(N)}
    assert len(images) == N == math.prod(g.primes)
    for x in range(N):
        assert from_crt(to_crt(x, g), g) == x
    for x in range(0, N, 3):
        for y in range(0, N, 5):
            s = to_crt(x + y, g)
            assert s == tuple((a + b) % p for a, b, p in zip(to_crt(x, g), to_crt(y, g), g.primes))


@pytest.mark.parametrize(
    "N, expected", [(30, {1, 7, 11, 13, 17, 19, 23, 29}), (6, {1, 5}), (2, {1})]
)
def test_units(N, expected):
    g = make_group(N)
    assert units(g) == expected
    assert len(units(g)) == euler_phi(N) == math.prod(p - 1 for p in g.primes)


@pytest.mark.parametrize("d, j, expected", [(2, 0, {0, 15}), (5, 0, {0, 6, 12, 18, 24}), (3, 5, {5, 15, 25})])
def test_cycles(Z30, d, j, expected):
    assert set(cycle_elements(make_cycle(Z30, d, j)).support) == expected


def test_cycle_cardinality_everywhere():
    for N in (30, 42):
        g = make_group(N)
        for d in g.divisors:
            if d < 2:
                continue
            for j in range(N):
                C = cycle_elements(make_cycle(g, d, j))
                assert C.is_set and C.size == d and j in C


@pytest.mark.parametrize("d", [0, 1, 4, 7])
def test_bad_cycle_divisor(Z30, d):
    with pytest.raises(InvalidDivisor):
        make_cycle(Z30, d, 0)


def test_scale_examples(Z30):
    assert scale_multiset(5, S(30, [0, 3])).support == (0, 15)
    five = S(30, [0, 6, 12, 18, 24])
    assert scale_multiset(6, five) == five
    M = scale_multiset(15, S(30, [0, 1, 2]))
    assert M.mult[0] == 2 and M.mult[15] == 1 and M.size == 3


@given(st.sampled_from([30, 42, 105]), st.data())
def test_scaled_prime_cycle_is_prime_cycle(N, data):
    g = make_group(N)
    p = data.draw(st.sampled_from(g.primes))
    j = data.draw(st.integers(0, N - 1))
    y = data.draw(st.integers(1, 4 * N).filter(lambda y: y % p))
    L = cycle_elements(make_cycle(g, p, j))
    yL = scale_multiset(y, L)
    assert yL.is_set and yL.size == p
    assert yL == cycle_elements(make_cycle(g, p, yL.support[0]))


@given(st.lists(st.integers(0, 29), min_size=1, max_size=12), st.integers(0, 100))
def test_multiset_basics(elems, n):
    g = make_group(30)
    A = MultiSet.from_elements(g, elems)
    assert A.size == len(elems) == len(list(A.elements()))
    assert scale_multiset(n, A).size == A.size
    assert A.translate(n).size == A.size
    assert (A + A).size == 2 * A.size and (A + A) - A == A
    assert A.is_set == (len(set(elems)) == len(elems))
    assert MultiSet.from_mask(g, A.mask).support == A.support


def test_multiset_validation(Z30):
    with pytest.raises(ValueError):
        MultiSet(Z30, (1,) * 29)
    with pytest.raises(ValueError):
        MultiSet(Z30, (-1,) + (0,) * 29)
    assert repr(S(30, [0, 15])) == "{0,15} in Z_30"
    assert repr(S(30, [0, 0, 15])) == "{0^2,15} in Z_30"


def test_factorize():
    assert factorize(2 * 3 * 3 * 7) == [(2, 1), (3, 2), (7, 1)]
    assert factorize(97) == [(97, 1)]
