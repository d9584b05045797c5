import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from fuglede import tiling
from fuglede.cyclic_core import MultiSet, from_crt, make_group
from fuglede.errors import BudgetExhausted, PreconditionViolated
from fuglede.orbits import OrbitEnumerator
from fuglede.spectral import verify_spectral_pair
from fuglede.tiling import (
    GraphForm,
    TilingPair,
    _ComplementSearch,
    check_T1,
    check_T2,
    complement_from_graph,
    detect_graph_form,
    find_tiling_complement,
    scaled_tiling,
    spectrum_from_T1T2,
    tiling_obstruction,
    verify_tiling_pair,
)

from conftest import S, all_subsets, subsets


def brute_complement(A):
    """Lex-least T (sorted tuple order) with 0 in T tiling with A, by enumeration."""
    g = A.group
    N = g.N
    if N % A.size:
        return None
    k = N // A.size
    for rest in itertools.combinations(range(1, N), k - 1):
        T = MultiSet.from_elements(g, (0,) + rest)
        counts = [0] * N
        for a in A.support:
            for t in T.support:
                counts[(a + t) % N] += 1
        if all(c == 1 for c in counts):
            return T
    return None


def test_T1_T2_examples():
    assert check_T1(S(30, [0, 15])) and check_T2(S(30, [0, 15]))
    A = S(30, range(6))
    assert check_T1(A) and check_T2(A)
    assert not check_T1(S(30, [0, 1, 3]))
    # regression fixture recorded on the first verified run
    B = S(30, [0, 1, 2, 3, 16, 17])
    assert B.profile.s_a == {2, 3}
    assert check_T1(B) and check_T2(B)


def test_verify_tiling_pair_examples():
    assert verify_tiling_pair(S(30, [0, 15]), S(30, range(15)))
    assert verify_tiling_pair(S(30, [0, 6, 12, 18, 24]), S(30, range(6)))
    assert not verify_tiling_pair(S(30, [0, 1]), S(30, [0, 1]))
    with pytest.raises(ValueError):
        TilingPair(S(30, [0, 1]), S(30, [0, 1]))


def test_routes_agree_on_multisets():
    A = S(30, [0, 0, 15])
    T = S(30, range(15))
    assert verify_tiling_pair(A, T) is False
    assert tiling._product_route(A, T) is False


def test_find_complement_examples(Z30):
    assert find_tiling_complement(S(30, [0, 15])).support == tuple(range(15))
    assert find_tiling_complement(S(30, [0, 1, 3])) is None
    assert find_tiling_complement(MultiSet.full(Z30)).support == (0,)
    assert find_tiling_complement(S(30, [0, 1, 2, 3])) is None  # 4 does not divide 30


@pytest.mark.parametrize("N", [6, 10, 14, 15])
def test_find_complement_matches_brute_force(N):
    for A in all_subsets(N, range(1, 6)):
        if A.support[0] != 0:
            continue
        got = find_tiling_complement(A)
        want = brute_complement(A)
        assert (got is None) == (want is None), A
        if got is not None:
            assert got.support == want.support
            assert verify_tiling_pair(A, got)


def test_obstruction_is_sound():
    # a certificate must never be issued for a set that tiles; compare with the plain search
    for N in (6, 10, 15, 30):
        g = make_group(N)
        sizes = [d for d in g.divisors if 1 < d < N]
        for k in sizes:
            masks = OrbitEnumerator(g, [k]).all() if N == 30 else [A.mask for A in all_subsets(N, [k])]
            for m in list(masks)[:1500]:
                m = int(m)
                A = MultiSet.from_mask(g, m)
                tiles = _ComplementSearch(m, N, 10**7).exists()
                if tiling_obstruction(A) is not None:
                    assert not tiles, A


def test_budget_exhausted_is_not_a_no():
    A = S(30, [0, 1, 2, 3, 16, 17])
    with pytest.raises(BudgetExhausted):
        find_tiling_complement(A, budget=2)
    assert find_tiling_complement(A) is not None


def test_obstruction_examples():
    # 1 + X + X^3 has no cyclotomic factor: Phi_2 missing forces 2 | #T = 10, fine; Phi_3 missing forces 3 | 10
    assert tiling_obstruction(S(30, [0, 1, 3])) == 3
    assert tiling_obstruction(S(30, [0, 1, 2, 3])) == 30
    assert tiling_obstruction(S(30, range(6))) is None


def test_detect_graph_form_examples():
    gf = detect_graph_form(S(30, [0, 6, 12, 18, 24]))
    assert gf.base == (5,) and gf.ell == 1
    assert set(gf.assignment.values()) == {(0, 0)}
    gf = detect_graph_form(S(30, range(6)))
    assert gf.base == (2, 3)
    assert detect_graph_form(S(30, [0, 1, 3])) is None
    gf = detect_graph_form(S(30, [7]))
    assert gf.ell == 0 and gf.reconstruct() == S(30, [7])


def test_complement_from_graph_examples(Z30):
    assert complement_from_graph(detect_graph_form(S(30, [0, 6, 12, 18, 24]))).support == (0, 5, 10, 15, 20, 25)
    assert complement_from_graph(detect_graph_form(MultiSet.full(Z30))).support == (0,)


@given(st.lists(st.integers(0, 4), min_size=6, max_size=6))
def test_any_assignment_over_2_3_gives_same_complement(values):
    g = make_group(30)
    assignment = {(x, y): (values[3 * x + y],) for x in range(2) for y in range(3)}
    gf = GraphForm(g, (2, 3, 5), 2, assignment)
    A = gf.reconstruct()
    assert A.size == 6
    T = complement_from_graph(gf)
    assert T.support == (0, 6, 12, 18, 24)
    assert check_T1(A) and check_T2(A)
    assert verify_spectral_pair(A, spectrum_from_T1T2(A))


def test_scaled_tiling_examples():
    pair = TilingPair(S(30, [0, 15]), S(30, range(15)))
    out = scaled_tiling(7, pair)
    assert out.A.support == (0, 15) and out.T == pair.T
    assert scaled_tiling(3, pair).A.support == (0, 15)
    with pytest.raises(PreconditionViolated):
        scaled_tiling(2, pair)


@given(st.sampled_from([30, 42]), st.data())
def test_scaled_tiling_property(N, data):
    g = make_group(N)
    base = data.draw(st.sampled_from([c for r in range(1, 4) for c in itertools.combinations(g.primes, r)]))
    P = math.prod(base)
    rest = [p for p in g.primes if p not in base]
    elems = []
    for n in itertools.product(*(range(p) for p in base)):
        y = [data.draw(st.integers(0, p - 1)) for p in rest]
        coords = dict(zip(base, n)) | dict(zip(rest, y))
        elems.append(from_crt([coords[p] for p in g.primes], g))
    A = MultiSet.from_elements(g, elems)
    T = find_tiling_complement(A)
    assert T is not None and check_T1(A) and check_T2(A)
    pair = TilingPair(A, T)
    n = data.draw(st.integers(1, 200).filter(lambda n: math.gcd(n, P) == 1))
    scaled = scaled_tiling(n, pair)
    assert scaled.A.is_set and verify_tiling_pair(scaled.A, scaled.T)


def test_spectrum_from_T1T2_examples(Z30):
    assert spectrum_from_T1T2(S(30, range(6))).support == (0, 5, 10, 15, 20, 25)
    assert spectrum_from_T1T2(S(30, [0, 15])).support == (0, 15)
    assert spectrum_from_T1T2(MultiSet.full(Z30)) == MultiSet.full(Z30)
    with pytest.raises(PreconditionViolated):
        spectrum_from_T1T2(S(30, [0, 1, 3]))


@pytest.mark.parametrize("N", [6, 10, 14, 15])
def test_prop_equivalence_small_groups(N):
    # tile <=> (T1)+(T2) <=> graph form, over every subset containing 0
    g = make_group(N)
    for k in range(1, N + 1):
        for rest in itertools.combinations(range(1, N), k - 1):
            A = MultiSet.from_elements(g, (0,) + rest)
            gf = detect_graph_form(A)
            T = find_tiling_complement(A)
            t12 = check_T1(A) and check_T2(A)
            assert (T is not None) == t12 == (gf is not None)
            if gf is not None:
                assert math.prod(gf.base) == A.size
                assert verify_tiling_pair(A, complement_from_graph(gf))
