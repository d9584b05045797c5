import cmath
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from fuglede.cyclic_core import MultiSet, euler_phi, make_group, units
from fuglede.errors import EmptyMultiSet, InvalidDivisor
from fuglede.mask_poly import (
    IntPolynomial,
    MaskPolynomial,
    ZeroTester,
    cyclotomic,
    fold,
    multiply_mod,
    prime_power_zero_count,
    root_is_zero,
    zero_profile,
)

from conftest import S, multisets, subsets

X = sympy.Symbol("X")


def sympy_coeffs(n):
    return [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, X), X).all_coeffs())]


def test_cyclotomic_examples():
    assert cyclotomic(1).coeffs == (-1, 1)
    assert cyclotomic(2).coeffs == (1, 1)
    assert repr(cyclotomic(30)) == "IntPolynomial('X^8 + X^7 - X^5 - X^4 - X^3 + X + 1')"


@pytest.mark.parametrize("n", list(range(1, 80)) + [105, 210, 231])
def test_cyclotomic_against_sympy(n):
    phi = cyclotomic(n)
    assert list(phi.coeffs) == sympy_coeffs(n)
    assert phi.degree == euler_phi(n)
    fac = sympy.factorint(n)
    expected_at_1 = next(iter(fac)) if len(fac) == 1 else (0 if n == 1 else 1)
    assert phi(1) == expected_at_1


@given(
    st.lists(st.integers(-20, 20), max_size=12),
    st.lists(st.integers(-20, 20), max_size=12),
    st.integers(1, 40),
)
def test_polynomial_arithmetic(a, b, n):
    A, B = IntPolynomial(a), IntPolynomial(b)
    for x in (-2, -1, 0, 1, 3):
        assert (A * B)(x) == A(x) * B(x)
        assert (A + B)(x) == A(x) + B(x)
        assert (A - B)(x) == A(x) - B(x)
    q, r = A.divmod_monic(cyclotomic(n))
    assert q * cyclotomic(n) + r == A
    assert r.degree < cyclotomic(n).degree


def test_divmod_needs_monic():
    with pytest.raises(ValueError):
        IntPolynomial([1, 2]).divmod_monic(IntPolynomial([1, 2]))


def test_fold_and_multiply_mod():
    assert fold([1, 2, 3, 4, 5], 2) == [9, 6]
    assert multiply_mod([1, 1, 0], [0, 1, 1], 3) == [1, 1, 2]


def test_root_is_zero_examples(Z30):
    assert root_is_zero(S(30, [0, 15]), 15)
    assert root_is_zero(S(30, [0, 10, 20]), 2)
    for N in (6, 30, 42):
        g = make_group(N)
        for d in g.divisors:
            assert not root_is_zero(S(N, [0]), d)
    with pytest.raises(InvalidDivisor):
        root_is_zero(S(30, [0]), 7)


def _float_zero(A, d):
    # A(e^{-2 pi i d / N}) as in the Fourier identification; compare with tolerance
    N = A.group.N
    val = sum(m * cmath.exp(-2j * math.pi * a * d / N) for a, m in enumerate(A.mult) if m)
    return abs(val) < 1e-9 * A.size


@given(st.sampled_from([6, 10, 15, 30, 42]), st.data())
def test_root_is_zero_matches_float(N, data):
    A = data.draw(multisets(N))
    g = A.group
    for d in g.divisors:
        assert root_is_zero(A, d) == _float_zero(A, d)
    assert abs(MaskPolynomial.of(A).evaluate_root(1) - sum(
        m * cmath.exp(2j * math.pi * a / N) for a, m in enumerate(A.mult)
    )) < 1e-9


def test_zero_profile_examples(Z30):
    P = zero_profile(S(30, [0, 15]))
    assert P.divisor_zeros == {1, 3, 5, 15}
    assert P.full_zeros == set(range(1, 30, 2))
    assert P.s_a == {2}
    P = zero_profile(MultiSet.full(Z30))
    assert P.divisor_zeros == {1, 2, 3, 5, 6, 10, 15} and P.s_a == {2, 3, 5}
    P = zero_profile(S(30, [0, 1, 2]))
    assert P.divisor_zeros == {10} and P.full_zeros == {10, 20} and P.s_a == {3}
    with pytest.raises(EmptyMultiSet):
        zero_profile(MultiSet(Z30, (0,) * 30))


@given(st.sampled_from([30, 42, 105]), st.data())
def test_zero_profile_invariants(N, data):
    A = data.draw(multisets(N, max_mult=2))
    g = A.group
    P = A.profile
    # oracle: evaluate every n separately with the exact remainder test
    direct = {n for n in range(1, N) if root_is_zero(A, math.gcd(n, N))}
    assert P.full_zeros == direct
    assert 0 not in P.full_zeros
    for n in range(N):
        for u in units(g):
            assert (n in P.full_zeros) == (n * u % N in P.full_zeros)
    for s in g.primes:
        assert (s in P.s_a) == (N // s in P.divisor_zeros)
        assert A.size % s ** prime_power_zero_count(A, s) == 0
    assert A.size % math.prod(P.s_a) == 0


def test_tester_against_remainders():
    for N in (30, 42, 105):
        g = make_group(N)
        tester = ZeroTester(g)
        import random

        rng = random.Random(N)
        for _ in range(200):
            mult = [rng.choice([0, 0, 0, 1, 2, 5]) for _ in range(N)]
            if not any(mult):
                continue
            A = MultiSet(g, tuple(mult))
            expected = frozenset(d for d in g.divisors if d < N and root_is_zero(A, d))
            assert tester.divisor_zeros(mult) == expected
            if A.is_set:
                assert tester.divisor_zeros_mask(A.mask) == expected


@pytest.mark.parametrize("A, p, k", [([0, 15], 2, 1), ([0], 5, 0), ([0, 1, 2], 3, 1)])
def test_prime_power_zero_count(A, p, k):
    assert prime_power_zero_count(S(30, A), p) == k
