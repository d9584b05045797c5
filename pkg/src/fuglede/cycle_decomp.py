"""Vanishing sums of roots of unity: prime-cycle decompositions and size conditions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .cyclic_core import (
    Cycle,
    CyclicGroup,
    MultiSet,
    is_prime,
    make_cycle,
    make_group,
    scale_multiset,
)
from .errors import BudgetExhausted, InvalidDivisor, InvalidPrimes, PreconditionViolated
from .mask_poly import IntPolynomial, multiply_mod, root_is_zero

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[Cycle, ...]

    def union(self, g: CyclicGroup) -> MultiSet:
        mult = [0] * g.N
        for c in self.cycles:
            for x in c.elements():
                mult[x] += 1
        return MultiSet(g, tuple(mult))


def decompose_prime_cycles(
    M: MultiSet, primes: Sequence[int], budget: int = DEFAULT_BUDGET
) -> Optional[CycleDecomposition]:
    """Write M as a union of p-cycles with p in `primes`, or return None if impossible.

    The smallest element still present must be covered by a cycle through it,
    and for each prime there is exactly one such cycle, so branching at that
    element is complete.  Dead residual vectors are memoized.  Raises
    BudgetExhausted if more than `budget` nodes are needed.
    """
    g = M.group
    primes = sorted(set(primes))
    if not primes:
        raise ValueError("need at least one prime")
    for p in primes:
        if p not in g.primes:
            raise InvalidDivisor(f"{p} is not a prime factor of {g.N}")
    N = g.N
    steps = [(p, N // p) for p in primes]
    residual = list(M.mult)
    dead: set[tuple[int, ...]] = set()
    chosen: list[Cycle] = []
    nodes = 0

    def search(start: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted("decompose_prime_cycles", budget)
        x = start
        while x < N and residual[x] == 0:
            x += 1
        if x == N:
            return True
        key = tuple(residual)
        if key in dead:
            return False
        for p, step in steps:
            members = [(x + i * step) % N for i in range(p)]
            if all(residual[y] > 0 for y in members):
                for y in members:
                    residual[y] -= 1
                chosen.append(make_cycle(g, p, x))
                if search(x):
                    return True
                chosen.pop()
                for y in members:
                    residual[y] += 1
        dead.add(key)
        return False

    if search(0):
        return CycleDecomposition(tuple(chosen))
    return None


@dataclass(frozen=True)
class TwoPrimeWitness:
    """Nonnegative P, Q with A(X^n) = P(X^n) Phi_p(X^{N/p}) + Q(X^n) Phi_q(X^{N/q}) mod X^N - 1.

    The coefficient of X^u in P counts p-cycles with base n*u (u < N/(n p)), and
    likewise for Q.  In the single-prime case q is None and Q is zero.
    """

    n: int
    p: int
    q: Optional[int]
    P: IntPolynomial
    Q: IntPolynomial

    def reconstruct(self, g: CyclicGroup) -> list[int]:
        """Coefficient vector of the right-hand side, reduced mod X^N - 1."""
        N = g.N
        out = [0] * N
        for prime, poly in ((self.p, self.P), (self.q, self.Q)):
            if prime is None or poly.is_zero():
                continue
            bases = [0] * N
            for u, c in enumerate(poly.coeffs):
                bases[self.n * u % N] += c
            cycle = [0] * N
            for i in range(prime):
                cycle[i * (N // prime)] = 1
            out = [a + b for a, b in zip(out, multiply_mod(bases, cycle, N))]
        return out


def two_prime_decompose(A: MultiSet, n: int) -> Optional[TwoPrimeWitness]:
    """Split n*A into p-cycles and q-cycles when N/n has at most two prime divisors.

    In CRT coordinates (x, y) on Z_p x Z_q the multiplicity of n*A must read
    M(x, y) = c(y) + d(x) with c, d >= 0; c(y) counts p-cycles (lines of fixed
    y), d(x) counts q-cycles.  The free transfer c + t, d - t is fixed by
    making min d = 0, i.e. putting as much as possible into p-cycles.
    Returns None if no such split exists.
    """
    g = A.group
    N = g.N
    if n < 1 or N % n:
        raise InvalidDivisor(f"{n} does not divide {N}")
    m = N // n
    ps = [p for p in g.primes if m % p == 0]
    if not ps or len(ps) > 2:
        raise PreconditionViolated(f"N/n = {m} must have one or two prime divisors")
    if not root_is_zero(A, n):
        raise PreconditionViolated(f"A(w_N^{n}) != 0")
    M = [0] * m
    for a, c in enumerate(A.mult):
        if c:
            M[a % m] += c
    if len(ps) == 1:
        p = ps[0]
        if len(set(M)) != 1:
            return None
        return TwoPrimeWitness(n, p, None, IntPolynomial([M[0]]), IntPolynomial())
    p, q = ps
    # u in Z_m has coordinates (u mod p, u mod q)
    grid = [[0] * q for _ in range(p)]
    for u in range(m):
        grid[u % p][u % q] = M[u]
    for x in range(p):
        for y in range(q):
            if grid[x][y] - grid[0][y] - grid[x][0] + grid[0][0]:
                return None
    low = min(grid[x][0] for x in range(p))
    d = [grid[x][0] - low for x in range(p)]
    c = [grid[0][y] - d[0] for y in range(q)]
    if min(c) < 0:
        return None
    # p-cycle with fixed y has base u = y (u < q); q-cycle with fixed x has base u = x
    return TwoPrimeWitness(n, p, q, IntPolynomial(c), IntPolynomial(d))


def lam_leung_feasible(size: int, primes: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest nonnegative (n_p) with sum n_p * p = size, or None.

    >>> lam_leung_feasible(7, (2, 3, 5))
    (1, 0, 1)
    >>> lam_leung_feasible(6, (2, 3, 5))
    (0, 2, 0)
    """
    if size < 0:
        raise ValueError("size must be nonnegative")
    k = len(primes)
    # reach[j][s]: s is representable using primes[j:]
    reach = [[False] * (size + 1) for _ in range(k + 1)]
    reach[k][0] = True
    for j in range(k - 1, -1, -1):
        p = primes[j]
        for s in range(size + 1):
            reach[j][s] = reach[j + 1][s] or (s >= p and reach[j][s - p])
    if not reach[0][size]:
        return None
    coeffs = []
    rest = size
    for j, p in enumerate(primes):
        c = 0
        while not reach[j + 1][rest - c * p]:
            c += 1
        coeffs.append(c)
        rest -= c * p
    return tuple(coeffs)


def counterexample_multiset(p: int, q: int, r: int) -> MultiSet:
    """The non-decomposable vanishing sum on Z_pqr.

    Mask polynomial (X^qr + ... + X^(p-1)qr)(X^pr + ... + X^(q-1)pr)
    + (X^pq + ... + X^(r-1)pq), reduced mod X^N - 1.
    """
    if len({p, q, r}) != 3 or not all(is_prime(x) for x in (p, q, r)):
        raise InvalidPrimes(f"({p}, {q}, {r}) are not three distinct primes")
    g = make_group(p * q * r)
    N = g.N
    elements = [(i * q * r + j * p * r) % N for i in range(1, p) for j in range(1, q)]
    elements += [k * p * q % N for k in range(1, r)]
    return MultiSet.from_elements(g, elements)


def has_prime_cycle_in_scaled(
    A: MultiSet, m: int, permutation: Sequence[int]
) -> Optional[tuple[int, ...]]:
    """Witness that (p'_m ... p'_k) A contains a p'_1-cycle.

    With the primes reordered as `permutation` and coordinates (x_1, ..., x_k),
    returns elements of A of the form (l, x_2, ..., x_{m-1}, *, ..., *) for
    l = 0..p'_1 - 1 sharing the middle coordinates, ordered by l; None if no
    such subset exists.
    """
    g = A.group
    if sorted(permutation) != list(g.primes):
        raise ValueError(f"{tuple(permutation)} is not a permutation of {g.primes}")
    if not 2 <= m <= g.k:
        raise ValueError(f"m must lie in [2, {g.k}]")
    p1 = permutation[0]
    middle = permutation[1 : m - 1]
    groups: dict[tuple[int, ...], dict[int, int]] = {}
    for a in A.support:
        key = tuple(a % p for p in middle)
        firsts = groups.setdefault(key, {})
        firsts.setdefault(a % p1, a)
    for key in sorted(groups):
        firsts = groups[key]
        if len(firsts) == p1:
            return tuple(firsts[l] for l in range(p1))
    return None


def contains_cycle(M: MultiSet, d: int) -> bool:
    """Whether the support of M contains a full d-cycle."""
    N = M.group.N
    step = N // d
    return any(all(M.mult[(j + i * step) % N] for i in range(d)) for j in range(step))


def scale_factor(permutation: Sequence[int], m: int) -> int:
    return math.prod(permutation[m - 1 :])
