"""Tiling predicates and constructions on square-free Z_N.

Covers (T1)/(T2), tiling-pair verification, complement search, graph-form
detection with its subgroup complement, scaled tilings and the lattice
spectrum built from S_A.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .cyclic_core import (
    CyclicGroup,
    MultiSet,
    from_crt,
    require_nonempty,
    require_set,
    scale_multiset,
)
from .errors import BudgetExhausted, PreconditionViolated
from .mask_poly import multiply_mod

DEFAULT_BUDGET = 10**7

# When set, every verify_tiling_pair call also runs the polynomial-product
# route and fails loudly if the two disagree.  The test suite turns this on.
CROSS_CHECK = False


def check_T1(A: MultiSet) -> bool:
    """#A equals the product of Phi_s(1) over S_A (Phi_p(1) = p)."""
    require_nonempty(A)
    return A.size == math.prod(A.profile.s_a)


def check_T2(A: MultiSet) -> bool:
    """Phi_{s_1...s_m} | A(X) for every choice of at least two elements of S_A."""
    require_nonempty(A)
    prof = A.profile
    N = A.group.N
    s_a = sorted(prof.s_a)
    for r in range(2, len(s_a) + 1):
        for combo in itertools.combinations(s_a, r):
            # Phi_s | A  <=>  A(w_N^(N/s)) = 0
            if N // math.prod(combo) not in prof.divisor_zeros:
                return False
    return True


def rotate(mask: int, t: int, N: int) -> int:
    """Bitmask of the translate (set + t) in Z_N."""
    t %= N
    full = (1 << N) - 1
    return ((mask << t) | (mask >> (N - t))) & full


def _cover_route(A: MultiSet, T: MultiSet) -> bool:
    N = A.group.N
    if A.is_set and T.is_set:
        covered = 0
        amask = A.mask
        for t in T.support:
            r = rotate(amask, t, N)
            if r & covered:
                return False
            covered |= r
        return covered == (1 << N) - 1
    count = [0] * N
    for a in A.elements():
        for t in T.elements():
            x = (a + t) % N
            count[x] += 1
            if count[x] > 1:
                return False
    return all(c == 1 for c in count)


def _product_route(A: MultiSet, T: MultiSet) -> bool:
    return all(c == 1 for c in multiply_mod(A.mult, T.mult, A.group.N))


def verify_tiling_pair(A: MultiSet, T: MultiSet) -> bool:
    """Every x in Z_N has exactly one representation a + t."""
    if A.group != T.group:
        raise ValueError("A and T live in different groups")
    verdict = _cover_route(A, T)
    if CROSS_CHECK and verdict != _product_route(A, T):
        raise AssertionError(f"cover count and A(X)T(X) disagree on ({A!r}, {T!r})")
    return verdict


@dataclass(frozen=True)
class TilingPair:
    A: MultiSet
    T: MultiSet

    def __post_init__(self):
        if not verify_tiling_pair(self.A, self.T):
            raise ValueError(f"({self.A!r}, {self.T!r}) is not a tiling pair")


class _ComplementSearch:
    """Exact-cover search for translates of A partitioning Z_N."""

    def __init__(self, amask: int, N: int, budget: int):
        self.N = N
        self.full = (1 << N) - 1
        self.rot = [rotate(amask, t, N) for t in range(N)]
        support = [a for a in range(N) if amask >> a & 1]
        self.options = [sorted((x - a) % N for a in support) for x in range(N)]
        self.budget = budget
        self.nodes = 0
        self.dead: dict[int, set[int]] = {}

    def completes(self, covered: int, bound: int) -> bool:
        """Can the rest be covered using only translates t > bound?"""
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted("find_tiling_complement", self.budget)
        if covered == self.full:
            return True
        dead = self.dead.setdefault(bound, set())
        if covered in dead:
            return False
        free = ~covered & self.full
        x = (free & -free).bit_length() - 1
        for t in self.options[x]:
            if t > bound and not self.rot[t] & covered:
                if self.completes(covered | self.rot[t], bound):
                    return True
        dead.add(covered)
        return False

    def exists(self) -> bool:
        return self.completes(self.rot[0], 0)

    def lex_least(self) -> Optional[list[int]]:
        T = [0]
        covered = self.rot[0]
        if not self.completes(covered, 0):
            return None
        while covered != self.full:
            for t in range(T[-1] + 1, self.N):
                if not self.rot[t] & covered and self.completes(covered | self.rot[t], t):
                    T.append(t)
                    covered |= self.rot[t]
                    break
            else:  # pragma: no cover - completes() said a continuation exists
                raise AssertionError("complement search lost its continuation")
        return T


def tiling_obstruction(A: MultiSet) -> Optional[int]:
    """A divisor m of N certifying that A has no tiling complement, or None.

    If A + T = Z_N then A(X)T(X) = 1 + X + ... + X^(N-1) mod X^N - 1, so for
    every m > 1 dividing N, Phi_m divides A or T.  When Phi_m' fails to divide
    A for every m' > 1 dividing m, T folded mod X^m - 1 vanishes at all
    nontrivial m-th roots of unity, hence is constant, hence m | #T = N/#A.
    An m breaking that is returned.  None means no certificate, not a tiling.
    """
    g = A.group
    N = g.N
    if N % A.size:
        return N
    T_size = N // A.size
    dz = A.profile.divisor_zeros
    for m in g.divisors:
        if m > 1 and T_size % m and all(N // d not in dz for d in g.divisors if d > 1 and m % d == 0):
            return m
    return None


def find_tiling_complement(
    A: MultiSet, budget: int = DEFAULT_BUDGET, stats: Optional[dict] = None
) -> Optional[MultiSet]:
    """Lexicographically least T with 0 in T and A + T = Z_N, or None.

    Raises BudgetExhausted when the search is cut off; that is not a "no".
    If `stats` is given, stats["nodes"] is increased by the nodes visited.
    """
    require_nonempty(A)
    require_set(A)
    g = A.group
    if g.N % A.size:
        return None
    if A.size == 1:
        return MultiSet.full(g)
    if tiling_obstruction(A) is not None:
        return None
    search = _ComplementSearch(A.mask, g.N, budget)
    try:
        found = search.lex_least()
    finally:
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + search.nodes
    if found is None:
        return None
    return MultiSet.from_elements(g, found)


@dataclass(frozen=True)
class GraphForm:
    """A = {(n, y_n) : n in Z_{p'_1...p'_l}} in the coordinates of `permutation`.

    The base is permutation[:ell]; `assignment` maps each base residue vector to
    the residue vector on the remaining primes.  ell = 0 is the singleton case.
    """

    group: CyclicGroup
    permutation: tuple[int, ...]
    ell: int
    assignment: dict

    @property
    def base(self) -> tuple[int, ...]:
        return self.permutation[: self.ell]

    @property
    def rest(self) -> tuple[int, ...]:
        return self.permutation[self.ell :]

    def reconstruct(self) -> MultiSet:
        g = self.group
        pos = {p: i for i, p in enumerate(self.permutation)}
        elements = []
        for n_vec, y_vec in self.assignment.items():
            coords = n_vec + y_vec
            elements.append(from_crt([coords[pos[p]] for p in g.primes], g))
        return MultiSet.from_elements(g, elements)


def detect_graph_form(A: MultiSet) -> Optional[GraphForm]:
    """Find a set of base primes over which A is the graph of a function.

    A is a graph over base primes B iff #A = prod(B) and A maps injectively to
    Z_{prod(B)} (CRT projection).  Smallest base first, ties by ascending primes.
    """
    require_nonempty(A)
    require_set(A)
    g = A.group
    elems = A.support
    for r in range(0, g.k + 1):
        for base in itertools.combinations(g.primes, r):
            P = math.prod(base)
            if P != len(elems):
                continue
            if len({a % P for a in elems}) != P:
                continue
            rest = tuple(p for p in g.primes if p not in base)
            assignment = {
                tuple(a % p for p in base): tuple(a % p for p in rest) for a in elems
            }
            return GraphForm(g, base + rest, r, assignment)
    return None


def complement_from_graph(gf: GraphForm) -> MultiSet:
    """The subgroup {x : x = 0 mod prod(base)}: zero on the base, free on the rest."""
    g = gf.group
    P = math.prod(gf.base)
    T = MultiSet.from_elements(g, range(0, g.N, P))
    if not verify_tiling_pair(gf.reconstruct(), T):
        raise AssertionError(f"subgroup complement failed for graph form over {gf.base}")
    return T


def scaled_tiling(n: int, pair: TilingPair) -> TilingPair:
    """(nA, T) for gcd(n, #A) = 1; nA stays a set and still tiles with T."""
    if math.gcd(n, pair.A.size) != 1:
        raise PreconditionViolated(f"gcd({n}, #A={pair.A.size}) != 1")
    nA = scale_multiset(n, pair.A)
    if not nA.is_set:
        raise AssertionError(f"{n}*A is not a set")
    return TilingPair(nA, pair.T)


def spectrum_from_T1T2(A: MultiSet) -> MultiSet:
    """B = {sum c_s N/s : 0 <= c_s < s, s in S_A}, checked to be a spectrum of A."""
    from .spectral import verify_spectral_pair

    if not (check_T1(A) and check_T2(A)):
        raise PreconditionViolated(f"{A!r} does not satisfy (T1) and (T2)")
    g = A.group
    step = g.N // math.prod(A.profile.s_a)
    B = MultiSet.from_elements(g, range(0, g.N, step))
    if not verify_spectral_pair(A, B):
        raise AssertionError(f"lattice spectrum failed for {A!r}")
    return B
