"""Spectral pairs: exact verification, Hadamard cross-check and spectrum search."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .cyclic_core import MultiSet, require_nonempty, require_set
from .errors import BudgetExhausted, PreconditionViolated, SizeMismatch
from .tiling import rotate

DEFAULT_BUDGET = 10**7
FLOAT_TOL = 1e-9


def verify_spectral_pair(A: MultiSet, B: MultiSet) -> bool:
    """#A = #B and every nonzero difference of B lies in Z_A."""
    require_nonempty(A)
    require_nonempty(B)
    require_set(A)
    require_set(B)
    if A.group != B.group:
        raise ValueError("A and B live in different groups")
    if A.size != B.size:
        return False
    N = A.group.N
    allowed = A.profile.full_zeros_mask | 1
    bmask = B.mask
    for b in B.support:
        # B - b must avoid everything outside Z_A u {0}
        if rotate(bmask, -b, N) & ~allowed:
            return False
    return True


@dataclass(frozen=True)
class SpectralPair:
    A: MultiSet
    B: MultiSet

    def __post_init__(self):
        if not verify_spectral_pair(self.A, self.B):
            raise ValueError(f"({self.A!r}, {self.B!r}) is not a spectral pair")


def gram_error(A: MultiSet, B: MultiSet) -> float:
    """max |M M^* - #A I| for M = (w_N^{ba})_{b in B, a in A}."""
    N = A.group.N
    a = np.array(A.support, dtype=np.int64)
    b = np.array(B.support, dtype=np.int64)
    M = np.exp(2j * np.pi * (np.outer(b, a) % N) / N)
    G = M @ M.conj().T
    return float(np.max(np.abs(G - A.size * np.eye(len(b)))))


def hadamard_check(A: MultiSet, B: MultiSet) -> bool:
    """Decide whether (w_N^{ba}) is a complex Hadamard matrix.

    The exact answer comes from verify_spectral_pair; the floating Gram matrix
    is computed alongside and must agree, otherwise AssertionError.
    """
    if A.size != B.size:
        raise SizeMismatch(f"#A={A.size} but #B={B.size}")
    exact = verify_spectral_pair(A, B)
    approx = gram_error(A, B) < FLOAT_TOL * A.size
    if exact != approx:
        raise AssertionError(f"exact and floating Hadamard checks disagree on ({A!r}, {B!r})")
    return exact


@lru_cache(maxsize=65536)
def _lex_least_clique(N: int, zeros_mask: int, k: int, budget: int) -> tuple[Optional[tuple[int, ...]], int]:
    """Lex-least k-clique through 0 in the circulant graph on Z_N with connection set zeros_mask.

    Returns the clique (or None) and the number of search nodes it took.
    """
    if k == 1:
        return (0,), 0
    nbr = [rotate(zeros_mask, x, N) for x in range(N)]
    dead: set[tuple[int, int]] = set()
    clique = [0]
    nodes = 0

    def extend(cand: int, need: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted("find_spectrum", budget)
        if need == 0:
            return True
        if cand.bit_count() < need or (cand, need) in dead:
            return False
        rest = cand
        while rest:
            if rest.bit_count() < need:
                break
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            clique.append(v)
            if extend(rest & nbr[v], need - 1):
                return True
            clique.pop()
        dead.add((cand, need))
        return False

    # every vertex adjacent to 0 is > 0, and candidates only grow upwards
    if extend(nbr[0], k - 1):
        return tuple(clique), nodes
    return None, nodes


def find_spectrum(
    A: MultiSet, budget: int = DEFAULT_BUDGET, stats: Optional[dict] = None
) -> Optional[MultiSet]:
    """Lexicographically least spectrum B of A with 0 in B, or None.

    Spectra containing 0 are exactly the #A-cliques through 0 in the circulant
    graph x ~ y iff x - y in Z_A.  The result depends only on (Z_A, #A) and is
    cached on that key.  Raises BudgetExhausted when the search is cut off.
    """
    require_nonempty(A)
    require_set(A)
    g = A.group
    found, nodes = _lex_least_clique(g.N, A.profile.full_zeros_mask, A.size, budget)
    if stats is not None:
        stats["nodes"] = stats.get("nodes", 0) + nodes
    if found is None:
        return None
    return MultiSet.from_elements(g, found)


def spectral_duality(A: MultiSet, B: MultiSet) -> bool:
    """Given a spectral pair (A, B), check that (B, A) is one as well."""
    if not verify_spectral_pair(A, B):
        raise PreconditionViolated(f"({A!r}, {B!r}) is not a spectral pair")
    return verify_spectral_pair(B, A)


@dataclass(frozen=True)
class GraphOverPrimes:
    """A = {(x, y, f(x, y)) : (x, y) in S} with (x, y) the coordinates mod (p, q)."""

    p: int
    q: int
    r: int
    S: frozenset
    f: dict

    @property
    def is_full(self) -> bool:
        return len(self.S) == self.p * self.q


def graph_over_primes(A: MultiSet, pi: tuple[int, int]) -> Optional[GraphOverPrimes]:
    """Express A as a graph over the two primes in `pi`; None if two elements share (x, y)."""
    require_set(A)
    g = A.group
    if g.k != 3:
        raise PreconditionViolated("graph_over_primes needs N = pqr")
    p, q = pi
    if p == q or p not in g.primes or q not in g.primes:
        raise ValueError(f"{pi} must name two distinct prime factors of {g.N}")
    (r,) = (x for x in g.primes if x not in (p, q))
    f = {}
    for a in A.support:
        key = (a % p, a % q)
        if key in f:
            return None
        f[key] = a % r
    return GraphOverPrimes(p, q, r, frozenset(f), f)
