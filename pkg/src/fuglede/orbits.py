"""Affine orbits of subsets of Z_N under x -> g x + t (g a unit).

Orbit keys use the encoding enc(S) = sum 2^(N-1-x) over x in S, so that a
larger integer means a lexicographically smaller sorted element tuple.  The
key of a set is the largest encoding over its orbit; its representative is
the orbit member with the lexicographically least sorted tuple, which always
contains 0.

With this order, deleting the largest element of a canonical set leaves a
canonical set, so every orbit is reached exactly once by growing canonical
sets one element at a time (orderly generation).
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable

import numpy as np
from numba import njit

from .cyclic_core import CyclicGroup, MultiSet

MAX_ENUM_N = 32


def encode(elements: Iterable[int], N: int) -> int:
    out = 0
    for x in elements:
        out |= 1 << (N - 1 - x % N)
    return out


def decode(key: int, N: int) -> tuple[int, ...]:
    return tuple(x for x in range(N) if key >> (N - 1 - x) & 1)


def canonical_orbit_key(A: MultiSet) -> int:
    """Largest encoding over the affine orbit of the set A; equal keys iff same orbit."""
    g = A.group
    N = g.N
    elems = A.support
    if not elems:
        raise ValueError("orbit key of the empty set")
    best = 0
    for u in g.units:
        image = [u * x % N for x in elems]
        for e in image:
            key = encode((y - e for y in image), N)
            if key > best:
                best = key
    return best


def orbit_representative(A: MultiSet) -> MultiSet:
    return MultiSet.from_elements(A.group, decode(canonical_orbit_key(A), A.group.N))


def _unit_bit_perms(g: CyclicGroup) -> np.ndarray:
    N = g.N
    perms = np.empty((len(g.units), N), dtype=np.int64)
    for i, u in enumerate(g.units):
        for b in range(N):
            x = N - 1 - b
            perms[i, b] = N - 1 - (u * x % N)
    return perms


@njit(cache=True)
def _is_canonical(m, N, perms):
    full = (1 << N) - 1
    for i in range(perms.shape[0]):
        img = 0
        for b in range(N):
            if (m >> b) & 1:
                img |= 1 << perms[i, b]
        for b in range(N):
            if (img >> b) & 1:
                s = N - 1 - b
                rot = ((img << s) | (img >> (N - s))) & full
                if rot > m:
                    return False
    return True


@njit(cache=True)
def _to_element_mask(m, N):
    out = 0
    for b in range(N):
        if (m >> b) & 1:
            out |= 1 << (N - 1 - b)
    return out


@njit(cache=True)
def _orderly(root, root_size, N, perms, max_size, want):
    """Canonical descendants of `root` (itself included) with size flagged in `want`.

    Returns element bitmasks (bit x set iff x is in the set), in DFS order.
    """
    cap = 1024
    out = np.empty(cap, dtype=np.int64)
    n_out = 0
    stack_m = np.empty(N + 2, dtype=np.int64)
    stack_c = np.empty(N + 2, dtype=np.int64)
    low = 0
    while not (root >> low) & 1:
        low += 1
    if want[root_size]:
        out[0] = _to_element_mask(root, N)
        n_out = 1
    sp = 0
    stack_m[0] = root
    stack_c[0] = low - 1
    while sp >= 0:
        m = stack_m[sp]
        c = stack_c[sp]
        if c < 0 or root_size + sp >= max_size:
            sp -= 1
            continue
        stack_c[sp] = c - 1
        child = m | (1 << c)
        if _is_canonical(child, N, perms):
            if want[root_size + sp + 1]:
                if n_out == cap:
                    grown = np.empty(cap * 2, dtype=np.int64)
                    grown[:cap] = out
                    out = grown
                    cap *= 2
                out[n_out] = _to_element_mask(child, N)
                n_out += 1
            sp += 1
            stack_m[sp] = child
            stack_c[sp] = c - 1
    return out[:n_out]


class OrbitEnumerator:
    """Canonical representatives of all affine orbits of nonempty subsets of Z_N.

    The orderly search tree is cut at `split` elements: `head()` yields the
    small orbits directly and `roots()` gives the independent subtrees that a
    worker pool can expand with `subtree()`.
    """

    def __init__(self, g: CyclicGroup, sizes: Iterable[int], split: int = 3):
        if g.N > MAX_ENUM_N:
            raise ValueError(f"orbit enumeration supports N <= {MAX_ENUM_N}")
        self.group = g
        self.sizes = sorted(set(sizes))
        if not self.sizes or self.sizes[0] < 1 or self.sizes[-1] > g.N:
            raise ValueError(f"sizes must lie in [1, {g.N}]")
        self.max_size = self.sizes[-1]
        self.split = min(split, self.max_size)
        self.perms = _unit_bit_perms(g)
        self._root = 1 << (g.N - 1)

    def _want(self, lo: int, hi: int) -> np.ndarray:
        want = np.zeros(self.group.N + 2, dtype=np.bool_)
        for s in self.sizes:
            if lo <= s <= hi:
                want[s] = True
        return want

    def head(self) -> np.ndarray:
        """Representatives with at most `split` elements."""
        return _orderly(self._root, 1, self.group.N, self.perms, self.split, self._want(1, self.split))

    def roots(self) -> list[int]:
        """Encoded canonical sets of exactly `split` elements (subtree roots)."""
        if self.max_size <= self.split:
            return []
        want = np.zeros(self.group.N + 2, dtype=np.bool_)
        want[self.split] = True
        masks = _orderly(self._root, 1, self.group.N, self.perms, self.split, want)
        N = self.group.N
        return [encode((x for x in range(N) if int(m) >> x & 1), N) for m in masks]

    def subtree(self, root: int) -> np.ndarray:
        """Representatives strictly larger than `split` below one root."""
        return _orderly(
            root, self.split, self.group.N, self.perms, self.max_size, self._want(self.split + 1, self.max_size)
        )

    def all(self) -> np.ndarray:
        parts = [self.head()] + [self.subtree(r) for r in self.roots()]
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def burnside_orbit_counts(g: CyclicGroup) -> dict[int, int]:
    """Number of affine orbits of k-subsets for every k, by Burnside's lemma."""
    N = g.N
    totals = [0] * (N + 1)
    group_order = 0
    for u in g.units:
        for t in range(N):
            group_order += 1
            seen = [False] * N
            lengths = Counter()
            for x in range(N):
                if not seen[x]:
                    n = 0
                    y = x
                    while not seen[y]:
                        seen[y] = True
                        y = (u * y + t) % N
                        n += 1
                    lengths[n] += 1
            # fixed k-subsets: coefficient of z^k in prod over cycles of (1 + z^len)
            poly = [1] + [0] * N
            for length, count in lengths.items():
                for _ in range(count):
                    for k in range(N, length - 1, -1):
                        poly[k] += poly[k - length]
            for k in range(N + 1):
                totals[k] += poly[k]
    return {k: totals[k] // group_order for k in range(N + 1)}
