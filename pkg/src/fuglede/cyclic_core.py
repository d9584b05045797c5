"""Arithmetic in Z_N for square-free N.

Elements of Z_N are plain ints in [0, N).  CRT coordinates are tuples
(x mod p_1, ..., x mod p_k) with the primes in ascending order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import EmptyMultiSet, InvalidDivisor, NotSquareFree, PreconditionViolated

MAX_N = 10**6
MAX_MULTIPLICITY = 2**20

ResidueVector = tuple[int, ...]


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization as (prime, exponent) pairs."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == [(n, 1)]


@dataclass(frozen=True)
class CyclicGroup:
    N: int
    primes: tuple[int, ...]

    def __post_init__(self):
        if math.prod(self.primes) != self.N or len(set(self.primes)) != len(self.primes):
            raise NotSquareFree(self.N)
        if not self.primes or list(self.primes) != sorted(self.primes):
            raise ValueError(f"primes must be a nonempty ascending tuple, got {self.primes}")

    @property
    def k(self) -> int:
        return len(self.primes)

    @cached_property
    def divisors(self) -> tuple[int, ...]:
        return tuple(d for d in range(1, self.N + 1) if self.N % d == 0)

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.N) if math.gcd(x, self.N) == 1)

    @cached_property
    def crt_basis(self) -> tuple[int, ...]:
        # e_j = 1 mod p_j and 0 mod the other primes
        basis = []
        for p in self.primes:
            m = self.N // p
            basis.append(m * pow(m, -1, p) % self.N)
        return tuple(basis)

    def normalize(self, x: int) -> int:
        return x % self.N

    def __repr__(self) -> str:
        return f"Z_{self.N}"


def make_group(N: int, max_n: int = MAX_N) -> CyclicGroup:
    """Build Z_N, rejecting non-square-free N.

    >>> make_group(30).primes
    (2, 3, 5)
    """
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    if N > max_n:
        raise ValueError(f"N={N} exceeds the configured bound {max_n}")
    fac = factorize(N)
    if any(e > 1 for _, e in fac):
        raise NotSquareFree(N)
    return CyclicGroup(N, tuple(p for p, _ in fac))


def to_crt(x: int, g: CyclicGroup) -> ResidueVector:
    x %= g.N
    return tuple(x % p for p in g.primes)


def from_crt(v: Sequence[int], g: CyclicGroup) -> int:
    if len(v) != g.k:
        raise ValueError(f"residue vector {tuple(v)} has length {len(v)}, expected {g.k}")
    return sum(c * e for c, e in zip(v, g.crt_basis)) % g.N


def units(g: CyclicGroup) -> frozenset[int]:
    return frozenset(g.units)


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


@dataclass(frozen=True)
class MultiSet:
    """Multiplicity vector over Z_N.

    Used for sets (all multiplicities <= 1) as well as multisets such as n*A.
    """

    group: CyclicGroup
    mult: tuple[int, ...]

    def __post_init__(self):
        if len(self.mult) != self.group.N:
            raise ValueError(f"multiplicity vector has length {len(self.mult)}, expected {self.group.N}")
        for m in self.mult:
            if m < 0 or m > MAX_MULTIPLICITY:
                raise ValueError(f"multiplicity {m} outside [0, {MAX_MULTIPLICITY}]")

    @classmethod
    def from_elements(cls, g: CyclicGroup, elements: Iterable[int]) -> MultiSet:
        """Collect elements (repeats add multiplicity), reducing mod N."""
        mult = [0] * g.N
        for x in elements:
            mult[x % g.N] += 1
        return cls(g, tuple(mult))

    @classmethod
    def from_mask(cls, g: CyclicGroup, mask: int) -> MultiSet:
        return cls(g, tuple((mask >> x) & 1 for x in range(g.N)))

    @classmethod
    def full(cls, g: CyclicGroup) -> MultiSet:
        return cls(g, (1,) * g.N)

    @cached_property
    def size(self) -> int:
        return sum(self.mult)

    @cached_property
    def is_set(self) -> bool:
        return all(m <= 1 for m in self.mult)

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(x for x, m in enumerate(self.mult) if m)

    @cached_property
    def mask(self) -> int:
        """Bitmask of the support (bit x set iff x is present)."""
        out = 0
        for x in self.support:
            out |= 1 << x
        return out

    @cached_property
    def profile(self):
        """Zero profile of the mask polynomial, computed once per multiset."""
        from .mask_poly import zero_profile

        return zero_profile(self)

    def elements(self) -> Iterator[int]:
        """Elements in ascending order, repeated by multiplicity."""
        for x, m in enumerate(self.mult):
            for _ in range(m):
                yield x

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x: int) -> bool:
        return self.mult[x % self.group.N] > 0

    def __add__(self, other: MultiSet) -> MultiSet:
        """Multiset union (multiplicities add)."""
        if other.group != self.group:
            raise ValueError("multisets live in different groups")
        return MultiSet(self.group, tuple(a + b for a, b in zip(self.mult, other.mult)))

    def __sub__(self, other: MultiSet) -> MultiSet:
        if other.group != self.group:
            raise ValueError("multisets live in different groups")
        diff = tuple(a - b for a, b in zip(self.mult, other.mult))
        if min(diff) < 0:
            raise ValueError("multiset difference would be negative")
        return MultiSet(self.group, diff)

    def translate(self, t: int) -> MultiSet:
        N = self.group.N
        mult = [0] * N
        for x, m in enumerate(self.mult):
            mult[(x + t) % N] += m
        return MultiSet(self.group, tuple(mult))

    def sorted_elements(self) -> list[int]:
        return list(self.elements())

    def __repr__(self) -> str:
        if self.is_set:
            body = ",".join(map(str, self.support))
        else:
            body = ",".join(f"{x}^{m}" if m > 1 else str(x) for x, m in enumerate(self.mult) if m)
        return f"{{{body}}} in Z_{self.group.N}"


def require_nonempty(A: MultiSet) -> None:
    if A.size == 0:
        raise EmptyMultiSet("operation requires a nonempty multiset")


def require_set(A: MultiSet) -> None:
    if not A.is_set:
        raise PreconditionViolated(f"{A!r} is a multiset, a set is required")


@dataclass(frozen=True)
class Cycle:
    """The d-cycle {j, j+N/d, ..., j+(d-1)N/d}, i.e. a coset of the order-d subgroup."""

    group: CyclicGroup
    d: int
    base: int

    def elements(self) -> tuple[int, ...]:
        step = self.group.N // self.d
        return tuple(sorted((self.base + i * step) % self.group.N for i in range(self.d)))


def make_cycle(g: CyclicGroup, d: int, j: int) -> Cycle:
    if d < 2 or g.N % d:
        raise InvalidDivisor(f"{d} is not a divisor >= 2 of {g.N}")
    # canonical base: smallest element of the coset
    return Cycle(g, d, (j % g.N) % (g.N // d))


def cycle_elements(c: Cycle) -> MultiSet:
    return MultiSet.from_elements(c.group, c.elements())


def scale_multiset(n: int, A: MultiSet) -> MultiSet:
    """The multiset n*A = {n a : a in A}, multiplicities summed on collisions."""
    if n < 0:
        raise ValueError("scale factor must be nonnegative")
    N = A.group.N
    mult = [0] * N
    for x, m in enumerate(A.mult):
        if m:
            mult[n * x % N] += m
    return MultiSet(A.group, tuple(mult))

