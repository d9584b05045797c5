"""Exact integer polynomials, cyclotomic polynomials and zero sets of mask polynomials.

Nothing on the decision path uses floating point: A(w_N^d) = 0 is decided by
the integer remainder of A(X) modulo the monic polynomial Phi_{N/d}(X).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Union

from .cyclic_core import MAX_MULTIPLICITY, CyclicGroup, MultiSet, require_nonempty
from .errors import InvalidDivisor


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True, init=False)
class IntPolynomial:
    """Dense integer polynomial; coeffs[i] is the coefficient of X^i.

    The zero polynomial has no coefficients and degree -1.

    >>> IntPolynomial([1, 1]) * IntPolynomial([-1, 1])
    IntPolynomial('X^2 - 1')
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int] = ()):
        object.__setattr__(self, "coeffs", _trim([int(c) for c in coeffs]))

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> IntPolynomial:
        return cls([0] * n + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Schoolbook division by a monic divisor; quotient and remainder stay integral."""
        if divisor.is_zero() or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) <= dd:
            return IntPolynomial(), IntPolynomial(rem)
        quot = [0] * (len(rem) - dd)
        dc = divisor.coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                shift = i - dd
                quot[shift] = c
                for j in range(dd + 1):
                    rem[shift + j] -= c * dc[j]
        return IntPolynomial(quot), IntPolynomial(rem[:dd])

    def __mod__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod_monic(divisor)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        if not self.coeffs:
            return "IntPolynomial('0')"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = "" if i == 0 else "X" if i == 1 else f"X^{i}"
            body = str(mag) if (mag != 1 or not term) else ""
            parts.append((sign, body + term))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return f"IntPolynomial('{text}')"


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """Phi_n by exact division of X^n - 1 by Phi_d for the proper divisors d of n.

    >>> cyclotomic(6)
    IntPolynomial('X^2 - X + 1')
    """
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = IntPolynomial.monomial(n) - IntPolynomial([1])
    for d in range(1, n):
        if n % d == 0:
            poly, rem = poly.divmod_monic(cyclotomic(d))
            assert rem.is_zero()
    return poly


def fold(coeffs: Sequence[int], m: int) -> list[int]:
    """Reduce a coefficient vector modulo X^m - 1."""
    out = [0] * m
    for i, c in enumerate(coeffs):
        if c:
            out[i % m] += c
    return out


def multiply_mod(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    """Product of two coefficient vectors in Z[X]/(X^N - 1)."""
    out = [0] * N
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % N] += x * y
    return out


@dataclass(frozen=True)
class MaskPolynomial:
    """A(X) = sum m_a X^a for a multiset A in Z_N; coeffs coincide with the multiplicities."""

    group: CyclicGroup
    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, A: Union[MultiSet, "MaskPolynomial"]) -> MaskPolynomial:
        if isinstance(A, MaskPolynomial):
            return A
        return cls(A.group, A.mult)

    def as_int_polynomial(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)

    def to_multiset(self) -> MultiSet:
        return MultiSet(self.group, self.coeffs)

    @property
    def size(self) -> int:
        return sum(self.coeffs)

    def evaluate_root(self, n: int) -> complex:
        """Floating value of A(w_N^n); diagnostics only."""
        N = self.group.N
        return sum(c * cmath.exp(2j * math.pi * (a * n % N) / N) for a, c in enumerate(self.coeffs) if c)


def _check_divisor(g: CyclicGroup, d: int) -> None:
    if d < 1 or g.N % d:
        raise InvalidDivisor(f"{d} does not divide {g.N}")


def root_is_zero(A: Union[MultiSet, MaskPolynomial], d: int) -> bool:
    """Exact test of A(w_N^d) = 0, i.e. Phi_{N/d} divides A(X) mod X^N - 1.

    >>> from fuglede.cyclic_core import make_group
    >>> root_is_zero(MultiSet.from_elements(make_group(30), [0, 15]), 15)
    True
    """
    P = MaskPolynomial.of(A)
    g = P.group
    _check_divisor(g, d)
    m = g.N // d
    # Phi_m divides X^m - 1, so folding first does not change the remainder
    folded = IntPolynomial(fold(P.coeffs, m))
    return (folded % cyclotomic(m)).is_zero()


class ZeroTester:
    """Batch version of root_is_zero for every proper divisor of N at once.

    The remainder of A(X) mod Phi_m is linear in the multiplicities, so each
    element x carries the precomputed remainder of X^(x mod m).  All divisors'
    remainder vectors are packed into one biased big integer; summing the
    packed rows of A's elements and comparing each segment with the bias
    pattern decides every Phi_m | A(X) exactly.
    """

    def __init__(self, g: CyclicGroup):
        self.group = g
        N = g.N
        self.divisors = tuple(d for d in g.divisors if d < N)
        rows_by_div = []
        bias = 1
        for d in self.divisors:
            m = N // d
            phi = cyclotomic(m)
            rows = []
            for r in range(m):
                rem = IntPolynomial.monomial(r) % phi
                vec = list(rem.coeffs) + [0] * (phi.degree - len(rem.coeffs))
                rows.append(vec)
                bias = max(bias, max((abs(c) for c in vec), default=0))
            rows_by_div.append((m, rows))
        max_total = N * MAX_MULTIPLICITY
        width = (max_total * 2 * bias).bit_length() + 1
        self._segments = []
        packed = [0] * N
        offset = 0
        for d, (m, rows) in zip(self.divisors, rows_by_div):
            nf = len(rows[0])
            seg_bias = sum(bias << (width * j) for j in range(nf))
            self._segments.append((d, offset, (1 << (width * nf)) - 1, seg_bias))
            for x in range(N):
                val = sum((c + bias) << (width * j) for j, c in enumerate(rows[x % m]))
                packed[x] |= val << offset
            offset += width * nf
        self._packed = packed
        self._chunks = []
        for c in range(0, N, 8):
            table = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                bit = low.bit_length() - 1
                table[byte] = table[byte ^ low] + (packed[c + bit] if c + bit < N else 0)
            self._chunks.append(table)

    def _decide(self, total: int, size: int) -> frozenset[int]:
        return frozenset(
            d for d, off, segmask, seg_bias in self._segments if (total >> off) & segmask == size * seg_bias
        )

    def zero_bits(self, mask: int) -> int:
        """Bit i set iff A(w_N^d) = 0 for d = self.divisors[i]; A given as a set bitmask."""
        total = 0
        shift = 0
        for table in self._chunks:
            total += table[(mask >> shift) & 255]
            shift += 8
        size = mask.bit_count()
        bits = 0
        for i, (_, off, segmask, seg_bias) in enumerate(self._segments):
            if (total >> off) & segmask == size * seg_bias:
                bits |= 1 << i
        return bits

    def divisor_zeros_mask(self, mask: int) -> frozenset[int]:
        """Proper divisors d with A(w_N^d) = 0 for the set encoded by a bitmask."""
        bits = self.zero_bits(mask)
        return frozenset(d for i, d in enumerate(self.divisors) if bits >> i & 1)

    def divisor_zeros(self, mult: Sequence[int]) -> frozenset[int]:
        total = 0
        for x, m in enumerate(mult):
            if m:
                total += m * self._packed[x]
        return self._decide(total, sum(mult))


_TESTER_LIMIT = 4096


@lru_cache(maxsize=64)
def zero_tester(g: CyclicGroup) -> ZeroTester:
    return ZeroTester(g)


@dataclass(frozen=True)
class ZeroProfile:
    """Zero structure of a mask polynomial.

    divisor_zeros: proper divisors d of N with A(w_N^d) = 0
    s_a: prime powers s | N with Phi_s | A(X) (primes, since N is square-free)
    full_zeros: every n in Z_N with A(w_N^n) = 0
    """

    group: CyclicGroup
    divisor_zeros: frozenset[int]
    s_a: frozenset[int]
    full_zeros: frozenset[int]

    @cached_property
    def full_zeros_mask(self) -> int:
        out = 0
        for n in self.full_zeros:
            out |= 1 << n
        return out

    def __contains__(self, n: int) -> bool:
        return n % self.group.N in self.full_zeros


def unit_orbit_closure(g: CyclicGroup, divisor_zeros) -> frozenset[int]:
    # n belongs to the unit orbit of gcd(n, N)
    return frozenset(n for n in range(1, g.N) if math.gcd(n, g.N) in divisor_zeros)


def profile_from_divisor_zeros(g: CyclicGroup, divisor_zeros: frozenset[int]) -> ZeroProfile:
    s_a = frozenset(p for p in g.primes if g.N // p in divisor_zeros)
    return ZeroProfile(g, divisor_zeros, s_a, unit_orbit_closure(g, divisor_zeros))


def zero_profile(A: Union[MultiSet, MaskPolynomial]) -> ZeroProfile:
    P = MaskPolynomial.of(A)
    g = P.group
    require_nonempty(P.to_multiset())
    if g.N <= _TESTER_LIMIT:
        dz = zero_tester(g).divisor_zeros(P.coeffs)
    else:
        dz = frozenset(d for d in g.divisors if d < g.N and root_is_zero(P, d))
    return profile_from_divisor_zeros(g, dz)


def prime_power_zero_count(A: Union[MultiSet, MaskPolynomial], p: int) -> int:
    """Number of powers p^e dividing N with A(w_N^(N/p^e)) = 0."""
    P = MaskPolynomial.of(A)
    N = P.group.N
    if N % p:
        raise InvalidDivisor(f"{p} does not divide {N}")
    count = 0
    q = p
    while N % q == 0:
        if root_is_zero(P, N // q):
            count += 1
        q *= p
    return count
