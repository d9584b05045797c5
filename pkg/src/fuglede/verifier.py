"""Theorem harness: per-set classification, exhaustive and sampled checks of

    (T1) and (T2)  <=>  A tiles Z_N  <=>  A is spectral,

and property suites for the three-prime case analysis over spectral pairs.
"""
from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .cycle_decomp import contains_cycle, has_prime_cycle_in_scaled
from .cyclic_core import CyclicGroup, MultiSet, make_group, require_nonempty, require_set, scale_multiset
from .errors import BudgetExhausted, PreconditionViolated
from .mask_poly import profile_from_divisor_zeros, zero_tester
from .orbits import OrbitEnumerator, canonical_orbit_key
from .spectral import _lex_least_clique, find_spectrum, graph_over_primes, spectral_duality, verify_spectral_pair
from .tiling import (
    DEFAULT_BUDGET,
    _ComplementSearch,
    check_T1,
    check_T2,
    complement_from_graph,
    detect_graph_form,
    find_tiling_complement,
    spectrum_from_T1T2,
    verify_tiling_pair,
)

__all__ = [
    "ClassificationReport",
    "FastClassifier",
    "VerificationReport",
    "SuiteReport",
    "canonical_orbit_key",
    "case_analysis_suite",
    "classify_set",
    "sample_subset",
    "verify_theorem_exhaustive",
    "verify_theorem_sampled",
]


@dataclass(frozen=True)
class ClassificationReport:
    set_repr: tuple[int, ...]
    t1: bool
    t2: bool
    tile_witness: Optional[tuple[int, ...]]
    spectrum_witness: Optional[tuple[int, ...]]
    zero_profile_summary: tuple[int, ...]
    s_a: tuple[int, ...]
    nodes_used: int = 0

    @property
    def tile(self) -> bool:
        return self.tile_witness is not None

    @property
    def spectral(self) -> bool:
        return self.spectrum_witness is not None

    @property
    def consistent(self) -> bool:
        return (self.t1 and self.t2) == self.tile == self.spectral

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(tile=self.tile, spectral=self.spectral)
        return out


def classify_set(A: MultiSet, budget: int = DEFAULT_BUDGET) -> ClassificationReport:
    """Decide all three predicates for A, each positive backed by a verified witness.

    Raises BudgetExhausted if a search is cut off.
    """
    require_nonempty(A)
    require_set(A)
    stats = {"nodes": 0}
    t1, t2 = check_T1(A), check_T2(A)
    gf = detect_graph_form(A)
    T = complement_from_graph(gf) if gf is not None else find_tiling_complement(A, budget, stats)
    if T is not None and not verify_tiling_pair(A, T):
        raise AssertionError(f"tiling witness for {A!r} does not verify")
    B = spectrum_from_T1T2(A) if (t1 and t2) else find_spectrum(A, budget, stats)
    if B is not None and not verify_spectral_pair(A, B):
        raise AssertionError(f"spectrum witness for {A!r} does not verify")
    prof = A.profile
    return ClassificationReport(
        set_repr=A.support,
        t1=t1,
        t2=t2,
        tile_witness=None if T is None else T.support,
        spectrum_witness=None if B is None else B.support,
        zero_profile_summary=tuple(sorted(prof.divisor_zeros)),
        s_a=tuple(sorted(prof.s_a)),
        nodes_used=stats["nodes"],
    )


class FastClassifier:
    """Verdicts (t1, t2, tile, spectral) for set bitmasks without building witnesses.

    Everything that depends only on the zero pattern is cached per pattern.
    Used to sweep millions of sets; positives and disagreements are then
    re-examined with classify_set, which produces and verifies witnesses.
    """

    def __init__(self, g: CyclicGroup, budget: int = DEFAULT_BUDGET):
        self.group = g
        self.budget = budget
        self.tester = zero_tester(g)
        self._pattern: dict[int, tuple] = {}
        # how each tile verdict was reached: size, graph, certificate, search
        self.tile_routes = {"size": 0, "graph": 0, "certificate": 0, "search": 0}
        self._lattice: dict[tuple[int, int], bool] = {}
        self._bases = [
            math.prod(c) for r in range(g.k + 1) for c in itertools.combinations(g.primes, r)
        ]

    def _pattern_info(self, bits: int) -> tuple:
        info = self._pattern.get(bits)
        if info is None:
            g = self.group
            dz = frozenset(d for i, d in enumerate(self.tester.divisors) if bits >> i & 1)
            prof = profile_from_divisor_zeros(g, dz)
            s_a = sorted(prof.s_a)
            t2 = all(
                g.N // math.prod(c) in dz
                for r in range(2, len(s_a) + 1)
                for c in itertools.combinations(s_a, r)
            )
            # m with Phi_m' missing from A for every m' > 1 dividing m (see tiling_obstruction)
            free = tuple(
                m for m in g.divisors
                if m > 1 and all(g.N // d not in dz for d in g.divisors if d > 1 and m % d == 0)
            )
            info = (math.prod(s_a), t2, prof.full_zeros_mask, free)
            self._pattern[bits] = info
        return info

    def _graph_form(self, mask: int, size: int) -> bool:
        N = self.group.N
        for P in self._bases:
            if P == size:
                seen = 0
                x = mask
                while x:
                    low = x & -x
                    r = 1 << ((low.bit_length() - 1) % P)
                    if seen & r:
                        break
                    seen |= r
                    x ^= low
                else:
                    return True
        return False

    def verdicts(self, mask: int) -> tuple[bool, bool, bool, bool]:
        N = self.group.N
        size = mask.bit_count()
        bits = self.tester.zero_bits(mask)
        prod_sa, t2, zeros_mask, free = self._pattern_info(bits)
        t1 = size == prod_sa
        routes = self.tile_routes
        if N % size:
            tile = False
            routes["size"] += 1
        elif size == 1 or self._graph_form(mask, size):
            tile = True
            routes["graph"] += 1
        elif any((N // size) % m for m in free):
            tile = False
            routes["certificate"] += 1
        else:
            tile = _ComplementSearch(mask, N, self.budget).exists()
            routes["search"] += 1
        if t1 and t2:
            key = (bits, size)
            spectral = self._lattice.get(key)
            if spectral is None:
                # the lattice spectrum: its nonzero differences must lie in Z_A
                step = N // prod_sa
                B = sum(1 << x for x in range(0, N, step))
                spectral = not (B & ~(zeros_mask | 1))
                self._lattice[key] = spectral
        else:
            spectral = _lex_least_clique(N, zeros_mask, size, self.budget)[0] is not None
        return t1, t2, tile, spectral


@dataclass
class VerificationReport:
    N: int
    primes: tuple[int, ...]
    mode: str
    sizes: list[int]
    per_size: dict[int, dict[str, int]] = field(default_factory=dict)
    violations: list[dict] = field(default_factory=list)
    inconclusive: list[dict] = field(default_factory=list)
    witness_failures: list[dict] = field(default_factory=list)
    duality_failures: list[dict] = field(default_factory=list)
    t1t2_checked: int = 0
    tile_routes: dict[str, int] = field(default_factory=dict)
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    elapsed_ms: int = 0
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return not (self.violations or self.inconclusive or self.witness_failures or self.duality_failures)

    def to_dict(self, with_pairs: bool = False) -> dict:
        out = {
            "N": self.N,
            "primes": list(self.primes),
            "mode": self.mode,
            "sizes": list(self.sizes),
            "per_size": {str(k): dict(v) for k, v in sorted(self.per_size.items())},
            "violations": self.violations,
            "inconclusive": self.inconclusive,
            "witness_failures": self.witness_failures,
            "duality_failures": self.duality_failures,
            "t1t2_checked": self.t1t2_checked,
            "tile_routes": dict(sorted(self.tile_routes.items())),
            "spectral_pairs": len(self.pairs),
            "elapsed_ms": self.elapsed_ms,
            "ok": self.ok,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if with_pairs:
            out["pairs"] = [[list(a), list(b)] for a, b in self.pairs]
        return out


class _Partial:
    """Results for a slice of the work; merged in a fixed order."""

    def __init__(self):
        self.per_size: dict[int, list[int]] = {}
        self.violations: list[dict] = []
        self.inconclusive: list[dict] = []
        self.witness_failures: list[dict] = []
        self.duality_failures: list[dict] = []
        self.t1t2_checked = 0
        self.tile_routes: dict[str, int] = {}
        self.pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def merge_into(self, rep: VerificationReport) -> None:
        for s, (total, pos) in self.per_size.items():
            slot = rep.per_size.setdefault(s, {"orbits": 0, "positive": 0})
            slot["orbits"] += total
            slot["positive"] += pos
        rep.violations += self.violations
        rep.inconclusive += self.inconclusive
        rep.witness_failures += self.witness_failures
        rep.duality_failures += self.duality_failures
        rep.t1t2_checked += self.t1t2_checked
        for k, v in self.tile_routes.items():
            rep.tile_routes[k] = rep.tile_routes.get(k, 0) + v
        rep.pairs += self.pairs


def _examine(clf: FastClassifier, mask: int, part: _Partial) -> None:
    g = clf.group
    size = mask.bit_count()
    slot = part.per_size.setdefault(size, [0, 0])
    slot[0] += 1
    elems = tuple(x for x in range(g.N) if mask >> x & 1)
    try:
        t1, t2, tile, spectral = clf.verdicts(mask)
    except BudgetExhausted as exc:
        part.inconclusive.append({"set": list(elems), "search": exc.what})
        return
    if not (t1 and t2) and not tile and not spectral:
        return
    # positives and disagreements get the full witness-producing classification
    A = MultiSet.from_mask(g, mask)
    try:
        rep = classify_set(A, clf.budget)
    except BudgetExhausted as exc:
        part.inconclusive.append({"set": list(elems), "search": exc.what})
        return
    except AssertionError as exc:
        part.witness_failures.append({"set": list(elems), "error": str(exc)})
        return
    if (rep.t1, rep.t2, rep.tile, rep.spectral) != (t1, t2, tile, spectral):
        part.witness_failures.append({"set": list(elems), "error": "fast and full classification disagree"})
    if rep.t1 and rep.t2:
        part.t1t2_checked += 1
    if not rep.consistent:
        part.violations.append(rep.to_dict())
        return
    slot[1] += 1
    B = MultiSet.from_elements(g, rep.spectrum_witness)
    if not spectral_duality(A, B):
        part.duality_failures.append({"A": list(elems), "B": list(B.support)})
    part.pairs.append((elems, B.support))


def _exhaustive_chunk(args) -> _Partial:
    N, sizes, split, roots, budget = args
    g = make_group(N)
    enum = OrbitEnumerator(g, sizes, split)
    clf = FastClassifier(g, budget)
    part = _Partial()
    masks = enum.head() if roots is None else np.concatenate([enum.subtree(r) for r in roots] or [np.empty(0, np.int64)])
    for m in masks:
        _examine(clf, int(m), part)
    part.tile_routes = dict(clf.tile_routes)
    return part


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def _require_three_primes(g: CyclicGroup) -> None:
    if g.k != 3:
        raise PreconditionViolated(f"N={g.N} must be a product of three distinct primes")


def verify_theorem_exhaustive(
    g: CyclicGroup,
    sizes: Optional[Iterable[int]] = None,
    budget: int = DEFAULT_BUDGET,
    jobs: Optional[int] = None,
    split: int = 3,
    chunks: int = 64,
) -> VerificationReport:
    """Classify one representative of every affine orbit of subsets with the given sizes.

    The orbit tree is cut into `chunks` slices of subtree roots; slices run on
    a process pool of `jobs` workers and are merged in slice order, so the
    report does not depend on scheduling.
    """
    _require_three_primes(g)
    sizes = sorted(set(sizes)) if sizes is not None else list(range(1, g.N + 1))
    start = time.perf_counter()
    rep = VerificationReport(g.N, g.primes, "exhaustive", sizes)
    for s in sizes:
        rep.per_size[s] = {"orbits": 0, "positive": 0}
    enum = OrbitEnumerator(g, sizes, split)
    roots = enum.roots()
    slices = [roots[i::chunks] for i in range(chunks)] if roots else []
    tasks = [(g.N, sizes, enum.split, None, budget)]
    tasks += [(g.N, sizes, enum.split, s, budget) for s in slices if s]
    jobs = jobs or default_jobs()
    if jobs <= 1:
        parts = [_exhaustive_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_exhaustive_chunk, tasks))
    for part in parts:
        part.merge_into(rep)
    rep.pairs.sort()
    rep.elapsed_ms = round((time.perf_counter() - start) * 1000)
    return rep


def sample_subset(N: int, size: int, seed: int, index: int) -> int:
    """Deterministic random `size`-subset of Z_N as a bitmask, keyed by (seed, size, index)."""
    rng = np.random.Generator(np.random.Philox(key=[seed, size], counter=[index, 0, 0, 0]))
    mask = 0
    for x in rng.choice(N, size=size, replace=False):
        mask |= 1 << int(x)
    return mask


def sampled_sizes(g: CyclicGroup, small_limit: int = 12) -> list[int]:
    """Every divisor of N, plus every non-divisor up to small_limit."""
    return sorted(set(g.divisors) | set(range(1, min(small_limit, g.N) + 1)))


def verify_theorem_sampled(
    g: CyclicGroup,
    per_size_samples: int,
    seed: int = 0,
    sizes: Optional[Iterable[int]] = None,
    budget: int = DEFAULT_BUDGET,
) -> VerificationReport:
    """Same per-set assertions as the exhaustive run, on pseudo-random sets.

    per_size["orbits"] counts draws; repeated draws are classified once.
    Harvested pairs are deduplicated by affine orbit.
    """
    _require_three_primes(g)
    sizes = sorted(set(sizes)) if sizes is not None else sampled_sizes(g)
    start = time.perf_counter()
    rep = VerificationReport(g.N, g.primes, "sampled", sizes, seed=seed)
    clf = FastClassifier(g, budget)
    seen_orbits: set[int] = set()
    for s in sizes:
        rep.per_size[s] = {"orbits": 0, "positive": 0}
        if per_size_samples <= 0:
            continue
        part = _Partial()
        cache: dict[int, bool] = {}
        for i in range(per_size_samples):
            mask = sample_subset(g.N, s, seed, i)
            if mask in cache:
                part.per_size[s][0] += 1
                part.per_size[s][1] += cache[mask]
                continue
            before = part.per_size.get(s, [0, 0])[1]
            _examine(clf, mask, part)
            cache[mask] = part.per_size[s][1] > before
        part.tile_routes = {k: v - rep.tile_routes.get(k, 0) for k, v in clf.tile_routes.items()}
        fresh = []
        for a, b in part.pairs:
            key = canonical_orbit_key(MultiSet.from_elements(g, a))
            if key not in seen_orbits:
                seen_orbits.add(key)
                fresh.append((a, b))
        part.pairs = fresh
        part.merge_into(rep)
    rep.pairs.sort()
    rep.elapsed_ms = round((time.perf_counter() - start) * 1000)
    return rep


# ---------------------------------------------------------------------------
# case analysis over spectral pairs in Z_pqr


def _differences_hit(A: MultiSet, m: int) -> bool:
    """(A - A) meets m Z_N^*, i.e. some difference has gcd with N equal to m."""
    N = A.group.N
    elems = A.support
    return any(math.gcd((a - b) % N, N) == m for a in elems for b in elems if a != b)


@dataclass
class _Tally:
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    examples: list = field(default_factory=list)

    def record(self, hypothesis: bool, conclusion: bool, example) -> None:
        if not hypothesis:
            self.vacuous += 1
        elif conclusion:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.examples) < 5:
                self.examples.append(example)


ASSERTIONS = (
    "graph_form_when_pq_not_in_ZB",
    "no_pq_difference_and_r_cycle",
    "p_in_ZA_pr_not_pq_not_in_ZB",
    "no_two_prime_zeros",
    "two_zeros_full_graph",
    "only_qr_gives_size_p",
    "all_three_zeros_full_group",
    "cycle_detectors_agree",
)

# Diagnostic only: the same implication with the hypothesis "(A-A) meets pqZ^*".
LITERAL_VARIANT = "difference_variant_literal"


@dataclass
class SuiteReport:
    pairs: int
    tallies: dict[str, _Tally]
    cases: dict[str, int]

    @property
    def ok(self) -> bool:
        return all(self.tallies[name].failed == 0 for name in ASSERTIONS)

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "ok": self.ok,
            "cases": dict(self.cases),
            "assertions": {
                name: {"pass": t.passed, "fail": t.failed, "vacuous": t.vacuous, "examples": t.examples}
                for name, t in self.tallies.items()
            },
        }


def case_analysis_suite(pairs: Sequence[tuple[MultiSet, MultiSet]]) -> SuiteReport:
    """Run the case-analysis implications on every spectral pair and every role order of (p, q, r)."""
    tallies = {name: _Tally() for name in ASSERTIONS + (LITERAL_VARIANT,)}
    cases = {"two_zeros": 0, "no_zeros": 0, "one_zero": 0, "three_zeros": 0}
    for A, B in pairs:
        g = A.group
        _require_three_primes(g)
        if not verify_spectral_pair(A, B):
            raise PreconditionViolated(f"({A!r}, {B!r}) is not a spectral pair")
        ZA, ZB = A.profile, B.profile
        N = g.N
        products = [N // p for p in g.primes]
        hits = sum(m in ZA for m in products)
        cases[("no_zeros", "one_zero", "two_zeros", "three_zeros")[hits]] += 1
        ex = {"A": list(A.support), "B": list(B.support)}
        for p, q, r in itertools.permutations(g.primes):
            pq, pr, qr = p * q, p * r, q * r
            roles = {**ex, "roles": [p, q, r]}

            gop = graph_over_primes(A, (p, q))
            tallies["graph_form_when_pq_not_in_ZB"].record(
                pq not in ZB,
                gop is not None and A.size <= pq and (A.size == pq) == gop.is_full,
                roles,
            )

            for M, name in ((A, "A"), (B, "B")):
                pM = scale_multiset(p, M)
                r_cycle = contains_cycle(pM, r)
                # independent route: coordinates ordered (r, q, p), scaled by p
                witness = has_prime_cycle_in_scaled(M, 3, (r, q, p))
                tallies["cycle_detectors_agree"].record(True, r_cycle == (witness is not None), {**roles, "M": name})
                conclusion = p > r and _differences_hit(M, q)
                hits_pq = _differences_hit(M, pq)
                tallies["no_pq_difference_and_r_cycle"].record(
                    not hits_pq and r_cycle, conclusion, {**roles, "M": name}
                )
                tallies[LITERAL_VARIANT].record(hits_pq and r_cycle, conclusion, {**roles, "M": name})

            tallies["p_in_ZA_pr_not_pq_not_in_ZB"].record(
                p in ZA and pr not in ZA and pq not in ZB,
                p > r and q in ZB,
                roles,
            )

            none_in_A = not any(m in ZA for m in (pq, pr, qr))
            tallies["no_two_prime_zeros"].record(
                none_in_A,
                not any(m in ZB for m in (pq, pr, qr)) and A.size == 1,
                roles,
            )

            # exactly two of the three, with pq the missing one
            two = pq not in ZA and pr in ZA and qr in ZA
            full_A = gop is not None and gop.is_full
            gopB = graph_over_primes(B, (p, q))
            full_B = gopB is not None and gopB.is_full
            tallies["two_zeros_full_graph"].record(two, full_A and full_B, roles)

            only_qr = qr in ZA and pq not in ZA and pr not in ZA
            tallies["only_qr_gives_size_p"].record(only_qr, A.size == p, roles)

            tallies["all_three_zeros_full_group"].record(
                pq in ZA and pr in ZA and qr in ZA, A.size == N, roles
            )
    return SuiteReport(len(pairs), tallies, cases)
