"""Command-line front end.

    fuglede analyze -N 30 -A 0,15
    fuglede tile -N 30 -A 0,1,2,3,4,5 --format json
    fuglede decompose -N 30 -A 0,10,20,0,15 -n 1
    fuglede verify -N 30 --exhaustive
    fuglede verify -N 105 --sampled 10000 --seed 1
    fuglede counterexample 2 3 5

Exit codes: 0 ok, 1 violation found, 2 input error, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Optional, Sequence

from . import cycle_decomp, spectral, tiling, verifier
from .cyclic_core import MultiSet, make_group
from .errors import BudgetExhausted, FugledeError, ParseError, PreconditionViolated
from .mask_poly import root_is_zero

SCHEMA = 1
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def parse_set_literal(text: str, N: int) -> MultiSet:
    """'0,15' or '0^2,15' (element^multiplicity) into a multiset of Z_N."""
    g = make_group(N)
    mult = [0] * N
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ParseError("empty set literal")
    for item in items:
        base, _, power = item.partition("^")
        try:
            x = int(base)
            m = int(power) if power else 1
        except ValueError:
            raise ParseError(f"cannot parse {item!r}") from None
        if not 0 <= x < N:
            raise ParseError(f"element {x} outside [0, {N})")
        if m < 1:
            raise ParseError(f"multiplicity of {x} must be positive")
        mult[x] += m
    return MultiSet(g, tuple(mult))


def _multiset_json(A: MultiSet) -> list[int]:
    return sorted(A.elements())


def _base_report(command: str, A: Optional[MultiSet], N: int) -> dict:
    g = make_group(N)
    rep = {
        "schema": SCHEMA,
        "command": command,
        "group": {"N": g.N, "primes": list(g.primes)},
        "input": None if A is None else _multiset_json(A),
        "verdicts": {"t1": None, "t2": None, "tile": None, "spectral": None},
        "witnesses": {"tiling_complement": None, "spectrum": None},
        "zero_profile": None,
        "budget": {"nodes_used": 0, "exhausted": False},
    }
    if A is not None:
        prof = A.profile
        rep["zero_profile"] = {
            "divisor_zeros": sorted(prof.divisor_zeros),
            "s_a": sorted(prof.s_a),
            "full_zeros": sorted(prof.full_zeros),
        }
        rep["verdicts"]["t1"] = tiling.check_T1(A)
        rep["verdicts"]["t2"] = tiling.check_T2(A)
    return rep


def _require_set(A: MultiSet) -> None:
    if not A.is_set:
        raise PreconditionViolated("this command needs a set, not a multiset")


def cmd_analyze(args) -> tuple[dict, int]:
    A = parse_set_literal(args.A, args.N)
    rep = _base_report("analyze", A, args.N)
    if not A.is_set:
        rep["note"] = "multiset input: tile and spectral verdicts apply to sets only"
        return rep, EXIT_OK
    cls = verifier.classify_set(A, args.budget)
    rep["verdicts"].update(tile=cls.tile, spectral=cls.spectral)
    rep["witnesses"] = {
        "tiling_complement": None if cls.tile_witness is None else list(cls.tile_witness),
        "spectrum": None if cls.spectrum_witness is None else list(cls.spectrum_witness),
    }
    rep["budget"]["nodes_used"] = cls.nodes_used
    return rep, EXIT_OK if cls.consistent else EXIT_VIOLATION


def cmd_tile(args) -> tuple[dict, int]:
    A = parse_set_literal(args.A, args.N)
    _require_set(A)
    rep = _base_report("tile", A, args.N)
    stats = {"nodes": 0}
    gf = tiling.detect_graph_form(A)
    T = tiling.complement_from_graph(gf) if gf else tiling.find_tiling_complement(A, args.budget, stats)
    rep["verdicts"]["tile"] = T is not None
    rep["witnesses"]["tiling_complement"] = None if T is None else list(T.support)
    rep["graph_form_base"] = None if gf is None else list(gf.base)
    rep["budget"]["nodes_used"] = stats["nodes"]
    return rep, EXIT_OK


def cmd_spectrum(args) -> tuple[dict, int]:
    A = parse_set_literal(args.A, args.N)
    _require_set(A)
    rep = _base_report("spectrum", A, args.N)
    stats = {"nodes": 0}
    B = spectral.find_spectrum(A, args.budget, stats)
    rep["verdicts"]["spectral"] = B is not None
    rep["witnesses"]["spectrum"] = None if B is None else list(B.support)
    if rep["verdicts"]["t1"] and rep["verdicts"]["t2"]:
        rep["lattice_spectrum"] = list(tiling.spectrum_from_T1T2(A).support)
    rep["budget"]["nodes_used"] = stats["nodes"]
    return rep, EXIT_OK


def cmd_decompose(args) -> tuple[dict, int]:
    A = parse_set_literal(args.A, args.N)
    g = A.group
    rep = _base_report("decompose", A, args.N)
    out = {"size": A.size, "lam_leung": None, "prime_cycles": None, "vanishes_at_1": root_is_zero(A, 1)}
    ll = cycle_decomp.lam_leung_feasible(A.size, g.primes)
    out["lam_leung"] = None if ll is None else list(ll)
    dec = cycle_decomp.decompose_prime_cycles(A, g.primes, args.budget)
    out["prime_cycles"] = None if dec is None else [[c.d, c.base] for c in dec.cycles]
    if args.n is not None:
        w = cycle_decomp.two_prime_decompose(A, args.n)
        out["two_prime"] = None if w is None else {
            "n": w.n, "p": w.p, "q": w.q, "P": list(w.P.coeffs), "Q": list(w.Q.coeffs)
        }
    rep["decomposition"] = out
    return rep, EXIT_OK


def cmd_counterexample(args) -> tuple[dict, int]:
    p, q, r = args.primes
    A = cycle_decomp.counterexample_multiset(p, q, r)
    rep = _base_report("counterexample", A, A.group.N)
    dz = sorted(A.profile.divisor_zeros)
    dec = cycle_decomp.decompose_prime_cycles(A, A.group.primes, args.budget)
    ll = cycle_decomp.lam_leung_feasible(A.size, A.group.primes)
    rep["counterexample"] = {
        "primes": [p, q, r],
        "vanishes_at_1": root_is_zero(A, 1),
        "vanishes_only_at_1": dz == [1],
        "cycle_decomposition_infeasible": dec is None,
        "size": A.size,
        "lam_leung": None if ll is None else list(ll),
    }
    ok = dz == [1] and dec is None
    return rep, EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify(args) -> tuple[dict, int]:
    g = make_group(args.N)
    if args.exhaustive == (args.sampled is not None):
        raise ParseError("choose exactly one of --exhaustive and --sampled K")
    if args.exhaustive:
        vr = verifier.verify_theorem_exhaustive(g, args.sizes, args.budget, args.jobs)
    else:
        vr = verifier.verify_theorem_sampled(g, args.sampled, args.seed, args.sizes, args.budget)
    pairs = [(MultiSet.from_elements(g, a), MultiSet.from_elements(g, b)) for a, b in vr.pairs]
    suite = verifier.case_analysis_suite(pairs + [(b, a) for a, b in pairs])
    rep = _base_report("verify", None, args.N)
    rep["verification"] = vr.to_dict()
    rep["case_suite"] = suite.to_dict()
    rep["budget"]["exhausted"] = bool(vr.inconclusive)
    if vr.violations or vr.witness_failures or vr.duality_failures or not suite.ok:
        return rep, EXIT_VIOLATION
    if vr.inconclusive:
        return rep, EXIT_BUDGET
    return rep, EXIT_OK


def _mark(v) -> str:
    return "n/a" if v is None else ("yes" if v else "no")


def render_text(rep: dict) -> str:
    lines = [f"{rep['command']} in Z_{rep['group']['N']} (primes {rep['group']['primes']})"]
    if rep["input"] is not None:
        lines.append(f"input: {rep['input']}")
    v = rep["verdicts"]
    if any(x is not None for x in v.values()):
        lines.append(
            f"T1: {_mark(v['t1'])}  T2: {_mark(v['t2'])}  tile: {_mark(v['tile'])}  spectral: {_mark(v['spectral'])}"
        )
    zp = rep["zero_profile"]
    if zp is not None:
        lines.append(f"divisor zeros: {zp['divisor_zeros']}  S_A: {zp['s_a']}")
    w = rep["witnesses"]
    if w["tiling_complement"] is not None:
        lines.append(f"tiling complement: {w['tiling_complement']}")
    if w["spectrum"] is not None:
        lines.append(f"spectrum: {w['spectrum']}")
    for key in ("graph_form_base", "lattice_spectrum", "note"):
        if rep.get(key) is not None:
            lines.append(f"{key.replace('_', ' ')}: {rep[key]}")
    if "decomposition" in rep:
        d = rep["decomposition"]
        lines.append(f"vanishes at d=1: {_mark(d['vanishes_at_1'])}")
        lines.append(f"prime cycles (d, base): {d['prime_cycles'] if d['prime_cycles'] is not None else 'infeasible'}")
        lines.append(f"size {d['size']} as sum of primes: {d['lam_leung'] if d['lam_leung'] is not None else 'impossible'}")
        if "two_prime" in d:
            lines.append(f"two-prime split: {d['two_prime'] if d['two_prime'] is not None else 'infeasible'}")
    if "counterexample" in rep:
        c = rep["counterexample"]
        lines.append(f"vanishing at d=1: {_mark(c['vanishes_at_1'])} (only there: {_mark(c['vanishes_only_at_1'])})")
        lines.append(f"prime-cycle decomposition infeasible: {_mark(c['cycle_decomposition_infeasible'])}")
        ll = c["lam_leung"]
        terms = " + ".join(f"{n}*{p}" for n, p in zip(ll, c["primes"]) if n) if ll else "none"
        lines.append(f"size {c['size']} = {terms}")
    if "verification" in rep:
        vr = rep["verification"]
        for s, row in vr["per_size"].items():
            lines.append(f"  size {s:>3}: {row['orbits']:>8} {'orbits' if vr['mode'] == 'exhaustive' else 'samples'}, {row['positive']:>5} positive")
        lines.append(
            f"violations: {len(vr['violations'])}  inconclusive: {len(vr['inconclusive'])}  "
            f"witness failures: {len(vr['witness_failures'])}  duality failures: {len(vr['duality_failures'])}"
        )
        cs = rep["case_suite"]
        lines.append(f"case suite on {cs['pairs']} pairs: {'pass' if cs['ok'] else 'FAIL'}")
        for name, t in cs["assertions"].items():
            lines.append(f"  {name}: pass {t['pass']}, fail {t['fail']}, vacuous {t['vacuous']}")
    lines.append(f"time: {rep['timing_ms']} ms")
    return "\n".join(lines)


def dump_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True) + "\n"


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuglede", description="Spectral sets and tiles in square-free Z_N.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--json", metavar="PATH", help="also write the JSON report here")
    common.add_argument("--budget", type=int, default=tiling.DEFAULT_BUDGET, help="search node budget")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_set(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("-N", type=int, required=True)
        p.add_argument("-A", required=True, help="elements, e.g. 0,15 or 0^2,15")
        p.set_defaults(func=func)
        return p

    with_set("analyze", cmd_analyze, "all verdicts, witnesses and the zero profile")
    with_set("tile", cmd_tile, "find a tiling complement")
    with_set("spectrum", cmd_spectrum, "find a spectrum")
    dp = with_set("decompose", cmd_decompose, "prime-cycle decomposition of a vanishing multiset")
    dp.add_argument("-n", type=int, default=None, help="also split n*A into two prime-cycle families")

    vp = sub.add_parser("verify", parents=[common], help="check the equivalence on many sets")
    vp.add_argument("-N", type=int, required=True)
    vp.add_argument("--exhaustive", action="store_true")
    vp.add_argument("--sampled", type=int, metavar="K", default=None, help="K random sets per size")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--sizes", type=_sizes, default=None)
    vp.add_argument("--jobs", type=int, default=None, help="worker processes (default: available cores)")
    vp.set_defaults(func=cmd_verify)

    cp = sub.add_parser("counterexample", parents=[common], help="the non-decomposable vanishing sum")
    cp.add_argument("primes", type=int, nargs=3)
    cp.set_defaults(func=cmd_counterexample)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        rep, code = args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FugledeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep["timing_ms"] = round((time.perf_counter() - start) * 1000)
    text = dump_json(rep)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    sys.stdout.write(text if args.format == "json" else render_text(rep) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
