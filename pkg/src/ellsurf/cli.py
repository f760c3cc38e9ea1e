"""Command-line interface: ``ellsurf <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import mwlattice
from .family import BoxSpec, run_density
from .kodaira import InconsistentLocalData
from .mwlattice import Section, height, torsion_bound_detail
from .qpoly import (
    MahlerConvergenceError,
    PolySyntaxError,
    format_poly,
    from_coefficient_strings,
    mahler_measure,
    parse_poly,
    parse_ratfunc,
)
from .report import height_json, poly_json, rat, surface_report, torsion_json
from .twist import detect_twist, tw_probe, twist
from .weierstrass import NOT_IN_S, NotEllipticError, WeierstrassPair, classify_membership

EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let polynomial values such as "-3+2" or "-7*t^6+1" through as arguments
        self._negative_number_matcher = re.compile(r"^-[\d./]")

    def error(self, message):
        raise UsageError(message)


def _error_record(code: str, message: str) -> str:
    return json.dumps({"error": code, "message": message}, sort_keys=True)


def _pair(args, a: str = "A", b: str = "B") -> WeierstrassPair:
    try:
        A = parse_poly(getattr(args, a))
        B = parse_poly(getattr(args, b))
    except PolySyntaxError as e:
        raise UsageError(f"--{a}/--{b}: {e}") from e
    try:
        return WeierstrassPair(A, B, args.m, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _require_S(p: WeierstrassPair) -> None:
    if not classify_membership(p).in_S:
        raise DomainError(NOT_IN_S, "4A^3 + 27B^2 = 0: not an elliptic surface")


def _emit(doc: dict, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(text)


def _surface_text(doc: dict) -> str:
    inp, fr, mem = doc["input"], doc["frame"], doc["membership"]
    A = format_poly(from_coefficient_strings(inp["A"]))
    B = format_poly(from_coefficient_strings(inp["B"]))
    lines = [
        f"y^2 = x^3 + ({A}) x + ({B})   frame (m, n) = ({inp['m']}, {inp['n']})",
        f"k = {fr['k']}, alpha = {fr['alpha']}, beta = {fr['beta']}",
        f"membership: {mem['status']}" + (f" (failed: {', '.join(mem['failed'])})" if mem["failed"] else ""),
    ]
    if mem["trivial"]:
        t = mem["trivial"]
        lines.append(f"trivial surface: lambda = {t['lambda']}, mu = {t['mu']}, u = {format_poly(from_coefficient_strings(t['u']))}")
    if doc["configuration"] is not None:
        conf = ", ".join(f"{e['type']} x{e['multiplicity']}" for e in doc["configuration"]) or "no singular fibers"
        lines.append(f"configuration: {conf}")
        lat = doc["trivial_lattice"]
        lines.append(f"trivial lattice: rank {lat['rank']}, |det| {lat['det']}, chi = {lat['chi']}")
        rb = doc["rank_bound"]
        lines.append(f"rank bound: {rb if rb is not None else 'n/a (trivial surface)'}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    p = _pair(args)
    _require_S(p)
    doc = surface_report(p)
    _emit(doc, args.json, _surface_text(doc))
    return 0


def cmd_twist(args) -> int:
    p = _pair(args)
    try:
        d = Fraction(args.d)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"--d: {e}") from e
    if d == 0:
        raise UsageError("--d must be nonzero")
    q = twist(p, d)
    doc = {"d": rat(d), "A": poly_json(q.A), "B": poly_json(q.B), "m": q.m, "n": q.n}
    text = f"A = {q.A}\nB = {q.B}"
    if args.probe:
        if not classify_membership(p).in_U:
            raise DomainError("not_in_U", "twist probes need a member of U")
        probes = tw_probe(p, args.probe)
        doc["twists"] = [{"d": r.d, "in_U": r.in_U, "isomorphic": r.isomorphic} for r in probes]
        text += "\n" + "\n".join(f"d = {r.d}: in_U = {r.in_U}, isomorphic = {r.isomorphic}" for r in probes)
    _emit(doc, args.json, text)
    return 0


def cmd_twist_detect(args) -> int:
    p1 = _pair(args)
    p2 = _pair(args, "A2", "B2")
    _require_S(p1)
    _require_S(p2)
    res = detect_twist(p1, p2)
    if res is None:
        doc = {"twist": None}
        text = "not a quadratic twist"
    else:
        doc = {"twist": {"d": rat(res.d), "class": res.d_class, "ambiguous": res.ambiguous}}
        text = f"twist by d = {res.d}, class {res.d_class}" + (" (sign ambiguous)" if res.ambiguous else "")
    _emit(doc, args.json, text)
    return 0


def cmd_height(args) -> int:
    p = _pair(args)
    _require_S(p)
    try:
        P = Section(parse_ratfunc(args.x), parse_ratfunc(args.y))
    except (PolySyntaxError, ZeroDivisionError) as e:
        raise UsageError(f"--x/--y: {e}") from e
    doc = surface_report(p)
    h = height(p, P)
    doc["height"] = height_json(h)
    if h.exact:
        text = f"height = {h.lower}"
    else:
        text = f"height in [{h.lower}, {h.upper}]"
    if h.lower > 0:
        text += " (infinite order)"
    _emit(doc, args.json, _surface_text(doc) + "\n" + text)
    return 0


def cmd_torsion(args) -> int:
    p = _pair(args)
    _require_S(p)
    try:
        t0 = Fraction(args.t0)
        primes = [int(x) for x in args.primes.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from e
    doc = surface_report(p)
    tb = torsion_bound_detail(p, t0, primes)
    doc["torsion"] = torsion_json(tb, t0)
    counts = ", ".join(f"#E(F_{q}) = {c}" for q, c in tb.counts)
    _emit(doc, args.json, _surface_text(doc) + f"\n{counts}\ntorsion order divides {tb.bound}")
    return 0


def cmd_sample(args) -> int:
    try:
        bound = Fraction(args.bound)
        if args.count is None:
            spec = BoxSpec(args.m, args.n, bound, args.measure, "exhaustive")
        else:
            spec = BoxSpec(args.m, args.n, bound, args.measure, "sample", args.count, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    rep, lines = run_density(spec, with_analysis=True, workers=args.workers, records=bool(args.out))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")
    doc = {
        "spec": {
            "m": spec.m,
            "n": spec.n,
            "bound": rat(spec.bound),
            "measure": spec.measure,
            "mode": spec.mode,
            "count": spec.count if spec.mode == "sample" else None,
            "seed": spec.seed if spec.mode == "sample" else None,
        },
        "report": rep.to_dict(),
    }
    print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


def cmd_mahler(args) -> int:
    try:
        f = parse_poly(args.poly)
    except PolySyntaxError as e:
        raise UsageError(f"--poly: {e}") from e
    if not f:
        raise DomainError("zero_polynomial", "Mahler measure of the zero polynomial")
    mu = mahler_measure(f, args.tol)
    doc = {"poly": poly_json(f), "mahler": {"value": mu.value, "tol": mu.error}}
    _emit(doc, args.json, f"mu = {mu.value!r} +/- {mu.error:.3g}")
    return 0


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--A", required=True, help="polynomial A(t)")
    sp.add_argument("--B", required=True, help="polynomial B(t)")
    sp.add_argument("--m", type=int, required=True, help="degree bound for A")
    sp.add_argument("--n", type=int, required=True, help="degree bound for B")
    sp.add_argument("--json", action="store_true", help="machine-readable report")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ellsurf", description="Elliptic surfaces y^2 = x^3 + A(t)x + B(t) over Q(t).")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("analyze", help="fibers, trivial lattice and rank bound")
    _common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("twist", help="quadratic twist (d^2 A, d^3 B)")
    _common(sp)
    sp.add_argument("--d", required=True, help="nonzero rational twist parameter")
    sp.add_argument("--probe", type=_int_list, help="comma list of d for twist probes")
    sp.set_defaults(func=cmd_twist)

    sp = sub.add_parser("twist-detect", help="is (A2, B2) a quadratic twist of (A, B)?")
    _common(sp)
    sp.add_argument("--A2", required=True)
    sp.add_argument("--B2", required=True)
    sp.set_defaults(func=cmd_twist_detect)

    sp = sub.add_parser("height", help="Shioda height of a section")
    _common(sp)
    sp.add_argument("--x", required=True, help="x-coordinate, P or (P)/(Q)")
    sp.add_argument("--y", required=True, help="y-coordinate, P or (P)/(Q)")
    sp.set_defaults(func=cmd_height)

    sp = sub.add_parser("torsion-bound", help="bound the torsion order via point counts")
    _common(sp)
    sp.add_argument("--t0", required=True, help="rational specialization point")
    sp.add_argument("--primes", required=True, help="comma list of odd primes")
    sp.set_defaults(func=cmd_torsion)

    sp = sub.add_parser("sample", help="density report over a box of integer pairs")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bound", required=True, help="coefficient bound (rational)")
    sp.add_argument("--measure", choices=("naive", "mahler"), default="naive")
    sp.add_argument("--count", type=int, help="number of random pairs; omit for the whole box")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write one JSON report per pair to this file")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("mahler", help="Mahler measure of an integer polynomial")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_mahler)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(_error_record("usage", str(e)))
        return EXIT_USAGE
    except DomainError as e:
        print(_error_record(e.code, str(e)))
        return EXIT_DOMAIN
    except NotEllipticError as e:
        print(_error_record(NOT_IN_S, str(e)))
        return EXIT_DOMAIN
    except (
        mwlattice.TrivialSurfaceError,
        mwlattice.NotOnCurve,
        mwlattice.InconsistentSection,
        mwlattice.BadSpecialization,
        mwlattice.NoUsablePrime,
        mwlattice.EulerMismatch,
        InconsistentLocalData,
        MahlerConvergenceError,
    ) as e:
        print(_error_record(type(e).__name__, str(e)))
        return EXIT_DOMAIN
    except ValueError as e:
        print(_error_record("domain", str(e)))
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
