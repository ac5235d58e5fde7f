"""Command-line front end.

Exit codes: 0 success, 1 mismatch against published data, 2 budget exhausted,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .rings import RING_NAMES, RingError, RingTable, build_ring

EXIT_OK, EXIT_MISMATCH, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3
REPORT_SCHEMA = 1

CONVENTIONS = {
    "points": "right-normalized: earliest unit coordinate is 1",
    "hyperplanes": "left-normalized coefficient vectors; P on H iff sum c_i x_i = 0",
    "arcs": "multisets of points unless sets_only is set",
    "equivalence": "isomorphism of the point-hyperplane incidence graph, points colored by multiplicity",
    "homogeneous_weight": "0 on zero, q on nonzero socle elements, q-1 elsewhere",
    "gray_map": "coordinate c in F_q^(m-1), lexicographic: xbar_{m-1} + sum_i c_i xbar_{i-1} over theta-adic digit residues",
    "codewords": "x G for row vectors x over R acting on the left; G has point representatives as columns",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def ring_info(R: RingTable) -> dict:
    return {
        "name": R.name,
        "presentation": R.presentation,
        "order": R.size,
        "q": R.q,
        "m": R.m,
        "p": R.p,
        "r": R.r,
        "lambda": R.lam,
        "theta": R.fmt(R.theta),
        "gamma": [R.fmt(x) for x in R.gamma],
        "commutative": R.commutative,
        **({"sigma": R.sigma_note} if R.sigma_note else {}),
    }


def _envelope(args, payload: dict, started: float, ring: RingTable | None = None) -> dict:
    out = {
        "report_schema": REPORT_SCHEMA,
        "tool": {"name": "hjelmslev", "version": __version__},
        "command": ["hjelmslev"] + list(args.argv),
        "conventions": CONVENTIONS,
        "wall_time_seconds": round(time.monotonic() - started, 3),
        **payload,
    }
    if ring is not None:
        out["ring"] = ring_info(ring)
    return out


def _emit(args, report: dict, text: str | None = None) -> None:
    blob = json.dumps(report, indent=2, sort_keys=True)
    if args.report:
        Path(args.report).write_text(blob + "\n")
    print(text if text is not None else blob)


# ---------------------------------------------------------------------------
# ring


def ring_dump(R: RingTable) -> str:
    """Stable text dump: header, element list, then addition and multiplication tables."""
    lines = [f"ring {R.name}", f"presentation {R.presentation}"]
    lines.append(f"order {R.size} q {R.q} m {R.m} p {R.p} r {R.r} lambda {R.lam}")
    lines.append(f"theta {R.theta} {R.fmt(R.theta)}")
    lines.append("gamma " + " ".join(f"{x}={R.fmt(x)}" for x in R.gamma))
    if R.sigma_note:
        lines.append(R.sigma_note)
    lines.append("elements index literal unit valuation residue digits")
    for x in range(R.size):
        digits = ",".join(str(d) for d in R.theta_adic(x))
        lines.append(f"  {x} {R.fmt(x)} {int(R.unit[x])} {R.valuation(x)} {int(R.residue[x])} {digits}")
    for name, table in (("add", R.add), ("mul", R.mul)):
        lines.append(f"{name}")
        for row in table:
            lines.append("  " + " ".join(str(int(v)) for v in row))
    return "\n".join(lines)


def cmd_ring(args) -> int:
    started = time.monotonic()
    if args.action == "list":
        rows = [ring_info(build_ring(n)) for n in RING_NAMES]
        text = "\n".join(f"{r['name']:<4} q={r['q']} m={r['m']} p={r['p']} lambda={r['lambda']}  {r['presentation']}" for r in rows)
        _emit(args, _envelope(args, {"rings": rows}, started), text)
        return EXIT_OK
    if not args.name:
        raise UsageError("ring show needs a ring name")
    R = build_ring(args.name)
    _emit(args, _envelope(args, {"dump": ring_dump(R).splitlines()}, started, R), ring_dump(R))
    return EXIT_OK


# ---------------------------------------------------------------------------
# geometry


def cmd_geom(args) -> int:
    from .geometry import build_geometry, load_geometry

    started = time.monotonic()
    if args.load:
        geom = load_geometry(args.load)
    else:
        geom = build_geometry(args.ring, args.dim)
    if args.cache:
        geom.save(args.cache)
    summary = geom.summary()
    if args.cache:
        summary["cache"] = str(args.cache)
    _emit(args, _envelope(args, {"geometry": summary}, started, geom.ring))
    return EXIT_OK


# ---------------------------------------------------------------------------
# search


def cmd_search(args) -> int:
    from .arcsearch import classify, find_maximum
    from .geometry import build_geometry

    started = time.monotonic()
    geom = build_geometry(args.ring, args.dim)
    if args.u < 1:
        raise UsageError("--u must be positive")
    if args.max:
        res = find_maximum(
            geom, args.u, start=args.min_size, sets_only=args.sets_only, jobs=args.jobs, time_budget=args.time_budget
        )
    else:
        res = classify(
            geom,
            args.u,
            sets_only=args.sets_only,
            min_size=args.min_size or 0,
            jobs=args.jobs,
            checkpoint=args.checkpoint,
            time_budget=args.time_budget,
        )
    report = _envelope(args, {"classification": res.to_json()}, started, geom.ring)
    nondeg, total = res.counts
    status = "final" if res.final else "budget-exhausted"
    text = f"{geom.ring.name} k={geom.k} u={args.u}: m={res.m_u} classes={total} nondegenerate={nondeg} [{status}]"
    if args.report:
        _emit(args, report, text)
    else:
        _emit(args, report)
    return EXIT_OK if res.final else EXIT_BUDGET


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    from .appendix import ENTRIES, analyze, check_entry
    from .arcfile import read_arc_file

    started = time.monotonic()
    if args.arc_file:
        af = read_arc_file(args.arc_file)
        got = analyze(af, args.u)
        R = build_ring(af.ring)
        _emit(args, _envelope(args, {"arc": got}, started, R))
        return EXIT_OK if got["valid"] else EXIT_MISMATCH
    results, all_diffs = [], []
    lines = []
    for entry in ENTRIES:
        got, diffs = check_entry(entry)
        got["file"] = entry.file
        got["ring_presentation"] = build_ring(entry.ring).presentation
        got["status"] = "match" if not diffs else "mismatch"
        results.append(got)
        all_diffs += diffs
        lines.append(f"{'PASS' if not diffs else 'FAIL'} {entry.file}: n={got['n']} g={got['g']} d_hom={got['code']['d_hom']}")
    lines += all_diffs
    report = _envelope(args, {"appendix": results, "mismatches": all_diffs}, started)
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if not all_diffs else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# table1


def cmd_table1(args) -> int:
    from .table1 import run_cell, select

    started = time.monotonic()
    outcomes = []
    lines = []
    for c in select(args.scope):
        oc = run_cell(c, jobs=args.jobs, time_budget=args.time_budget, sets_only=args.sets_only)
        outcomes.append(oc)
        line = f"{oc.status.upper():<16} {c.key:<16} expected {c.expected_text():<36} got {oc.got_text()} ({oc.seconds:.1f}s)"
        lines.append(line)
        print(line, file=sys.stderr, flush=True)
    statuses = {o.status for o in outcomes}
    report = _envelope(args, {"scope": args.scope, "cells": [o.to_json() for o in outcomes]}, started)
    _emit(args, report, "\n".join(lines))
    if "mismatch" in statuses:
        return EXIT_MISMATCH
    if "budget-exhausted" in statuses:
        return EXIT_BUDGET
    return EXIT_OK


# ---------------------------------------------------------------------------
# prop7


def prop7_checks() -> list[tuple[str, object, object]]:
    """(check, got, expected) for the hyperoval structure of the Z4 plane."""
    from .arcsearch import collineation_group, hyperoval_census, image_of_points, kernel_group
    from .geometry import build_geometry

    geom = build_geometry("Z4", 2)
    census = hyperoval_census(geom)
    kernel = kernel_group(geom)
    ovals = set(census.hyperovals)
    h0 = census.hyperovals[0]
    images = [image_of_points(g, h0) for g in kernel]
    regular = len(set(images)) == len(images) and set(images) == ovals
    return [
        ("hyperoval count", census.count, 256),
        ("distinct canonical forms", census.distinct_forms, 1),
        ("stabilizer order", census.stabilizer_order, 168),
        ("collineation group order", collineation_group(geom).aut_order, 43008),
        ("kernel subgroup order", len(kernel), 256),
        ("kernel acts regularly on hyperovals", regular, True),
    ]


def cmd_prop7(args) -> int:
    from .geometry import build_geometry

    started = time.monotonic()
    checks = prop7_checks()
    ok = all(got == want for _, got, want in checks)
    lines = [f"{'PASS' if got == want else 'FAIL'} {name}: {got} (expected {want})" for name, got, want in checks]
    payload = {"checks": [{"check": n, "got": g, "expected": w, "pass": g == w} for n, g, w in checks]}
    _emit(args, _envelope(args, payload, started, build_geometry("Z4", 2).ring), "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# canon


def cmd_canon(args) -> int:
    import hashlib

    from .canon import canonical_form, parse_dimacs

    started = time.monotonic()
    g = parse_dimacs(Path(args.dimacs).read_text())
    res = canonical_form(g)
    payload = {
        "n": g.n,
        "edges": len(g.edges()),
        "canonical_form_sha256": hashlib.sha256(res.canonical_form).hexdigest(),
        "labeling": res.labeling,
        "aut_order": res.aut_order,
        "aut_generators": len(res.aut_generators),
        "orbits": res.orbits(),
    }
    _emit(args, _envelope(args, payload, started))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .arcsearch import JOBS_ENV

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="FILE", help="also write the JSON report to FILE")

    p = _Parser(prog="hjelmslev", description="Arcs in projective Hjelmslev geometries over small chain rings.")
    p.add_argument("--version", action="version", version=f"hjelmslev {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("ring", parents=[common], help="list rings or dump one ring's tables")
    r.add_argument("action", choices=["list", "show"])
    r.add_argument("name", nargs="?", choices=RING_NAMES)
    r.set_defaults(func=cmd_ring)

    g = sub.add_parser("geom", parents=[common], help="build a geometry and print its summary")
    g.add_argument("action", choices=["build"])
    g.add_argument("--ring", choices=RING_NAMES)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--cache", metavar="FILE", help="write the binary incidence cache")
    g.add_argument("--load", metavar="FILE", help="read a cache instead of building")
    g.set_defaults(func=cmd_geom)

    jobs_help = f"worker processes (default: ${JOBS_ENV} or 1)"
    s = sub.add_parser("search", parents=[common], help="classify complete (n,u)-arcs")
    s.add_argument("--ring", required=True, choices=RING_NAMES)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--u", type=int, required=True)
    s.add_argument("--sets-only", action="store_true", help="restrict multiplicities to at most 1")
    s.add_argument("--min-size", type=int, default=None, help="prune branches that cannot reach N points")
    s.add_argument("--max", action="store_true", help="find m_u by lowering --min-size from the counting bound")
    s.add_argument("--jobs", type=int, default=None, help=jobs_help)
    s.add_argument("--checkpoint", metavar="FILE", help="resume from / save open nodes to FILE")
    s.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", parents=[common], help="analyze an arc file, or check all bundled appendix arcs")
    v.add_argument("--arc-file", metavar="PATH")
    v.add_argument("--u", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table1", parents=[common], help="reproduce published maximal-arc cells")
    t.add_argument("scope", nargs="?", default="small", choices=["small", "all"])
    t.add_argument("--jobs", type=int, default=None, help=jobs_help)
    t.add_argument("--time-budget", type=float, default=None, metavar="SECONDS", help="per cell")
    t.add_argument("--sets-only", action="store_true")
    t.set_defaults(func=cmd_table1)

    pr = sub.add_parser("prop7", parents=[common], help="hyperoval structure of the Z4 plane")
    pr.set_defaults(func=cmd_prop7)

    c = sub.add_parser("canon", parents=[common], help="canonical form of a DIMACS colored graph")
    c.add_argument("--dimacs", required=True, metavar="FILE")
    c.set_defaults(func=cmd_canon)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    if args.command == "geom" and not args.load and not args.ring:
        print("hjelmslev geom build: error: --ring is required unless --load is given", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hjelmslev {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RingError, ValueError, FileNotFoundError) as exc:
        print(f"hjelmslev {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
