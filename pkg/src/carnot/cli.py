"""Command-line front door.

Subcommands: dims, basis, bivector, casimirs, verify, orbit, flow.
JSON output (--format json, or CARNOT_FORMAT=json) is the stable machine
contract: fixed key order, canonical polynomial text.  Exit codes: 0 on
success, 1 on verification failure, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bivector import bivector, block, evaluate_matrix, make_generic_point, rank_at
from .casimirs import complete_system, is_casimir
from .errors import CarnotError, ParseError
from .flow import (
    ControlSpec,
    behavior_classify,
    classify_2d_orbit,
    conservation_report,
    integrate_vertical,
)
from .lie import basis_records, build_algebra, graded_dimension
from .orbits import (
    Stratum,
    classify_orbit,
    kernel_casimirs_on_stratum,
    orbit_functions,
    stepwise_reduce,
)
from .poly import Point, parse_polynomial
from .presets import FLOW_POINTS, STRATA, flow_point_preset, stratum_preset

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2


class _Usage(Exception):
    pass


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _algebra(args):
    return build_algebra(args.rank, args.step)


def _load_point(alg, path: str) -> Point:
    with open(path) as fh:
        data = json.load(fh)
    return Point.from_dict(alg, {k: Fraction(v) for k, v in data.items()})


def cmd_dims(args) -> int:
    dims = [graded_dimension(args.rank, m) for m in range(1, args.step + 1)]
    payload = {
        "schema": f"dims/{SCHEMA_VERSION}",
        "rank": args.rank,
        "step": args.step,
        "by_degree": dims,
        "total": sum(dims),
    }
    lines = [f"g_{m}: {d}" for m, d in enumerate(dims, start=1)]
    lines.append(f"total: {sum(dims)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_basis(args) -> int:
    alg = _algebra(args)
    records = basis_records(alg)
    payload = {
        "schema": f"basis/{SCHEMA_VERSION}",
        "rank": alg.r,
        "step": alg.s,
        "words": records,
    }
    lines = [f"{rec['index']:3d}  deg {rec['degree']}  {rec['name']}" for rec in records]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_bivector(args) -> int:
    alg = _algebra(args)
    mat = block(alg, *args.block) if args.block else bivector(alg)
    rec = mat.records()
    payload = {"schema": f"matrix/{SCHEMA_VERSION}", "rank": alg.r, "step": alg.s, **rec}
    width = max(len(e) for row in rec["entries"] for e in row)
    lines = ["cols: " + " ".join(rec["cols"])]
    for name, row in zip(rec["rows"], rec["entries"]):
        lines.append(f"{name:>6s} [" + ", ".join(e.rjust(width) for e in row) + "]")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_casimirs(args) -> int:
    alg = _algebra(args)
    system = complete_system(alg)
    records = system.to_records()
    if args.verify:
        for rec, f in zip(records, system.functions):
            rec["verified"] = bool(is_casimir(alg, f))
    payload = {
        "schema": f"casimirs/{SCHEMA_VERSION}",
        "rank": alg.r,
        "step": alg.s,
        "count": len(records),
        "functions": records,
    }
    lines = []
    for rec in records:
        mark = ""
        if args.verify:
            mark = "  [ok]" if rec["verified"] else "  [FAILED]"
        lines.append(f"{rec['role']:9s} deg {rec['degree']}  {rec['polynomial']}{mark}")
    lines.append(f"count: {len(records)}")
    _emit(args, payload, lines)
    if args.verify and not all(rec["verified"] for rec in records):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    alg = _algebra(args)
    results = []
    with open(args.file) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                f = parse_polynomial(alg, text)
            except ParseError as exc:
                print(f"line {lineno}: parse error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            check = is_casimir(alg, f)
            results.append(
                {
                    "line": lineno,
                    "casimir": check.ok,
                    "witness": None
                    if check.ok
                    else {
                        "generator": check.witness_generator.name,
                        "bracket": str(check.witness_bracket),
                    },
                }
            )
    payload = {
        "schema": f"verify/{SCHEMA_VERSION}",
        "rank": alg.r,
        "step": alg.s,
        "results": results,
        "all_casimir": all(r["casimir"] for r in results),
    }
    lines = []
    for r in results:
        if r["casimir"]:
            lines.append(f"line {r['line']}: true")
        else:
            w = r["witness"]
            lines.append(
                f"line {r['line']}: false  witness {{{w['generator']}, .}} = {w['bracket']}"
            )
    _emit(args, payload, lines)
    return EXIT_OK if payload["all_casimir"] else EXIT_VERIFY


def cmd_orbit(args) -> int:
    alg = _algebra(args)
    chosen = [bool(args.point), bool(args.stratum), bool(args.preset)]
    if sum(chosen) != 1:
        raise _Usage("orbit needs exactly one of --point, --stratum, or a preset flag")
    if args.point:
        point = _load_point(alg, args.point)
        report = classify_orbit(alg, point)
        payload = {"schema": f"orbit/{SCHEMA_VERSION}", "rank": alg.r, "step": alg.s,
                   **report.to_dict()}
        lines = [
            f"type: {report.type_label}",
            f"dim: {report.orbit_dim}",
            f"k1: {report.k1}  k2: {report.k2}  rk_b12: {report.rk_b12}",
        ]
        _emit(args, payload, lines)
        return EXIT_OK
    if args.stratum:
        with open(args.stratum) as fh:
            stratum = Stratum.from_dict(alg, json.load(fh), description=args.stratum)
    else:
        stratum = stratum_preset(alg, args.preset)
    analysis = stepwise_reduce(alg, stratum)
    kernel = kernel_casimirs_on_stratum(alg, analysis)
    functions = orbit_functions(alg, analysis)
    payload = {
        "schema": f"orbit-stratum/{SCHEMA_VERSION}",
        "rank": alg.r,
        "step": alg.s,
        "stratum": stratum.to_dict(),
        "rank_b12": analysis.rank,
        "h1": [[str(c) for c in vec] for vec in analysis.h1_basis],
        "kernel_casimirs": [str(f) for f in kernel],
        "orbit_functions": [str(f) for f in functions],
    }
    lines = [f"rank B12 on stratum: {analysis.rank}"]
    lines += [f"kernel casimir: {f}" for f in kernel]
    lines += [f"orbit function: {f}" for f in functions]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_flow(args) -> int:
    alg = _algebra(args)
    if bool(args.point) == bool(args.preset):
        raise _Usage("flow needs exactly one of --point or --preset")
    if args.point:
        p0 = _load_point(alg, args.point)
    else:
        p0 = flow_point_preset(alg, args.preset)
    if args.matrix:
        with open(args.matrix) as fh:
            spec = ControlSpec.from_rows(json.load(fh))
    else:
        spec = ControlSpec.identity(alg.r)
    trajectory = integrate_vertical(alg, spec, p0, args.T, args.dt)
    system = complete_system(alg)
    report = conservation_report(alg, system, trajectory, spec=spec, tolerance=args.tolerance)
    behavior = behavior_classify(
        trajectory,
        period_tolerance=args.period_tolerance,
        constancy_tolerance=args.constancy_tolerance,
    )
    if args.csv:
        trajectory.write_csv(args.csv)
    payload = {
        "schema": f"flow/{SCHEMA_VERSION}",
        "rank": alg.r,
        "step": alg.s,
        "T": args.T,
        "dt": args.dt,
        "behavior": behavior.to_dict(),
        "conservation": report.to_dict(),
        "orbit_2d": classify_2d_orbit(alg, p0) if alg.s == 3 else None,
    }
    lines = [f"behavior: {behavior.kind}"]
    if behavior.period is not None:
        lines[-1] += f", period = {behavior.period:.4f}"
    for e in report.entries:
        lines.append(f"{e['name']}: max drift {e['max_drift']:.3e} "
                     f"{'ok' if e['pass'] else 'FAILED'}")
    _emit(args, payload, lines)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carnot",
        description="Casimir functions and coadjoint orbits of free nilpotent Lie algebras",
    )
    parser.add_argument("--version", action="version", version=f"carnot {__version__}")
    default_format = os.environ.get("CARNOT_FORMAT", "text")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, step_required=True):
        p.add_argument("-r", "--rank", type=int, required=True)
        p.add_argument("-s", "--step", type=int, required=True)
        p.add_argument("--format", choices=("text", "json"), default=default_format)

    p = sub.add_parser("dims", help="graded dimensions")
    common(p)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("basis", help="dump the basis words")
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("bivector", help="dump the bivector matrix or a block")
    common(p)
    p.add_argument("--block", type=int, nargs=2, metavar=("M", "N"))
    p.set_defaults(func=cmd_bivector)

    p = sub.add_parser("casimirs", help="generate the complete system")
    common(p)
    p.add_argument("--verify", action="store_true", help="re-check every function")
    p.set_defaults(func=cmd_casimirs)

    p = sub.add_parser("verify", help="check polynomials from a file, one per line")
    common(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("orbit", help="classify an orbit or analyse a stratum")
    common(p)
    p.add_argument("--point", help="JSON point file {name: rational}")
    p.add_argument("--stratum", help="JSON stratum file")
    group = p.add_mutually_exclusive_group()
    for name in STRATA:
        group.add_argument(
            f"--{name}",
            dest="preset",
            action="store_const",
            const=name,
            help=f"built-in stratum preset {name}",
        )
    p.set_defaults(func=cmd_orbit, preset=None)

    p = sub.add_parser("flow", help="integrate the vertical subsystem")
    common(p)
    p.add_argument("--point", help="JSON point file")
    p.add_argument("--preset", choices=sorted(FLOW_POINTS))
    p.add_argument("--matrix", help="JSON control matrix (rows of rationals)")
    p.add_argument("-T", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--period-tolerance", type=float, default=1e-4)
    p.add_argument("--constancy-tolerance", type=float, default=1e-10)
    p.add_argument("--csv", help="write the trajectory to this CSV path")
    p.set_defaults(func=cmd_flow)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CarnotError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
