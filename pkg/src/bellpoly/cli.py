"""Command line front end: enumerate -> facets -> classes, plus checkers.

Exit codes: 0 success (or membership inside), 1 semantic negative (point
outside, witness not simulable, signaling input table), 2 usage or format
errors.  Output files are plain text in the formats of ``bellpoly.core``
and identical bytes for identical inputs regardless of BELLPOLY_THREADS.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import bounds, core, polyhedra, strategies, symmetry
from .core import BIDIR, FIXED, FormatError, Scenario, SignalingError


def worker_count() -> int:
    """Parallelism cap from BELLPOLY_THREADS (default 1, clipped to the host)."""
    raw = os.environ.get("BELLPOLY_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise FormatError(f"BELLPOLY_THREADS must be an integer, got {raw!r}")
    return max(1, min(n, os.cpu_count() or 1))


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _write(path: str, text: str):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def _cmd_vertices(args) -> int:
    sc = Scenario(args.ma, args.mb)
    if args.model == "lsr":
        points = strategies.enumerate_bidir_cc_vertices(sc, 0)
        rbits = 0
    elif args.model == "fixed-ab":
        points = strategies.enumerate_fixed_cc_vertices(sc, strategies.AB, args.bits)
        rbits = args.bits
    elif args.model == "fixed-ba":
        points = strategies.enumerate_fixed_cc_vertices(sc, strategies.BA, args.bits)
        rbits = args.bits
    else:  # bidir
        points = strategies.enumerate_bidir_cc_vertices(sc, args.bits)
        rbits = args.bits
    _write(args.out, core.format_vertex_file(points, rbits))
    print(f"wrote {len(points)} vertices to {args.out}")
    return 0


def _cmd_facets(args) -> int:
    space, sc, _, points = core.parse_vertex_file(_read(args.infile))
    order = None
    if symmetry.group_order(sc) <= 20000:
        try:
            order = symmetry.vertex_orbit_order(points, sc, space)
        except ValueError:
            order = None  # not an orbit-closed list; plain order still works
    hrep = polyhedra.facets_from_vertices(
        polyhedra.VRep.from_points(points), insertion_order=order
    )
    _write(
        args.out,
        core.format_inequality_file(space, sc, hrep.inequalities, hrep.equations),
    )
    print(
        f"wrote {len(hrep.inequalities)} inequalities and "
        f"{len(hrep.equations)} equations to {args.out}"
    )
    return 0


def _cmd_classes(args) -> int:
    space, sc, ineqs, equations = core.parse_inequality_file(_read(args.infile))
    classes = symmetry.partition_into_classes(ineqs, sc, space, tuple(equations))
    nontrivial = sum(1 for c in classes if not c.trivial)
    trivial = len(classes) - nontrivial
    if args.out:
        lines = [f"classes {space} {sc.ma} {sc.mb} {len(classes)}"]
        for k, cls in enumerate(classes):
            lines.append(
                f"class {k} members={cls.size} trivial={'yes' if cls.trivial else 'no'}"
            )
            q = cls.representative
            lines.append(" ".join(str(c) for c in q.coeffs) + f" <= {q.bound}")
            if args.pretty_chart and space == FIXED:
                lines.append(symmetry.format_chart(q, sc))
        _write(args.out, "\n".join(lines) + "\n")
    print(f"nontrivial={nontrivial} trivial={trivial} total={len(classes)}")
    return 0


def _cmd_check(args) -> int:
    point = core.parse_point(_read(args.point))
    space, sc, _, vertices = core.parse_vertex_file(_read(args.vertices))
    if len(point.coords) != len(vertices[0].coords):
        raise FormatError(
            f"point dimension {len(point.coords)} does not match "
            f"vertex dimension {len(vertices[0].coords)}"
        )
    result = polyhedra.membership(point, polyhedra.VRep.from_points(vertices))
    if result.inside:
        print("inside")
        for index, weight in result.weights:
            print(f"weight {index} {core.format_rational(weight)}")
        return 0
    q = result.separator
    print("outside")
    print("separator " + " ".join(str(c) for c in q.coeffs) + f" <= {q.bound}")
    return 1


def _cmd_simulate(args) -> int:
    table = core.parse_table(_read(args.table))
    try:
        ensemble = bounds.bacon_toner_ensemble(table)
    except SignalingError as exc:
        print(f"signaling: {exc}", file=sys.stderr)
        return 1
    reconstructed = strategies.ensemble_to_table(ensemble)
    exact = reconstructed == table
    bits = bounds.simulation_bit_cost(table.scenario)
    if args.out:
        _write(args.out, _format_ensemble(ensemble))
    print(f"bits={bits} exact={'yes' if exact else 'no'}")
    return 0 if exact else 1


def _format_ensemble(ensemble: strategies.StrategyEnsemble) -> str:
    sc = ensemble.scenario
    first = ensemble.entries[0][1]
    lines = [
        f"ensemble {first.direction.lower()} {first.message_count} "
        f"{sc.ma} {sc.mb} {sc.ka} {sc.kb} {len(ensemble.entries)}"
    ]
    for weight, s in ensemble.entries:
        kappa = ",".join(str(x) for x in s.kappa)
        sender = ",".join(str(x) for x in s.sender_output)
        receiver = "|".join(",".join(str(x) for x in row) for row in s.receiver_output)
        lines.append(
            f"w {core.format_rational(weight)} kappa {kappa} "
            f"sender {sender} receiver {receiver}"
        )
    return "\n".join(lines) + "\n"


def _cmd_stirling(args) -> int:
    print(strategies.stirling_second_kind(args.n, args.k))
    return 0


def _cmd_hat(args) -> int:
    table = bounds.hat_distribution(args.ma, args.mb)
    _write(args.out, core.format_table(table))
    print(f"wrote hat table to {args.out}")
    return 0


def _cmd_lowerbound(args) -> int:
    report = bounds.lower_bound_report(
        args.ma, args.mb, args.bits, workers=worker_count()
    )
    text = bounds.format_lower_bound_report(report)
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return 1 if report.lp_outside else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellpoly",
        description="Exact correlation-polytope pipeline for shared randomness "
        "plus limited classical communication.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vertices", help="enumerate polytope vertices")
    p.add_argument("--model", required=True,
                   choices=["lsr", "fixed-ab", "fixed-ba", "bidir"])
    p.add_argument("--ma", type=int, required=True)
    p.add_argument("--mb", type=int, required=True)
    p.add_argument("--bits", type=int, default=0, help="communication budget r")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_vertices)

    p = sub.add_parser("facets", help="convert a vertex file to facets")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_facets)

    p = sub.add_parser("classes", help="partition facets into equivalence classes")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--pretty-chart", action="store_true")
    p.set_defaults(fn=_cmd_classes)

    p = sub.add_parser("check", help="exact membership of a point in a vertex hull")
    p.add_argument("--point", required=True)
    p.add_argument("--vertices", required=True)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("simulate", help="reproduce a no-signaling table by announcing settings")
    p.add_argument("--table", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("stirling", help="Stirling partition number S(n, k)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(fn=_cmd_stirling)

    p = sub.add_parser("hat", help="write the anti-correlated witness table")
    p.add_argument("--ma", type=int, required=True)
    p.add_argument("--mb", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_hat)

    p = sub.add_parser("lowerbound", help="refute r-bit simulability of the witness")
    p.add_argument("--ma", type=int, required=True)
    p.add_argument("--mb", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_lowerbound)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
