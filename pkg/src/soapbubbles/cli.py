"""Command-line interface: ``bubbles realize|validate|pressures|transform|pack|gen``.

Exit codes: 0 pass, 1 validation failure, 2 not realizable, 3 parse or
invariant error, 4 numerical or geometric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus
from .circlepack import pack
from .cluster import assign_pressures, normalize_cluster, transform_cluster, validate
from .config import DEFAULT
from .errors import (BubbleError, InconsistentPressures, InvariantViolation, NotRealizable,
                     ParseError)
from .formats import (dump_cluster, dump_graph, dump_packing, parse_cluster, parse_graph,
                      report_to_dict, write_svg)
from .geom import MobiusTransform
from .graph import dual
from .realize import realize

EXIT_OK, EXIT_INVALID, EXIT_NOT_REALIZABLE, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3, 4


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write(data: bytes, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def _json(obj) -> bytes:
    return (json.dumps(obj, indent=2, allow_nan=False) + "\n").encode("utf-8")


def _tolerances(args, stored: dict[str, float] | None = None) -> tuple[float, float]:
    stored = stored or {}
    angle = args.angle_tol if args.angle_tol is not None else stored.get("angle", DEFAULT.angle)
    curv = args.curv_tol if args.curv_tol is not None else stored.get("curvature", DEFAULT.curvature)
    return angle, curv


# ---------------------------------------------------------------- commands


def cmd_realize(args) -> int:
    G = parse_graph(_read(args.graph))
    C = realize(G)
    angle, curv = _tolerances(args)
    _write(dump_cluster(C, angle, curv), args.output)
    if args.svg:
        Path(args.svg).write_bytes(write_svg(C))
    return EXIT_OK if validate(C, angle, curv).passed else EXIT_INVALID


def cmd_validate(args) -> int:
    C, stored = parse_cluster(_read(args.cluster))
    angle, curv = _tolerances(args, stored)
    report = validate(normalize_cluster(C), angle, curv)
    _write(_json(report_to_dict(report)), args.output)
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_pressures(args) -> int:
    C, stored = parse_cluster(_read(args.cluster))
    tol = args.tol if args.tol is not None else stored.get("curvature", DEFAULT.curvature)
    C = normalize_cluster(C)
    try:
        P = assign_pressures(C, tol)
    except InconsistentPressures as exc:
        _write(_json({"consistent": False, "arc": exc.cycle, "residual": exc.residual}),
               args.output)
        return EXIT_INVALID
    _write(_json({
        "consistent": True,
        "outer_face": P.outer_face,
        "max_residual": P.max_residual,
        "pressures": [{"face": f, "darts": list(P.faces[f]), "pressure": p}
                      for f, p in sorted(P.pressures.items())],
    }), args.output)
    return EXIT_OK


def cmd_transform(args) -> int:
    C, stored = parse_cluster(_read(args.cluster))
    ar, ai, br, bi, cr, ci, dr, di = args.coefficients
    T = MobiusTransform(complex(ar, ai), complex(br, bi), complex(cr, ci), complex(dr, di),
                        conjugate_first=args.conjugate)
    out = transform_cluster(T, C)
    angle, curv = _tolerances(args, stored)
    _write(dump_cluster(out, angle, curv), args.output)
    return EXIT_OK


def cmd_pack(args) -> int:
    G = parse_graph(_read(args.graph))
    D = dual(G)
    init = np.random.default_rng(args.seed) if args.seed is not None else None
    tol = args.tol if args.tol is not None else DEFAULT.pack
    P = pack(D, G.outer_face, tol=tol, init=init)
    _write(dump_packing(P), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        G = corpus.generate(args.family, args.n, args.seed)
    except (KeyError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    _write(dump_graph(G), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bubbles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tolerances=True):
        p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized steps")
        if tolerances:
            p.add_argument("--tol", type=float, default=None)
            p.add_argument("--angle-tol", type=float, default=None)
            p.add_argument("--curv-tol", type=float, default=None)

    p = sub.add_parser("realize", help="graph file -> cluster file")
    p.add_argument("graph")
    p.add_argument("--svg", default=None, help="also write an SVG drawing here")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("validate", help="cluster file -> validation report")
    p.add_argument("cluster")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pressures", help="cluster file -> face pressures")
    p.add_argument("cluster")
    common(p)
    p.set_defaults(func=cmd_pressures)

    p = sub.add_parser("transform", help="apply z -> (az+b)/(cz+d) to a cluster")
    p.add_argument("cluster")
    p.add_argument("coefficients", nargs=8, type=float,
                   metavar="R", help="a_re a_im b_re b_im c_re c_im d_re d_im")
    p.add_argument("--conjugate", action="store_true", help="conjugate z first")
    common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("pack", help="cubic graph file -> circle packing of its dual")
    p.add_argument("graph")
    common(p)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("gen", help="write a named corpus graph")
    p.add_argument("family", help="theta, k4, cube, prism_N, truncated_icosahedron, two_diamonds, "
                                  "bridged, necklace_N, diamond_ring_N, random_cubic, random_bridged, "
                                  "random_two_connected")
    p.add_argument("-n", type=int, default=None, help="size for families that take one")
    common(p, tolerances=False)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotRealizable as exc:
        print(f"not realizable: {exc}", file=sys.stderr)
        return EXIT_NOT_REALIZABLE
    except (ParseError, InvariantViolation, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BubbleError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
