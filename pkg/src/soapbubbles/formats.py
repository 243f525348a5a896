"""JSON file formats for graphs, clusters and packings, and SVG output.

Reals are written with ``repr``, the shortest string that reads back to the
same double, so clusters round-trip bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from .circlepack import CirclePacking
from .cluster import SoapBubbleCluster, ValidationReport
from .config import DEFAULT
from .errors import MalformedCluster, ParseError
from .geom import Disk
from .graph import PlanarMultigraph


def _load(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _dump(obj: Any) -> bytes:
    return (json.dumps(obj, indent=2, allow_nan=False) + "\n").encode("utf-8")


def _field(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _real(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f"{where}: not finite")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array")
    return value


def _point(obj: Any, where: str) -> complex:
    return complex(_real(_field(obj, "x", where), f"{where}.x"), _real(_field(obj, "y", where), f"{where}.y"))


# ---------------------------------------------------------------- graphs


def parse_graph(data: bytes | str) -> PlanarMultigraph:
    """Read a GraphFile and check its embedding.

    Raises ParseError for malformed JSON or fields, MalformedEmbedding (an
    InvariantViolation) for a broken rotation system and SelfLoopRejected for
    loops.
    """
    doc = _load(data)
    rotation, twin, origin = {}, {}, {}
    for i, v in enumerate(_list(_field(doc, "vertices", "file"), "vertices")):
        where = f"vertices[{i}]"
        vid = _int(_field(v, "id", where), f"{where}.id")
        if vid in rotation:
            raise ParseError(f"{where}.id: duplicate vertex {vid}")
        rot = _list(_field(v, "rotation", where), f"{where}.rotation")
        rotation[vid] = tuple(_int(d, f"{where}.rotation[{j}]") for j, d in enumerate(rot))
    for i, d in enumerate(_list(_field(doc, "darts", "file"), "darts")):
        where = f"darts[{i}]"
        did = _int(_field(d, "id", where), f"{where}.id")
        if did in twin:
            raise ParseError(f"{where}.id: duplicate dart {did}")
        twin[did] = _int(_field(d, "twin", where), f"{where}.twin")
        origin[did] = _int(_field(d, "origin", where), f"{where}.origin")
    outer = _int(_field(doc, "outer_face_dart", "file"), "outer_face_dart")
    g = PlanarMultigraph(rotation, twin, origin, outer)
    g.check()
    return g


def graph_to_dict(g: PlanarMultigraph) -> dict:
    outer = g.outer_dart if g.outer_dart is not None else g.faces[g.outer_face][0]
    return {
        "vertices": [{"id": v, "rotation": list(g.rotation[v])} for v in sorted(g.rotation)],
        "darts": [{"id": d, "twin": g.twin[d], "origin": g.origin[d]} for d in sorted(g.twin)],
        "outer_face_dart": outer,
    }


def dump_graph(g: PlanarMultigraph) -> bytes:
    return _dump(graph_to_dict(g))


# ---------------------------------------------------------------- clusters


def parse_cluster(data: bytes | str) -> tuple[SoapBubbleCluster, dict[str, float]]:
    """Read a ClusterFile; returns the cluster and its stored tolerances.

    The ``outer_face`` entry is informational: the unbounded face is always
    recomputed from the geometry.
    """
    doc = _load(data)
    junctions: dict[int, complex] = {}
    for i, j in enumerate(_list(_field(doc, "junctions", "file"), "junctions")):
        where = f"junctions[{i}]"
        jid = _int(_field(j, "id", where), f"{where}.id")
        if jid in junctions:
            raise ParseError(f"{where}.id: duplicate junction {jid}")
        junctions[jid] = _point(j, where)
    arcs: dict[int, tuple[int, int, complex]] = {}
    for i, a in enumerate(_list(_field(doc, "arcs", "file"), "arcs")):
        where = f"arcs[{i}]"
        aid = _int(_field(a, "id", where), f"{where}.id")
        if aid in arcs:
            raise ParseError(f"{where}.id: duplicate arc {aid}")
        arcs[aid] = (_int(_field(a, "from", where), f"{where}.from"),
                     _int(_field(a, "to", where), f"{where}.to"),
                     _point(_field(a, "via", where), f"{where}.via"))
    tolerances = {}
    raw = doc.get("tolerances", {}) if isinstance(doc, dict) else {}
    if not isinstance(raw, dict):
        raise ParseError("tolerances: expected an object")
    for key, value in raw.items():
        tolerances[key] = _real(value, f"tolerances.{key}")
    C = SoapBubbleCluster(junctions, arcs)
    C.check_structure()
    return C, tolerances


def _outer_face_spec(C: SoapBubbleCluster) -> dict | None:
    if not C.arcs:
        return None
    try:
        g = C.graph
        outer = C.outer_face
    except MalformedCluster:
        return None
    for k in sorted(C.arcs):
        # dart 2k runs from -> to; its face lies to its right
        if g.face_of[2 * k] == outer:
            return {"arc": k, "side": "right"}
        if g.face_of[2 * k + 1] == outer:
            return {"arc": k, "side": "left"}
    return None


def cluster_to_dict(C: SoapBubbleCluster, angle_tol: float = DEFAULT.angle,
                    curv_tol: float = DEFAULT.curvature) -> dict:
    return {
        "junctions": [{"id": j, "x": z.real, "y": z.imag} for j, z in sorted(C.junctions.items())],
        "arcs": [{"id": k, "from": a, "to": b, "via": {"x": v.real, "y": v.imag}}
                 for k, (a, b, v) in sorted(C.arcs.items())],
        "outer_face": _outer_face_spec(C),
        "tolerances": {"angle": angle_tol, "curvature": curv_tol},
    }


def dump_cluster(C: SoapBubbleCluster, angle_tol: float = DEFAULT.angle,
                 curv_tol: float = DEFAULT.curvature) -> bytes:
    return _dump(cluster_to_dict(C, angle_tol, curv_tol))


def report_to_dict(report: ValidationReport) -> dict:
    out = report.summary()
    out["angle_residuals"] = {str(k): v for k, v in sorted(report.angle_residuals.items())}
    out["curvature_residuals"] = {str(k): v for k, v in sorted(report.curvature_residuals.items())}
    return out


# ---------------------------------------------------------------- packings


def packing_to_dict(P: CirclePacking) -> dict:
    return {
        "outer_vertex": P.outer_vertex,
        "disks": [{"id": v, "x": d.center.real, "y": d.center.imag, "r": d.radius,
                   "complement": d.complement} for v, d in sorted(P.disks.items())],
        "max_angle_error": P.max_angle_error,
        "max_tangency_error": P.max_tangency_error,
    }


def dump_packing(P: CirclePacking) -> bytes:
    return _dump(packing_to_dict(P))


def parse_packing(data: bytes | str) -> CirclePacking:
    doc = _load(data)
    disks = {}
    for i, d in enumerate(_list(_field(doc, "disks", "file"), "disks")):
        where = f"disks[{i}]"
        complement = _field(d, "complement", where)
        if not isinstance(complement, bool):
            raise ParseError(f"{where}.complement: expected a boolean")
        disks[_int(_field(d, "id", where), f"{where}.id")] = Disk(
            _point(d, where), _real(_field(d, "r", where), f"{where}.r"), complement)
    return CirclePacking(disks, _int(_field(doc, "outer_vertex", "file"), "outer_vertex"),
                         _real(_field(doc, "max_angle_error", "file"), "max_angle_error"),
                         _real(_field(doc, "max_tangency_error", "file"), "max_tangency_error"))


# ---------------------------------------------------------------- SVG


@dataclass(frozen=True)
class SvgOptions:
    width: float = 600.0        # pixels; height follows the aspect ratio
    margin: float = 0.05        # fraction of the larger bounding-box side
    stroke: str = "black"
    stroke_width: float = 0.006  # fraction of the larger bounding-box side
    digits: int = 6


def _fmt(x: float, digits: int) -> str:
    s = f"{x:.{digits}f}"
    return "0" if float(s) == 0.0 else s.rstrip("0").rstrip(".")


def write_svg(C: SoapBubbleCluster, options: SvgOptions = SvgOptions()) -> bytes:
    """One path per arc, y axis flipped so the picture is upright.

    Arcs use the circular ``A`` command; large-arc and sweep flags come from
    the arc's span and orientation. Segments use ``L``.
    """
    f = lambda x: _fmt(x, options.digits)  # noqa: E731
    boxes = [g.bbox() for g in C.geometry.values()]
    if boxes:
        x0, y0 = min(b[0] for b in boxes), min(b[1] for b in boxes)
        x1, y1 = max(b[2] for b in boxes), max(b[3] for b in boxes)
    else:
        x0, y0, x1, y1 = 0.0, 0.0, 1.0, 1.0
    side = max(x1 - x0, y1 - y0, 1e-12)
    pad = options.margin * side
    vx, vy = x0 - pad, -(y1 + pad)
    vw, vh = x1 - x0 + 2 * pad, y1 - y0 + 2 * pad
    height = options.width * vh / vw
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{f(options.width)}" '
        f'height="{f(height)}" viewBox="{f(vx)} {f(vy)} {f(vw)} {f(vh)}">',
        f'<g fill="none" stroke="{options.stroke}" stroke-width="{f(options.stroke_width * side)}" '
        'stroke-linecap="round">',
    ]
    for k, arc in sorted(C.geometry.items()):
        p, q = arc.start, arc.end
        head = f"M {f(p.real)} {f(-p.imag)}"
        if arc.is_segment:
            body = f"L {f(q.real)} {f(-q.imag)}"
        else:
            r = f(arc.radius)
            large = int(arc.span > math.pi)
            # the picture stays upright, and sweep=1 is clockwise on screen
            sweep = int(not arc.ccw)
            body = f"A {r} {r} 0 {large} {sweep} {f(q.real)} {f(-q.imag)}"
        lines.append(f'<path id="arc{k}" d="{head} {body}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines).encode("utf-8")


__all__ = [
    "SvgOptions", "cluster_to_dict", "dump_cluster", "dump_graph", "dump_packing", "graph_to_dict",
    "packing_to_dict", "parse_cluster", "parse_graph", "parse_packing", "report_to_dict", "write_svg",
]
