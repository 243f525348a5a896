import json
import math
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, realized
from soapbubbles import corpus
from soapbubbles.circlepack import pack
from soapbubbles.cluster import SoapBubbleCluster
from soapbubbles.errors import InvariantViolation, MalformedCluster, ParseError, SelfLoopRejected
from soapbubbles.formats import (SvgOptions, dump_cluster, dump_graph, dump_packing, graph_to_dict,
                                 parse_cluster, parse_graph, parse_packing, write_svg)
from soapbubbles.graph import dual, embedded_isomorphism
from soapbubbles.realize import realize_theta

GRAPHS = ["theta", "k4", "cube", "prism_5", "truncated_icosahedron", "two_diamonds", "bridged"]


# ---------------------------------------------------------------- graphs


@pytest.mark.parametrize("name", GRAPHS)
def test_graph_round_trip(name):
    g = corpus.generate(name)
    back = parse_graph(dump_graph(g))
    assert back.rotation == g.rotation and back.twin == g.twin and back.origin == g.origin
    assert embedded_isomorphism(g, back, match_outer=True) is not None
    assert dump_graph(back) == dump_graph(g)


def test_graph_bad_json():
    with pytest.raises(ParseError, match="line 1"):
        parse_graph(b"{not json")


def test_graph_missing_field():
    doc = graph_to_dict(corpus.theta())
    del doc["darts"][3]["twin"]
    with pytest.raises(ParseError, match=r"darts\[3\]"):
        parse_graph(json.dumps(doc))


def test_graph_bad_twin():
    doc = graph_to_dict(corpus.k4())
    doc["darts"][0]["twin"] = 2
    with pytest.raises(InvariantViolation):
        parse_graph(json.dumps(doc))


def test_graph_self_loop():
    doc = {"vertices": [{"id": 0, "rotation": [0, 1, 2, 4]}, {"id": 1, "rotation": [3, 5, 6, 7]}],
           "darts": [{"id": 0, "twin": 1, "origin": 0}, {"id": 1, "twin": 0, "origin": 0},
                     {"id": 2, "twin": 3, "origin": 0}, {"id": 3, "twin": 2, "origin": 1},
                     {"id": 4, "twin": 5, "origin": 0}, {"id": 5, "twin": 4, "origin": 1},
                     {"id": 6, "twin": 7, "origin": 1}, {"id": 7, "twin": 6, "origin": 1}],
           "outer_face_dart": 2}
    with pytest.raises(SelfLoopRejected):
        parse_graph(json.dumps(doc))


def test_graph_not_utf8():
    with pytest.raises(ParseError):
        parse_graph(b"\xff\xfe")


# ---------------------------------------------------------------- clusters


@pytest.mark.parametrize("name", CORPUS)
def test_cluster_round_trip_bit_exact(name):
    C = realized(name)
    back, tol = parse_cluster(dump_cluster(C, 1e-7, 1e-5))
    assert back.junctions == C.junctions and back.arcs == C.arcs
    assert tol == {"angle": 1e-7, "curvature": 1e-5}
    assert dump_cluster(back, 1e-7, 1e-5) == dump_cluster(C, 1e-7, 1e-5)


@given(st.floats(1e-6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(0, 2 * math.pi))
@settings(max_examples=100)
def test_reals_survive_round_trip(scale, dx, dy, turn):
    # arbitrary doubles from a scaled, rotated, shifted double bubble
    w = scale * complex(math.cos(turn), math.sin(turn))
    C0 = realize_theta()
    C = SoapBubbleCluster({j: w * p + complex(dx, dy) for j, p in C0.junctions.items()},
                          {k: (a, b, w * v + complex(dx, dy)) for k, (a, b, v) in C0.arcs.items()})
    back, _ = parse_cluster(dump_cluster(C))
    assert back.junctions == C.junctions and back.arcs == C.arcs


def test_cluster_outer_face_written():
    doc = json.loads(dump_cluster(realize_theta()))
    assert set(doc["outer_face"]) == {"arc", "side"}


def test_cluster_dangling_reference():
    doc = json.loads(dump_cluster(realize_theta()))
    doc["arcs"][0]["to"] = 7
    with pytest.raises(MalformedCluster):
        parse_cluster(json.dumps(doc))


def test_cluster_non_numeric():
    doc = json.loads(dump_cluster(realize_theta()))
    doc["junctions"][1]["x"] = "zero"
    with pytest.raises(ParseError, match=r"junctions\[1\]\.x"):
        parse_cluster(json.dumps(doc))


def test_cluster_duplicate_arc():
    doc = json.loads(dump_cluster(realize_theta()))
    doc["arcs"][1]["id"] = doc["arcs"][0]["id"]
    with pytest.raises(ParseError, match="duplicate"):
        parse_cluster(json.dumps(doc))


def test_packing_round_trip():
    G = corpus.cube()
    P = pack(dual(G), G.outer_face)
    back = parse_packing(dump_packing(P))
    assert back.disks == P.disks
    assert dump_packing(back) == dump_packing(P)


# ---------------------------------------------------------------- svg


PATH = re.compile(r'<path id="arc(\d+)" d="M (\S+) (\S+) (?:L (\S+) (\S+)|A (\S+) \S+ 0 ([01]) ([01]) (\S+) (\S+))"/>')


def _paths(svg: bytes):
    return {int(m[0]): m for m in PATH.findall(svg.decode())}


def _svg_center(x1, y1, x2, y2, r, large, sweep):
    """Center of an SVG elliptical arc with rx = ry = r and no rotation, by the
    endpoint-to-center conversion of the SVG implementation notes."""
    xp, yp = (x1 - x2) / 2, (y1 - y2) / 2
    num = r * r * r * r - r * r * yp * yp - r * r * xp * xp
    den = r * r * yp * yp + r * r * xp * xp
    coef = math.sqrt(max(num, 0.0) / den)
    if large == sweep:
        coef = -coef
    return complex(coef * yp + (x1 + x2) / 2, -coef * xp + (y1 + y2) / 2)


def test_theta_svg():
    svg = write_svg(realize_theta())
    paths = _paths(svg)
    assert len(paths) == 3
    assert paths[2][3] == "0" and paths[2][4] == "1"  # the middle segment is a line to (0, -(-1))
    assert 'd="M 0 -1 A 1.154701 1.154701 0 1 1 0 1"' in svg.decode()


@pytest.mark.parametrize("name", ["k4", "cube", "two_diamonds"])
def test_svg_flags_match_geometry(name):
    C = realized(name)
    paths = _paths(write_svg(C, SvgOptions(digits=9)))
    assert len(paths) == len(C.arcs)
    for k, m in paths.items():
        arc = C.geometry[k]
        if arc.is_segment:
            continue
        x1, y1, r, large, sweep, x2, y2 = (float(m[1]), float(m[2]), float(m[5]), int(m[6]), int(m[7]),
                                           float(m[8]), float(m[9]))
        c = _svg_center(x1, y1, x2, y2, r, large, sweep)
        # the drawing is y-flipped
        assert abs(c - arc.center.conjugate()) < 1e-6 * max(1.0, r)
        # the via must be on the swept side: sweep=1 increases the screen angle
        v = arc.via.conjugate()
        a_start = math.atan2(y1 - c.imag, x1 - c.real)
        a_via = math.atan2(v.imag - c.imag, v.real - c.real)
        a_end = math.atan2(y2 - c.imag, x2 - c.real)
        sign = 1 if sweep else -1
        to_via = (sign * (a_via - a_start)) % (2 * math.pi)
        to_end = (sign * (a_end - a_start)) % (2 * math.pi)
        assert to_via < to_end


def test_k4_svg_deterministic():
    a = write_svg(realized("k4"))
    b = write_svg(realized("k4"))
    assert a == b and len(_paths(a)) == 6


def test_empty_svg():
    svg = write_svg(SoapBubbleCluster({}, {})).decode()
    assert "<path" not in svg and "viewBox=" in svg
