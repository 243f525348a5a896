import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS, realized
from soapbubbles import corpus
from soapbubbles.cluster import assign_pressures, extract_graph, validate
from soapbubbles.errors import NotRealizable
from soapbubbles.geom import Line
from soapbubbles.graph import embedded_isomorphism
from soapbubbles.realize import realize, realize_3connected_detailed, realize_theta

SQ3 = math.sqrt(3)
THREE_CONNECTED = ["k4", "cube", "prism_5", "truncated_icosahedron"]


def _tangent_gap(disk, support):
    """How far a support circle or line is from touching the disk."""
    if isinstance(support, Line):
        return abs(support.distance(disk.center) - disk.radius)
    d = abs(disk.center - support.center)
    return min(abs(d - (disk.radius + support.radius)), abs(d - abs(disk.radius - support.radius)))


# ---------------------------------------------------------------- round trip


@pytest.mark.parametrize("name", CORPUS)
def test_round_trip(name):
    G = corpus.realizable_corpus()[name]
    C = realized(name)
    report = validate(C, angle_tol=1e-6, curv_tol=1e-6)
    assert report.passed, report.summary()
    assert embedded_isomorphism(G, extract_graph(C), match_outer=True) is not None


@pytest.mark.parametrize("n", [2, 3, 5])
def test_necklace(n):
    G = corpus.necklace(n)
    C = realize(G)
    assert validate(C).passed
    assert embedded_isomorphism(G, extract_graph(C), match_outer=True) is not None


@pytest.mark.parametrize("k", [2, 3, 4])
def test_diamond_ring(k):
    G = corpus.diamond_ring(k)
    C = realize(G)
    assert validate(C).passed
    assert embedded_isomorphism(G, extract_graph(C), match_outer=True) is not None


@given(st.integers(0, 10_000))
@settings(max_examples=5)
def test_random_cubic_round_trip(seed):
    G = corpus.random_cubic(14, seed)
    C = realize(G)
    assert validate(C).passed
    assert embedded_isomorphism(G, extract_graph(C), match_outer=True) is not None


@pytest.mark.parametrize("name", CORPUS)
def test_no_arc_borders_one_face_twice(name):
    C = realized(name)
    g = C.graph
    assert all(g.face_of[2 * k] != g.face_of[2 * k + 1] for k in C.arcs)


# ---------------------------------------------------------------- obstruction


def test_bridge_rejected():
    with pytest.raises(NotRealizable) as info:
        realize(corpus.bridged())
    assert info.value.reason == "has bridge"


def test_degree_rejected():
    with pytest.raises(NotRealizable) as info:
        realize(corpus.wheel(5))
    assert info.value.reason == "not 3-regular"


@given(st.integers(0, 10_000))
@settings(max_examples=20)
def test_random_bridged_rejected(seed):
    with pytest.raises(NotRealizable):
        realize(corpus.random_bridged(seed))


# ---------------------------------------------------------------- double bubble


def test_double_bubble_closed_form():
    C = realize_theta()
    side = [g for g in C.geometry.values() if not g.is_segment]
    assert len(side) == 2
    for g in side:
        assert abs(g.radius - 2 / SQ3) < 1e-12
        assert abs(g.span - 4 * math.pi / 3) < 1e-9
    assert sum(g.is_segment for g in C.geometry.values()) == 1
    P = assign_pressures(C)
    assert P.max_residual < 1e-12


def test_realize_theta_is_realize_of_theta():
    C = realize(corpus.theta())
    assert validate(C).passed
    assert embedded_isomorphism(corpus.theta(), extract_graph(C), match_outer=True) is not None


# ---------------------------------------------------------------- 3-connected structure


@pytest.mark.parametrize("name", THREE_CONNECTED)
def test_junctions_are_isodynamic(name):
    R = realize_3connected_detailed(corpus.generate(name))
    assert max(c.isodynamic_error for c in R.junctions.values()) < 1e-8


@pytest.mark.parametrize("name", THREE_CONNECTED)
def test_inscribed_disks(name):
    G = corpus.generate(name)
    R = realize_3connected_detailed(G)
    geo = R.cluster.geometry
    worst = 0.0
    for f, face in enumerate(G.faces):
        disk = R.packing.disks[f]
        for d in face:
            worst = max(worst, _tangent_gap(disk, geo[G.edge_id(d)].support))
    assert worst < 1e-8


@pytest.mark.parametrize("name", THREE_CONNECTED)
def test_arcs_pass_through_tangencies(name):
    R = realize_3connected_detailed(corpus.generate(name))
    for e, t in R.tangencies.items():
        assert R.cluster.geometry[e].support.distance(t) < 1e-10
