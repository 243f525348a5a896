import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import CORPUS, realized
from soapbubbles import corpus
from soapbubbles.cluster import (JunctionGeometry, SoapBubbleCluster, assign_pressures, check_junction_conditions,
                                 extract_graph, find_crossings, interior_point, normalize_cluster,
                                 transform_cluster, validate, zero_sum_identity_residual)
from soapbubbles.errors import (DoubleRayDegeneracy, InconsistentPressures, MalformedCluster, NotPlateau,
                                RayDegeneracy)
from soapbubbles.geom import MobiusTransform, is_inf
from soapbubbles.graph import embedded_isomorphism
from soapbubbles.realize import realize_theta

SQ3 = math.sqrt(3)
THIRD = 2 * math.pi / 3


def _bent_double_bubble(scale=1.1):
    """Double bubble whose right arc has radius scale * 2/sqrt(3)."""
    C = realize_theta()
    R = scale * 2 / SQ3
    a = math.sqrt(R * R - 1)
    arcs = dict(C.arcs)
    start, end, via = arcs[0]
    arcs[0] = (start, end, complex(a + R, 0) if via.real > 0 else complex(-a - R, 0))
    return SoapBubbleCluster(dict(C.junctions), arcs)


# ---------------------------------------------------------------- validate


def test_double_bubble_validates():
    report = validate(realize_theta())
    assert report.passed and report.max_curvature_residual < 1e-9 and report.max_angle_residual < 1e-9


def test_bent_double_bubble_fails():
    report = validate(_bent_double_bubble())
    expected = SQ3 / 2 - SQ3 / 2.2
    assert not report.passed
    for j in (0, 1):
        assert report.curvature_residuals[j] == pytest.approx(expected, rel=1e-9)
        assert report.angle_residuals[j] > 1e-3


def test_right_angle_junction_fails():
    s = math.sqrt(0.5)
    C = SoapBubbleCluster({0: 0j, 1: 1 + 0j, 2: complex(-s, s), 3: complex(-s, -s)},
                          {0: (0, 1, 0.5), 1: (0, 2, complex(-s, s) / 2), 2: (0, 3, complex(-s, -s) / 2)})
    # 0 deg, 135 deg, 225 deg: gaps 135, 90, 135
    report = validate(C)
    assert not report.passed
    assert report.angle_residuals[0] == pytest.approx(THIRD - math.pi / 2, abs=1e-12)
    assert set(report.degree_violations) == {1, 2, 3}


def test_dangling_reference():
    with pytest.raises(MalformedCluster):
        SoapBubbleCluster({0: 0j}, {0: (0, 1, 0.5)}).check_structure()


def test_crossing_detected():
    C = SoapBubbleCluster({0: -1 + 0j, 1: 1 + 0j, 2: -1j, 3: 1j},
                          {0: (0, 1, 0.1), 1: (2, 3, 0.1j)})
    assert find_crossings(C) == [(0, 1)]


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_validates(name):
    report = validate(realized(name))
    assert report.passed, report.summary()
    assert not report.same_face_arcs


# ---------------------------------------------------------------- extraction


def test_double_bubble_graph_is_theta():
    g = extract_graph(realize_theta())
    assert embedded_isomorphism(g, corpus.theta()) is not None


@pytest.mark.parametrize("name", ["k4", "cube", "truncated_icosahedron"])
def test_extracted_graph_isomorphic(name):
    g = corpus.generate(name)
    h = extract_graph(realized(name if name != "prism" else "prism_5"))
    assert embedded_isomorphism(g.with_outer(g.outer_dart), h, match_outer=True) is not None
    h.check()


@pytest.mark.parametrize("name", CORPUS)
def test_faces_clockwise_and_outer(name):
    C = realized(name)
    areas = C.face_areas
    outer = C.outer_face
    # bounded faces are traced clockwise (negative signed area); the outer face
    # carries the total with the opposite sign
    assert all(a < 0 for i, a in enumerate(areas) if i != outer)
    assert areas[outer] == pytest.approx(-sum(a for i, a in enumerate(areas) if i != outer), rel=1e-9)


def test_interior_point_inside_face():
    C = realize_theta()
    for f in range(len(C.faces)):
        if f == C.outer_face:
            continue
        p = interior_point(C, f)
        # inside the bubble: on the correct side of the middle segment, inside the support circle
        other = [k for k, g in C.geometry.items() if not g.is_segment]
        assert any(abs(p - C.geometry[k].center) < C.geometry[k].radius for k in other)


# ---------------------------------------------------------------- pressures


def test_double_bubble_pressures():
    P = assign_pressures(realize_theta())
    assert P.pressures[P.outer_face] == 0
    bubbles = [p for f, p in P.pressures.items() if f != P.outer_face]
    assert bubbles == pytest.approx([SQ3 / 2, SQ3 / 2], abs=1e-12)


@pytest.mark.parametrize("name", CORPUS)
def test_pressures_path_independent(name):
    C = realized(name)
    base = assign_pressures(C)
    assert base.max_residual < 1e-8
    for seed in range(3):
        other = assign_pressures(C, rng=np.random.default_rng(seed))
        for f, p in base.pressures.items():
            assert abs(other.pressures[f] - p) < 1e-8


def test_bent_double_bubble_inconsistent():
    with pytest.raises(InconsistentPressures):
        assign_pressures(_bent_double_bubble(), tol=1e-6)


def _perturb(C, k, factor):
    """Scale arc k's sagitta (the via's offset from the chord midpoint)."""
    a, b, v = C.arcs[k]
    mid = (C.junctions[a] + C.junctions[b]) / 2
    arcs = dict(C.arcs)
    arcs[k] = (a, b, mid + (v - mid) * factor)
    return SoapBubbleCluster(dict(C.junctions), arcs)


@pytest.mark.parametrize("name", ["k4", "cube", "prism_5", "two_diamonds"])
def test_validate_iff_pressures(name):
    C = normalize_cluster(realized(name))
    cases = [(C, True)]
    for k in sorted(C.arcs)[:4]:
        if C.geometry[k].is_segment:
            continue
        cases.append((_perturb(C, k, 1.01), False))
    for cluster, ok in cases:
        report = validate(cluster)
        curvature_ok = report.max_curvature_residual <= 1e-6
        assert curvature_ok == ok
        try:
            assign_pressures(cluster, tol=1e-6)
            consistent = True
        except InconsistentPressures:
            consistent = False
        assert consistent == curvature_ok


# ---------------------------------------------------------------- junction conditions


def test_half_half_minus_one_junction():
    J = JunctionGeometry.from_curvatures(0j, (0.5, -1.0, 0.5))
    c = check_junction_conditions(J)
    assert c.curvature_sum_zero and c.centers_collinear and c.two_triple_crossings
    assert zero_sum_identity_residual(2, 1, 2) == 0


def test_three_segments():
    c = check_junction_conditions(JunctionGeometry.from_curvatures(1 + 1j, (0, 0, 0)))
    assert c.curvature_sum_zero and c.centers_collinear and c.two_triple_crossings
    assert is_inf(c.second_crossing)


def test_all_positive_fails():
    c = check_junction_conditions(JunctionGeometry.from_curvatures(0j, (1, 2, 0.5)))
    assert not c.curvature_sum_zero and not c.centers_collinear and not c.two_triple_crossings


def test_one_arc_two_segments_never_zero():
    c = check_junction_conditions(JunctionGeometry.from_curvatures(0j, (0, 0.7, 0)))
    assert not c.curvature_sum_zero


def test_bad_angles_raise():
    from soapbubbles.cluster import ArcEnd
    J = JunctionGeometry(0j, (ArcEnd(1, 0), ArcEnd(1j, 0), ArcEnd(-1, 0)))
    with pytest.raises(NotPlateau):
        check_junction_conditions(J)


def _circles_through_second_point(J, c):
    """Independent check of the triple crossing: the returned point lies on
    all three support circles."""
    q = c.second_crossing
    if is_inf(q):
        return all(isinstance(s, type(J.supports()[0])) for s in J.supports())
    return max(s.distance(q) for s in J.supports())


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 2 * math.pi), st.builds(complex, st.floats(-3, 3),
                                                                                st.floats(-3, 3)))
@settings(max_examples=200)
def test_zero_sum_implies_other_conditions(k1, k3, heading, X):
    assume(abs(k1) > 0.05 and abs(k3) > 0.05 and abs(k1 + k3) > 0.05)
    J = JunctionGeometry.from_curvatures(X, (k1, -(k1 + k3), k3), heading)
    c = check_junction_conditions(J)
    assert c.curvature_sum_zero and c.centers_collinear and c.two_triple_crossings
    # independent collinearity: triangle area of the three centers
    p, q, r = J.centers()
    area = abs(((q - p).conjugate() * (r - p)).imag)
    scale = max(abs(p - q), abs(q - r), abs(r - p))
    assert area < 1e-9 * scale * scale
    # the second crossing lies on all three circles
    assert _circles_through_second_point(J, c) < 1e-8 * max(1, abs(c.second_crossing - X))


@given(st.floats(0, 2 * math.pi), st.floats(0.2, 3), st.floats(0, 2 * math.pi))
@settings(max_examples=200)
def test_collinear_centers_imply_zero_sum(line_angle, line_dist, heading):
    # centers are where a line (not through X) meets the three normal lines
    X = 0j
    u = cmath.exp(1j * line_angle)  # unit normal of the line Re(conj(u) z) = line_dist
    ks = []
    for i in range(3):
        n = -1j * cmath.exp(1j * (heading + i * THIRD))
        dot = (u.conjugate() * n).real
        assume(abs(dot) > 1e-3)
        s = line_dist / dot  # center X + s n
        ks.append(1 / s)
    assert abs(sum(ks)) < 1e-9 * max(1, max(map(abs, ks)))
    J = JunctionGeometry.from_curvatures(X, ks, heading)
    assert check_junction_conditions(J).curvature_sum_zero


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_radius_identity(r1, r3):
    # signs (+, -, +): 1/r1 + 1/r3 = 1/r2
    r2 = 1 / (1 / r1 + 1 / r3)
    assert zero_sum_identity_residual(r1, r2, r3) < 1e-10


# ---------------------------------------------------------------- transforms


def test_identity_transform():
    C = realized("cube")
    assert transform_cluster(MobiusTransform.identity(), C) == C


def test_inversion_inside_bubble():
    C = realize_theta()
    T = MobiusTransform(0, 1, 1, -0.7)  # pole at 0.7, inside the right bubble
    out = transform_cluster(T, C)
    assert validate(normalize_cluster(out)).passed
    # the formerly outer region is now bounded: the new outer face is the right bubble
    g_old, g_new = C.graph, out.graph
    assert g_new.outer_face != g_old.outer_face
    assert g_new.faces == g_old.faces


def test_pole_on_arc_interior():
    C = realize_theta()
    with pytest.raises(DoubleRayDegeneracy):
        transform_cluster(MobiusTransform(0, 1, 1, 0), C)  # pole 0 on the middle segment


def test_pole_at_junction():
    C = realize_theta()
    with pytest.raises(RayDegeneracy):
        transform_cluster(MobiusTransform(0, 1, 1, -1j), C)


def test_conjugating_transform_still_valid():
    C = realized("k4")
    out = transform_cluster(MobiusTransform(1, 0.3, 0.2j, 1, True), C)
    assert validate(normalize_cluster(out)).passed
