import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soapbubbles import corpus
from soapbubbles.circlepack import CirclePacking, corner_angle, pack, residuals
from soapbubbles.errors import InputTooSmall, NotTriangulation
from soapbubbles.geom import Disk
from soapbubbles.graph import PlanarMultigraph, dual

DESCARTES = 2 * math.sqrt(3) - 3


def _pack(G, **kw):
    return pack(dual(G), G.outer_face, **kw)


def _angle_sums_from_centers(P: CirclePacking, t: PlanarMultigraph) -> float:
    """Worst |sum of turning angles - 2 pi| measured on the laid-out centers,
    walking each flower in rotation order."""
    worst = 0.0
    for v in t.vertices:
        if v == P.outer_vertex:
            continue
        c = P.disks[v].center
        dirs = []
        for u in t.neighbors(v):
            d = P.disks[u]
            # direction to the tangency point: toward the neighbor's center,
            # or away from the complement's center
            dirs.append((c - d.center) if d.complement else (d.center - c))
        total = sum((cmath.phase(dirs[(i + 1) % len(dirs)] / dirs[i])) % (2 * math.pi)
                    for i in range(len(dirs)))
        worst = max(worst, abs(total - 2 * math.pi))
    return worst


def test_descartes_radius():
    P = _pack(corpus.k4())
    inner = [d for d in P.disks.values() if not d.complement]
    assert len(inner) == 3
    for d in inner:
        assert abs(d.radius - DESCARTES) < 1e-9
        assert abs(abs(d.center) + d.radius - 1) < 1e-12  # internally tangent to the unit circle


def test_descartes_closed_form_residuals():
    # exact symmetric coordinates, independent of the solver
    r = DESCARTES
    disks = {0: Disk(0j, 1.0, True)}
    for k in range(3):
        disks[k + 1] = Disk((1 - r) * cmath.exp(2j * math.pi * k / 3), r)
    t = PlanarMultigraph.from_edges_and_rotations(
        [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        {0: [0, 4, 2], 1: [1, 6, 11], 2: [3, 8, 7], 3: [5, 10, 9]})
    t.check()
    res = residuals(disks, t, 0)
    assert res.max_tangency_error < 1e-12 and res.max_angle_error < 1e-12
    bumped = dict(disks)
    bumped[1] = Disk(disks[1].center, r + 1e-3)
    res = residuals(bumped, t, 0)
    assert res.max_tangency_error == pytest.approx(1e-3, rel=1e-6)
    assert (0, 1) in res.missing_tangencies


def test_octahedron_symmetry():
    P = _pack(corpus.cube())
    o = P.outer_vertex
    t = dual(corpus.cube()).graph
    nbrs = t.neighbors(o)
    assert len(nbrs) == 4
    radii = [P.disks[u].radius for u in nbrs]
    assert max(radii) - min(radii) < 1e-10
    assert radii[0] == pytest.approx(math.sqrt(2) - 1, abs=1e-10)
    anti = next(v for v in t.vertices if v != o and v not in nbrs)
    assert abs(P.disks[anti].center) < 1e-10
    assert P.disks[anti].radius == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-10)
    assert P.max_angle_error < 1e-10


def test_theta_dual_too_small():
    with pytest.raises(InputTooSmall):
        _pack(corpus.theta())


def test_non_triangulation_rejected():
    with pytest.raises(NotTriangulation):
        pack(corpus.cube(), 0)


def test_corner_angle_equilateral():
    assert corner_angle(1, 1, 1) == pytest.approx(math.pi / 3)


@pytest.mark.parametrize("name", ["k4", "cube", "prism_5", "truncated_icosahedron"])
def test_solver_residuals(name):
    G = corpus.generate(name)
    P = _pack(G)
    res = residuals(P, dual(G))
    assert P.max_angle_error < 1e-10 and res.max_angle_error < 1e-10
    assert res.max_tangency_error < 1e-8
    assert not res.missing_tangencies and not res.extra_tangencies
    assert res.max_overlap < 1e-8
    assert _angle_sums_from_centers(P, dual(G).graph) < 1e-9
    assert P.polish_shift <= 10 * 1e-10


@given(st.integers(0, 1000), st.integers(6, 40))
@settings(max_examples=8)
def test_random_packings(seed, n):
    G = corpus.random_cubic(n, seed)
    P = _pack(G)
    res = residuals(P, dual(G))
    assert res.max_angle_error < 1e-10 and res.max_tangency_error < 1e-8
    assert not res.missing_tangencies and not res.extra_tangencies
    assert P.polish_shift <= 1e-9
    # canonical frame
    o = P.disks[P.outer_vertex]
    assert o.complement and o.center == 0 and o.radius == 1
    first = min(v for v in P.disks if v != P.outer_vertex)
    c = P.disks[first].center
    assert abs(c.imag) < 1e-12 and (c.real > 0 or abs(c) < 1e-6)


@pytest.mark.parametrize("name", ["k4", "cube", "prism_5", "truncated_icosahedron"])
def test_random_inits_agree(name):
    G = corpus.generate(name)
    a = _pack(G, init=np.random.default_rng(1))
    b = _pack(G, init=np.random.default_rng(2))
    for v in a.disks:
        assert abs(a.disks[v].center - b.disks[v].center) < 1e-6
        assert abs(a.disks[v].radius - b.disks[v].radius) < 1e-6


def test_deterministic():
    G = corpus.prism(5)
    assert _pack(G) == _pack(G)
