"""Named graph families used by the CLI ``gen`` command and the test-suite."""

from __future__ import annotations

import numpy as np
import networkx as nx
from scipy.spatial import Delaunay

from .graph import PlanarMultigraph, dual


def theta() -> PlanarMultigraph:
    """Two vertices joined by three parallel edges.

    Dart 2i runs 0 -> 1 along edge i; the outer face lies left of dart 0.
    """
    return PlanarMultigraph.from_edges_and_rotations(
        [(0, 1), (0, 1), (0, 1)], {0: [0, 2, 4], 1: [5, 3, 1]}, outer_dart=1)


def k4() -> PlanarMultigraph:
    return PlanarMultigraph.from_networkx(nx.complete_graph(4))


def cube() -> PlanarMultigraph:
    return PlanarMultigraph.from_networkx(nx.hypercube_graph(3))


def prism(n: int) -> PlanarMultigraph:
    if n < 3:
        raise ValueError("prism needs n >= 3")
    return PlanarMultigraph.from_networkx(nx.circular_ladder_graph(n))


def truncated_icosahedron() -> PlanarMultigraph:
    ico = nx.icosahedral_graph()
    _, emb = nx.check_planarity(ico)
    g = nx.Graph()
    for v in ico:
        cw = list(emb.neighbors_cw_order(v))
        for i, u in enumerate(cw):
            g.add_edge((v, u), (u, v))
            g.add_edge((v, u), (v, cw[(i + 1) % len(cw)]))
    return PlanarMultigraph.from_networkx(g)


def _diamond(offset: int) -> list[tuple[int, int]]:
    a, b, c, d = (offset + i for i in range(4))
    # K4 minus the edge a-d; a and d have degree two
    return [(a, b), (a, c), (b, c), (b, d), (c, d)]


def two_diamonds() -> PlanarMultigraph:
    g = nx.Graph(_diamond(0) + _diamond(4) + [(0, 4), (3, 7)])
    return PlanarMultigraph.from_networkx(g)


def _subdivided_k4(offset: int) -> list[tuple[int, int]]:
    a, b, c, d, s = (offset + i for i in range(5))
    return [(a, c), (a, d), (b, c), (b, d), (c, d), (a, s), (s, b)]


def bridged() -> PlanarMultigraph:
    """Two K4s, each with one edge subdivided, joined by an edge between the
    subdivision vertices (a bridge)."""
    g = nx.Graph(_subdivided_k4(0) + _subdivided_k4(5) + [(4, 9)])
    return PlanarMultigraph.from_networkx(g)


def diamond_ring(k: int) -> PlanarMultigraph:
    """k diamonds in a cycle, each joined to the next through its degree-2 vertices."""
    if k < 2:
        raise ValueError("diamond ring needs k >= 2")
    edges = []
    for i in range(k):
        edges += _diamond(4 * i)
        edges.append((4 * i + 3, (4 * i + 4) % (4 * k)))
    return PlanarMultigraph.from_networkx(nx.Graph(edges))


def necklace(k: int) -> PlanarMultigraph:
    """k digons (double edges) in a cycle; every split piece is a theta graph.

    Digon i has vertices 2i and 2i+1 joined by an outer edge (darts 6i, 6i+1)
    and an inner edge (6i+2, 6i+3); darts 6i+4, 6i+5 link 2i+1 to 2i+2.
    """
    if k < 2:
        raise ValueError("necklace needs k >= 2")
    n = 2 * k
    edges, rotations = [], {}
    for i in range(k):
        u, v = 2 * i, 2 * i + 1
        edges += [(u, v), (u, v), (v, (v + 1) % n)]
        back = 6 * ((i - 1) % k) + 5
        rotations[u] = [6 * i, back, 6 * i + 2]
        rotations[v] = [6 * i + 4, 6 * i + 1, 6 * i + 3]
    return PlanarMultigraph.from_edges_and_rotations(edges, rotations)


def random_two_connected(n_points: int, seed: int | None = None, splices: int = 2) -> PlanarMultigraph:
    """Random cubic graph with a few edges replaced by diamonds, which plants
    2-edge cuts."""
    rng = np.random.default_rng(seed)
    g = random_cubic(n_points, int(rng.integers(2**31))).to_networkx()
    simple = nx.Graph((u, v) for u, v, _ in g.edges(keys=True))
    nxt = max(simple.nodes) + 1
    for _ in range(splices):
        edges = sorted(simple.edges)
        u, v = edges[int(rng.integers(len(edges)))]
        simple.remove_edge(u, v)
        a, b, c, d = nxt, nxt + 1, nxt + 2, nxt + 3
        nxt += 4
        simple.add_edges_from([(a, b), (a, c), (b, c), (b, d), (c, d), (u, a), (d, v)])
    return PlanarMultigraph.from_networkx(simple)


def diamond() -> PlanarMultigraph:
    return PlanarMultigraph.from_networkx(nx.Graph(_diamond(0)))


def wheel(n: int = 5) -> PlanarMultigraph:
    return PlanarMultigraph.from_networkx(nx.wheel_graph(n + 1))


def random_triangulation(n_points: int, seed: int | None = None) -> nx.Graph:
    """Delaunay triangulation of random points plus an apex joined to the hull:
    a maximal planar graph on n_points + 1 vertices."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n_points, 2))
    tri = Delaunay(pts)
    g = nx.Graph()
    for simplex in tri.simplices:
        a, b, c = (int(x) for x in simplex)
        g.add_edges_from([(a, b), (b, c), (c, a)])
    apex = n_points
    for v in np.unique(tri.convex_hull):
        g.add_edge(apex, int(v))
    return g


def random_cubic(n_points: int, seed: int | None = None) -> PlanarMultigraph:
    """Random simple 3-connected cubic planar graph (dual of a random triangulation)."""
    t = PlanarMultigraph.from_networkx(random_triangulation(n_points, seed))
    return dual(t).graph


def random_bridged(seed: int | None = None) -> PlanarMultigraph:
    """Two random cubic pieces, one edge of each subdivided, subdivision vertices
    joined by a planted bridge."""
    rng = np.random.default_rng(seed)
    pieces = []
    offset = 0
    for _ in range(2):
        piece = random_cubic(int(rng.integers(4, 10)), int(rng.integers(2**31)))
        g = piece.to_networkx()
        simple = nx.Graph((u + offset, v + offset) for u, v, _ in g.edges(keys=True))
        edges = sorted(simple.edges)
        u, v = edges[int(rng.integers(len(edges)))]
        s = offset + piece.num_vertices
        simple.remove_edge(u, v)
        simple.add_edges_from([(u, s), (s, v)])
        pieces.append((simple, s))
        offset = s + 1
    g = nx.union(pieces[0][0], pieces[1][0])
    g.add_edge(pieces[0][1], pieces[1][1])
    return PlanarMultigraph.from_networkx(g)


FAMILIES = {
    "theta": theta,
    "k4": k4,
    "cube": cube,
    "prism": prism,
    "truncated_icosahedron": truncated_icosahedron,
    "two_diamonds": two_diamonds,
    "bridged": bridged,
}


def generate(name: str, n: int | None = None, seed: int | None = None) -> PlanarMultigraph:
    """Look up a family by name; ``prism_7`` style names carry their size."""
    if name.startswith("prism"):
        if "_" in name:
            n = int(name.split("_", 1)[1])
        return prism(n or 5)
    if name.startswith("necklace"):
        return necklace(int(name.split("_", 1)[1]) if "_" in name else (n or 3))
    if name.startswith("diamond_ring"):
        return diamond_ring(int(name.rsplit("_", 1)[1]) if name.count("_") == 2 else (n or 3))
    if name == "random_two_connected":
        return random_two_connected(n or 10, seed)
    if name == "random_cubic":
        return random_cubic(n or 10, seed)
    if name == "random_bridged":
        return random_bridged(seed)
    if name not in FAMILIES:
        raise KeyError(f"unknown family {name!r}")
    return FAMILIES[name]()


def realizable_corpus() -> dict[str, PlanarMultigraph]:
    return {
        "theta": theta(),
        "k4": k4(),
        "cube": cube(),
        "prism_5": prism(5),
        "truncated_icosahedron": truncated_icosahedron(),
        "two_diamonds": two_diamonds(),
    }
