"""Realize 3-regular bridgeless planar multigraphs as soap bubble clusters.

Three cases:

* the theta graph is a standard double bubble;
* a simple 3-connected graph is drawn from a circle packing of its dual: each
  vertex becomes the vertex of the radial-power diagram inside the interstice
  of its three face disks, and each edge the arc between two such junctions
  through the tangency point of its two face disks;
* anything else is split along a 2-edge cut into two cubic pieces, each closed
  up by a virtual edge, realized recursively, and glued: both virtual arcs are
  moved onto the unit circle by Mobius maps that squeeze the rest of each
  piece into a small disk, then the virtual arcs are swapped for the two
  unit-circle arcs joining the pieces.

Junction ids of the output are the vertex ids of the input graph and arc ids
are its edge ids (the smaller dart); arc k runs from the origin of dart k.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .circlepack import CirclePacking, pack
from .cluster import SoapBubbleCluster, interior_point, normalize_cluster, transform_cluster
from .config import DEFAULT
from .diagram import radial_power_distance, triple_points
from .errors import GluingOverlap, JunctionSelectionAmbiguous, NotRealizable
from .geom import TWO_PI, CircularArc, MobiusTransform, is_inf, isodynamic_points, tangency_point
from .graph import (DecompositionNode, PlanarMultigraph, check_cubic_bridgeless, decompose, dual,
                    embedded_isomorphism)

SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------- theta


def realize_theta() -> SoapBubbleCluster:
    """Standard double bubble on junctions (0, 1) and (0, -1).

    Arc 0 is the right side, arc 1 the left side and arc 2 the middle segment,
    all running from junction 0 (top) to junction 1; this extracts to
    :func:`soapbubbles.corpus.theta`.
    """
    return SoapBubbleCluster(
        {0: 1j, 1: -1j},
        {0: (0, 1, complex(SQRT3, 0.0)), 1: (0, 1, complex(-SQRT3, 0.0)), 2: (0, 1, 0j)},
    )


def relabel_onto(C: SoapBubbleCluster, G: PlanarMultigraph, match_outer: bool = True) -> SoapBubbleCluster:
    """Rename junctions and arcs of C after the vertices and edges of an
    embedding-isomorphic graph G."""
    phi = embedded_isomorphism(C.graph, G, match_outer=match_outer)
    if phi is None:
        raise NotRealizable("bad embedding")
    vertex = {}
    arcs = {}
    for k, (a, b, via) in C.arcs.items():
        d = phi[2 * k]
        e = G.edge_id(d)
        vertex[a] = G.origin[d]
        vertex[b] = G.head(d)
        arcs[e] = (G.origin[d], G.head(d), via) if d == e else (G.head(d), G.origin[d], via)
    return SoapBubbleCluster({vertex[j]: p for j, p in C.junctions.items()}, dict(sorted(arcs.items())))


# ---------------------------------------------------------------- 3-connected


@dataclass
class JunctionChoice:
    point: complex
    faces: tuple[int, int, int]
    candidates: tuple[complex, ...]
    isodynamic_error: float


@dataclass
class Realization:
    cluster: SoapBubbleCluster
    packing: CirclePacking
    junctions: dict[int, JunctionChoice]
    # face of G -> its packing disk; arc -> tangency point it passes through
    tangencies: dict[int, complex] = field(default_factory=dict)


def _select_junction(packing: CirclePacking, faces: tuple[int, int, int]) -> tuple[complex, tuple[complex, ...]]:
    """The triple point strictly closer to its three sites than to any other."""
    sites = [packing.disks[f] for f in faces]
    others = [d for v, d in packing.disks.items() if v not in faces]
    candidates = tuple(triple_points(*sites))
    chosen = []
    for p in candidates:
        if is_inf(p):
            continue
        own = max(radial_power_distance(p, s) for s in sites)
        rest = min((radial_power_distance(p, s) for s in others), default=math.inf)
        if own < rest - 1e-12 * (1.0 + abs(own)):
            chosen.append(p)
    if len(chosen) != 1:
        raise JunctionSelectionAmbiguous(f"{len(chosen)} triple points qualify for faces {faces}")
    return chosen[0], candidates


def realize_3connected_detailed(G: PlanarMultigraph, tol: float = DEFAULT.pack) -> Realization:
    D = dual(G)
    packing = pack(D, G.outer_face, tol=tol)
    choices = {}
    for u in G.vertices:
        rot = G.rotation[u]
        faces = tuple(G.face_of[d] for d in rot)
        J, cands = _select_junction(packing, faces)
        tang = [tangency_point(packing.disks[G.face_of[d]], packing.disks[G.face_of[G.twin[d]]]) for d in rot]
        iso = [z for z in isodynamic_points(*tang) if not is_inf(z)]
        err = min(abs(J - z) for z in iso)
        choices[u] = JunctionChoice(J, faces, cands, err)
    arcs, tangencies = {}, {}
    for e, (u, v) in G.edges.items():
        t = tangency_point(packing.disks[G.face_of[e]], packing.disks[G.face_of[G.twin[e]]])
        arcs[e] = (u, v, t)
        tangencies[e] = t
    C = SoapBubbleCluster({u: c.point for u, c in choices.items()}, arcs)
    return Realization(C, packing, choices, tangencies)


def realize_3connected(G: PlanarMultigraph, tol: float = DEFAULT.pack) -> SoapBubbleCluster:
    return realize_3connected_detailed(G, tol).cluster


# ---------------------------------------------------------------- gluing


@dataclass(frozen=True)
class Fragment:
    """A realized piece with the virtual arc it is glued along, traversed x -> y."""

    cluster: SoapBubbleCluster
    arc: int
    x: int
    y: int

    def virtual_geometry(self) -> CircularArc:
        arc = self.cluster.geometry[self.arc]
        return arc if self.cluster.arcs[self.arc][0] == self.x else arc.reversed()

    def body_samples(self, per_arc: int = 33) -> np.ndarray:
        pts = [p for k, g in self.cluster.geometry.items() if k != self.arc for p in g.sample(per_arc)]
        return np.array(pts, dtype=complex)


def _place(frag: Fragment, zeta: complex, w: float) -> tuple[MobiusTransform, float]:
    """Mobius map putting the virtual arc on the unit circle as the long arc
    from zeta e^{-iw} to zeta e^{iw}, squeezed so the rest of the fragment
    stays as close to zeta as possible. Returns the map and the radius of the
    disk around zeta holding the rest.

    Maps fixing both ends and the unit circle form the family h^-1(lam h)
    with h(z) = (z - x') / (z - y'); lam is picked by a grid search plus a
    bounded refinement, preferring lam near 1 on ties.
    """
    arc = frag.virtual_geometry()
    xp, yp = zeta * cmath.exp(-1j * w), zeta * cmath.exp(1j * w)
    M = MobiusTransform.from_points((arc.start, arc.midpoint, arc.end), (xp, -zeta, yp))
    body = frag.body_samples()
    a, b, c, d = M.a, M.b, M.c, M.d
    with np.errstate(divide="ignore", invalid="ignore"):
        mz = (a * body + b) / (c * body + d)
        hz = (mz - xp) / (mz - yp)
    fixed = ~np.isfinite(hz) | (np.abs(mz - xp) <= 1e-12)
    moving = hz[~fixed]
    fixed_radius = max(abs(xp - zeta), abs(yp - zeta))

    def spread(s: float) -> float:
        lam = math.exp(s)
        z = (yp * lam * moving - xp) / (lam * moving - 1)
        return float(np.max(np.abs(z - zeta), initial=fixed_radius))

    grid = np.linspace(-12.0, 12.0, 241)
    values = np.array([spread(s) for s in grid])
    near_best = np.flatnonzero(values <= values.min() * (1 + 1e-9))
    s0 = float(grid[near_best[np.argmin(np.abs(grid[near_best]))]])
    res = optimize.minimize_scalar(spread, bounds=(s0 - 0.1, s0 + 0.1), method="bounded",
                                   options={"xatol": 1e-8})
    s = float(res.x) if res.fun < values.min() else s0
    h = MobiusTransform(1, -xp, 1, -yp)
    shrink = h.inverse() @ MobiusTransform(math.exp(s), 0, 0, 1) @ h
    return shrink @ M, spread(s)


def glue_cycle(fragments: list[Fragment], links: list[tuple[int, int, int]],
               margin: float = 0.1, attempts: int = 10) -> SoapBubbleCluster:
    """Join fragments around the unit circle.

    Fragment i sits in an interval centered at angle 2 pi i / m, its virtual
    arc (x_i -> y_i) becoming the rest of the circle. ``links[i]`` is
    ``(arc id, from, to)`` for the new arc joining y_i to x_{i+1}, drawn
    counterclockwise along the circle, so it leaves both junctions along the
    deleted virtual arcs.
    """
    m = len(fragments)
    thetas = [TWO_PI * i / m for i in range(m)]
    zetas = [cmath.exp(1j * t) for t in thetas]
    w = math.pi / (4 * m)
    for _ in range(attempts):
        placed = [_place(f, z, w) for f, z in zip(fragments, zetas)]
        if all((placed[i][1] + placed[j][1]) * (1 + margin) < abs(zetas[i] - zetas[j])
               for i in range(m) for j in range(i + 1, m)):
            break
        w /= 2
    else:
        raise GluingOverlap(f"fragments still overlap after {attempts} attempts")
    junctions, arcs = {}, {}
    for frag, (T, _) in zip(fragments, placed):
        img = transform_cluster(T, SoapBubbleCluster(
            frag.cluster.junctions, {k: v for k, v in frag.cluster.arcs.items() if k != frag.arc}),
            recenter_vias=True)
        junctions.update(img.junctions)
        arcs.update(img.arcs)
    for i, (k, u, v) in enumerate(links):
        mid = thetas[i] + math.pi / m
        arcs[k] = (u, v, cmath.exp(1j * mid))
    return SoapBubbleCluster(dict(sorted(junctions.items())), dict(sorted(arcs.items())))


# ---------------------------------------------------------------- plans


@dataclass
class RealizationPlan:
    graph: PlanarMultigraph
    tree: DecompositionNode
    fragments: dict[int, SoapBubbleCluster] = field(default_factory=dict)

    def leaf_cluster(self, node: DecompositionNode) -> SoapBubbleCluster:
        return self.fragments[id(node)]


def _realize_leaf(node: DecompositionNode, root: PlanarMultigraph) -> SoapBubbleCluster:
    """Realize a P or R piece.

    Gluing squeezes everything in a piece relative to its virtual arcs, so
    for R pieces the packing's outer face is chosen among the faces touching
    a virtual edge to make the smallest virtual arc as large as possible.
    """
    g = node.graph
    if node.kind == "P":
        return relabel_onto(realize_theta(), g, match_outer=False)
    virtual = [e for e in g.edges if root.twin.get(e) != g.twin[e]]
    faces = sorted({g.face_of[d] for e in virtual for d in (e, g.twin[e])})
    best, best_score = None, -1.0
    for f in faces:
        C = normalize_cluster(realize_3connected(g.with_outer(g.faces[f][0])))
        score = min(C.geometry[e].diameter() for e in virtual)
        if score > best_score:
            best, best_score = C, score
    return best if best is not None else realize_3connected(g)


def build_plan(G: PlanarMultigraph, tree: DecompositionNode | None = None) -> RealizationPlan:
    tree = tree or decompose(G)
    plan = RealizationPlan(G, tree)
    for leaf in tree.leaves():
        plan.fragments[id(leaf)] = _realize_leaf(leaf, G)
    return plan


def _glue_node(plan: RealizationPlan, node: DecompositionNode) -> SoapBubbleCluster:
    if not node.children:
        return plan.leaf_cluster(node)
    sc = node.split
    g = node.graph
    fragments, links = [], []
    m = len(sc)
    for i, child in enumerate(node.children):
        p, q = sc.ends[i]
        fragments.append(Fragment(_glue_node(plan, child), sc.virtual_edges[i], p, q))
        dq = sc.virtual_darts[i][1]
        e = g.edge_id(dq)
        p_next = sc.ends[(i + 1) % m][0]
        links.append((e, q, p_next) if e == dq else (e, p_next, q))
    return glue_cycle(fragments, links)


def glue(plan: RealizationPlan) -> SoapBubbleCluster:
    return _glue_node(plan, plan.tree)


# ---------------------------------------------------------------- entry point


def _outer_dart_face(C: SoapBubbleCluster, G: PlanarMultigraph) -> int:
    d = G.outer_dart if G.outer_dart is not None else min(G.twin)
    e = G.edge_id(d)
    return C.graph.face_of[2 * e if d == e else 2 * e + 1]


def fix_outer_face(C: SoapBubbleCluster, G: PlanarMultigraph) -> SoapBubbleCluster:
    """Make G's designated outer face the unbounded one, by inversion about a
    point inside it when necessary."""
    target = _outer_dart_face(C, G)
    if target != C.outer_face:
        p = interior_point(C, target)
        C = transform_cluster(MobiusTransform(0, 1, 1, -p), C, recenter_vias=True)
    return normalize_cluster(C)


def realize(G: PlanarMultigraph) -> SoapBubbleCluster:
    """A soap bubble cluster whose graph is G, with G's outer face unbounded."""
    report = check_cubic_bridgeless(G)
    if not report.realizable:
        raise NotRealizable(report.reason)
    if G.num_vertices == 2:
        C = relabel_onto(realize_theta(), G, match_outer=False)
    else:
        tree = decompose(G)
        if tree.kind == "R":
            C = realize_3connected(G)
        else:
            C = glue(build_plan(G, tree))
    return fix_outer_face(C, G)
