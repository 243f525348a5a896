"""Embedded planar multigraphs as rotation systems of darts.

Rotations list the darts leaving a vertex in counterclockwise order. The face
to the right of dart d continues with ``succ(twin(d))``, so bounded faces are
traced clockwise and every dart lies on exactly one face.

Edges are named by the smaller of their two dart ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import networkx as nx

from .errors import AlreadyThreeConnected, MalformedEmbedding, SelfLoopRejected


@dataclass(frozen=True, eq=False)
class PlanarMultigraph:
    rotation: dict[int, tuple[int, ...]]
    twin: dict[int, int]
    origin: dict[int, int]
    outer_dart: int | None = None

    def __eq__(self, other):
        if not isinstance(other, PlanarMultigraph):
            return NotImplemented
        return (self.rotation == other.rotation and self.twin == other.twin
                and self.origin == other.origin)

    __hash__ = None

    # -- basic structure

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rotation)

    @property
    def darts(self) -> list[int]:
        return sorted(self.twin)

    @cached_property
    def _position(self) -> dict[int, tuple[int, int]]:
        return {d: (v, i) for v, rot in self.rotation.items() for i, d in enumerate(rot)}

    def succ(self, d: int) -> int:
        """Next dart counterclockwise around origin(d)."""
        v, i = self._position[d]
        rot = self.rotation[v]
        return rot[(i + 1) % len(rot)]

    def pred(self, d: int) -> int:
        v, i = self._position[d]
        rot = self.rotation[v]
        return rot[(i - 1) % len(rot)]

    def head(self, d: int) -> int:
        return self.origin[self.twin[d]]

    def edge_id(self, d: int) -> int:
        return min(d, self.twin[d])

    @cached_property
    def edges(self) -> dict[int, tuple[int, int]]:
        """edge id -> (origin of the smaller dart, its head)."""
        return {d: (self.origin[d], self.head(d)) for d in self.darts if d < self.twin[d]}

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    @property
    def num_vertices(self) -> int:
        return len(self.rotation)

    @property
    def num_edges(self) -> int:
        return len(self.twin) // 2

    def neighbors(self, v: int) -> list[int]:
        return [self.head(d) for d in self.rotation[v]]

    def next_in_face(self, d: int) -> int:
        return self.succ(self.twin[d])

    # -- faces

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        return face_cycles(self)

    @cached_property
    def face_of(self) -> dict[int, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f}

    @property
    def outer_face(self) -> int:
        d = self.outer_dart if self.outer_dart is not None else min(self.twin)
        return self.face_of[d]

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + len(self.faces)

    # -- predicates

    def is_connected(self) -> bool:
        if not self.rotation:
            return False
        start = next(iter(self.rotation))
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.rotation)

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges.values():
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def check(self) -> None:
        """Raise MalformedEmbedding / SelfLoopRejected unless the structural
        invariants hold (involution, rotations, connectivity, Euler)."""
        for d, t in self.twin.items():
            if t == d:
                raise MalformedEmbedding(f"dart {d} is its own twin")
            if self.twin.get(t) != d:
                raise MalformedEmbedding(f"twin(twin({d})) != {d}")
            if d not in self.origin:
                raise MalformedEmbedding(f"dart {d} has no origin")
        listed = [d for rot in self.rotation.values() for d in rot]
        if len(listed) != len(set(listed)):
            raise MalformedEmbedding("a dart appears in more than one rotation slot")
        if set(listed) != set(self.twin):
            raise MalformedEmbedding("rotations do not cover exactly the darts")
        for v, rot in self.rotation.items():
            for d in rot:
                if self.origin[d] != v:
                    raise MalformedEmbedding(f"dart {d} listed at {v} but originates at {self.origin[d]}")
        for d in self.twin:
            if self.origin[d] == self.head(d):
                raise SelfLoopRejected(f"self-loop at vertex {self.origin[d]} (edge {self.edge_id(d)})")
        if self.outer_dart is not None and self.outer_dart not in self.twin:
            raise MalformedEmbedding(f"outer dart {self.outer_dart} does not exist")
        if not self.is_connected():
            raise MalformedEmbedding("graph is not connected")
        if self.euler_characteristic() != 2:
            raise MalformedEmbedding(f"rotation system is not planar (V-E+F = {self.euler_characteristic()})")

    # -- constructors

    @classmethod
    def from_edges_and_rotations(cls, edges: list[tuple[int, int]], rotations: dict[int, list[int]],
                                 outer_dart: int | None = None) -> "PlanarMultigraph":
        """Edge i = (u, v) gets darts 2i (u -> v) and 2i+1 (v -> u); rotations
        list dart ids around each vertex counterclockwise."""
        twin, origin = {}, {}
        for i, (u, v) in enumerate(edges):
            twin[2 * i], twin[2 * i + 1] = 2 * i + 1, 2 * i
            origin[2 * i], origin[2 * i + 1] = u, v
        return cls({v: tuple(r) for v, r in rotations.items()}, twin, origin, outer_dart)

    @classmethod
    def from_networkx(cls, g: nx.Graph, outer_dart: int | None = None) -> "PlanarMultigraph":
        """Embed a simple planar networkx graph (vertices relabelled 0..n-1 in sorted order)."""
        nodes = sorted(g.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        ok, emb = nx.check_planarity(g)
        if not ok:
            raise MalformedEmbedding("graph is not planar")
        edges = sorted((min(index[u], index[v]), max(index[u], index[v])) for u, v in g.edges)
        dart_of = {}
        for i, (u, v) in enumerate(edges):
            dart_of[(u, v)] = 2 * i
            dart_of[(v, u)] = 2 * i + 1
        rotations = {}
        for v in nodes:
            cw = list(emb.neighbors_cw_order(v))
            rotations[index[v]] = [dart_of[(index[v], index[w])] for w in reversed(cw)]
        return cls.from_edges_and_rotations(edges, rotations, outer_dart)

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.rotation)
        for e, (u, v) in self.edges.items():
            g.add_edge(u, v, key=e)
        return g

    def with_outer(self, outer_dart: int | None) -> "PlanarMultigraph":
        return PlanarMultigraph(self.rotation, self.twin, self.origin, outer_dart)

    def mirror(self) -> "PlanarMultigraph":
        return PlanarMultigraph({v: tuple(reversed(r)) for v, r in self.rotation.items()},
                                self.twin, self.origin, self.outer_dart)

    def relabel(self, vertex_map: dict[int, int], dart_map: dict[int, int]) -> "PlanarMultigraph":
        return PlanarMultigraph(
            {vertex_map[v]: tuple(dart_map[d] for d in r) for v, r in self.rotation.items()},
            {dart_map[d]: dart_map[t] for d, t in self.twin.items()},
            {dart_map[d]: vertex_map[v] for d, v in self.origin.items()},
            None if self.outer_dart is None else dart_map[self.outer_dart],
        )


def face_cycles(g: PlanarMultigraph) -> list[tuple[int, ...]]:
    """Orbits of d -> succ(twin(d)), each starting at its smallest dart, in
    increasing order of that dart."""
    seen: set[int] = set()
    faces = []
    for d0 in g.darts:
        if d0 in seen:
            continue
        cycle = []
        d = d0
        while d not in seen:
            seen.add(d)
            cycle.append(d)
            d = g.next_in_face(d)
        if d != d0:
            raise MalformedEmbedding("face traversal is not a permutation")
        faces.append(tuple(cycle))
    return faces


# ---------------------------------------------------------------- bridges


def bridges(g: PlanarMultigraph, removed: Iterable[int] = ()) -> list[int]:
    """Edge ids of bridges (low-link DFS), ignoring the given edges."""
    skip = set(removed)
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in g.rotation}
    for e, (u, v) in g.edges.items():
        if e in skip:
            continue
        adj[u].append((v, e))
        adj[v].append((u, e))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out = []
    counter = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, e in it:
                if e == via:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        out.append(via)
    return sorted(out)


@dataclass(frozen=True)
class CubicReport:
    is_3_regular: bool
    is_connected: bool
    bridges: list[int]
    is_planar_embedding: bool
    has_self_loop: bool = False

    @property
    def realizable(self) -> bool:
        return self.is_3_regular and self.is_connected and not self.bridges and self.is_planar_embedding

    @property
    def reason(self) -> str | None:
        if not self.is_3_regular:
            return "not 3-regular"
        if not self.is_connected:
            return "disconnected"
        if self.bridges:
            return "has bridge"
        if not self.is_planar_embedding:
            return "bad embedding"
        return None


def check_cubic_bridgeless(g: PlanarMultigraph) -> CubicReport:
    regular = all(len(r) == 3 for r in g.rotation.values())
    connected = g.is_connected()
    loops = any(g.origin[d] == g.head(d) for d in g.twin)
    try:
        planar = connected and g.euler_characteristic() == 2
    except MalformedEmbedding:
        planar = False
    return CubicReport(regular, connected, bridges(g) if connected else [], planar, loops)


# ---------------------------------------------------------------- duality


@dataclass(frozen=True)
class DualGraph:
    """Dual vertex i is face i of the primal; dual dart d crosses primal dart d
    from its right face to its left face."""

    graph: PlanarMultigraph
    primal: PlanarMultigraph

    def face_darts(self, v: int) -> tuple[int, ...]:
        return self.primal.faces[v]

    def edge_map(self) -> dict[int, int]:
        return {e: e for e in self.primal.edges}


def dual(g: PlanarMultigraph) -> DualGraph:
    if not g.is_connected():
        raise MalformedEmbedding("dual of a disconnected graph")
    faces = g.faces
    origin = {d: g.face_of[d] for d in g.darts}
    rotation = {i: tuple(reversed(f)) for i, f in enumerate(faces)}
    return DualGraph(PlanarMultigraph(rotation, dict(g.twin), origin), g)


# ---------------------------------------------------------------- connectivity


def is_three_connected(g: PlanarMultigraph) -> bool:
    """No pair of vertices whose removal disconnects the graph (brute force)."""
    vs = g.vertices
    if len(vs) <= 3:
        return g.is_connected()
    adj = {v: set(g.neighbors(v)) for v in vs}
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            rest = [v for v in vs if v != a and v != b]
            seen = {rest[0]}
            queue = deque([rest[0]])
            while queue:
                v = queue.popleft()
                for w in adj[v]:
                    if w != a and w != b and w not in seen:
                        seen.add(w)
                        queue.append(w)
            if len(seen) != len(rest):
                return False
    return True


def two_edge_cuts(g: PlanarMultigraph) -> list[tuple[int, int]]:
    """All pairs of edges (e < f) whose removal disconnects a bridgeless graph."""
    cuts = []
    for e in sorted(g.edges):
        for f in bridges(g, removed=[e]):
            if f > e:
                cuts.append((e, f))
    return cuts


@dataclass(frozen=True)
class SeparationSplit:
    """Split of a cubic graph along the 2-edge cut {e1, e2}.

    e1 runs a1 -> b1 and e2 runs a2 -> b2 with a1, a2 on side A. Each side is
    closed up with a virtual edge reusing the cut darts, so both parts stay
    cubic and inherit the embedding. ``pair`` is the separation pair {a1, a2}.
    """

    cut_edges: tuple[int, int]
    pair: tuple[int, int]
    far_pair: tuple[int, int]
    parts: tuple[PlanarMultigraph, PlanarMultigraph]
    # darts (a1->a2, a2->a1) in A and (b1->b2, b2->b1) in B
    virtual_darts: tuple[tuple[int, int], tuple[int, int]]

    @property
    def virtual_edges(self) -> tuple[int, int]:
        (d1, d2), (t1, t2) = self.virtual_darts
        return min(d1, d2), min(t1, t2)


def find_separation_pair(g: PlanarMultigraph) -> SeparationSplit | None:
    """Split along the lexicographically smallest 2-edge cut.

    Raises AlreadyThreeConnected when there is none.
    """
    cuts = two_edge_cuts(g)
    if not cuts:
        raise AlreadyThreeConnected("graph has no 2-edge cut")
    return split_along(g, *cuts[0])


def split_along(g: PlanarMultigraph, e1: int, e2: int) -> SeparationSplit:
    adj: dict[int, list[int]] = {v: [] for v in g.rotation}
    for e, (u, v) in g.edges.items():
        if e in (e1, e2):
            continue
        adj[u].append(v)
        adj[v].append(u)
    u1, w1 = g.edges[e1]
    # side A holds the smaller endpoint of e1
    start = min(u1, w1)
    side = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in side:
                side.add(w)
                queue.append(w)
    d1 = e1 if g.origin[e1] in side else g.twin[e1]
    d2 = e2 if g.origin[e2] in side else g.twin[e2]
    a1, b1 = g.origin[d1], g.head(d1)
    a2, b2 = g.origin[d2], g.head(d2)
    if b1 in side or b2 in side or a2 not in side:
        raise MalformedEmbedding("edges do not form a 2-edge cut")
    t1, t2 = g.twin[d1], g.twin[d2]

    other = set(g.rotation) - side
    A = _part(g, side, [(d1, d2)])
    B = _part(g, other, [(t1, t2)])
    return SeparationSplit((e1, e2), (a1, a2), (b1, b2), (A, B), ((d1, d2), (t1, t2)))


def merge_split(split: SeparationSplit, A: PlanarMultigraph | None = None,
                B: PlanarMultigraph | None = None) -> PlanarMultigraph:
    """Undo a split: identify the two virtual edges and delete them."""
    A = A or split.parts[0]
    B = B or split.parts[1]
    (d1, d2), (t1, t2) = split.virtual_darts
    twin = {**A.twin, **B.twin}
    twin[d1], twin[t1] = t1, d1
    twin[d2], twin[t2] = t2, d2
    return PlanarMultigraph({**A.rotation, **B.rotation}, twin, {**A.origin, **B.origin})


def cut_classes(g: PlanarMultigraph) -> list[list[int]]:
    """Classes of edges that pairwise form 2-edge cuts.

    In a bridgeless graph, lying in a common 2-edge cut is an equivalence
    relation; removing a class of m edges leaves m pieces in a cycle.
    """
    parent: dict[int, int] = {}

    def find(e):
        while parent.setdefault(e, e) != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for e, f in two_edge_cuts(g):
        parent[find(f)] = find(e)
    classes: dict[int, list[int]] = {}
    for e in parent:
        classes.setdefault(find(e), []).append(e)
    return sorted(sorted(c) for c in classes.values())


@dataclass(frozen=True)
class SeparationCycle:
    """Split of a cubic graph along a full class of 2-edge cuts.

    Piece i is entered at p_i and left at q_i; cut edge c_i runs from q_i to
    p_{i+1} (indices mod m). Each piece is closed up with a virtual edge made
    of its two cut darts: dp_i (p_i -> q_i) and dq_i (q_i -> p_i), where in the
    original graph dq_i is the dart of c_i at q_i and dp_i that of c_{i-1}
    at p_i.
    """

    cut_edges: tuple[int, ...]
    parts: tuple[PlanarMultigraph, ...]
    ends: tuple[tuple[int, int], ...]
    virtual_darts: tuple[tuple[int, int], ...]

    @property
    def virtual_edges(self) -> tuple[int, ...]:
        return tuple(min(pair) for pair in self.virtual_darts)

    def __len__(self) -> int:
        return len(self.parts)


def _part(g: PlanarMultigraph, vertices, joins) -> PlanarMultigraph:
    darts = [d for v in vertices for d in g.rotation[v]]
    twin = {d: g.twin[d] for d in darts}
    for x, y in joins:
        twin[x], twin[y] = y, x
    return PlanarMultigraph({v: g.rotation[v] for v in sorted(vertices)}, twin,
                            {d: g.origin[d] for d in darts})


def split_cycle(g: PlanarMultigraph, edges) -> SeparationCycle:
    removed = set(edges)
    comp: dict[int, int] = {}
    members: list[list[int]] = []
    for v in g.vertices:
        if v in comp:
            continue
        comp[v] = len(members)
        members.append([v])
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for d in g.rotation[x]:
                if g.edge_id(d) in removed:
                    continue
                y = g.head(d)
                if y not in comp:
                    comp[y] = comp[v]
                    members[-1].append(y)
                    queue.append(y)
    leaving: dict[int, list[int]] = {i: [] for i in range(len(members))}
    for e in removed:
        for d in (e, g.twin[e]):
            leaving[comp[g.origin[d]]].append(d)
    if len(members) != len(removed) or any(len(ds) != 2 for ds in leaving.values()):
        raise MalformedEmbedding("edges do not form a cycle of 2-edge cuts")
    order, ends, vdarts, cuts = [], [], [], []
    i = comp[g.vertices[0]]
    dp = max(leaving[i])
    while len(order) < len(members):
        if i in order:
            raise MalformedEmbedding("cut pieces do not form a single cycle")
        dq = next(d for d in leaving[i] if d != dp)
        order.append(i)
        ends.append((g.origin[dp], g.origin[dq]))
        vdarts.append((dp, dq))
        cuts.append(g.edge_id(dq))
        dp = g.twin[dq]
        i = comp[g.origin[dp]]
    if i != order[0]:
        raise MalformedEmbedding("cut pieces do not form a single cycle")
    parts = tuple(_part(g, members[i], [vd]) for i, vd in zip(order, vdarts))
    return SeparationCycle(tuple(cuts), parts, tuple(ends), tuple(vdarts))


def merge_cycle(sc: SeparationCycle, parts=None) -> PlanarMultigraph:
    """Undo a cycle split: reconnect consecutive pieces through their cut darts."""
    parts = parts or sc.parts
    twin, rotation, origin = {}, {}, {}
    for part in parts:
        twin.update(part.twin)
        rotation.update(part.rotation)
        origin.update(part.origin)
    m = len(parts)
    for i in range(m):
        dq = sc.virtual_darts[i][1]
        dp_next = sc.virtual_darts[(i + 1) % m][0]
        twin[dq], twin[dp_next] = dp_next, dq
    return PlanarMultigraph(rotation, twin, origin)


@dataclass
class DecompositionNode:
    """Node of the decomposition tree.

    Leaves are P (theta) or R (simple 3-connected) components. An S node
    holds a :class:`SeparationCycle`; its cycle alternates the pieces'
    virtual edges with the cut edges.
    """

    kind: str
    graph: PlanarMultigraph
    split: SeparationCycle | None = None
    children: list["DecompositionNode"] = field(default_factory=list)

    @property
    def cycle(self) -> list[tuple[int, bool]]:
        """S-node cycle as (edge id, is_virtual)."""
        out = []
        for v, c in zip(self.split.virtual_edges, self.split.cut_edges):
            out += [(v, True), (c, False)]
        return out

    def leaves(self) -> list["DecompositionNode"]:
        if not self.children:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


def decompose(g: PlanarMultigraph) -> DecompositionNode:
    """Decomposition of a cubic bridgeless graph along classes of 2-edge cuts."""
    if g.num_vertices == 2 and g.num_edges == 3:
        return DecompositionNode("P", g)
    classes = cut_classes(g)
    if not classes:
        if not g.is_simple():
            raise MalformedEmbedding("3-edge-connected multigraph other than the theta graph")
        return DecompositionNode("R", g)
    sc = split_cycle(g, classes[0])
    node = DecompositionNode("S", g, sc, [decompose(p) for p in sc.parts])
    cyc = node.cycle
    if len(cyc) % 2 or any(cyc[i][1] == cyc[(i + 1) % len(cyc)][1] for i in range(len(cyc))):
        raise MalformedEmbedding("S-node does not alternate virtual and real edges")
    return node


def recompose(node: DecompositionNode) -> PlanarMultigraph:
    if not node.children:
        return node.graph
    return merge_cycle(node.split, [recompose(c) for c in node.children])


# ---------------------------------------------------------------- isomorphism


def embedded_isomorphism(g1: PlanarMultigraph, g2: PlanarMultigraph,
                         match_outer: bool = False) -> dict[int, int] | None:
    """Orientation-preserving dart bijection commuting with twin and succ, or None.

    With ``match_outer`` the bijection must also carry the outer face of g1
    onto that of g2.
    """
    if g1.num_vertices != g2.num_vertices or g1.num_edges != g2.num_edges:
        return None
    if sorted(map(len, g1.rotation.values())) != sorted(map(len, g2.rotation.values())):
        return None
    darts1 = g1.darts
    if not darts1:
        return {}
    d0 = darts1[0]
    for cand in g2.darts:
        phi = {d0: cand}
        used = {cand}
        stack = [d0]
        ok = True
        while stack and ok:
            x = stack.pop()
            y = phi[x]
            for a, b in ((g1.twin[x], g2.twin[y]), (g1.succ(x), g2.succ(y))):
                if a in phi:
                    if phi[a] != b:
                        ok = False
                        break
                elif b in used:
                    ok = False
                    break
                else:
                    phi[a] = b
                    used.add(b)
                    stack.append(a)
        if ok and len(phi) == len(darts1):
            if match_outer and g2.face_of[phi[g1.faces[g1.outer_face][0]]] != g2.outer_face:
                continue
            return phi
    return None
