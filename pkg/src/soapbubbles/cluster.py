"""Soap bubble clusters: data model, validation, pressures and junction geometry.

A cluster is a set of junction points and arcs; each arc runs between two
junctions through a via point. Arc k contributes darts 2k (from -> to) and
2k + 1 (to -> from) to the extracted graph, whose rotation at each junction
is the counterclockwise order of departing tangents. Faces are traced as in
:mod:`soapbubbles.graph`: the face of dart d lies to its right.

Pressures use unit proportionality: crossing arc k from its left side to its
right side raises the pressure by the signed curvature at its start. The
outer face has pressure zero.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import DEFAULT
from .errors import InconsistentPressures, MalformedCluster, NotPlateau, RayDegeneracy
from .geom import (TWO_PI, CircularArc, GeneralizedCircle, Line, MobiusTransform, circle_through, cross,
                   intersect, is_inf, norm_angle)
from .graph import PlanarMultigraph

THIRD = TWO_PI / 3


@dataclass(frozen=True, eq=False)
class SoapBubbleCluster:
    junctions: dict[int, complex]
    arcs: dict[int, tuple[int, int, complex]]

    def __eq__(self, other):
        if not isinstance(other, SoapBubbleCluster):
            return NotImplemented
        return self.junctions == other.junctions and self.arcs == other.arcs

    __hash__ = None

    def check_structure(self) -> None:
        for k, (a, b, _) in self.arcs.items():
            if a not in self.junctions or b not in self.junctions:
                raise MalformedCluster(f"arc {k} references a missing junction")
            if a == b:
                raise MalformedCluster(f"arc {k} starts and ends at junction {a}")
        try:
            self.geometry
        except ValueError as exc:
            raise MalformedCluster(str(exc)) from exc

    @cached_property
    def geometry(self) -> dict[int, CircularArc]:
        out = {}
        for k, (a, b, via) in sorted(self.arcs.items()):
            try:
                out[k] = CircularArc(self.junctions[a], self.junctions[b], via)
            except ValueError as exc:
                raise MalformedCluster(f"arc {k}: {exc}") from exc
        return out

    @cached_property
    def graph(self) -> PlanarMultigraph:
        return extract_graph(self)

    @property
    def faces(self) -> list[tuple[int, ...]]:
        return self.graph.faces

    @cached_property
    def face_areas(self) -> list[float]:
        return [face_area(self, f) for f in self.faces]

    @property
    def outer_face(self) -> int:
        """Index of the unbounded face (positive signed boundary area)."""
        return self.graph.outer_face

    def degree(self, j: int) -> int:
        return sum((a == j) + (b == j) for a, b, _ in self.arcs.values())

    def scale(self) -> float:
        pts = list(self.junctions.values())
        if len(pts) < 2:
            return 1.0
        xs = [p.real for p in pts] + [b for g in self.geometry.values() for b in g.bbox()[0::2]]
        ys = [p.imag for p in pts] + [b for g in self.geometry.values() for b in g.bbox()[1::2]]
        return max(max(xs) - min(xs), max(ys) - min(ys))


# ---------------------------------------------------------------- extraction


def extract_graph(C: SoapBubbleCluster) -> PlanarMultigraph:
    """One vertex per junction, darts 2k / 2k+1 per arc, rotations from the
    counterclockwise order of departing tangents."""
    for k, (a, b, _) in C.arcs.items():
        if a not in C.junctions or b not in C.junctions:
            raise MalformedCluster(f"arc {k} references a missing junction")
    geo = C.geometry
    leaving: dict[int, list[tuple[float, int]]] = {j: [] for j in C.junctions}
    twin, origin = {}, {}
    for k, (a, b, _) in C.arcs.items():
        arc = geo[k]
        twin[2 * k], twin[2 * k + 1] = 2 * k + 1, 2 * k
        origin[2 * k], origin[2 * k + 1] = a, b
        leaving[a].append((norm_angle(cmath.phase(arc.tangent_at("start"))), 2 * k))
        leaving[b].append((norm_angle(cmath.phase(arc.tangent_at("end"))), 2 * k + 1))
    rotation = {j: tuple(d for _, d in sorted(ds)) for j, ds in leaving.items()}
    g = PlanarMultigraph(rotation, twin, origin)
    if not g.faces:
        return g
    # the unbounded face is the only one traced counterclockwise
    areas = [sum(arc_signed_area(_dart_geometry(C, d)) for d in f) for f in g.faces]
    outer = max(range(len(areas)), key=areas.__getitem__)
    return g.with_outer(g.faces[outer][0])


def arc_signed_area(arc: CircularArc) -> float:
    """Integral of (x dy - y dx) / 2 along the arc."""
    a, b = arc.start, arc.end
    if arc.is_segment:
        return 0.5 * cross(a, b)
    c, r = arc.center, arc.radius
    swept = arc.span if arc.ccw else -arc.span
    return 0.5 * cross(c, b - a) + 0.5 * r * r * swept


def _dart_geometry(C: SoapBubbleCluster, d: int) -> CircularArc:
    arc = C.geometry[d // 2]
    return arc if d % 2 == 0 else arc.reversed()


def face_area(C: SoapBubbleCluster, face: tuple[int, ...]) -> float:
    """Signed area enclosed by a face boundary traced with the face on the right
    (negative for bounded faces)."""
    return sum(arc_signed_area(_dart_geometry(C, d)) for d in face)


def face_polygon(C: SoapBubbleCluster, face: tuple[int, ...], per_arc: int = 64) -> np.ndarray:
    pts = []
    for d in face:
        pts.extend(_dart_geometry(C, d).sample(per_arc)[:-1])
    return np.array(pts, dtype=complex)


def _point_in_polygon(q: complex, poly: np.ndarray) -> bool:
    x, y = poly.real, poly.imag
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    crosses = (y > q.imag) != (y2 > q.imag)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x + (q.imag - y) * (x2 - x) / (y2 - y)
    return bool(np.count_nonzero(crosses & (q.real < xint)) % 2)


def interior_point(C: SoapBubbleCluster, face: int) -> complex:
    """A point well inside a bounded face (or the unbounded one), away from
    every arc."""
    f = C.faces[face]
    poly = face_polygon(C, f)
    everything = np.concatenate([np.array(g.sample(64)) for g in C.geometry.values()])
    outer = face == C.outer_face
    best, best_clear = None, -1.0
    for d in f:
        arc = _dart_geometry(C, d)
        for t in (0.5, 0.25, 0.75):
            p = arc.point_at(t)
            # right of travel, toward the face
            if arc.is_segment:
                inward = -1j * arc.tangent_at("start")
            else:
                inward = (arc.center - p) / abs(arc.center - p)
                if arc.ccw:
                    inward = -inward
            for step in np.geomspace(1e-4, 1.0, 25) * arc.diameter():
                q = p + step * inward
                inside = _point_in_polygon(q, poly)
                if inside == outer:
                    continue
                clear = float(np.min(np.abs(everything - q)))
                if clear > best_clear:
                    best, best_clear = q, clear
    if best is None:
        raise MalformedCluster(f"no interior point found for face {face}")
    return best


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    angle_residuals: dict[int, float]
    curvature_residuals: dict[int, float]
    crossings: list[tuple[int, int]]
    degree_violations: list[int]
    same_face_arcs: list[int]
    embedding_ok: bool
    angle_tol: float
    curv_tol: float

    @property
    def max_angle_residual(self) -> float:
        return max(self.angle_residuals.values(), default=0.0)

    @property
    def max_curvature_residual(self) -> float:
        return max(self.curvature_residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return (self.embedding_ok and not self.crossings and not self.degree_violations
                and not self.same_face_arcs and self.max_angle_residual <= self.angle_tol
                and self.max_curvature_residual <= self.curv_tol)

    def __bool__(self) -> bool:
        return self.passed

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "max_angle_residual": self.max_angle_residual,
            "max_curvature_residual": self.max_curvature_residual,
            "crossings": [list(c) for c in self.crossings],
            "degree_violations": self.degree_violations,
            "same_face_arcs": self.same_face_arcs,
            "embedding_ok": self.embedding_ok,
            "angle_tol": self.angle_tol,
            "curv_tol": self.curv_tol,
        }


def _ends_at(C: SoapBubbleCluster, j: int) -> list[tuple[CircularArc, str]]:
    out = []
    for k, (a, b, _) in sorted(C.arcs.items()):
        if a == j:
            out.append((C.geometry[k], "start"))
        if b == j:
            out.append((C.geometry[k], "end"))
    return out


def junction_residuals(C: SoapBubbleCluster, j: int) -> tuple[float, float]:
    """(max |angle - 2pi/3|, |sum of signed curvatures|) at a degree-3 junction."""
    ends = _ends_at(C, j)
    angles = sorted(norm_angle(cmath.phase(arc.tangent_at(w))) for arc, w in ends)
    gaps = [angles[1] - angles[0], angles[2] - angles[1], TWO_PI - angles[2] + angles[0]]
    curv = sum(arc.signed_curvature_at(w) for arc, w in ends)
    return max(abs(g - THIRD) for g in gaps), abs(curv)


def find_crossings(C: SoapBubbleCluster, tol: float = DEFAULT.geom) -> list[tuple[int, int]]:
    """Pairs of arcs meeting anywhere other than at a shared junction."""
    geo = C.geometry
    ids = sorted(geo)
    boxes = {k: geo[k].bbox() for k in ids}
    scale = max(C.scale(), 1e-300)
    out = []
    for i, k1 in enumerate(ids):
        x0, y0, x1, y1 = boxes[k1]
        a1 = geo[k1]
        ends1 = set(C.arcs[k1][:2])
        for k2 in ids[i + 1:]:
            u0, v0, u1, v1 = boxes[k2]
            pad = tol * scale
            if u0 > x1 + pad or x0 > u1 + pad or v0 > y1 + pad or y0 > v1 + pad:
                continue
            a2 = geo[k2]
            shared = [C.junctions[j] for j in ends1 & set(C.arcs[k2][:2])]
            if _arcs_cross(a1, a2, shared, tol):
                out.append((k1, k2))
    return out


def _same_support(g1: GeneralizedCircle, g2: GeneralizedCircle, tol: float) -> bool:
    if isinstance(g1, Line) != isinstance(g2, Line):
        return False
    if isinstance(g1, Line):
        return abs(abs((g1.normal.conjugate() * g2.normal).real) - 1) <= tol and g1.distance(g2.base) <= tol
    return abs(g1.center - g2.center) <= tol * g1.radius and abs(g1.radius - g2.radius) <= tol * g1.radius


def _arcs_cross(a1: CircularArc, a2: CircularArc, shared: list[complex], tol: float) -> bool:
    size = min(a1.diameter(), a2.diameter())
    near = 1e-6 * size

    def is_shared(p):
        return any(abs(p - s) <= near for s in shared)

    if _same_support(a1.support, a2.support, tol):
        probes = [a2.midpoint, a2.point_at(0.25), a2.point_at(0.75)]
        probes += [a1.midpoint, a1.point_at(0.25), a1.point_at(0.75)]
        return any(a1.contains(p, tol * size) and a2.contains(p, tol * size) for p in probes)
    pts, _ = intersect(a1.support, a2.support, tol=tol * size)
    for p in pts:
        if is_shared(p):
            continue
        if a1.contains(p, near) and a2.contains(p, near):
            return True
    return False


def validate(C: SoapBubbleCluster, angle_tol: float = DEFAULT.angle, curv_tol: float = DEFAULT.curvature,
             crossing_tol: float = DEFAULT.geom) -> ValidationReport:
    """Plateau angles, zero curvature sums, crossings, degrees and two-sidedness.

    Geometric failures are reported, never raised; only dangling references
    raise MalformedCluster.
    """
    C.check_structure()
    degree_bad = sorted(j for j in C.junctions if C.degree(j) != 3)
    angle_res, curv_res = {}, {}
    for j in sorted(C.junctions):
        if C.degree(j) == 3:
            angle_res[j], curv_res[j] = junction_residuals(C, j)
    g = C.graph
    embedding_ok = g.is_connected() and g.euler_characteristic() == 2 if C.arcs else False
    same = sorted(k for k in C.arcs if g.face_of[2 * k] == g.face_of[2 * k + 1])
    areas = C.face_areas
    if embedding_ok and sum(a > 0 for a in areas) != 1:
        embedding_ok = False
    return ValidationReport(angle_res, curv_res, find_crossings(C, crossing_tol), degree_bad, same,
                            embedding_ok, angle_tol, curv_tol)


# ---------------------------------------------------------------- pressures


@dataclass(frozen=True)
class PressureAssignment:
    pressures: dict[int, float]
    outer_face: int
    max_residual: float
    faces: list[tuple[int, ...]] = field(default_factory=list)


def assign_pressures(C: SoapBubbleCluster, tol: float = DEFAULT.curvature, rng=None) -> PressureAssignment:
    """Propagate pressures across arcs from the outer face (pressure 0) and
    check every remaining arc against the accumulated values.

    ``rng`` (a numpy Generator) shuffles the traversal order; the result must
    not depend on it.
    """
    g = C.graph
    geo = C.geometry
    outer = C.outer_face
    step = {}
    adj: dict[int, list[tuple[int, int, float]]] = {i: [] for i in range(len(g.faces))}
    for k in sorted(C.arcs):
        right, left = g.face_of[2 * k], g.face_of[2 * k + 1]
        jump = geo[k].signed_curvature_at("start")
        step[k] = (right, left, jump)
        adj[left].append((k, right, jump))
        adj[right].append((k, left, -jump))
    if rng is not None:
        for lst in adj.values():
            rng.shuffle(lst)
    pressure = {outer: 0.0}
    queue = deque([outer])
    while queue:
        f = queue.popleft() if rng is None or rng.random() < 0.5 else queue.pop()
        for k, other, jump in adj[f]:
            if other not in pressure:
                pressure[other] = pressure[f] + jump
                queue.append(other)
    worst = 0.0
    for k in sorted(C.arcs):
        right, left, jump = step[k]
        res = abs(pressure[right] - pressure[left] - jump)
        worst = max(worst, res)
        if res > tol:
            raise InconsistentPressures(k, res)
    return PressureAssignment(dict(sorted(pressure.items())), outer, worst, list(g.faces))


# ---------------------------------------------------------------- junction geometry


@dataclass(frozen=True)
class ArcEnd:
    """An arc leaving a junction: unit departing tangent and signed curvature
    (positive when it turns clockwise)."""

    tangent: complex
    curvature: float

    def center(self, X: complex) -> complex | None:
        if self.curvature == 0.0:
            return None
        return X + (-1j * self.tangent) / self.curvature

    def support(self, X: complex) -> GeneralizedCircle:
        if self.curvature == 0.0:
            return circle_through(X, X + self.tangent, X + 2 * self.tangent)
        c = self.center(X)
        return circle_through(X, 2 * c - X, c + 1j * (X - c))


@dataclass(frozen=True)
class JunctionGeometry:
    point: complex
    ends: tuple[ArcEnd, ArcEnd, ArcEnd]

    @classmethod
    def from_curvatures(cls, point: complex, curvatures, heading: float = 0.0) -> "JunctionGeometry":
        """Three arcs leaving ``point`` at headings heading + 2pi i / 3."""
        ends = tuple(ArcEnd(cmath.exp(1j * (heading + i * THIRD)), float(k)) for i, k in enumerate(curvatures))
        return cls(point, ends)

    @classmethod
    def from_cluster(cls, C: SoapBubbleCluster, j: int) -> "JunctionGeometry":
        ends = _ends_at(C, j)
        if len(ends) != 3:
            raise MalformedCluster(f"junction {j} has degree {len(ends)}")
        return cls(C.junctions[j], tuple(ArcEnd(a.tangent_at(w), a.signed_curvature_at(w)) for a, w in ends))

    def angle_residual(self) -> float:
        angles = sorted(norm_angle(cmath.phase(e.tangent)) for e in self.ends)
        gaps = [angles[1] - angles[0], angles[2] - angles[1], TWO_PI - angles[2] + angles[0]]
        return max(abs(g - THIRD) for g in gaps)

    def centers(self) -> list[complex | None]:
        return [e.center(self.point) for e in self.ends]

    def supports(self) -> list[GeneralizedCircle]:
        return [e.support(self.point) for e in self.ends]


@dataclass(frozen=True)
class JunctionConditions:
    curvature_sum_zero: bool
    centers_collinear: bool
    two_triple_crossings: bool
    curvature_sum: float
    collinearity_residual: float
    crossing_residual: float
    second_crossing: complex


def check_junction_conditions(J: JunctionGeometry, tol: float = 1e-8, angle_tol: float = DEFAULT.angle) -> JunctionConditions:
    """Evaluate the three equivalent junction conditions.

    Collinearity is tested in homogeneous coordinates, so a segment's center
    is the point at infinity perpendicular to it. Triple crossings are found
    after inverting about the junction, where the three supports become
    lines Re(conj(n_i) w) = k_i / 2 with n_i the unit normals.
    """
    if J.angle_residual() > angle_tol:
        raise NotPlateau(f"junction angles off by {J.angle_residual():.3e}")
    ks = [e.curvature for e in J.ends]
    normals = [-1j * e.tangent for e in J.ends]
    total = sum(ks)
    rows = np.array([[n.real, n.imag, k] for n, k in zip(normals, ks)])
    rows /= np.linalg.norm(rows, axis=1)[:, None]
    collinear = abs(float(np.linalg.det(rows)))
    n1, n2, n3 = normals
    det = n1.real * n2.imag - n1.imag * n2.real
    w = complex((ks[0] / 2 * n2.imag - n1.imag * ks[1] / 2) / det,
                (n1.real * ks[1] / 2 - n2.real * ks[0] / 2) / det)
    crossing = abs((n3.conjugate() * w).real - ks[2] / 2)
    second = complex(math.inf, math.inf) if w == 0 else J.point + 1 / w.conjugate()
    kmax = max(1.0, max(abs(k) for k in ks))
    return JunctionConditions(abs(total) <= tol * kmax, collinear <= tol, crossing <= tol * kmax,
                              total, collinear, crossing, second)


def zero_sum_identity_residual(r1: float, r2: float, r3: float) -> float:
    """Relative residual of r1 r2 + r2 r3 = r1 r3 (curvature signs +, -, +)."""
    return abs(r1 * r2 + r2 * r3 - r1 * r3) / abs(r1 * r3)


# ---------------------------------------------------------------- transforms


def transform_cluster(T: MobiusTransform, C: SoapBubbleCluster, recenter_vias: bool = False) -> SoapBubbleCluster:
    """Image of the cluster under T.

    Vias are mapped pointwise, or moved to the image arcs' midpoints with
    ``recenter_vias`` (better conditioned after strong shrinking).
    """
    pole = T.pole
    junctions = {}
    for j, p in C.junctions.items():
        if not is_inf(pole) and abs(p - pole) <= 1e-10 * max(C.scale(), 1e-300):
            raise RayDegeneracy(f"pole at junction {j}")
        junctions[j] = T.apply_point(p)
    arcs = {}
    for k, (a, b, _) in C.arcs.items():
        image = T.apply_arc(C.geometry[k])
        arcs[k] = (a, b, image.midpoint if recenter_vias else image.via)
    return SoapBubbleCluster(junctions, arcs)


def similarity(C: SoapBubbleCluster, scale: float, shift: complex) -> SoapBubbleCluster:
    """z -> scale * z + shift."""
    return SoapBubbleCluster({j: scale * p + shift for j, p in C.junctions.items()},
                             {k: (a, b, scale * v + shift) for k, (a, b, v) in C.arcs.items()})


def normalize_cluster(C: SoapBubbleCluster) -> SoapBubbleCluster:
    """Similarity putting the bounding box center at the origin with its larger
    side equal to 2."""
    boxes = [g.bbox() for g in C.geometry.values()]
    if not boxes:
        return C
    x0 = min(b[0] for b in boxes)
    y0 = min(b[1] for b in boxes)
    x1 = max(b[2] for b in boxes)
    y1 = max(b[3] for b in boxes)
    s = 2.0 / max(x1 - x0, y1 - y0)
    mid = complex(x0 + x1, y0 + y1) / 2
    return similarity(C, s, -s * mid)
