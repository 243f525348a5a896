"""Circle packing of a maximal planar graph with one disk complement.

The radii are found in the Euclidean plane with one outer triangle of the
triangulation held at unit radii: Collins-Stephenson angle-sum sweeps bring
every other vertex near an angle sum of 2pi, then a Newton solve polishes
the fixed point. The laid-out packing is inverted about the center of the
designated outer vertex, which turns that disk into a complement, and finally
normalized by a Mobius map of the unit disk.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .config import DEFAULT
from .errors import ConvergenceFailure, InputTooSmall, NotTriangulation
from .geom import Disk, MobiusTransform
from .graph import DualGraph, PlanarMultigraph

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class CirclePacking:
    disks: dict[int, Disk]
    outer_vertex: int
    max_angle_error: float
    max_tangency_error: float
    sweeps: int = 0
    polish_shift: float = 0.0   # largest center move made by the final touch-up

    def transformed(self, T: MobiusTransform) -> "CirclePacking":
        return CirclePacking({v: T.apply_disk(d) for v, d in self.disks.items()}, self.outer_vertex,
                             self.max_angle_error, self.max_tangency_error, self.sweeps, self.polish_shift)


@dataclass(frozen=True)
class PackingResiduals:
    max_tangency_error: float
    max_overlap: float
    missing_tangencies: list[tuple[int, int]] = field(default_factory=list)
    extra_tangencies: list[tuple[int, int]] = field(default_factory=list)
    max_angle_error: float = 0.0


def _triangulation(g) -> PlanarMultigraph:
    t = g.graph if isinstance(g, DualGraph) else g
    if t.num_vertices < 4:
        raise InputTooSmall(f"packing needs at least 4 vertices, got {t.num_vertices}")
    if not t.is_simple() or any(len(f) != 3 for f in t.faces):
        raise NotTriangulation("graph is not a simple triangulation")
    return t


def corner_angle(rv: float, ru: float, rw: float) -> float:
    """Angle at v of the triangle of centers of three mutually tangent disks."""
    # half-angle form; stays accurate for very small or very large angles
    return 2.0 * math.atan(math.sqrt(ru * rw / (rv * (rv + ru + rw))))


def _flowers(t: PlanarMultigraph) -> dict[int, list[int]]:
    return {v: t.neighbors(v) for v in t.vertices}


def _angle_sum(v: int, flower: list[int], r: dict[int, float]) -> float:
    rv = r[v]
    k = len(flower)
    return sum(corner_angle(rv, r[flower[i]], r[flower[(i + 1) % k]]) for i in range(k))


def solve_radii(t: PlanarMultigraph, fixed: dict[int, float], tol: float = DEFAULT.pack,
                init: dict[int, float] | None = None, max_sweeps: int = 100_000) -> tuple[dict[int, float], int, float]:
    """Euclidean radii giving angle sum 2pi at every non-fixed vertex."""
    flowers = _flowers(t)
    free = [v for v in t.vertices if v not in fixed]
    r = dict(fixed)
    n = t.num_vertices
    for v in free:
        r[v] = init[v] if init else 1.0 / n

    def residual() -> float:
        return max((abs(_angle_sum(v, flowers[v], r) - TWO_PI) for v in free), default=0.0)

    sweeps = 0
    coarse = max(tol, 1e-7)
    res = residual()
    while res > coarse and sweeps < max_sweeps:
        for v in free:
            k = len(flowers[v])
            theta = _angle_sum(v, flowers[v], r)
            beta = math.sin(theta / (2 * k))
            delta = math.sin(math.pi / k)
            rho = beta / (1 - beta) * r[v]
            r[v] = (1 - delta) / delta * rho
        sweeps += 1
        if sweeps % 10 == 0 or sweeps < 10:
            res = residual()
    if res > tol and free:
        r = _newton(free, flowers, r)
        res = residual()
    while res > tol and sweeps < max_sweeps:
        for v in free:
            k = len(flowers[v])
            theta = _angle_sum(v, flowers[v], r)
            beta = math.sin(theta / (2 * k))
            delta = math.sin(math.pi / k)
            r[v] = (1 - delta) / delta * beta / (1 - beta) * r[v]
        sweeps += 1
        res = residual()
    if res > tol:
        raise ConvergenceFailure(sweeps, res)
    return r, sweeps, res


def _newton(free, flowers, r):
    base = dict(r)

    def f(x):
        cur = dict(base)
        cur.update({v: math.exp(xi) for v, xi in zip(free, x)})
        return [_angle_sum(v, flowers[v], cur) - TWO_PI for v in free]

    x0 = [math.log(r[v]) for v in free]
    sol = optimize.root(f, x0, method="hybr", options={"xtol": 1e-15})
    out = dict(base)
    out.update({v: math.exp(xi) for v, xi in zip(free, sol.x)})
    if max(abs(y) for y in f(sol.x)) < max(abs(y) for y in f(x0)):
        return out
    return r


def _third_center(cu: complex, cv: complex, ru: float, rv: float, rw: float, right: bool) -> complex:
    a, b, c = ru + rv, ru + rw, rv + rw
    cos_u = (a * a + b * b - c * c) / (2 * a * b)
    alpha = math.acos(max(-1.0, min(1.0, cos_u)))
    direction = (cv - cu) / abs(cv - cu)
    turn = cmath.exp(-1j * alpha if right else 1j * alpha)
    return cu + b * direction * turn


def layout(t: PlanarMultigraph, r: dict[int, float], outer_face: int) -> dict[int, complex]:
    """Centers for the packing with the given outer triangle; inner faces are
    traced clockwise, so each third vertex goes right of the known edge."""
    f0 = t.faces[outer_face]
    o, a, b = (t.origin[d] for d in f0)
    pos = {o: 0j, a: complex(r[o] + r[a], 0.0)}
    pos[b] = _third_center(pos[o], pos[a], r[o], r[a], r[b], right=False)
    pending = [f for i, f in enumerate(t.faces) if i != outer_face]
    while pending:
        rest = []
        for f in pending:
            vs = [t.origin[d] for d in f]
            known = [v in pos for v in vs]
            if all(known):
                continue
            if sum(known) < 2:
                rest.append(f)
                continue
            i = known.index(False)
            w, u, v = vs[i], vs[(i + 1) % 3], vs[(i + 2) % 3]
            pos[w] = _third_center(pos[u], pos[v], r[u], r[v], r[w], right=True)
        if len(rest) == len(pending):
            raise NotTriangulation("layout could not reach every vertex")
        pending = rest
    return pos


def conformal_barycenter(points: list[complex], tol: float = 1e-15, max_iter: int = 10_000) -> MobiusTransform:
    """Disk automorphism moving the unit-circle points to conformal barycenter 0.

    Repeatedly applies z -> (z - m) / (1 - conj(m) z) with m the Euclidean
    mean of the current points, which is stable even when the points are
    bunched on a short arc.
    """
    zs = np.asarray(points, dtype=complex)
    total = MobiusTransform.identity()
    for _ in range(max_iter):
        m = complex(zs.mean())
        if abs(m) < tol:
            return total
        step = MobiusTransform(1, -m, -m.conjugate(), 1)
        zs = (zs - m) / (1 - np.conj(m) * zs)
        zs /= np.abs(zs)
        total = step @ total
    raise ConvergenceFailure(max_iter, abs(complex(zs.mean())))


def _normalize(disks: dict[int, Disk], t: PlanarMultigraph, o: int) -> dict[int, Disk]:
    zetas = [disks[u].center / abs(disks[u].center) for u in t.neighbors(o)]
    phi = conformal_barycenter(zetas)
    disks = {v: (phi.apply_disk(d) if v != o else d) for v, d in disks.items()}
    for v in sorted(disks):
        if v != o and abs(disks[v].center) > 1e-6:
            rot = cmath.exp(-1j * cmath.phase(disks[v].center))
            disks = {u: Disk(d.center * rot, d.radius, d.complement) for u, d in disks.items()}
            break
    disks[o] = Disk(0j, 1.0, complement=True)
    return disks


def _polish_radii(t: PlanarMultigraph, o: int, radii: dict[int, float]) -> dict[int, float]:
    """Re-solve the angle sums with o as the unit complement.

    The solution set is two-dimensional (disk automorphisms), so this is a
    damped least-squares solve started from the already-close radii.
    """
    free = [v for v in t.vertices if v != o]
    flowers = {v: t.neighbors(v) for v in free}

    def f(x):
        disks = {v: Disk(0j, math.exp(xi)) for v, xi in zip(free, x)}
        disks[o] = Disk(0j, 1.0, complement=True)
        return [sum(_sector_angle(disks, v, fl[i], fl[(i + 1) % len(fl)]) for i in range(len(fl))) - TWO_PI
                for v, fl in flowers.items()]

    x0 = np.log([radii[v] for v in free])
    sol = optimize.least_squares(f, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    x = sol.x if np.max(np.abs(sol.fun)) <= np.max(np.abs(f(x0))) else x0
    out = {v: math.exp(xi) for v, xi in zip(free, x)}
    out[o] = 1.0
    return out


def _relayout(t: PlanarMultigraph, o: int, r: dict[int, float], approx: dict[int, complex]) -> dict[int, complex]:
    """Centers with o as the unit complement; each placement takes the mirror
    candidate nearest the approximate center."""
    first = t.neighbors(o)[0]
    pos = {o: 0j, first: (1 - r[first]) * approx[first] / abs(approx[first])}
    pending = list(t.faces)
    while pending:
        rest = []
        for f in pending:
            vs = [t.origin[d] for d in f]
            unknown = [v for v in vs if v not in pos]
            if not unknown:
                continue
            if len(unknown) > 1:
                rest.append(f)
                continue
            w = unknown[0]
            u, v = [x for x in vs if x != w]
            if u == o:
                u, v = v, u
            if v == o:
                # sides R - r_u, r_u + r_w, R - r_w; semiperimeter R
                half = math.sqrt(max(0.0, r[u] * (1 - r[u] - r[w])) / r[w])
                toward = -pos[u] / abs(pos[u])
            else:
                half = math.sqrt(r[v] * r[w] / (r[u] * (r[u] + r[v] + r[w])))
                toward = (pos[v] - pos[u]) / abs(pos[v] - pos[u])
            turn = cmath.exp(2j * math.atan(half))
            cands = [pos[u] + (r[u] + r[w]) * toward * turn, pos[u] + (r[u] + r[w]) * toward / turn]
            pos[w] = min(cands, key=lambda z: abs(z - approx[w]))
        if len(rest) == len(pending):
            raise NotTriangulation("layout could not reach every vertex")
        pending = rest
    return pos


def pack(gdual, outer_vertex: int, tol: float = DEFAULT.pack, init=None,
         max_sweeps: int = 100_000) -> CirclePacking:
    """Pack the triangulation with ``outer_vertex`` as the unit-circle complement.

    ``init`` is None (all free radii 1/n) or a numpy Generator for random
    starting radii.
    """
    t = _triangulation(gdual)
    if outer_vertex not in t.rotation:
        raise KeyError(outer_vertex)
    o = outer_vertex
    outer_face = t.face_of[min(t.rotation[o])]
    tri = [t.origin[d] for d in t.faces[outer_face]]
    start = None
    if init is not None:
        start = {v: float(init.uniform(0.05, 2.0)) for v in t.vertices}
    r, sweeps, _ = solve_radii(t, {v: 1.0 for v in tri}, tol, start, max_sweeps)
    pos = layout(t, r, outer_face)

    # Euclidean picture -> o becomes the unit complement -> normalize
    invert = MobiusTransform(0, r[o], 1, -pos[o])
    disks = {v: invert.apply_disk(Disk(pos[v], r[v])) for v in t.vertices if v != o}
    disks[o] = Disk(0j, 1.0, complement=True)
    disks = _normalize(disks, t, o)
    before = {v: d.center for v, d in disks.items()}

    # small disks carry absolute layout error from the unit outer triangle;
    # redo radii and centers in this frame, then renormalize
    radii = _polish_radii(t, o, {v: d.radius for v, d in disks.items()})
    centers = _relayout(t, o, radii, {v: d.center for v, d in disks.items()})
    disks = {v: Disk(centers[v], radii[v]) for v in t.vertices if v != o}
    disks[o] = Disk(0j, 1.0, complement=True)
    disks = _normalize(disks, t, o)
    shift = max(abs(d.center - before[v]) for v, d in disks.items())

    res = residuals(disks, t, o)
    if res.max_angle_error > tol or res.max_tangency_error > DEFAULT.tangency:
        raise ConvergenceFailure(sweeps, max(res.max_angle_error, res.max_tangency_error))
    return CirclePacking(dict(sorted(disks.items())), o, res.max_angle_error, res.max_tangency_error, sweeps,
                         shift)


def _sector_angle(disks: dict[int, Disk], v: int, u: int, w: int) -> float:
    """Angle at disk v between its tangencies with u and w, from radii only."""
    dv = disks[v]
    rv = dv.radius
    if disks[u].complement or disks[w].complement:
        other = w if disks[u].complement else u
        R = (disks[u] if disks[u].complement else disks[w]).radius
        ro = disks[other].radius
        # triangle with sides rv+ro, R-rv, R-ro; the semiperimeter is R
        inner = 2.0 * math.atan(math.sqrt(max(0.0, R - rv - ro) * rv / (R * ro)))
        return math.pi - inner
    return corner_angle(rv, disks[u].radius, disks[w].radius)


def _tangency_error(d1: Disk, d2: Disk) -> float:
    dist = abs(d1.center - d2.center)
    if d1.complement:
        return abs(dist - (d1.radius - d2.radius))
    if d2.complement:
        return abs(dist - (d2.radius - d1.radius))
    return abs(dist - (d1.radius + d2.radius))


def _overlap(d1: Disk, d2: Disk) -> float:
    dist = abs(d1.center - d2.center)
    if d1.complement:
        return max(0.0, dist + d2.radius - d1.radius)
    if d2.complement:
        return max(0.0, dist + d1.radius - d2.radius)
    return max(0.0, d1.radius + d2.radius - dist)


def residuals(packing, gdual, outer_vertex: int | None = None, tol: float = DEFAULT.tangency) -> PackingResiduals:
    """Exhaustive check of a packing against its triangulation."""
    t = gdual.graph if isinstance(gdual, DualGraph) else gdual
    if isinstance(packing, CirclePacking):
        disks = packing.disks
        outer_vertex = packing.outer_vertex
    else:
        disks = packing
    adjacent = {(min(u, v), max(u, v)) for u, v in t.edges.values()}
    worst_t = 0.0
    worst_o = 0.0
    missing, extra = [], []
    vs = sorted(disks)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            err = _tangency_error(disks[u], disks[v])
            if (u, v) in adjacent:
                worst_t = max(worst_t, err)
                if err > tol:
                    missing.append((u, v))
            else:
                if err <= tol:
                    extra.append((u, v))
            worst_o = max(worst_o, _overlap(disks[u], disks[v]) if (u, v) not in adjacent else 0.0)
    worst_a = 0.0
    for v in t.vertices:
        if v == outer_vertex:
            continue
        fl = t.neighbors(v)
        k = len(fl)
        total = sum(_sector_angle(disks, v, fl[i], fl[(i + 1) % k]) for i in range(k))
        worst_a = max(worst_a, abs(total - TWO_PI))
    return PackingResiduals(worst_t, worst_o, missing, extra, worst_a)
