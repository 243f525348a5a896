"""Points, generalized circles, arcs and Mobius maps on the extended plane.

Finite points are Python ``complex`` values; the point at infinity is ``INF``.
Generalized circles are handled through their Hermitian form

    A |z|^2 + 2 Re(conj(B) z) + C = 0,

which Mobius maps act on linearly, so circles and lines never need separate
code paths.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .config import DEFAULT
from .errors import (
    DegenerateCoincident,
    DegenerateTriangle,
    DoubleRayDegeneracy,
    NotIncident,
    NotTangent,
    RayDegeneracy,
)

INF = complex(math.inf, math.inf)
TWO_PI = 2.0 * math.pi


def is_inf(z: complex) -> bool:
    return cmath.isinf(z)


def orient(a: complex, b: complex, c: complex) -> float:
    """Twice the signed area of triangle abc (positive when counterclockwise)."""
    return ((b - a).conjugate() * (c - a)).imag


def cross(u: complex, v: complex) -> float:
    return (u.conjugate() * v).imag


def norm_angle(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


# ---------------------------------------------------------------- circles


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"circle radius must be positive and finite, got {self.radius}")

    def hermitian(self) -> tuple[float, complex, float]:
        c = self.center
        return 1.0, -c, abs(c) ** 2 - self.radius ** 2

    def distance(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)

    def point_at(self, theta: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * theta)

    def sample(self, n: int = 64) -> list[complex]:
        return [self.point_at(TWO_PI * k / n) for k in range(n)]


@dataclass(frozen=True)
class Line:
    """Points z with Re(conj(normal) * z) == offset."""

    normal: complex
    offset: float

    def __post_init__(self):
        if abs(abs(self.normal) - 1.0) > 1e-12:
            raise ValueError("line normal must have unit length")

    def hermitian(self) -> tuple[float, complex, float]:
        return 0.0, self.normal / 2, -self.offset

    def distance(self, z: complex) -> float:
        return abs((self.normal.conjugate() * z).real - self.offset)

    @property
    def direction(self) -> complex:
        return 1j * self.normal

    @property
    def base(self) -> complex:
        return self.normal * self.offset

    def sample(self, n: int = 64, extent: float = 10.0) -> list[complex]:
        return [self.base + self.direction * extent * (2 * k / (n - 1) - 1) for k in range(n)]


GeneralizedCircle = Union[Circle, Line]


def from_hermitian(A: float, B: complex, C: float, scale: float = 1.0) -> GeneralizedCircle:
    """Build a circle or line from Hermitian coefficients.

    ``scale`` is a characteristic length of the data; circles whose curvature
    times ``scale`` falls below the snap threshold come back as lines.
    """
    A = float(np.real(A))
    C = float(np.real(C))
    B = complex(B)
    nb = abs(B)
    if A != 0.0:
        disc = nb * nb - A * C
        if disc <= 0:
            raise ValueError("Hermitian form describes an empty or point circle")
        radius = math.sqrt(disc) / abs(A)
        if radius * DEFAULT.snap <= scale or nb == 0.0:
            return Circle(-B / A, radius)
    if nb == 0.0:
        raise ValueError("degenerate Hermitian form")
    # a|z|^2 is negligible here: treat as the line 2 Re(conj(B) z) + C = 0
    n = B / nb
    return Line(n, -C / (2 * nb))


def circle_through(p: complex, q: complex, r: complex, tol: float = DEFAULT.geom) -> GeneralizedCircle:
    pts = [z for z in (p, q, r) if not is_inf(z)]
    if len(pts) < 2:
        raise DegenerateCoincident("at most one finite point")
    scale = max(abs(a - b) for a in pts for b in pts)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) <= tol * scale or abs(pts[i] - pts[j]) == 0.0:
                raise DegenerateCoincident(f"points {pts[i]} and {pts[j]} coincide")
    if len(pts) == 2:
        return _line_through(pts[0], pts[1])
    d = 2 * orient(p, q, r)
    if d == 0.0:
        return _line_through(p, r if abs(r - p) >= abs(q - p) else q)
    # circumcenter relative to p
    b, c = q - p, r - p
    nb2, nc2 = abs(b) ** 2, abs(c) ** 2
    uc = complex(c.imag * nb2 - b.imag * nc2, b.real * nc2 - c.real * nb2) / d
    radius = abs(uc)
    if scale / radius < DEFAULT.snap:
        return _line_through(p, r if abs(r - p) >= abs(q - p) else q)
    return Circle(p + uc, radius)


def _line_through(a: complex, b: complex) -> Line:
    u = (b - a) / abs(b - a)
    n = 1j * u
    return Line(n, (n.conjugate() * a).real)


def intersect(g1: GeneralizedCircle, g2: GeneralizedCircle, tol: float = 0.0) -> tuple[list[complex], bool]:
    """Finite intersection points of two generalized circles, plus whether
    both pass through infinity (i.e. both are lines).

    ``tol`` lets a near-miss count as a tangency. Identical or concentric
    supports give no finite points.
    """
    return intersect_hermitian(g1.hermitian(), g2.hermitian(), tol)


def intersect_hermitian(h1, h2, tol: float = 0.0) -> tuple[list[complex], bool]:
    """Same as :func:`intersect` but on raw (A, B, C) coefficients, which stay
    well conditioned for nearly straight circles."""
    h1 = _hnormalize(h1)
    h2 = _hnormalize(h2)
    for A, B, C in (h1, h2):
        if A != 0.0 and abs(B) ** 2 - A * C < 0:
            return [], False  # imaginary circle, no real points
    both_lines = h1[0] == 0.0 and h2[0] == 0.0
    # base: the more curved of the two
    if _curv(h2) > _curv(h1):
        h1, h2 = h2, h1
    A0, B0, C0 = h1
    A1, B1, C1 = h2
    if A0 == 0.0:
        return _line_line(B0, C0, B1, C1), True
    Bl = A0 * B1 - A1 * B0
    Cl = A0 * C1 - A1 * C0
    if abs(Bl) <= 1e-15 * max(abs(B0), abs(B1), 1e-300):
        return [], both_lines
    if _curv(h1) < 1e-13:
        # both nearly straight: the finite crossing is that of the two lines
        return _line_line(B0, C0, B1, C1), both_lines
    center = -B0 / A0
    r2 = (abs(B0) ** 2 - A0 * C0) / (A0 * A0)
    if r2 <= 0:
        return [], both_lines
    nb = abs(Bl)
    n = Bl / nb
    s = (n.conjugate() * center).real + Cl / (2 * nb)
    foot = center - s * n
    h2 = r2 - s * s
    radius = math.sqrt(r2)
    if h2 < 0:
        if tol > 0 and -h2 <= 2 * radius * tol:
            return [foot], both_lines
        return [], both_lines
    h = math.sqrt(h2)
    if h == 0.0:
        return [foot], both_lines
    return [foot + 1j * n * h, foot - 1j * n * h], both_lines


def _hnormalize(h):
    A, B, C = float(np.real(h[0])), complex(h[1]), float(np.real(h[2]))
    m = max(abs(A), abs(B))
    if m == 0:
        raise ValueError("degenerate Hermitian form")
    return A / m, B / m, C / m


def _curv(h) -> float:
    A, B, C = h
    disc = abs(B) ** 2 - A * C
    if A == 0.0 or disc <= 0:
        return 0.0
    return abs(A) / math.sqrt(disc)


def _line_line(B0: complex, C0: float, B1: complex, C1: float) -> list[complex]:
    # 2 Re(conj(B) z) + C = 0  ->  Bx x + By y = -C/2
    det = B0.real * B1.imag - B0.imag * B1.real
    if abs(det) <= 1e-15 * abs(B0) * abs(B1):
        return []
    r0, r1 = -C0 / 2, -C1 / 2
    x = (r0 * B1.imag - B0.imag * r1) / det
    y = (B0.real * r1 - B1.real * r0) / det
    return [complex(x, y)]


# ---------------------------------------------------------------- disks


@dataclass(frozen=True)
class Disk:
    """A closed disk, or (``complement=True``) the closure of its outside."""

    center: complex
    radius: float
    complement: bool = False

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"disk radius must be positive and finite, got {self.radius}")

    @property
    def boundary(self) -> Circle:
        return Circle(self.center, self.radius)

    def contains(self, z: complex) -> bool:
        inside = abs(z - self.center) < self.radius
        return inside != self.complement


def tangency_point(d1: Disk, d2: Disk, tol: float = DEFAULT.tangency) -> complex:
    if d1.complement and d2.complement:
        raise NotTangent("two disk complements cannot be tangent")
    if d1.complement:
        d1, d2 = d2, d1
    gap = d2.center - d1.center
    dist = abs(gap)
    if d2.complement:
        residual = dist - (d2.radius - d1.radius)
        if abs(residual) > tol:
            raise NotTangent(f"internal tangency residual {residual:.3e}")
        if dist == 0.0:
            raise NotTangent("concentric disk and complement")
        return d2.center - d2.radius * gap / dist
    residual = dist - (d1.radius + d2.radius)
    if abs(residual) > tol:
        raise NotTangent(f"tangency residual {residual:.3e}")
    return d1.center + d1.radius * gap / dist


# ---------------------------------------------------------------- arcs


@dataclass(frozen=True)
class CircularArc:
    """Arc from ``start`` to ``end`` passing through ``via``; a segment when
    the three points are collinear."""

    start: complex
    end: complex
    via: complex

    def __post_init__(self):
        for z in (self.start, self.end, self.via):
            if is_inf(z) or cmath.isnan(z):
                raise ValueError("arc points must be finite")
        diam = max(abs(self.start - self.end), abs(self.start - self.via), abs(self.via - self.end))
        floor = 1e-12 * diam
        if diam == 0.0 or min(abs(self.start - self.end), abs(self.start - self.via),
                              abs(self.via - self.end)) <= floor:
            raise DegenerateCoincident("arc points must be pairwise distinct")
        if isinstance(self.support, Line):
            t = ((self.via - self.start) / (self.end - self.start)).real
            if not 0.0 < t < 1.0:
                raise DegenerateCoincident("via point does not lie between the segment endpoints")

    @cached_property
    def support(self) -> GeneralizedCircle:
        return circle_through(self.start, self.via, self.end, tol=0.0)

    @property
    def is_segment(self) -> bool:
        return isinstance(self.support, Line)

    @cached_property
    def ccw(self) -> bool:
        """True when travel start -> via -> end turns counterclockwise."""
        return orient(self.start, self.via, self.end) > 0

    @property
    def radius(self) -> float:
        return math.inf if self.is_segment else self.support.radius

    @property
    def center(self) -> complex | None:
        return None if self.is_segment else self.support.center

    @cached_property
    def span(self) -> float:
        """Central angle swept by the arc (0 for segments)."""
        if self.is_segment:
            return 0.0
        c = self.support.center
        a0 = cmath.phase(self.start - c)
        a1 = cmath.phase(self.end - c)
        d = a1 - a0 if self.ccw else a0 - a1
        return norm_angle(d) or TWO_PI

    def reversed(self) -> "CircularArc":
        return CircularArc(self.end, self.start, self.via)

    def endpoint(self, which: str) -> complex:
        if which == "start":
            return self.start
        if which == "end":
            return self.end
        raise ValueError(which)

    def tangent_at(self, which: str) -> complex:
        """Unit direction in which the arc departs from the given endpoint."""
        if self.is_segment:
            d = self.end - self.start if which == "start" else self.start - self.end
            return d / abs(d)
        c = self.support.center
        p = self.endpoint(which)
        radial = (p - c) / abs(p - c)
        travel_ccw = self.ccw if which == "start" else not self.ccw
        return radial * (1j if travel_ccw else -1j)

    def signed_curvature_at(self, which: str) -> float:
        if self.is_segment:
            return 0.0
        k = 1.0 / self.support.radius
        travel_ccw = self.ccw if which == "start" else not self.ccw
        return -k if travel_ccw else k

    def point_at(self, t: float) -> complex:
        """Point at parameter t in [0, 1] along the arc."""
        if self.is_segment:
            return self.start + t * (self.end - self.start)
        c = self.support.center
        a0 = cmath.phase(self.start - c)
        sign = 1.0 if self.ccw else -1.0
        return c + self.support.radius * cmath.exp(1j * (a0 + sign * t * self.span))

    def sample(self, n: int = 32) -> list[complex]:
        pts = [self.point_at(k / (n - 1)) for k in range(n)]
        pts[0], pts[-1] = self.start, self.end
        return pts

    @property
    def midpoint(self) -> complex:
        return self.point_at(0.5)

    def diameter(self) -> float:
        return max(abs(self.start - self.end), abs(self.start - self.via), abs(self.via - self.end))

    def on_support_side(self, q: complex) -> bool:
        """For q on the support, whether it lies on the arc (closed)."""
        if self.is_segment:
            t = ((q - self.start) / (self.end - self.start)).real
            return 0.0 <= t <= 1.0
        o_v = orient(self.start, self.via, self.end)
        o_q = orient(self.start, q, self.end)
        return o_q * o_v >= 0 or abs(q - self.start) == 0 or abs(q - self.end) == 0

    def contains(self, q: complex, tol: float = DEFAULT.geom) -> bool:
        """Whether q lies on the closed arc, within tol."""
        if self.support.distance(q) > tol:
            return False
        if abs(q - self.start) <= tol or abs(q - self.end) <= tol:
            return True
        return self._param_inside(q)

    def _param_inside(self, q: complex) -> bool:
        if self.is_segment:
            t = ((q - self.start) / (self.end - self.start)).real
            return 0.0 < t < 1.0
        c = self.support.center
        a0 = cmath.phase(self.start - c)
        aq = cmath.phase(q - c)
        d = aq - a0 if self.ccw else a0 - aq
        return norm_angle(d) < self.span

    def bbox(self) -> tuple[float, float, float, float]:
        pts = [self.start, self.end]
        if not self.is_segment:
            c, r = self.support.center, self.support.radius
            for e in (r, 1j * r, -r, -1j * r):
                if self._param_inside(c + e):
                    pts.append(c + e)
        xs = [p.real for p in pts]
        ys = [p.imag for p in pts]
        return min(xs), min(ys), max(xs), max(ys)


def angle_between_arcs(a1: CircularArc, a2: CircularArc, at: complex, tol: float = DEFAULT.geom) -> float:
    """Counterclockwise angle in [0, 2pi) from the departing tangent of a1 to that of a2."""
    t1 = a1.tangent_at(_which_end(a1, at, tol))
    t2 = a2.tangent_at(_which_end(a2, at, tol))
    return norm_angle(cmath.phase(t2 / t1))


def _which_end(a: CircularArc, at: complex, tol: float) -> str:
    ds, de = abs(a.start - at), abs(a.end - at)
    if min(ds, de) > tol * max(1.0, a.diameter()):
        raise NotIncident(f"arc does not end at {at}")
    return "start" if ds <= de else "end"


def signed_curvature_at(arc: CircularArc, which: str) -> float:
    return arc.signed_curvature_at(which)


# ---------------------------------------------------------------- Mobius maps


@dataclass(frozen=True)
class MobiusTransform:
    """z -> (a z + b) / (c z + d), applied after complex conjugation when
    ``conjugate_first`` is set."""

    a: complex = 1
    b: complex = 0
    c: complex = 0
    d: complex = 1
    conjugate_first: bool = False

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0 or abs(a * d - b * c) <= 1e-14 * scale * scale:
            raise ValueError("Mobius transform is singular (ad - bc = 0)")

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m, conjugate_first: bool = False) -> "MobiusTransform":
        (a, b), (c, d) = m
        scale = max(abs(a), abs(b), abs(c), abs(d))
        return cls(complex(a) / scale, complex(b) / scale, complex(c) / scale, complex(d) / scale,
                   conjugate_first)

    @classmethod
    def inversion(cls, center: complex, radius: float = 1.0) -> "MobiusTransform":
        """The orientation-preserving inversion z -> r^2 / (z - center)."""
        return cls(0, radius * radius, 1, -center)

    @classmethod
    def reflection_inversion(cls, center: complex, radius: float = 1.0) -> "MobiusTransform":
        """Classical circle inversion z -> center + r^2 / conj(z - center)."""
        # after conjugation w = conj(z): center + r^2 / (w - conj(center))
        c0 = complex(center)
        return cls(c0, radius * radius - c0 * c0.conjugate(), 1, -c0.conjugate(), True)

    @classmethod
    def from_points(cls, z: tuple[complex, complex, complex], w: tuple[complex, complex, complex]) -> "MobiusTransform":
        """The orientation-preserving map sending z[i] to w[i] (finite points)."""
        return cls.from_matrix(np.linalg.inv(_cross_matrix(w)) @ _cross_matrix(z))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def pole(self) -> complex:
        """The point sent to infinity."""
        if self.c == 0:
            return INF
        p = -complex(self.d) / complex(self.c)
        return p.conjugate() if self.conjugate_first else p

    def __call__(self, z: complex) -> complex:
        return self.apply_point(z)

    def apply_point(self, z: complex) -> complex:
        a, b, c, d = complex(self.a), complex(self.b), complex(self.c), complex(self.d)
        if is_inf(z):
            return INF if c == 0 else a / c
        if self.conjugate_first:
            z = complex(z).conjugate()
        den = c * z + d
        if den == 0:
            return INF
        return (a * z + b) / den

    def inverse(self) -> "MobiusTransform":
        a, b, c, d = self.a, self.b, self.c, self.d
        inv = MobiusTransform(d, -b, -c, a)
        if not self.conjugate_first:
            return inv
        # T = M o conj  =>  T^-1 = conj o M^-1 = conj(M^-1) o conj
        return MobiusTransform(complex(d).conjugate(), -complex(b).conjugate(),
                               -complex(c).conjugate(), complex(a).conjugate(), True)

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """self o other (apply other first)."""
        m1 = self.matrix
        m2 = other.matrix
        if self.conjugate_first:
            m2 = m2.conj()
        return MobiusTransform.from_matrix(m1 @ m2, self.conjugate_first != other.conjugate_first)

    def __matmul__(self, other: "MobiusTransform") -> "MobiusTransform":
        return self.compose(other)

    def apply_circle(self, g: GeneralizedCircle, tol: float = DEFAULT.geom) -> GeneralizedCircle:
        A, B, C = g.hermitian()
        if self.conjugate_first:
            B = B.conjugate()
        H = np.array([[A, B], [np.conj(B), C]], dtype=complex)
        adj = np.array([[self.d, -self.b], [-self.c, self.a]], dtype=complex)
        H2 = adj.conj().T @ H @ adj
        A2, B2, C2 = H2[0, 0].real, H2[0, 1], H2[1, 1].real
        m = max(abs(A2), abs(B2), abs(C2))
        A2, B2, C2 = A2 / m, B2 / m, C2 / m
        pole = self.pole
        if not is_inf(pole) and g.distance(pole) <= tol * max(1.0, _gscale(g)):
            A2 = 0.0
        return from_hermitian(A2, B2, C2)

    def apply_disk(self, disk: Disk) -> Disk:
        pole = self.pole
        image = self.apply_circle(disk.boundary, tol=0.0)
        if isinstance(image, Line):
            raise RayDegeneracy("disk boundary passes through the pole")
        # a probe strictly inside the region, away from the pole
        if disk.complement:
            probe = disk.center + 2 * disk.radius
            if not is_inf(pole) and abs(probe - pole) < 0.25 * disk.radius:
                probe = disk.center - 2 * disk.radius
        else:
            probe = disk.center
            if not is_inf(pole) and abs(probe - pole) < 0.25 * disk.radius:
                probe = disk.center + 0.5 * disk.radius
        w = self.apply_point(probe)
        inside = abs(w - image.center) < image.radius
        return Disk(image.center, image.radius, complement=not inside)

    def apply_arc(self, arc: CircularArc, tol: float = 1e-10) -> CircularArc:
        pole = self.pole
        if not is_inf(pole):
            size = tol * arc.diameter()
            if abs(pole - arc.start) <= size or abs(pole - arc.end) <= size:
                raise RayDegeneracy("pole at an arc endpoint")
            if arc.support.distance(pole) <= size and arc._param_inside(pole):
                raise DoubleRayDegeneracy("pole inside an arc")
        return CircularArc(self.apply_point(arc.start), self.apply_point(arc.end),
                           self.apply_point(arc.via))


def _gscale(g: GeneralizedCircle) -> float:
    return g.radius if isinstance(g, Circle) else 1.0


def _cross_matrix(z) -> np.ndarray:
    """Matrix of the map sending z0, z1, z2 to 0, 1, infinity."""
    z0, z1, z2 = (complex(v) for v in z)
    return np.array([[z1 - z2, -z0 * (z1 - z2)], [z1 - z0, -z2 * (z1 - z0)]], dtype=complex)


def mobius_apply_point(T: MobiusTransform, p: complex) -> complex:
    return T.apply_point(p)


def mobius_apply_circle(T: MobiusTransform, g: GeneralizedCircle) -> GeneralizedCircle:
    return T.apply_circle(g)


def mobius_apply_arc(T: MobiusTransform, arc: CircularArc) -> CircularArc:
    return T.apply_arc(arc)


# ---------------------------------------------------------------- triangles


def isodynamic_points(p: complex, q: complex, r: complex) -> tuple[complex, complex]:
    """Both isodynamic points of triangle pqr, the one nearer the centroid first.

    Each lies on the Apollonius circles |X-p| |qr| = |X-q| |pr| = |X-r| |pq|.
    For an equilateral triangle the second point is INF.
    """
    scale = max(abs(p - q), abs(q - r), abs(r - p))
    if scale == 0 or abs(orient(p, q, r)) <= 1e-12 * scale * scale:
        raise DegenerateTriangle("collinear or coincident triangle")
    a2, b2, c2 = abs(q - r) ** 2, abs(p - r) ** 2, abs(p - q) ** 2
    h1 = _apollonius(p, q, a2, b2)
    h2 = _apollonius(p, r, a2, c2)
    pts, _ = intersect_hermitian(h1, h2, tol=1e-12 * scale)
    centroid = (p + q + r) / 3
    pts = sorted(pts, key=lambda z: abs(z - centroid))
    if not pts:
        raise DegenerateTriangle("Apollonius circles do not meet")
    first = pts[0]
    second = pts[1] if len(pts) > 1 else INF
    if not is_inf(second) and abs(second - centroid) > 1e12 * scale:
        second = INF
    return first, second


def _apollonius(p: complex, q: complex, wp: float, wq: float):
    """Hermitian coefficients of the locus wp |X-p|^2 = wq |X-q|^2."""
    A = wp - wq
    B = -(wp * p - wq * q)
    C = wp * abs(p) ** 2 - wq * abs(q) ** 2
    if abs(A) <= 1e-14 * max(wp, wq):
        A = 0.0
    return A, B, C


def equilateral_defect(points: list[complex]) -> float:
    """Relative spread of the three pairwise distances."""
    p, q, r = points
    d = [abs(p - q), abs(q - r), abs(r - p)]
    return (max(d) - min(d)) / max(d)
