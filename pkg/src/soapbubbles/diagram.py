"""Radial power distance, its bisectors and triple points.

For a disk with center c and radius r the radial power distance of q is
(d^2 - r^2) / 2r with d = |q - c|. It is the radius of the two congruent
circles tangent to each other at q and tangent to the disk, taken negative
when q lies inside. A disk complement uses the opposite sign. The
minimization diagram of this distance is Mobius-invariant even though the
distance is not.

``horosphere_distance`` recomputes the same quantity in the upper half-space
model by growing a sphere tangent to the boundary plane at q until it meets
the hemisphere over the site's circle; it shares no formula with the planar
code and is used to cross-check it.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from .config import DEFAULT
from .errors import CoincidentSites, NoCommonPoint, OnBoundary
from .geom import INF, Disk, GeneralizedCircle, from_hermitian, intersect_hermitian, is_inf

SiteDisk = Disk


def site_coefficients(D: SiteDisk) -> tuple[float, complex, float]:
    """(A, B, C) with rpd(q) = A|q|^2 + 2 Re(conj(B) q) + C."""
    s = (-1.0 if D.complement else 1.0) / (2.0 * D.radius)
    c = D.center
    return s, -s * c, s * (abs(c) ** 2 - D.radius ** 2)


def radial_power_distance(q: complex, D: SiteDisk) -> float:
    d2 = abs(q - D.center) ** 2
    r = D.radius
    value = (d2 - r * r) / (2.0 * r)
    return -value if D.complement else value


def _scale(*sites: SiteDisk) -> float:
    pts = [s.center for s in sites]
    spread = max((abs(a - b) for a in pts for b in pts), default=0.0)
    return max(spread, *(s.radius for s in sites))


def bisector_coefficients(D1: SiteDisk, D2: SiteDisk) -> tuple[float, complex, float]:
    a1, b1, c1 = site_coefficients(D1)
    a2, b2, c2 = site_coefficients(D2)
    A, B, C = a1 - a2, b1 - b2, c1 - c2
    if abs(A) <= 1e-15 * (abs(a1) + abs(a2)):
        A = 0.0
    if A == 0.0 and abs(B) <= 1e-15 * (abs(b1) + abs(b2)):
        raise CoincidentSites("sites coincide")
    return A, B, C


def bisector(D1: SiteDisk, D2: SiteDisk) -> GeneralizedCircle:
    """Locus of equal radial power distance to two sites."""
    A, B, C = bisector_coefficients(D1, D2)
    return from_hermitian(A, B, C, scale=_scale(D1, D2))


def triple_points(D1: SiteDisk, D2: SiteDisk, D3: SiteDisk, tol: float = DEFAULT.geom) -> tuple[complex, ...]:
    """Points at equal radial power distance from all three sites.

    INF is included when both bisectors are lines. Any common point of two
    bisectors lies on the third, so two suffice.
    """
    h12 = bisector_coefficients(D1, D2)
    h13 = bisector_coefficients(D1, D3)
    bisector_coefficients(D2, D3)
    pts, both_lines = intersect_hermitian(h12, h13, tol=tol * _scale(D1, D2, D3))
    if both_lines:
        pts = [*pts, INF]
    if not pts:
        raise NoCommonPoint("bisectors do not meet")
    return tuple(pts)


def nearest_site(q: complex, sites: Sequence[SiteDisk]) -> int:
    values = [radial_power_distance(q, s) for s in sites]
    return min(range(len(values)), key=values.__getitem__)


def top_two_gap(q: complex, sites: Sequence[SiteDisk]) -> float:
    values = sorted(radial_power_distance(q, s) for s in sites)
    return values[1] - values[0] if len(values) > 1 else math.inf


# ---------------------------------------------------------------- 3D oracle


def _in_halfspace(q: complex, D: SiteDisk) -> bool:
    # horosphere of vanishing size at q: inside the hemisphere iff q is inside the circle
    inside = abs(q - D.center) < D.radius
    return inside != D.complement


def horosphere_distance(q: complex, D: SiteDisk, tol: float = DEFAULT.geom) -> float:
    """Signed radius of the horosphere at q that first touches the site's
    hemisphere, found by bisection on 3D sphere-sphere tangency.

    Negative when q lies in the site's halfspace (largest horosphere still
    inside it), positive otherwise (smallest horosphere reaching it).
    """
    if is_inf(q):
        raise ValueError("query point must be finite")
    dx = abs(q - D.center)
    r = D.radius
    if abs(dx - r) <= tol * r:
        raise OnBoundary("query point on a site boundary")
    inside_sphere = dx < r

    def separated(rho: float) -> bool:
        # sphere centered (q, rho) radius rho against sphere centered (c, 0) radius r
        between = math.hypot(dx, rho)
        if inside_sphere:
            return between + rho <= r  # still contained in the hemisphere
        return between >= r + rho  # still disjoint from it

    lo, hi = 0.0, 1.0
    while separated(hi):
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if separated(mid):
            lo = mid
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    return -rho if _in_halfspace(q, D) else rho


def hyperbolic_oracle_nearest(q: complex, sites: Sequence[SiteDisk], tol: float = DEFAULT.geom) -> int:
    """Nearest site by the horosphere construction.

    If q lies in some halfspace, the winner is the one admitting the largest
    contained horosphere; otherwise the one reached by the smallest horosphere.
    """
    if not sites:
        raise ValueError("no sites")
    values = [horosphere_distance(q, s, tol) for s in sites]
    inside = [i for i, v in enumerate(values) if _in_halfspace(q, sites[i])]
    if inside:
        return max(inside, key=lambda i: -values[i])
    return min(range(len(values)), key=values.__getitem__)
