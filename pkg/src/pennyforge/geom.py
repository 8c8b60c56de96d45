"""Planar geometry primitives shared by every geometry module.

Everything here is plain double precision.  Coordinates produced by the
gadget constructions are closed-form expressions in +, -, *, /, sqrt, so
an equality slack of ~1e-9 is comfortable at the coordinate magnitudes
this package works with (up to a few thousand length units).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Point2",
    "Point3",
    "Tolerance",
    "DEFAULT_TOL",
    "circle_circle_intersection",
    "segments_properly_intersect",
    "angle_at",
    "ccw_angle",
]


class Point2(tuple):
    """Immutable 2D point / vector."""

    __slots__ = ()

    def __new__(cls, x, y=None):
        if y is None:
            x, y = x
        return tuple.__new__(cls, (float(x), float(y)))

    @property
    def x(self):
        return self[0]

    @property
    def y(self):
        return self[1]

    def __add__(self, other):
        return Point2(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other):
        return Point2(self[0] - other[0], self[1] - other[1])

    def __mul__(self, s):
        return Point2(self[0] * s, self[1] * s)

    __rmul__ = __mul__

    def __neg__(self):
        return Point2(-self[0], -self[1])

    def dot(self, other):
        return self[0] * other[0] + self[1] * other[1]

    def cross(self, other):
        return self[0] * other[1] - self[1] * other[0]

    def norm(self):
        return math.hypot(self[0], self[1])

    def dist(self, other):
        return math.hypot(self[0] - other[0], self[1] - other[1])

    def unit(self):
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize zero vector")
        return Point2(self[0] / n, self[1] / n)

    def perp(self):
        """Counterclockwise perpendicular."""
        return Point2(-self[1], self[0])

    def rotated(self, degrees):
        c = math.cos(math.radians(degrees))
        s = math.sin(math.radians(degrees))
        return Point2(c * self[0] - s * self[1], s * self[0] + c * self[1])

    @staticmethod
    def polar(r, degrees):
        return Point2(r * math.cos(math.radians(degrees)),
                      r * math.sin(math.radians(degrees)))


class Point3(tuple):
    """Immutable 3D point / vector."""

    __slots__ = ()

    def __new__(cls, x, y=None, z=None):
        if y is None:
            x, y, z = x
        return tuple.__new__(cls, (float(x), float(y), float(z)))

    @property
    def x(self):
        return self[0]

    @property
    def y(self):
        return self[1]

    @property
    def z(self):
        return self[2]

    def __add__(self, other):
        return Point3(self[0] + other[0], self[1] + other[1], self[2] + other[2])

    def __sub__(self, other):
        return Point3(self[0] - other[0], self[1] - other[1], self[2] - other[2])

    def __mul__(self, s):
        return Point3(self[0] * s, self[1] * s, self[2] * s)

    __rmul__ = __mul__

    def dist(self, other):
        return math.sqrt((self[0] - other[0]) ** 2 +
                         (self[1] - other[1]) ** 2 +
                         (self[2] - other[2]) ** 2)


@dataclass(frozen=True)
class Tolerance:
    """Numeric slack policy.

    eq_tol is the slack for equality tests (bar lengths, contact
    distances, fixed angles); sep_tol is the slack asserting strict
    separation.  Classification bands keep the two distinct so that a
    quantity cannot simultaneously count as "equal" and "separated".
    """

    eq_tol: float = 1e-9
    sep_tol: float = 1e-6

    def __post_init__(self):
        if not (0.0 < self.eq_tol < self.sep_tol):
            raise ValueError("require 0 < eq_tol < sep_tol")


DEFAULT_TOL = Tolerance()


def circle_circle_intersection(c1, r1, c2, r2):
    """Intersection points of two circles.

    Returns a list of 0, 1 or 2 points.  In the two-point case the point
    lying to the *left* of the directed line c1 -> c2 comes first, which
    pins down branch selection for every caller.

    Raises ValueError for coincident centers (the solution set is either
    empty or a whole circle, neither of which is representable here).
    """
    if r1 <= 0 or r2 <= 0:
        raise ValueError("circle radii must be positive")
    c1 = Point2(c1)
    c2 = Point2(c2)
    d = c1.dist(c2)
    if d == 0.0:
        raise ValueError("coincident circle centers")
    # Radical line: distance a from c1 along c1->c2.
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    u = (c2 - c1) * (1.0 / d)
    foot = c1 + u * a
    if h2 < 0.0:
        # Tangency within eq-scale rounding still counts as one point.
        if h2 > -1e-12 * max(1.0, r1 * r1):
            return [foot]
        return []
    h = math.sqrt(h2)
    if h == 0.0:
        return [foot]
    n = u.perp()  # left of c1->c2
    return [foot + n * h, foot - n * h]


def _orient(a, b, c):
    """Twice the signed area of triangle abc."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(p, q, r, tol):
    """True if r lies on the closed segment pq assuming collinearity."""
    return (min(p[0], q[0]) - tol <= r[0] <= max(p[0], q[0]) + tol and
            min(p[1], q[1]) - tol <= r[1] <= max(p[1], q[1]) + tol)


def segments_properly_intersect(p1, p2, q1, q2, tol=DEFAULT_TOL):
    """Do closed segments p1p2 and q1q2 share a point other than a common endpoint?

    Shared endpoints (coincident within eq_tol) are discounted; endpoint
    touching the other segment's interior, collinear overlap and genuine
    crossings all return True.
    """
    p1, p2, q1, q2 = Point2(p1), Point2(p2), Point2(q1), Point2(q2)
    eq = tol.eq_tol

    shared = [(a, b) for a in (p1, p2) for b in (q1, q2) if a.dist(b) <= eq]
    scale = max(p1.dist(p2), q1.dist(q2), 1.0)
    area_tol = eq * scale

    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)

    if len(shared) == 1:
        # One declared common endpoint: improper only if the segments also
        # overlap beyond it (collinear doubling back) or another endpoint
        # sits in the opposite interior.
        a, b = shared[0]
        p_other = p2 if a.dist(p1) <= eq else p1
        q_other = q2 if b.dist(q1) <= eq else q1
        if abs(_orient(a, p_other, q_other)) <= area_tol:
            # Collinear at the joint: overlap iff the others extend the same way.
            return (p_other - a).dot(q_other - a) > eq * scale
        return False
    if len(shared) >= 2:
        # Both endpoints identified: segments coincide.
        return True

    if (abs(d1) <= area_tol and abs(d2) <= area_tol and
            abs(d3) <= area_tol and abs(d4) <= area_tol):
        # All collinear: any closed overlap counts.
        for r, (s1, s2) in ((p1, (q1, q2)), (p2, (q1, q2)),
                            (q1, (p1, p2)), (q2, (p1, p2))):
            if _on_segment(s1, s2, r, eq):
                return True
        return False

    def side(v):
        if v > area_tol:
            return 1
        if v < -area_tol:
            return -1
        return 0

    s1, s2, s3, s4 = side(d1), side(d2), side(d3), side(d4)
    if s1 * s2 < 0 and s3 * s4 < 0:
        return True
    # Endpoint-on-segment incidences.
    if s1 == 0 and _on_segment(q1, q2, p1, eq):
        return True
    if s2 == 0 and _on_segment(q1, q2, p2, eq):
        return True
    if s3 == 0 and _on_segment(p1, p2, q1, eq):
        return True
    if s4 == 0 and _on_segment(p1, p2, q2, eq):
        return True
    return False


def ccw_angle(v_from, v_to):
    """Counterclockwise angle in degrees from vector v_from to v_to, in [0, 360)."""
    a = math.degrees(math.atan2(v_from.cross(v_to), v_from.dot(v_to)))
    if a < 0.0:
        a += 360.0
    if a >= 360.0:
        a -= 360.0
    return a


def angle_at(center, a, b):
    """Counterclockwise angle at ``center`` from ray center->a to ray center->b.

    Result in degrees, in [0, 360).
    """
    center, a, b = Point2(center), Point2(a), Point2(b)
    u = a - center
    v = b - center
    if u.norm() == 0.0 or v.norm() == 0.0:
        raise ValueError("degenerate ray in angle_at")
    return ccw_angle(u, v)
