"""Planar primitives and predicates.

Everything here is double precision.  Comparisons go through a
:class:`Tolerance`, which turns a relative tolerance into an absolute length
once the caller supplies the scale of the quantities involved.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

from .errors import DegenerateGeometryError, IdenticalCirclesError, ValidationError

DEFAULT_REL_TOL = 1e-9


class Point2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return Point2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point2(self.x - other[0], self.y - other[1])

    def __mul__(self, s):
        return Point2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return Point2(self.x / s, self.y / s)

    def __neg__(self):
        return Point2(-self.x, -self.y)

    def is_finite(self):
        return math.isfinite(self.x) and math.isfinite(self.y)


def as_point(p) -> Point2:
    """Coerce a pair-like object to a finite :class:`Point2`."""
    pt = Point2(float(p[0]), float(p[1]))
    if not pt.is_finite():
        raise ValidationError(f"non-finite coordinates: {p!r}")
    return pt


@dataclass(frozen=True)
class Tolerance:
    rel: float = DEFAULT_REL_TOL
    abs: float = 0.0

    def __post_init__(self):
        if not self.rel > 0:
            raise ValidationError("relative tolerance must be positive")
        if not self.abs >= 0:
            raise ValidationError("absolute tolerance must be nonnegative")

    def length(self, scale: float) -> float:
        """Absolute slack allowed for quantities of magnitude ``scale``."""
        return self.rel * abs(scale) + self.abs

    def close(self, lhs: float, rhs: float, scale: float) -> bool:
        return abs(lhs - rhs) <= self.length(scale)


def default_tolerance() -> Tolerance:
    """The default tolerance, honouring the ``DIAMATCH_TOL`` override."""
    raw = os.environ.get("DIAMATCH_TOL")
    if raw is None or raw.strip() == "":
        return Tolerance()
    try:
        return Tolerance(rel=float(raw))
    except ValueError as exc:
        raise ValidationError(f"bad DIAMATCH_TOL value {raw!r}") from exc


# -- vector helpers ---------------------------------------------------------

def dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1]


def cross(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


def norm(u) -> float:
    return math.hypot(u[0], u[1])


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def dist_sq(p, q) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def midpoint(p, q) -> Point2:
    return Point2((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


def perp(u) -> Point2:
    """``u`` rotated a quarter turn counter-clockwise."""
    return Point2(-u[1], u[0])


def unit(u) -> Point2:
    n = norm(u)
    if n == 0:
        raise DegenerateGeometryError("zero-length direction")
    return Point2(u[0] / n, u[1] / n)


def orient(a, b, p) -> float:
    """Twice the signed area of triangle abp (positive when p is left of a->b)."""
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])


# -- shapes -----------------------------------------------------------------

@dataclass(frozen=True)
class Disk:
    """Closed disk; also stands for its boundary circle.

    ``ends`` keeps the two defining points of a diametral disk so that
    intersection tests can be decided exactly in rational arithmetic.
    """

    center: Point2
    radius: float
    degenerate: bool = False
    ends: Optional[Tuple[Point2, Point2]] = None

    def __post_init__(self):
        if not self.radius >= 0 or not math.isfinite(self.radius):
            raise ValidationError(f"invalid radius {self.radius!r}")

    def slack(self, p) -> float:
        """Signed distance from ``p`` to the circle (negative inside)."""
        return dist(p, self.center) - self.radius

    def contains(self, p, tol: Optional[Tolerance] = None) -> bool:
        tol = tol or Tolerance()
        return self.slack(p) <= tol.length(max(self.radius, dist(p, self.center)))

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius


@dataclass(frozen=True)
class Line2:
    anchor: Point2
    direction: Point2

    def __post_init__(self):
        if norm(self.direction) == 0:
            raise DegenerateGeometryError("line direction has zero norm")

    @classmethod
    def through(cls, a, b) -> "Line2":
        a = Point2(*a)
        if a == Point2(*b):
            raise DegenerateGeometryError("line through coincident points")
        return cls(a, Point2(*b) - a)

    @classmethod
    def perpendicular(cls, anchor, to_direction) -> "Line2":
        """Line through ``anchor`` perpendicular to ``to_direction``."""
        return cls(Point2(*anchor), perp(to_direction))

    def point_at(self, t: float) -> Point2:
        return self.anchor + self.direction * t

    def signed_distance(self, p) -> float:
        return cross(self.direction, Point2(*p) - self.anchor) / norm(self.direction)

    def intersect(self, other: "Line2", tol: Optional[Tolerance] = None) -> Point2:
        tol = tol or Tolerance()
        d1, d2 = unit(self.direction), unit(other.direction)
        den = cross(d1, d2)
        if abs(den) <= tol.rel:
            raise DegenerateGeometryError("parallel lines do not meet in one point")
        t = cross(other.anchor - self.anchor, d2) / den
        return self.anchor + d1 * t


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane: points on the ``side`` of ``boundary`` (+1 = left)."""

    boundary: Line2
    side: int

    def __post_init__(self):
        if self.side not in (1, -1):
            raise ValidationError("half-plane side must be +1 or -1")

    def depth(self, p) -> float:
        """Signed distance into the half-plane (negative outside)."""
        return self.side * self.boundary.signed_distance(p)

    def contains(self, p, tol: Optional[Tolerance] = None, scale: float = 1.0) -> bool:
        tol = tol or Tolerance()
        return self.depth(p) >= -tol.length(scale)


class Side(enum.Enum):
    LEFT = 1
    RIGHT = -1
    ON = 0


# -- operations -------------------------------------------------------------

def diametral_disk(p, q) -> Disk:
    """Disk having segment pq as a diameter.

    Coincident endpoints give a radius-0 disk with ``degenerate=True``.
    """
    p, q = as_point(p), as_point(q)
    if p == q:
        return Disk(p, 0.0, degenerate=True, ends=(p, q))
    return Disk(midpoint(p, q), dist(p, q) / 2, ends=(p, q))


def signed_projection(a, b, p) -> float:
    """Position of ``p`` along the unit direction from ``a`` to ``b``."""
    d = Point2(b[0] - a[0], b[1] - a[1])
    n = norm(d)
    if n == 0:
        raise DegenerateGeometryError("projection direction a->b has zero length")
    return dot(Point2(p[0] - a[0], p[1] - a[1]), d) / n


def orthogonal_projection(a, b, p) -> Point2:
    """Foot of the perpendicular from ``p`` to line(a, b)."""
    a = Point2(*a)
    d = Point2(*b) - a
    n2 = dot(d, d)
    if n2 == 0:
        raise DegenerateGeometryError("line through coincident points")
    t = dot(Point2(*p) - a, d) / n2
    return a + d * t


def side_of_line(a, b, p, tol: Optional[Tolerance] = None) -> Side:
    tol = tol or Tolerance()
    d = Point2(b[0] - a[0], b[1] - a[1])
    nd = norm(d)
    if nd == 0:
        raise DegenerateGeometryError("line through coincident points")
    v = Point2(p[0] - a[0], p[1] - a[1])
    c = cross(d, v)
    if abs(c) <= tol.rel * nd * norm(v) + tol.abs * nd:
        return Side.ON
    return Side.LEFT if c > 0 else Side.RIGHT


def invert_point(center, radius_sq: float, p) -> Point2:
    """Image of ``p`` under inversion in the circle (center, sqrt(radius_sq))."""
    if not radius_sq > 0:
        raise ValidationError("inversion radius squared must be positive")
    v = Point2(p[0] - center[0], p[1] - center[1])
    n2 = dot(v, v)
    if n2 == 0:
        raise DegenerateGeometryError("cannot invert the center of inversion")
    return Point2(center[0] + radius_sq * v.x / n2, center[1] + radius_sq * v.y / n2)


def circle_circle_intersection(c1: Disk, c2: Disk, tol: Optional[Tolerance] = None) -> list:
    """Intersection points of the boundary circles of two disks.

    Returns zero, one (tangency within ``tol``) or two points.  The pair is
    ordered with the point left of the c1->c2 center line first.
    """
    tol = tol or Tolerance()
    r1, r2 = c1.radius, c2.radius
    d = dist(c1.center, c2.center)
    eps = tol.length(max(r1, r2, d))
    if d <= eps:
        if abs(r1 - r2) <= eps:
            raise IdenticalCirclesError("circles coincide")
        return []
    if d > r1 + r2 + eps or d < abs(r1 - r2) - eps:
        return []
    u = (c2.center - c1.center) / d
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    if abs(d - (r1 + r2)) <= eps or abs(d - abs(r1 - r2)) <= eps:
        a = max(-r1, min(r1, a))
        return [c1.center + u * a]
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    base = c1.center + u * a
    w = perp(u) * h
    return [base + w, base - w]


def circumcircle(a, b, c) -> Disk:
    """Circle through three non-collinear points."""
    ax, ay = a
    bx, by = b[0] - ax, b[1] - ay
    cx, cy = c[0] - ax, c[1] - ay
    den = 2 * (bx * cy - by * cx)
    scale = max(abs(bx), abs(by), abs(cx), abs(cy), 1e-300)
    if abs(den) <= 1e-14 * scale * scale:
        raise DegenerateGeometryError("collinear points have no circumcircle")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / den
    uy = (bx * c2 - cx * b2) / den
    return Disk(Point2(ax + ux, ay + uy), math.hypot(ux, uy))


def exact_disks_intersect(d1: Disk, d2: Disk) -> Optional[bool]:
    """Decide closed-disk intersection exactly for diametral disks.

    Uses the defining endpoints as rationals and compares
    |c1c2|^2 - r1^2 - r2^2 <= 2 r1 r2 by squaring once more when the left
    side is positive.  Returns None when either disk lacks endpoints.
    """
    if d1.ends is None or d2.ends is None:
        return None

    def parts(d):
        (px, py), (qx, qy) = d.ends
        px, py, qx, qy = (Fraction(v) for v in (px, py, qx, qy))
        cx, cy = (px + qx) / 2, (py + qy) / 2
        rsq = ((px - qx) ** 2 + (py - qy) ** 2) / 4
        return cx, cy, rsq

    x1, y1, a = parts(d1)
    x2, y2, b = parts(d2)
    lhs = (x1 - x2) ** 2 + (y1 - y2) ** 2 - a - b
    if lhs <= 0:
        return True
    return lhs * lhs <= 4 * a * b
