"""Diametral regular k-gons and the constructions where they fail.

For a fixed orientation the smallest regular k-gon with both points on its
boundary has circumradius equal to the gauge of ``q - p`` in the difference
body ``P - P`` of the unit polygon.  The orientation is then optimised
numerically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from .errors import DegenerateGeometryError, ValidationError
from .geom import Point2, Tolerance, as_point, dist
from .matching import Instance, Matching, make_matching


@dataclass(frozen=True)
class RegularKGon:
    k: int
    center: Point2
    circumradius: float
    orientation: float

    def __post_init__(self):
        if self.k < 3:
            raise ValidationError("a regular polygon needs k >= 3")
        if not self.circumradius > 0:
            raise ValidationError("circumradius must be positive")
        object.__setattr__(self, "orientation", self.orientation % (2 * math.pi / self.k))

    def vertices(self) -> np.ndarray:
        ang = self.orientation + 2 * math.pi * np.arange(self.k) / self.k
        return np.stack([self.center.x + self.circumradius * np.cos(ang),
                         self.center.y + self.circumradius * np.sin(ang)], axis=1)

    @property
    def area(self) -> float:
        return 0.5 * self.k * self.circumradius ** 2 * math.sin(2 * math.pi / self.k)

    def normals(self) -> np.ndarray:
        return _edge_normals(self.k, self.orientation)

    def signed_distance(self, p) -> float:
        """Max over edges of the outward offset; <= 0 inside."""
        n = self.normals()
        apothem = self.circumradius * math.cos(math.pi / self.k)
        rel = np.asarray(p, dtype=float) - np.asarray(self.center)
        return float((n @ rel).max() - apothem)

    def boundary_distance(self, p) -> float:
        v = self.vertices()
        w = np.roll(v, -1, axis=0)
        return float(_point_segment_distances(np.asarray(p, dtype=float), v, w).min())

    def contains(self, p, tol: Optional[Tolerance] = None) -> bool:
        tol = tol or Tolerance()
        return self.signed_distance(p) <= tol.length(self.circumradius)


def _edge_normals(k, theta):
    ang = theta + math.pi / k + 2 * math.pi * np.arange(k) / k
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def _unit_vertices(k, theta):
    ang = theta + 2 * math.pi * np.arange(k) / k
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def _point_segment_distances(x, a, b):
    ab = b - a
    t = np.clip(((x - a) * ab).sum(1) / (ab * ab).sum(1), 0.0, 1.0)
    foot = a + ab * t[:, None]
    return np.hypot(*(x - foot).T)


def min_circumradius(v, k: int, theta: float) -> float:
    """Smallest circumradius of an orientation-``theta`` k-gon fitting chord ``v``."""
    verts = _unit_vertices(k, theta)
    normals = np.concatenate([_edge_normals(k, theta), -_edge_normals(k, theta)])
    proj = normals @ verts.T
    width = proj.max(axis=1) - proj.min(axis=1)
    return float((normals @ np.asarray(v, dtype=float) / width).max())


def _center_for(p, q, k, theta, s):
    """Center placing p and q on the boundary of the k-gon (theta, s)."""
    v = (np.asarray(q) - np.asarray(p)) / s
    verts = _unit_vertices(k, theta)
    normals = np.concatenate([_edge_normals(k, theta), -_edge_normals(k, theta)])
    proj_all = normals @ verts.T
    width = proj_all.max(axis=1) - proj_all.min(axis=1)
    n = normals[int(np.argmax(normals @ v / width))]
    proj = verts @ n
    lo_face = np.flatnonzero(proj <= proj.min() + 1e-12)
    hi_face = np.flatnonzero(proj >= proj.max() - 1e-12)
    if len(lo_face) == 1:
        b1 = verts[lo_face[0]]
    elif len(hi_face) == 1:
        b1 = verts[hi_face[0]] - v
    else:
        e = np.array([-n[1], n[0]])
        r1 = sorted(verts[lo_face] @ e)
        r2 = sorted(verts[hi_face] @ e - v @ e)
        tau = 0.5 * (max(r1[0], r2[0]) + min(r1[-1], r2[-1]))
        b1 = proj.min() * n + tau * e
    c = np.asarray(p) - s * b1
    return Point2(float(c[0]), float(c[1]))


def lp_circumradius(p, q, k: int, theta: float):
    """Same quantity as :func:`min_circumradius` via a 3-variable LP (cx, cy, s)."""
    n = _edge_normals(k, theta)
    apothem = math.cos(math.pi / k)
    rows, rhs = [], []
    for pt in (p, q):
        for nj in n:
            rows.append([-nj[0], -nj[1], -apothem])
            rhs.append(-(nj[0] * pt[0] + nj[1] * pt[1]))
    res = linprog([0, 0, 1], A_ub=rows, b_ub=rhs,
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if not res.success:  # pragma: no cover - the LP is always feasible and bounded
        raise RuntimeError(res.message)
    return float(res.x[2]), Point2(float(res.x[0]), float(res.x[1]))


def diametral_kgon(p, q, k: int, tol: Optional[Tolerance] = None,
                   starts: int = 64) -> RegularKGon:
    """Smallest-area regular k-gon with p and q on its boundary.

    Multistart bounded minimisation over the orientation; for each
    orientation the boundary-constrained family is solved exactly.
    """
    tol = tol or Tolerance()
    p, q = as_point(p), as_point(q)
    if p == q:
        raise DegenerateGeometryError("diametral k-gon of coincident points")
    if k < 3:
        raise ValidationError("k must be at least 3")
    v = np.asarray(q) - np.asarray(p)
    period = 2 * math.pi / k
    grid = np.arange(starts) * period / starts
    vals = np.array([min_circumradius(v, k, t) for t in grid])
    best_theta, best_s = float(grid[int(np.argmin(vals))]), float(vals.min())
    half = period / starts
    for idx in np.argsort(vals, kind="stable")[:4]:
        t0 = grid[idx]
        res = minimize_scalar(lambda t: min_circumradius(v, k, t),
                              bounds=(t0 - half, t0 + half), method="bounded",
                              options={"xatol": 1e-13 * period})
        if res.fun < best_s:
            best_theta, best_s = float(res.x), float(res.fun)
    return RegularKGon(k, _center_for(p, q, k, best_theta, best_s), best_s, best_theta)


def symmetric_kgon(p, q, k: int) -> RegularKGon:
    """Even-k candidate with p and q at opposite vertices."""
    if k % 2:
        raise ValidationError("opposite vertices need even k")
    p, q = as_point(p), as_point(q)
    theta = math.atan2(q.y - p.y, q.x - p.x)
    c = Point2((p.x + q.x) / 2, (p.y + q.y) / 2)
    return RegularKGon(k, c, dist(p, q) / 2, theta)


def grid_search_kgon(p, q, k: int, n_theta: int = 2048, n_family: int = 2048,
                     chunk: int = 32):
    """Dense-grid oracle: smallest k-gon over (orientation, boundary position of p).

    For each orientation and each boundary point b of the unit polygon, cast
    the ray from b along q - p; its exit point is where q must sit, which
    fixes the scale.  Returns (area, circumradius, theta).
    """
    p, q = np.asarray(as_point(p)), np.asarray(as_point(q))
    v = q - p
    L = float(np.hypot(*v))
    u = v / L
    apothem = math.cos(math.pi / k)
    period = 2 * math.pi / k
    thetas = np.arange(n_theta) * period / n_theta
    ts = (np.arange(n_family) + 0.5) / n_family * k
    edge = np.floor(ts).astype(int) % k
    frac = ts - np.floor(ts)
    best = (math.inf, None)
    for start in range(0, n_theta, chunk):
        th = thetas[start:start + chunk]
        ang = th[:, None] + 2 * math.pi * np.arange(k + 1)[None, :] / k
        vx, vy = np.cos(ang), np.sin(ang)
        bx = vx[:, edge] * (1 - frac) + vx[:, edge + 1] * frac
        by = vy[:, edge] * (1 - frac) + vy[:, edge + 1] * frac
        nang = th[:, None] + math.pi / k + 2 * math.pi * np.arange(k)[None, :] / k
        nx, ny = np.cos(nang), np.sin(nang)
        nu = nx * u[0] + ny * u[1]
        num = apothem - (nx[:, None, :] * bx[:, :, None] + ny[:, None, :] * by[:, :, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(nu[:, None, :] > 1e-15, num / nu[:, None, :], np.inf)
        lam_max = lam.min(axis=2)
        lam_max = np.where(lam_max > 1e-12, lam_max, 0.0)
        s = np.where(lam_max > 0, L / np.where(lam_max > 0, lam_max, 1.0), np.inf)
        i = np.unravel_index(int(np.argmin(s)), s.shape)
        if s[i] < best[0]:
            best = (float(s[i]), float(th[i[0]]))
    s, theta = best
    area = 0.5 * k * s * s * math.sin(2 * math.pi / k)
    return area, s, theta


# -- separation ---------------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    disjoint: bool
    gap: float


def kgon_disjoint(g1: RegularKGon, g2: RegularKGon, tol: Optional[Tolerance] = None) -> Separation:
    """Separating-axis test over both polygons' edge normals.

    ``gap`` is the Euclidean distance when disjoint and minus the
    penetration depth otherwise.
    """
    tol = tol or Tolerance()
    v1, v2 = g1.vertices(), g2.vertices()
    axes = np.concatenate([g1.normals(), g2.normals()])
    p1, p2 = v1 @ axes.T, v2 @ axes.T
    overlap = np.minimum(p1.max(0), p2.max(0)) - np.maximum(p1.min(0), p2.min(0))
    sep = float(-overlap.min())
    scale = max(g1.circumradius, g2.circumradius)
    if sep > tol.length(scale):
        w1, w2 = np.roll(v1, -1, axis=0), np.roll(v2, -1, axis=0)
        gap = min(min(_point_segment_distances(x, v2, w2).min() for x in v1),
                  min(_point_segment_distances(x, v1, w1).min() for x in v2))
        return Separation(True, float(gap))
    return Separation(False, -float(max(overlap.min(), 0.0)))


# -- counterexamples ----------------------------------------------------------------

@dataclass(frozen=True)
class KGonCounterexample:
    k: int
    side: float
    instance: Instance
    matchings: Tuple[Matching, Matching]
    kgons: Tuple[Tuple[RegularKGon, RegularKGon], Tuple[RegularKGon, RegularKGon]]
    disjoint: Tuple[bool, bool]
    gaps: Tuple[float, float]
    margin: float

    @property
    def all_disjoint(self) -> bool:
        return all(self.disjoint) and min(self.gaps) > self.margin


def _check_4q2(k):
    if not isinstance(k, (int, np.integer)) or k < 6 or (k - 2) % 4:
        raise ValidationError(f"k = {k} is not of the form 4q + 2 with q >= 1")


def square_counterexample(k: int, side: float = 2.0, jitter: float = 0.0, seed: int = 0,
                          tol: Optional[Tolerance] = None) -> KGonCounterexample:
    """Alternately coloured square: both perfect matchings give disjoint k-gons.

    Without jitter the symmetric candidate (matched points at opposite
    vertices) is used after checking its area against the unrestricted
    optimiser.  With ``jitter`` > 0 every point moves by up to
    ``jitter * side`` per coordinate and the unrestricted optimiser is used.
    """
    tol = tol or Tolerance()
    _check_4q2(k)
    if not side > 0:
        raise ValidationError("side must be positive")
    s = side / 2
    reds = [(s, s), (-s, -s)]
    blues = [(s, -s), (-s, s)]
    if jitter:
        rng = np.random.Generator(np.random.PCG64(seed))
        off = rng.uniform(-jitter * side, jitter * side, size=(4, 2))
        reds = [(x + dx, y + dy) for (x, y), (dx, dy) in zip(reds, off[:2])]
        blues = [(x + dx, y + dy) for (x, y), (dx, dy) in zip(blues, off[2:])]
    inst = Instance(tuple(reds), tuple(blues))
    matchings, kgons, flags, gaps = [], [], [], []
    for perm in ((0, 1), (1, 0)):
        m = make_matching(inst, perm)
        pair = []
        for p, q in m.pairs(inst):
            g = diametral_kgon(p, q, k, tol)
            if not jitter:
                sym = symmetric_kgon(p, q, k)
                if sym.area > g.area * (1 + 1e-6):
                    raise ValidationError("symmetric candidate is not optimal")
                g = sym
            pair.append(g)
        sep = kgon_disjoint(pair[0], pair[1], tol)
        matchings.append(m)
        kgons.append(tuple(pair))
        flags.append(sep.disjoint)
        gaps.append(sep.gap)
    return KGonCounterexample(k, side, inst, tuple(matchings), tuple(kgons), tuple(flags),
                              tuple(gaps), 10 * tol.length(side))


@dataclass(frozen=True)
class SegmentCounterexample:
    instance: Instance
    matchings: Tuple[Matching, Matching]
    intersects: Tuple[bool, bool]
    no_three_collinear: bool
    convex_position: bool

    @property
    def some_non_intersecting(self) -> bool:
        return not all(self.intersects)

    @property
    def all_non_intersecting(self) -> bool:
        return not any(self.intersects)


def _exact_orient(a, b, c) -> int:
    a, b, c = ([Fraction(x) for x in pt] for pt in (a, b, c))
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (det > 0) - (det < 0)


def _on_segment(a, b, p) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a, b, c, d) -> bool:
    """Exact closed-segment intersection test on the floats' rational values."""
    o1, o2 = _exact_orient(a, b, c), _exact_orient(a, b, d)
    o3, o4 = _exact_orient(c, d, a), _exact_orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and _on_segment(a, b, c)) or (o2 == 0 and _on_segment(a, b, d))
            or (o3 == 0 and _on_segment(c, d, a)) or (o4 == 0 and _on_segment(c, d, b)))


def _in_triangle(p, a, b, c) -> bool:
    s = {_exact_orient(a, b, p), _exact_orient(b, c, p), _exact_orient(c, a, p)}
    return not ({1, -1} <= s)


SEGMENT_INSTANCE = (((0.0, 0.0), (0.2, 0.2)), ((4.0, 0.0), (0.0, 4.0)))


def segment_counterexample(jitter: float = 0.0, seed: int = 0) -> SegmentCounterexample:
    """Two red and two blue points not in convex position, matched with segments."""
    reds, blues = (list(map(tuple, pts)) for pts in SEGMENT_INSTANCE)
    if jitter:
        rng = np.random.Generator(np.random.PCG64(seed))
        off = rng.uniform(-jitter, jitter, size=(4, 2))
        reds = [(x + dx, y + dy) for (x, y), (dx, dy) in zip(reds, off[:2])]
        blues = [(x + dx, y + dy) for (x, y), (dx, dy) in zip(blues, off[2:])]
    inst = Instance(tuple(reds), tuple(blues))
    pts = list(inst.reds + inst.blues)
    no3 = all(_exact_orient(*t) != 0 for t in itertools.combinations(pts, 3))
    convex = not any(_in_triangle(pts[i], *[pts[j] for j in range(4) if j != i]) for i in range(4))
    matchings, hits = [], []
    for perm in ((0, 1), (1, 0)):
        m = make_matching(inst, perm)
        (a, b), (c, d) = m.pairs(inst)
        matchings.append(m)
        hits.append(segments_intersect(a, b, c, d))
    return SegmentCounterexample(inst, tuple(matchings), tuple(hits), no3, convex)
