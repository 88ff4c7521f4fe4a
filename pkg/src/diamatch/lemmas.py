"""Executable checks of the geometric facts that make matched diametral disks share a point.

Each ``check_*`` function evaluates one claim on concrete coordinates and
reports the quantities involved, so campaigns can count violations and
track the worst residual.  :func:`shrink_triple` and
:func:`witness_from_proof` construct the common point of three diametral
disks the way the constructive argument does: shrink the disks as far as
the pairwise order conditions allow, then read the common point off the
resulting perpendicular configuration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (CaseResolutionError, DegenerateGeometryError, DiamatchError,
                     IdenticalCirclesError, PreconditionError, ValidationError)
from .geom import (Disk, HalfPlane, Line2, Point2, Side, Tolerance, as_point,
                   circle_circle_intersection, circumcircle, cross, diametral_disk,
                   dist, dist_sq, dot, orient, orthogonal_projection, perp,
                   side_of_line, signed_projection, unit)
from .matching import Instance, make_matching, is_k_subset_maximum


class ConsistencyError(DiamatchError):
    """Two independent constructions of the same point disagree."""


def _scale(*pts) -> float:
    best = 0.0
    for a, b in itertools.combinations(pts, 2):
        best = max(best, dist(a, b))
    return best


# -- canonical frame ----------------------------------------------------------

@dataclass(frozen=True)
class CanonicalFrame:
    """Rigid motion sending p1 to (-d/2, 0) and p2 to (d/2, 0)."""

    origin: Point2
    axis: Point2
    half: float

    @classmethod
    def from_points(cls, p1, p2) -> "CanonicalFrame":
        p1, p2 = as_point(p1), as_point(p2)
        d = dist(p1, p2)
        if d == 0:
            raise DegenerateGeometryError("canonical frame needs two distinct points")
        return cls(Point2((p1.x + p2.x) / 2, (p1.y + p2.y) / 2), unit(p2 - p1), d / 2)

    def forward(self, p) -> Point2:
        v = Point2(p[0] - self.origin.x, p[1] - self.origin.y)
        return Point2(dot(v, self.axis), cross(self.axis, v))

    def inverse(self, p) -> Point2:
        return self.origin + self.axis * p[0] + perp(self.axis) * p[1]


@dataclass(frozen=True)
class Lemma1Report:
    is_max_for_four: bool
    projection_ok: bool
    x_q1: float
    x_q2: float

    @property
    def holds(self) -> bool:
        return self.projection_ok or not self.is_max_for_four


def check_lemma1(p1, p2, q1, q2, tol: Optional[Tolerance] = None) -> Lemma1Report:
    """Straight pairing maximal for four points => x(q2) <= x(q1) in the p1->p2 frame.

    The weight tolerance is ``2 d`` times the length tolerance (``d`` =
    |p1 p2|) because the two sides differ by exactly ``2 d (x(q1) - x(q2))``.
    """
    tol = tol or Tolerance()
    p1, p2, q1, q2 = (as_point(p) for p in (p1, p2, q1, q2))
    if p1 == p2:
        raise DegenerateGeometryError("p1 and p2 coincide")
    eps = tol.length(_scale(p1, p2, q1, q2))
    straight = dist_sq(p1, q1) + dist_sq(p2, q2)
    crossed = dist_sq(p1, q2) + dist_sq(p2, q1)
    d = dist(p1, p2)
    x1 = signed_projection(p1, p2, q1) - d / 2
    x2 = signed_projection(p1, p2, q2) - d / 2
    return Lemma1Report(straight >= crossed - 2 * d * eps, x2 <= x1 + eps, x1, x2)


# -- three circles through perpendicular feet -----------------------------------

@dataclass(frozen=True)
class SimilarityParams:
    lam: float
    alpha: float
    beta: float
    turn: str  # "ccw" or "cw"

    @property
    def signed_lam(self) -> float:
        return self.lam if self.turn == "ccw" else -self.lam


@dataclass(frozen=True)
class PerpendicularFrame:
    A: Point2
    B: Point2
    C: Point2
    h_ab: Line2
    h_bc: Line2
    h_ca: Line2
    A1: Point2
    B1: Point2
    C1: Point2

    @classmethod
    def from_lines(cls, A, B, C, h_ab: Line2, h_bc: Line2, h_ca: Line2,
                   tol: Optional[Tolerance] = None) -> "PerpendicularFrame":
        tol = tol or Tolerance()
        A, B, C = as_point(A), as_point(B), as_point(C)
        scale = _scale(A, B, C)
        if scale == 0 or abs(orient(A, B, C)) <= tol.rel * scale * scale:
            raise DegenerateGeometryError("A, B, C are collinear")
        for line, (X, Y) in ((h_ab, (A, B)), (h_bc, (B, C)), (h_ca, (C, A))):
            if abs(dot(unit(line.direction), unit(Y - X))) > 1e3 * tol.rel:
                raise PreconditionError("perpendicular", "line is not perpendicular to its side")
        A1 = h_ab.intersect(h_ca, tol)
        B1 = h_ab.intersect(h_bc, tol)
        C1 = h_bc.intersect(h_ca, tol)
        return cls(A, B, C, h_ab, h_bc, h_ca, A1, B1, C1)

    @classmethod
    def from_anchors(cls, A, B, C, anchor_ab, anchor_bc, anchor_ca,
                     tol: Optional[Tolerance] = None) -> "PerpendicularFrame":
        A, B, C = as_point(A), as_point(B), as_point(C)
        return cls.from_lines(A, B, C,
                              Line2.perpendicular(anchor_ab, B - A),
                              Line2.perpendicular(anchor_bc, C - B),
                              Line2.perpendicular(anchor_ca, A - C), tol)

    def circles(self):
        return (diametral_disk(self.A, self.A1), diametral_disk(self.B, self.B1),
                diametral_disk(self.C, self.C1))

    def scale(self) -> float:
        return _scale(self.A, self.B, self.C, self.A1, self.B1, self.C1)


@dataclass(frozen=True)
class Lemma3Result:
    point: Point2
    geometric: Optional[Point2]
    params: SimilarityParams
    discrepancy: float
    residual: float
    scale: float


def circle_residual(p, disk: Disk) -> float:
    return abs(dist(p, disk.center) - disk.radius)


def lemma3_solve(frame: PerpendicularFrame, tol: Optional[Tolerance] = None) -> Lemma3Result:
    """Common point of the circles on AA', BB', CC' computed two ways.

    Algebraic: place A=(a,0), B=(b,0), C=(0,c), read off the quarter-turn
    similarity A'B'C' = mu * R90(ABC) + (alpha, beta) and evaluate
    ((alpha - mu beta), (mu alpha + beta)) / (1 + mu^2).  A clockwise turn is
    the same formula with negative ``mu``.

    Geometric: intersect the circles on AA' and BB' and keep the point that
    lies on the circle on CC'; the intersection h_AB & line(A,B) is the
    trivial common point of the first two circles and loses ties.
    """
    tol = tol or Tolerance()
    A, B, C = frame.A, frame.B, frame.C
    foot = orthogonal_projection(A, B, C)
    fr = CanonicalFrame(foot, unit(B - A), dist(A, B) / 2)
    a, b = fr.forward(A).x, fr.forward(B).x
    A1, B1 = fr.forward(frame.A1), fr.forward(frame.B1)
    mu = (B1.y - A1.y) / (b - a)
    alpha = (A1.x + B1.x) / 2
    beta = (A1.y - mu * a + B1.y - mu * b) / 2
    den = 1 + mu * mu
    algebraic = fr.inverse(Point2((alpha - mu * beta) / den, (mu * alpha + beta) / den))
    params = SimilarityParams(abs(mu), alpha, beta, "ccw" if mu >= 0 else "cw")

    circles = frame.circles()
    scale = max(frame.scale(), 1e-300)
    trivial = fr.inverse(Point2(alpha, 0.0))
    geometric = None
    try:
        pts = circle_circle_intersection(circles[0], circles[1], tol)
    except IdenticalCirclesError:
        pts = []
    if pts:
        eps = tol.length(scale)
        ranked = sorted(pts, key=lambda p: (circle_residual(p, circles[2]) > eps,
                                            -dist(p, trivial), circle_residual(p, circles[2])))
        geometric = ranked[0]
    residual = max(circle_residual(algebraic, c) for c in circles)
    discrepancy = dist(algebraic, geometric) if geometric is not None else math.inf
    return Lemma3Result(algebraic, geometric, params, discrepancy, residual, scale)


def lemma3_common_point(frame: PerpendicularFrame, tol: Optional[Tolerance] = None) -> Point2:
    tol = tol or Tolerance()
    res = lemma3_solve(frame, tol)
    if res.discrepancy > tol.length(res.scale):
        raise ConsistencyError(
            f"algebraic and geometric common points differ by {res.discrepancy:.3g}")
    return res.point


# -- inversion side lemma ---------------------------------------------------------

@dataclass(frozen=True)
class Lemma4Report:
    holds: bool
    O: Point2
    side_O: Side
    side_B: Side
    r_on_c2: bool = False

    def __bool__(self):
        return self.holds


def check_lemma4(A, B, P, R, c2: Disk, tol: Optional[Tolerance] = None) -> Lemma4Report:
    """O (second meeting point of circle APR with c2) lies on B's side of line(A, R)."""
    tol = tol or Tolerance()
    A, B, P, R = (as_point(p) for p in (A, B, P, R))
    scale = max(_scale(A, B, P, R), c2.radius)
    eps = tol.length(scale)
    if abs(A.y - B.y) > eps:
        raise PreconditionError("horizontal", "line(A, B) must be horizontal")
    if not B.x > A.x + eps:
        raise PreconditionError("b_right_of_a", "B must lie to the right of A")
    if abs(P.y - A.y) > eps:
        raise PreconditionError("p_on_line", "P must lie on line(A, B)")
    if dist(P, A) <= eps:
        raise PreconditionError("p_distinct_from_a", "P must differ from A")
    if not R.y > A.y + eps:
        raise PreconditionError("r_above", "R must lie above line(A, B)")
    if circle_residual(B, c2) > eps:
        raise PreconditionError("c2_through_b", "c2 must pass through B")
    if circle_residual(P, c2) > eps:
        raise PreconditionError("c2_through_p", "c2 must pass through P")
    r_gap = dist(R, c2.center) - c2.radius
    if r_gap < -eps:
        raise PreconditionError("c2_encloses_r", "c2 encloses R")
    c1 = circumcircle(A, P, R)
    pts = circle_circle_intersection(c1, c2, tol)
    O = max(pts, key=lambda p: dist(p, P)) if pts else P
    if dist(O, P) <= eps:
        O = P
    side_O = side_of_line(A, R, O, tol)
    side_B = side_of_line(A, R, B, tol)
    return Lemma4Report(side_O == side_B or side_O is Side.ON, O, side_O, side_B,
                        abs(r_gap) <= eps)


# -- half-plane containment -------------------------------------------------------

@dataclass(frozen=True)
class Lemma5Report:
    angle_ok: bool
    sampled_ok: bool
    escape: Optional[Point2] = None
    samples_in_region: int = 0

    @property
    def holds(self) -> bool:
        return self.angle_ok and self.sampled_ok

    def __bool__(self):
        return self.holds


def check_lemma5(ell: Line2, R, C, H, h_dir, delta: HalfPlane, X, Y,
                 tol: Optional[Tolerance] = None, samples: int = 10_000,
                 seed: int = 0) -> Lemma5Report:
    """Test D(X,C) & delta  <=  D(Y,C) & delta for X, Y on the half-line h.

    ``h`` is the half-line from apex ``H`` in direction ``h_dir``.  Two
    routes: the right-angle (Thales) test ``<Y - Z, C - Z> <= 0`` at
    boundary points Z of the left-hand region, and rejection sampling of
    ``samples`` points of that region against the inflated disk D(Y,C).
    """
    tol = tol or Tolerance()
    R, C, H, X, Y = (as_point(p) for p in (R, C, H, X, Y))
    h_dir = unit(h_dir)
    scale = max(_scale(R, C, H, X, Y), 1e-300)
    eps = tol.length(scale)
    if abs(ell.signed_distance(R)) > eps or abs(ell.signed_distance(C)) > eps:
        raise PreconditionError("on_ell", "R and C must lie on ell")
    if abs(dot(h_dir, unit(ell.direction))) > 1e3 * tol.rel:
        raise PreconditionError("h_perpendicular", "h must be perpendicular to ell")
    if abs(cross(h_dir, R - H)) > eps:
        raise PreconditionError("h_through_r", "supporting line of h must pass through R")
    bdir = unit(delta.boundary.direction)
    if abs(cross(bdir, unit(ell.direction))) > 1e3 * tol.rel or abs(delta.boundary.signed_distance(R)) > eps:
        raise PreconditionError("delta_bounded_by_ell", "delta must be bounded by ell")
    inward = perp(bdir) * delta.side
    if not dot(h_dir, inward) > 0:
        raise PreconditionError("delta_h_halfline", "delta & h must be a half-line")
    for name, Z in (("x_on_h", X), ("y_on_h", Y)):
        if abs(cross(h_dir, Z - H)) > eps or dot(Z - H, h_dir) < -eps:
            raise PreconditionError(name, f"{name[0].upper()} must lie on h")
    if dist(X, H) > dist(Y, H) + eps:
        raise PreconditionError("x_not_beyond_y", "|XH| must not exceed |YH|")
    return _lemma5_containment(X, Y, C, delta, tol, scale, samples, seed)


def _lemma5_containment(X, Y, C, delta, tol, scale, samples, seed) -> Lemma5Report:
    eps = tol.length(scale)
    dx, dy = diametral_disk(X, C), diametral_disk(Y, C)

    def in_dy(Z):
        return dot(Y - Z, C - Z) <= 2 * eps * max(dy.radius, eps)

    # boundary of D(X,C) & delta: the arc inside delta plus its chord on ell
    ts = np.linspace(0.0, 2 * math.pi, 257)[:-1]
    arc = [dx.center + Point2(math.cos(t), math.sin(t)) * dx.radius for t in ts]
    if dx.radius > 0 and dist(dx.center, dy.center) > 0:
        arc.append(dx.center + unit(dx.center - dy.center) * dx.radius)
    ell_pts = _circle_line_points(dx, delta.boundary)
    boundary = [Z for Z in arc + ell_pts if delta.depth(Z) >= -eps]
    angle_ok = all(in_dy(Z) for Z in boundary) if dx.radius > 0 else in_dy(C)

    rng = np.random.Generator(np.random.PCG64(seed))
    theta = rng.uniform(0, 2 * math.pi, samples)
    rad = dx.radius * np.sqrt(rng.uniform(0, 1, samples))
    zx = dx.center.x + rad * np.cos(theta)
    zy = dx.center.y + rad * np.sin(theta)
    b = delta.boundary
    bu = unit(b.direction)
    depth = delta.side * (bu.x * (zy - b.anchor.y) - bu.y * (zx - b.anchor.x))
    keep = depth >= 0
    gap = np.hypot(zx - dy.center.x, zy - dy.center.y) - dy.radius
    bad = np.flatnonzero(keep & (gap > eps))
    escape = Point2(float(zx[bad[0]]), float(zy[bad[0]])) if bad.size else None
    return Lemma5Report(angle_ok, escape is None, escape, int(keep.sum()))


def _circle_line_points(disk: Disk, line: Line2):
    foot = orthogonal_projection(line.anchor, line.anchor + line.direction, disk.center)
    off = dist(foot, disk.center)
    if off > disk.radius:
        return []
    run = math.sqrt(max(disk.radius ** 2 - off ** 2, 0.0))
    u = unit(line.direction)
    return [foot + u * run, foot - u * run]


# -- shrinking three diametral disks -------------------------------------------------

PAIRS = ((0, 1), (1, 2), (2, 0))


@dataclass(frozen=True)
class ShrinkState:
    p: Tuple[Point2, Point2, Point2]
    q: Tuple[Point2, Point2, Point2]
    eps: Tuple[float, float, float]
    lengths: Tuple[float, float, float]
    shrunk: Tuple[Point2, Point2, Point2]
    tight: Tuple[bool, bool, bool]
    full: Tuple[bool, bool, bool]
    margins: Tuple[float, float, float]
    sweeps: int
    scale: float

    def original_disks(self):
        return tuple(diametral_disk(self.p[i], self.q[i]) for i in range(3))

    def shrunk_disks(self):
        return tuple(diametral_disk(self.p[i], self.shrunk[i]) for i in range(3))

    def pair_tight(self, i, j) -> bool:
        for c, pair in enumerate(PAIRS):
            if set(pair) == {i, j}:
                return self.tight[c]
        raise ValueError((i, j))


def _condition_system(p, q, lengths):
    """Affine order conditions g = g0 + A @ eps >= 0, one row per pair (i, j).

    Row (i, j): along the unit direction p_i -> p_j, the shrunk point of
    pair j is not past the shrunk point of pair i.
    """
    units = [(p[i] - q[i]) / lengths[i] for i in range(3)]
    g0 = np.zeros(3)
    A = np.zeros((3, 3))
    for c, (i, j) in enumerate(PAIRS):
        d = unit(p[j] - p[i])
        g0[c] = dot(q[i] - q[j], d)
        A[c, i] += dot(units[i], d)
        A[c, j] -= dot(units[j], d)
    return g0, A, units


def shrink_triple(p1, q1, p2, q2, p3, q3, tol: Optional[Tolerance] = None,
                  check_hypothesis: bool = True, max_sweeps: int = 10_000) -> ShrinkState:
    """Shrink three diametral disks to a coordinate-wise maximal point.

    ``eps_i`` moves the blue endpoint q_i toward p_i by that distance.  The
    ascent raises one coordinate at a time to the largest value its two
    conditions allow (order eps_1, eps_2, eps_3), then snaps the limit by
    solving the active constraints exactly.
    """
    tol = tol or Tolerance()
    p = tuple(as_point(x) for x in (p1, p2, p3))
    q = tuple(as_point(x) for x in (q1, q2, q3))
    if check_hypothesis:
        inst = Instance(p, q)
        m = make_matching(inst, (0, 1, 2))
        for k in (2, 3):
            chk = is_k_subset_maximum(inst, m, k, tol)
            if not chk:
                raise ValidationError(
                    f"triple is not {k}-subset maximum (subset {chk.subset})")
    lengths = np.array([dist(p[i], q[i]) for i in range(3)])
    if (lengths == 0).any():
        raise ValidationError("matched points coincide")
    scale = _scale(*p, *q)
    tl = tol.length(scale)
    g0, A, units = _condition_system(p, q, lengths)

    eps = np.zeros(3)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        progress = 0.0
        for i in range(3):
            bound = lengths[i]
            for c in range(3):
                if A[c, i] < 0:
                    g = g0[c] + A[c] @ eps
                    bound = min(bound, eps[i] + g / -A[c, i])
            new = max(eps[i], min(bound, lengths[i]))
            progress += new - eps[i]
            eps[i] = new
        if progress <= tl:
            break
    eps = _snap(eps, g0, A, lengths, tl)
    full = eps >= lengths - tl
    eps = np.where(full, lengths, eps)
    shrunk = tuple(p[i] if full[i] else q[i] + units[i] * float(eps[i]) for i in range(3))
    margins = g0 + A @ eps
    return ShrinkState(p, q, tuple(map(float, eps)), tuple(map(float, lengths)), shrunk,
                       tuple(bool(abs(g) <= tl) for g in margins), tuple(map(bool, full)),
                       tuple(map(float, margins)), sweeps, scale)


def _snap(eps, g0, A, lengths, tl):
    """Solve the blocking constraints exactly; keep the ascent point if that fails."""
    rows, rhs = [], []
    for i in range(3):
        if eps[i] >= lengths[i] - tl:
            row = np.zeros(3)
            row[i] = 1.0
            rows.append(row)
            rhs.append(lengths[i])
            continue
        best, best_c = math.inf, None
        for c in range(3):
            if A[c, i] < 0:
                room = (g0[c] + A[c] @ eps) / -A[c, i]
                if room < best:
                    best, best_c = room, c
        if best_c is None:
            return eps
        rows.append(A[best_c])
        rhs.append(-g0[best_c])
    M = np.array(rows)
    if np.linalg.matrix_rank(M) < 3 or np.linalg.cond(M) > 1e10:
        return eps
    cand = np.linalg.solve(M, np.array(rhs))
    cand = np.clip(cand, 0.0, lengths)
    if (np.abs(cand - eps) > 1e3 * tl).any():
        return eps
    if (g0 + A @ cand < -1e-3 * tl).any() or (cand < eps - 1e3 * tl).any():
        return eps
    return cand


@dataclass(frozen=True)
class ProofWitness:
    point: Point2
    case: str
    labeling: Tuple[int, int, int]
    shrunk_slack: float
    original_slack: float


def _max_slack(point, disks):
    return max(d.slack(point) for d in disks)


def witness_from_proof(state: ShrinkState, tol: Optional[Tolerance] = None) -> ProofWitness:
    """Common point of the three shrunk disks, following the case analysis.

    Collinear reds: the shared point of the three chords on the red line
    (the common perpendicular foot when the feet coincide).  Some pair fully
    shrunk: that red point.  Otherwise two perpendicular pairs share a pivot
    red point; under each consistent relabeling try the foot on the pivot's
    second side, then the three-circle common point.
    """
    tol = tol or Tolerance()
    p, t = state.p, state.shrunk
    tl = tol.length(state.scale)
    small = state.shrunk_disks()
    big = state.original_disks()

    def done(point, case, labeling):
        s = _max_slack(point, small)
        return ProofWitness(Point2(*point), case, labeling, s, _max_slack(point, big))

    if abs(orient(*p)) <= tol.rel * state.scale ** 2:
        i, j = max(itertools.combinations(range(3), 2), key=lambda ij: dist(p[ij[0]], p[ij[1]]))
        a, b = p[i], p[j]
        feet = [signed_projection(a, b, x) for x in t]
        own = [signed_projection(a, b, x) for x in p]
        axis = unit(b - a)
        if max(feet) - min(feet) <= tl:
            s = sum(feet) / 3
        else:
            lo = max(min(f, o) for f, o in zip(feet, own))
            hi = min(max(f, o) for f, o in zip(feet, own))
            s = (lo + hi) / 2
        return done(a + axis * s, "collinear", (0, 1, 2))

    for i in range(3):
        if state.full[i]:
            others = tuple(k for k in range(3) if k != i)
            return done(p[i], "full", (i,) + others)

    attempts = {}
    for lab in itertools.permutations(range(3)):
        a, b, c = lab
        if not (state.pair_tight(a, b) and state.pair_tight(a, c)):
            continue
        s13 = orthogonal_projection(p[a], p[c], t[a])
        if small[b].slack(s13) <= tl:
            w = done(s13, "foot", lab)
            if w.shrunk_slack <= tl:
                return w
            attempts[lab] = ("foot", w.shrunk_slack)
        try:
            frame = PerpendicularFrame.from_lines(
                p[a], p[b], p[c],
                Line2.perpendicular(t[a], p[b] - p[a]),
                Line2.perpendicular(t[b], p[c] - p[b]),
                Line2.perpendicular(t[a], p[a] - p[c]), tol)
            O = lemma3_solve(frame, tol).point
        except DiamatchError as exc:
            attempts[lab] = ("three-circle", repr(exc))
            continue
        w = done(O, "three-circle", lab)
        if w.shrunk_slack <= tl:
            return w
        attempts[lab] = ("three-circle", w.shrunk_slack)
    raise CaseResolutionError("no case of the shrinking argument produced a common point",
                              {"tight": state.tight, "full": state.full,
                               "margins": state.margins, "attempts": attempts})
