"""Common intersection of closed disks.

Nonemptiness is decided by the candidate-point method: the intersection of
closed disks is nonempty iff one of the disk centers or one of the pairwise
boundary-circle intersection points lies in every disk.  The slack of a
point is ``max_i |x - c_i| - r_i``; negative means strictly inside all disks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ValidationError
from .geom import Disk, Point2, Tolerance, dist, exact_disks_intersect


@dataclass(frozen=True)
class DiskFamily:
    disks: Tuple[Disk, ...]
    labels: Tuple[int, ...] = ()

    def __post_init__(self):
        disks = tuple(self.disks)
        if not disks:
            raise ValidationError("disk family must be nonempty")
        object.__setattr__(self, "disks", disks)
        labels = tuple(self.labels) or tuple(range(len(disks)))
        if len(labels) != len(disks):
            raise ValidationError("one label per disk required")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.disks)

    def arrays(self):
        centers = np.array([d.center for d in self.disks], dtype=float)
        radii = np.array([d.radius for d in self.disks], dtype=float)
        return centers, radii

    def scale(self) -> float:
        centers, radii = self.arrays()
        spread = float(np.ptp(centers, axis=0).max()) if len(centers) > 1 else 0.0
        return max(float(radii.max()), spread)

    def subfamily(self, idx) -> "DiskFamily":
        return DiskFamily(tuple(self.disks[i] for i in idx), tuple(self.labels[i] for i in idx))


@dataclass(frozen=True)
class WitnessReport:
    feasible: bool
    witness: Point2
    slack: float
    certificate: Tuple[int, ...]
    boundary: bool = False


def pairwise_intersects(d1: Disk, d2: Disk, tol: Optional[Tolerance] = None) -> bool:
    """Closed-disk intersection test; tangency counts.

    Diametral disks are first decided exactly from their endpoints; a
    negative exact verdict still passes if the gap is within ``tol``.
    """
    tol = tol or Tolerance()
    exact = exact_disks_intersect(d1, d2)
    if exact:
        return True
    gap = dist(d1.center, d2.center) - d1.radius - d2.radius
    return gap <= tol.length(max(d1.radius, d2.radius, gap))


def _boundary_points(centers, radii, rel, abs_):
    """All pairwise circle intersection points, in (i<j, +/-) order."""
    n = len(radii)
    if n < 2:
        return np.zeros((0, 2)), np.zeros((0, 2), dtype=np.int64)
    ii, jj = np.triu_indices(n, 1)
    c1, c2 = centers[ii], centers[jj]
    r1, r2 = radii[ii], radii[jj]
    delta = c2 - c1
    d = np.hypot(delta[:, 0], delta[:, 1])
    eps = rel * np.maximum(np.maximum(r1, r2), d) + abs_
    meets = (d > eps) & (d <= r1 + r2 + eps) & (d >= np.abs(r1 - r2) - eps)
    tangent = meets & ((np.abs(d - (r1 + r2)) <= eps) | (np.abs(d - np.abs(r1 - r2)) <= eps))
    with np.errstate(divide="ignore", invalid="ignore"):
        u = delta / d[:, None]
        a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    a = np.clip(a, -r1, r1)
    h = np.sqrt(np.maximum(r1 * r1 - a * a, 0.0))
    h = np.where(tangent, 0.0, h)
    base = c1 + u * a[:, None]
    w = np.stack([-u[:, 1], u[:, 0]], axis=1) * h[:, None]
    plus, minus = base + w, base - w
    # interleave so each pair contributes (+, -) consecutively
    pts = np.stack([plus, minus], axis=1).reshape(-1, 2)
    src = np.repeat(np.stack([ii, jj], axis=1), 2, axis=0)
    keep = np.repeat(meets, 2)
    keep[1::2] &= ~tangent
    return pts[keep], src[keep]


def _candidates(centers, radii, rel, abs_):
    bpts, _ = _boundary_points(centers, radii, rel, abs_)
    return np.concatenate([centers, bpts], axis=0)


def _slacks(points, centers, radii):
    diff = points[:, None, :] - centers[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1]) - radii[None, :]


def slack_at(family: DiskFamily, p) -> float:
    centers, radii = family.arrays()
    return float(_slacks(np.asarray([p], dtype=float), centers, radii).max())


def _best_candidate(centers, radii, rel, abs_):
    cands = _candidates(centers, radii, rel, abs_)
    s = _slacks(cands, centers, radii)
    worst = s.max(axis=1)
    k = int(np.argmin(worst))
    return cands[k], float(worst[k]), s[k]


def _certificate(per_disk, slack, eps):
    idx = np.flatnonzero(per_disk >= slack - eps)
    return tuple(int(i) for i in idx[:3])


def common_intersection_witness(family: DiskFamily, tol: Optional[Tolerance] = None) -> WitnessReport:
    """Decide whether all disks share a point and return a witness.

    When infeasible, the witness is the min-slack point from
    :func:`refine_min_slack`, so ``slack`` measures the gap.
    """
    tol = tol or Tolerance()
    centers, radii = family.arrays()
    eps = tol.length(family.scale())
    point, slack, per_disk = _best_candidate(centers, radii, tol.rel, tol.abs)
    if slack <= eps:
        return WitnessReport(True, Point2(*map(float, point)), slack,
                             _certificate(per_disk, slack, eps), abs(slack) <= eps)
    point, slack = refine_min_slack(family, tol)
    per_disk = _slacks(np.asarray([point]), centers, radii)[0]
    return WitnessReport(False, point, slack, _certificate(per_disk, slack, eps), abs(slack) <= eps)


def triple_intersects(d1: Disk, d2: Disk, d3: Disk, tol: Optional[Tolerance] = None) -> bool:
    return common_intersection_witness(DiskFamily((d1, d2, d3)), tol).feasible


def all_triples_intersect(family: DiskFamily, tol: Optional[Tolerance] = None):
    """Check every sub-family of size min(3, n); returns (ok, first failing index tuple).

    Uses the same candidate rule as :func:`common_intersection_witness`
    restricted to each triple, with the family's tolerance scale.
    """
    tol = tol or Tolerance()
    n = len(family)
    if n < 3:
        rep = common_intersection_witness(family, tol)
        return rep.feasible, (None if rep.feasible else tuple(range(n)))
    centers, radii = family.arrays()
    eps = tol.length(family.scale())
    bpts, src = _boundary_points(centers, radii, tol.rel, tol.abs)
    # slack of each boundary point against every disk, and of each center
    bs = _slacks(bpts, centers, radii) if len(bpts) else np.zeros((0, n))
    cs = _slacks(centers, centers, radii)
    slot = np.full((n, n, 2), -1, dtype=np.int64)
    for k, (i, j) in enumerate(src):
        slot[i, j, 0 if slot[i, j, 0] < 0 else 1] = k
    triples = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)
    best = np.full(len(triples), np.inf)
    for c in range(3):
        # each center against the triple's three disks
        best = np.minimum(best, cs[triples[:, c][:, None], triples].max(axis=1))
    padded = np.concatenate([bs, np.full((1, n), np.inf)], axis=0)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        for s in range(2):
            k = slot[triples[:, a], triples[:, b], s]
            worst = padded[k[:, None], triples].max(axis=1)
            best = np.minimum(best, worst)
    bad = np.flatnonzero(best > eps)
    if bad.size:
        return False, tuple(int(x) for x in triples[bad[0]])
    return True, None


def refine_min_slack(family: DiskFamily, tol: Optional[Tolerance] = None, max_iter: int = 200):
    """Point minimising ``max_i |x - c_i| - r_i`` (Chebyshev-style depth).

    Bisects on the slack ``t``: the disks inflated by ``t`` have a common
    point iff ``t`` is at least the optimum.
    """
    tol = tol or Tolerance()
    centers, radii = family.arrays()
    if len(radii) == 1:
        return Point2(*map(float, centers[0])), -float(radii[0])
    scale = max(family.scale(), 1e-300)
    fine = tol.rel * 1e-3
    lo = -float(radii.min())
    point, hi, _ = _best_candidate(centers, radii, fine, 0.0)
    stop = max(fine * scale, 8 * np.finfo(float).eps * scale)
    best_pts = np.asarray([point])
    for _ in range(max_iter):
        if hi - lo <= stop:
            break
        mid = 0.5 * (lo + hi)
        grown = radii + mid
        cands = _candidates(centers, grown, fine, 0.0)
        s = _slacks(cands, centers, grown).max(axis=1)
        inside = s <= fine * scale
        if inside.any():
            hi = mid
            best_pts = cands[inside]
        else:
            lo = mid
    pool = np.concatenate([best_pts.mean(axis=0)[None, :], best_pts], axis=0)
    worst = _slacks(pool, centers, radii).max(axis=1)
    k = int(np.argmin(worst))
    return Point2(float(pool[k, 0]), float(pool[k, 1])), float(worst[k])
