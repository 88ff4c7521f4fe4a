import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diamatch.errors import ValidationError
from diamatch.geom import Disk, Point2, Tolerance, diametral_disk
from diamatch.instances import generate_instance
from diamatch.intersection import (DiskFamily, all_triples_intersect,
                                   common_intersection_witness, pairwise_intersects,
                                   refine_min_slack, slack_at, triple_intersects)
from diamatch.matching import max_matching


def fam(centers, radii):
    return DiskFamily(tuple(Disk(Point2(*c), float(r)) for c, r in zip(centers, radii)))


def equilateral(side, r=1.0):
    h = side * math.sqrt(3) / 2
    return fam([(0, 0), (side, 0), (side / 2, h)], [r] * 3)


def grid_min_slack(family, res=801):
    """Brute-force min over a dense grid of the max slack (upper bound on the optimum)."""
    centers, radii = family.arrays()
    lo = (centers - radii[:, None]).min(0)
    hi = (centers + radii[:, None]).max(0)
    xs = np.linspace(lo[0], hi[0], res)
    ys = np.linspace(lo[1], hi[1], res)
    X, Y = np.meshgrid(xs, ys)
    s = np.full(X.shape, -np.inf)
    for (cx, cy), r in zip(centers, radii):
        s = np.maximum(s, np.hypot(X - cx, Y - cy) - r)
    step = max(xs[1] - xs[0], ys[1] - ys[0])
    return float(s.min()), step


def test_pairwise_examples():
    assert not pairwise_intersects(Disk(Point2(0, 0), 1), Disk(Point2(3, 0), 1))
    assert pairwise_intersects(Disk(Point2(0, 0), 1), Disk(Point2(2, 0), 1))
    inst = generate_instance(2, 0)
    a, b = (diametral_disk(r, q) for r, q in max_matching(inst).pairs(inst))
    assert pairwise_intersects(a, b)
    # exact path: diametral disks tangent at a shared endpoint
    assert pairwise_intersects(diametral_disk((0, 0), (0.1, 0)), diametral_disk((0.1, 0), (0.7, 0)))


def test_triple_examples():
    assert triple_intersects(*equilateral(1).disks)
    assert not triple_intersects(*equilateral(10).disks)
    f = fam([(0, 0), (4, 0), (2, 3.4)], [2.2] * 3)
    assert all(pairwise_intersects(f.disks[i], f.disks[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
    assert not triple_intersects(*f.disks)
    best, step = grid_min_slack(f)
    assert best > step  # grid oracle agrees: no common point


def test_witness_examples():
    same = fam([(1, 2)] * 4, [3] * 4)
    rep = common_intersection_witness(same)
    assert rep.feasible and rep.witness == (1, 2) and rep.slack == -3
    rep = common_intersection_witness(fam([(0, 0), (3, 0)], [1, 1]))
    assert not rep.feasible
    assert rep.witness == pytest.approx((1.5, 0), abs=1e-9)
    assert rep.slack == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(ValidationError):
        DiskFamily(())


def test_refine_examples():
    p, s = refine_min_slack(fam([(0, 0), (3, 0)], [1, 1]))
    assert p == pytest.approx((1.5, 0), abs=1e-9) and s == pytest.approx(0.5, abs=1e-9)
    p, s = refine_min_slack(fam([(2, 2)], [5]))
    assert p == (2, 2) and s == -5
    for side in (0.5, 1, 3, 10):
        _, s = refine_min_slack(equilateral(side))
        assert s == pytest.approx(side / math.sqrt(3) - 1, abs=1e-9 * side)


def test_witness_against_grid_oracle(rng):
    for _ in range(60):
        m = int(rng.integers(2, 7))
        f = fam(rng.uniform(-1, 1, size=(m, 2)), rng.uniform(0.2, 1.4, size=m))
        rep = common_intersection_witness(f)
        grid, step = grid_min_slack(f, 401)
        assert slack_at(f, rep.witness) == pytest.approx(rep.slack, abs=1e-12)
        if rep.feasible:
            assert rep.slack <= 1e-9 * f.scale()
        else:
            # the refined point is at least as good as the grid and at most a cell worse
            assert rep.slack <= grid + 1e-9
            assert grid <= rep.slack + step
            assert grid > 0


def test_max_matching_disks_have_common_point():
    for seed in range(40):
        inst = generate_instance(2 + seed % 31, seed)
        m = max_matching(inst)
        f = DiskFamily(tuple(diametral_disk(r, b) for r, b in m.pairs(inst)))
        rep = common_intersection_witness(f)
        assert rep.feasible and rep.slack <= 1e-9 * inst.diameter()
        assert all_triples_intersect(f)[0]


def test_all_triples_reports_failing_triple():
    f = fam([(0, 0), (4, 0), (2, 3.4), (2, 1)], [2.2, 2.2, 2.2, 5])
    ok, bad = all_triples_intersect(f)
    assert not ok and bad == (0, 1, 2)
    assert all_triples_intersect(fam([(0, 0), (3, 0)], [1, 1])) == (False, (0, 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(3, 9))
def test_helly_consistency_and_monotonicity(seed, m):
    rng = np.random.Generator(np.random.PCG64(seed))
    f = fam(rng.uniform(-1, 1, size=(m, 2)), rng.uniform(0.3, 1.5, size=m))
    rep = common_intersection_witness(f)
    ok, _ = all_triples_intersect(f)
    eps = Tolerance().length(f.scale())
    assert ok == rep.feasible or abs(rep.slack) <= 2 * eps
    # dropping a disk never makes a feasible family infeasible
    if rep.feasible:
        assert common_intersection_witness(f.subfamily(range(m - 1))).feasible
    # growing all radii never makes it infeasible either
    grown = fam(f.arrays()[0], f.arrays()[1] + 0.1)
    if rep.feasible:
        assert common_intersection_witness(grown).feasible


def test_concurrent_circles_single_common_point():
    # all circles pass through (0.3, -0.2); the intersection is that single point
    x = np.array([0.3, -0.2])
    c = np.array([[1, 0], [-1, 0.5], [0, 1.2], [0.7, -1]])
    f = fam(c, np.hypot(*(c - x).T))
    rep = common_intersection_witness(f)
    assert rep.feasible and rep.boundary
    assert rep.witness == pytest.approx(tuple(x), abs=1e-8)
