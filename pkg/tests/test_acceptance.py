"""Acceptance criteria at full scale.

Run ``pytest tests/test_acceptance.py -s`` (or execute this file directly)
to see one PASS/FAIL line per criterion.
"""

import os
import subprocess
import sys
import time

import pytest

from diamatch.campaigns import run_lemmas, run_verify
from diamatch.geom import Tolerance
from diamatch.instances import generate_instance, n_for_seed
from diamatch.intersection import common_intersection_witness
from diamatch.kgon import segment_counterexample, square_counterexample
from diamatch.matching import brute_force_max_matching, max_matching
from diamatch.campaigns import random_disk_family

JOBS = max(1, min(4, os.cpu_count() or 1))


def report(num, ok, detail):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def witness_campaign():
    """Max-matching disks share a point with slack <= 1e-9 * diameter, n in 2..32."""
    worst, failures, count = -float("inf"), [], 0
    t0 = time.perf_counter()
    for dist_name, seeds in (("uniform", 1000), ("clustered", 200), ("collinear", 200)):
        rep = run_verify(2, 32, seeds, dist_name, jobs=JOBS)
        for r in rep["instances"]:
            count += 1
            worst = max(worst, r["relative_slack"])
            if not (r["feasible"] and r["relative_slack"] <= 1e-9):
                failures.append((dist_name, r["seed"]))
    secs = time.perf_counter() - t0
    return (not failures and count == 1400 and secs < 120,
            f"{count} instances, failures {failures[:5]}, worst slack/diameter {worst:.3g}, "
            f"{secs:.1f}s")


def brute_force_campaign():
    mism = []
    for seed in range(300):
        inst = generate_instance(n_for_seed(seed, 1, 7), seed)
        if max_matching(inst).weight != brute_force_max_matching(inst).weight:
            mism.append(seed)
    return not mism, f"300 instances n<=7, exact weight mismatches {mism[:5]}"


def suite(name, seeds):
    s = run_lemmas(seeds, [name], jobs=JOBS)["suites"][name]
    return s["failed"] == 0 and s["trials"] == seeds, \
        f"{s['passed']}/{s['trials']} pass, worst residual {s['worst_residual']!r} ({s['residual']})"


def helly_campaign():
    ok, detail = suite("helly", 1000)
    tol = Tolerance()
    infeasible = sum(not common_intersection_witness(random_disk_family(s), tol).feasible
                     for s in range(1000))
    return ok and infeasible > 100, f"{detail}; {infeasible} infeasible families"


def counterexamples():
    tol = Tolerance()
    gaps = {}
    ok = True
    for k in (6, 10, 14):
        rep = square_counterexample(k, 2.0, tol=tol)
        ok &= rep.all_disjoint and min(rep.gaps) > 10 * tol.length(rep.side)
        gaps[k] = round(min(rep.gaps), 6)
    jitter_fail = [(k, s) for k in (6, 10) for s in range(100)
                   if not square_counterexample(k, 2.0, jitter=1e-3, seed=s, tol=tol).all_disjoint]
    seg = segment_counterexample()
    ok &= not jitter_fail and seg.some_non_intersecting and not seg.convex_position
    return ok, (f"square gaps {gaps}, jitter failures {jitter_fail[:5]}, "
                f"segment intersections {seg.intersects}")


def determinism():
    base = [sys.executable, "-m", "diamatch"]
    verify = ["verify", "--n-min", "2", "--n-max", "20", "--seeds", "120"]
    exper = ["experiment", "--n-min", "2", "--n-max", "12", "--seeds", "40"]
    outs = {}
    for name, args in (("verify", verify), ("experiment", exper)):
        runs = [subprocess.run(base + args + extra, capture_output=True, check=True).stdout
                for extra in ([], [], ["--jobs", "3"])]
        outs[name] = len(set(runs)) == 1 and len(runs[0]) > 0
    return all(outs.values()), f"byte-identical over 2 serial + 1 parallel run: {outs}"


CRITERIA = {
    1: witness_campaign,
    2: brute_force_campaign,
    3: lambda: suite("lemma1", 10_000),
    4: lambda: suite("lemma2", 100),
    5: lambda: suite("lemma3", 500),
    6: lambda: suite("lemma6", 1000),
    7: helly_campaign,
    8: counterexamples,
    9: determinism,
}


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    ok, detail = CRITERIA[num]()
    assert report(num, ok, detail), detail


if __name__ == "__main__":
    results = [report(n, *CRITERIA[n]()) for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
