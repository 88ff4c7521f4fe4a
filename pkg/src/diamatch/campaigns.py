"""Seeded campaigns behind the ``verify``, ``lemmas`` and ``experiment`` commands.

Every trial is a pure function of its seed, so workers can run trials in
any order.  Results are collected with ``Executor.map``, which preserves
input order, and reports contain no timing unless asked for, so the JSON
and CSV output is byte-identical across runs and worker counts.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DiamatchError, ValidationError
from .geom import Disk, HalfPlane, Line2, Point2, Tolerance, diametral_disk, dist, perp
from .instances import DISTRIBUTIONS, generate_instance, n_for_seed, rng_for
from .intersection import (DiskFamily, all_triples_intersect, common_intersection_witness,
                           pairwise_intersects)
from .lemmas import (PerpendicularFrame, check_lemma1, check_lemma4, check_lemma5,
                     lemma3_solve, shrink_triple, witness_from_proof)
from .matching import (Instance, brute_force_max_matching, greedy_matching,
                       is_k_subset_maximum, local_search_2swap, max_matching, min_matching,
                       random_matching)

REPORT_VERSION = 1
BRUTE_FORCE_LIMIT = 7


def run_parallel(fn, items, jobs: int = 1):
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def dumps(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def disks_for(instance: Instance, matching):
    return tuple(diametral_disk(r, b) for r, b in matching.pairs(instance))


# -- match / verify -------------------------------------------------------------

def match_report(instance: Instance, tol: Optional[Tolerance] = None, timing: bool = False) -> dict:
    """Run matching -> disks -> witness on one instance."""
    tol = tol or Tolerance()
    t0 = time.perf_counter()
    m = max_matching(instance, tol)
    family = DiskFamily(disks_for(instance, m))
    rep = common_intersection_witness(family, tol)
    diam = instance.diameter()
    out = {
        "n": instance.n,
        "perm": list(m.perm),
        "weight": m.weight,
        "witness": [rep.witness.x, rep.witness.y],
        "slack": rep.slack,
        "relative_slack": rep.slack / diam if diam > 0 else 0.0,
        "certificate": list(rep.certificate),
        "feasible": rep.feasible,
    }
    if instance.name is not None:
        out["name"] = instance.name
    if timing:
        out["seconds"] = time.perf_counter() - t0
    return out, m, family, rep


def verify_one(seed: int, n_min: int, n_max: int, dist_name: str, rel: float,
               timing: bool = False) -> dict:
    tol = Tolerance(rel=rel)
    n = n_for_seed(seed, n_min, n_max)
    inst = generate_instance(n, seed, dist_name)
    out, m, family, rep = match_report(inst, tol, timing)
    out.pop("name", None)
    out["seed"] = seed
    failures = []
    bound = tol.length(inst.diameter())
    if not (rep.feasible and rep.slack <= bound):
        failures.append("witness")
    for k in (2, 3):
        chk = is_k_subset_maximum(inst, m, k, tol)
        out[f"k{k}_subset"] = chk.ok
        if not chk:
            failures.append(f"k{k}_subset")
    helly_ok, _ = all_triples_intersect(family, tol)
    out["helly_consistent"] = helly_ok == rep.feasible
    if helly_ok != rep.feasible:
        failures.append("helly")
    if n <= BRUTE_FORCE_LIMIT:
        bf = brute_force_max_matching(inst, tol)
        out["brute_force_weight"] = bf.weight
        if bf.weight != m.weight:
            failures.append("brute_force")
    else:
        out["brute_force_weight"] = None
    out["failures"] = failures
    out["passed"] = not failures
    return out


def summarize(records, key="relative_slack") -> dict:
    passed = sum(1 for r in records if r["passed"])
    slacks = [r["slack"] for r in records]
    return {
        "count": len(records),
        "passed": passed,
        "failed": len(records) - passed,
        "failed_seeds": [r["seed"] for r in records if not r["passed"]],
        "worst_slack": max(slacks) if slacks else None,
        "worst_relative_slack": max(r[key] for r in records) if records else None,
    }


def run_verify(n_min: int, n_max: int, seeds: int, dist_name: str = "uniform",
               tol: Optional[Tolerance] = None, seed_start: int = 0, jobs: int = 1,
               timing: bool = False, seed_list=None) -> dict:
    tol = tol or Tolerance()
    if n_min < 1 or n_max < n_min:
        raise ValidationError("need 1 <= n-min <= n-max")
    if dist_name not in DISTRIBUTIONS:
        raise ValidationError(f"unknown distribution {dist_name!r}")
    if seed_list is None:
        if seeds < 1:
            raise ValidationError("seed count must be at least 1")
        seed_list = range(seed_start, seed_start + seeds)
    fn = partial(verify_one, n_min=n_min, n_max=n_max, dist_name=dist_name, rel=tol.rel,
                 timing=timing)
    records = run_parallel(fn, sorted(seed_list), jobs)
    return {
        "report": "verify",
        "version": REPORT_VERSION,
        "params": {"n_min": n_min, "n_max": n_max, "dist": dist_name, "tol": tol.rel,
                   "seeds": [min(seed_list), max(seed_list)] if records else []},
        "instances": records,
        "summary": summarize(records),
    }


# -- lemma suites -------------------------------------------------------------------

def _pt(p):
    return [float(p[0]), float(p[1])]


def suite_lemma1(seed, tol):
    """Four random points; whenever the straight pairing is maximal the
    second blue projects no further right than the first."""
    rng = rng_for(seed, 1)
    p1, p2, q1, q2 = (Point2(*v) for v in rng.uniform(-1, 1, size=(4, 2)))
    rep = check_lemma1(p1, p2, q1, q2, tol)
    scale = max(dist(a, b) for a in (p1, p2, q1, q2) for b in (p1, p2, q1, q2))
    resid = (rep.x_q2 - rep.x_q1) / scale if rep.is_max_for_four else -math.inf
    return rep.holds, resid, {"p1": _pt(p1), "p2": _pt(p2), "q1": _pt(q1), "q2": _pt(q2)}


def suite_lemma2(seed, tol):
    """2-swap local optimum from a random start has pairwise-intersecting disks."""
    n = 2 + seed % 15
    inst = generate_instance(n, seed, "uniform")
    start = random_matching(inst, seed)
    m = local_search_2swap(inst, start, seed, tol)
    disks = disks_for(inst, m)
    worst = -math.inf
    ok = True
    for i in range(n):
        for j in range(i + 1, n):
            a, b = disks[i], disks[j]
            worst = max(worst, dist(a.center, b.center) - a.radius - b.radius)
            ok &= pairwise_intersects(a, b, tol)
    return ok, worst / inst.diameter(), {"n": n, "seed": seed, "perm": list(m.perm)}


def random_frame(rng):
    while True:
        A, B, C = (Point2(*v) for v in rng.uniform(-1, 1, size=(3, 2)))
        s = max(dist(A, B), dist(B, C), dist(C, A))
        area = abs((B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x))
        if area > 0.05 * s * s:
            break
    anchors = [Point2(*v) for v in rng.uniform(-1.5, 1.5, size=(3, 2))]
    return (A, B, C), anchors


def suite_lemma3(seed, tol):
    """Algebraic and circle-intersection routes give the same common point."""
    rng = rng_for(seed, 3)
    (A, B, C), anchors = random_frame(rng)
    frame = PerpendicularFrame.from_anchors(A, B, C, *anchors, tol=tol)
    res = lemma3_solve(frame, tol)
    ok = res.discrepancy <= 1e-9 * res.scale and res.residual <= 1e-10 * res.scale
    cfg = {"A": _pt(A), "B": _pt(B), "C": _pt(C), "anchors": [_pt(a) for a in anchors]}
    return ok, max(res.discrepancy, res.residual) / res.scale, cfg


def random_lemma4_config(rng):
    """Points with A, B on a horizontal line, R above, c2 through B and P not enclosing R."""
    while True:
        ox, oy = rng.uniform(-1, 1, size=2)
        b = rng.uniform(0.1, 2)
        px = rng.uniform(-2, 3)
        if abs(px) < 0.05 or abs(px - b) < 0.05:
            continue
        rx, ry = rng.uniform(-2, 2), rng.uniform(0.05, 2)
        cy = rng.uniform(-3, 3)
        center = Point2(ox + (b + px) / 2, oy + cy)
        A, B, P, R = Point2(ox, oy), Point2(ox + b, oy), Point2(ox + px, oy), Point2(ox + rx, oy + ry)
        c2 = Disk(center, dist(center, B))
        if dist(R, center) > c2.radius * (1 + 1e-6):
            return A, B, P, R, c2


def suite_lemma4(seed, tol):
    """O lands on B's side of line(A, R)."""
    A, B, P, R, c2 = random_lemma4_config(rng_for(seed, 4))
    rep = check_lemma4(A, B, P, R, c2, tol)
    cfg = {"A": _pt(A), "B": _pt(B), "P": _pt(P), "R": _pt(R),
           "c2": {"center": _pt(c2.center), "radius": c2.radius}}
    return rep.holds, 0.0 if rep.holds else 1.0, cfg


def random_lemma5_config(rng):
    phi = rng.uniform(0, 2 * math.pi)
    u = Point2(math.cos(phi), math.sin(phi))
    origin = Point2(*rng.uniform(-1, 1, size=2))
    r, c = rng.uniform(-1, 1, size=2)
    side = 1 if rng.random() < 0.5 else -1
    inward = perp(u) * side
    R, C = origin + u * r, origin + u * c
    H = R + inward * rng.uniform(-1, 1)
    a, b = np.sort(rng.uniform(0, 2, size=2))
    X, Y = H + inward * float(a), H + inward * float(b)
    ell = Line2(origin, u)
    return ell, R, C, H, inward, HalfPlane(ell, side), X, Y


def suite_lemma5(seed, tol):
    """D(X,C) & delta sits inside D(Y,C) & delta when X is no farther from H."""
    ell, R, C, H, hdir, delta, X, Y = random_lemma5_config(rng_for(seed, 5))
    rep = check_lemma5(ell, R, C, H, hdir, delta, X, Y, tol, samples=10_000, seed=seed)
    cfg = {"ell": [_pt(ell.anchor), _pt(ell.direction)], "R": _pt(R), "C": _pt(C),
           "H": _pt(H), "h_dir": _pt(hdir), "side": delta.side, "X": _pt(X), "Y": _pt(Y)}
    return rep.holds, 0.0 if rep.holds else 1.0, cfg


def shrink_contained(state, tl) -> bool:
    for small, big in zip(state.shrunk_disks(), state.original_disks()):
        if dist(small.center, big.center) + small.radius > big.radius + tl:
            return False
    return True


def suite_lemma6(seed, tol):
    """Shrink a maximum-matching triple and read off the common point."""
    inst = generate_instance(3, seed, "uniform")
    m = max_matching(inst, tol)
    args = []
    for r, b in m.pairs(inst):
        args += [r, b]
    cfg = {"seed": seed, "pairs": [[_pt(r), _pt(b)] for r, b in m.pairs(inst)]}
    try:
        state = shrink_triple(*args, tol=tol)
        w = witness_from_proof(state, tol)
    except DiamatchError as exc:
        cfg["error"] = repr(exc)
        return False, math.inf, cfg
    tl = tol.length(state.scale)
    solver = common_intersection_witness(DiskFamily(state.original_disks()), tol)
    ok = (shrink_contained(state, tl) and w.original_slack <= 1e-9 * state.scale
          and solver.feasible)
    cfg["case"] = w.case
    return ok, w.original_slack / state.scale, cfg


def random_disk_family(seed):
    """Disk families mixing generic, engineered-infeasible and near-tangent cases."""
    rng = rng_for(seed, 7)
    kind = seed % 4
    if kind == 0:
        m = 3 + int(rng.integers(0, 10))
        c = rng.uniform(-1, 1, size=(m, 2))
        r = rng.uniform(0.3, 1.5, size=m)
    elif kind == 1:
        # three disks pairwise overlapping around an empty triangle, plus big covers
        s = rng.uniform(0.5, 2)
        ang = rng.uniform(0, 2 * math.pi) + np.arange(3) * 2 * math.pi / 3
        c = s / math.sqrt(3) * np.stack([np.cos(ang), np.sin(ang)], axis=1)
        r = np.full(3, s * rng.uniform(0.51, 0.57))
        extra = int(rng.integers(0, 5))
        c = np.concatenate([c, rng.uniform(-0.2, 0.2, size=(extra, 2))])
        r = np.concatenate([r, np.full(extra, 3 * s)])
    elif kind == 2:
        # all disks pass through one point: common intersection is that single point
        m = 3 + int(rng.integers(0, 6))
        x = rng.uniform(-1, 1, size=2)
        c = rng.uniform(-1, 1, size=(m, 2))
        r = np.hypot(*(c - x).T)
    else:
        # diametral disks of a random maximum matching
        n = 3 + int(rng.integers(0, 8))
        inst = generate_instance(n, seed, "uniform")
        return DiskFamily(disks_for(inst, max_matching(inst)))
    return DiskFamily(tuple(Disk(Point2(*ci), float(ri)) for ci, ri in zip(c.tolist(), r)))


def suite_helly(seed, tol):
    """All-triples verdict agrees with the global witness, up to the tolerance band."""
    fam = random_disk_family(seed)
    rep = common_intersection_witness(fam, tol)
    triples_ok, _ = all_triples_intersect(fam, tol)
    eps = tol.length(fam.scale())
    agree = triples_ok == rep.feasible
    ok = agree or abs(rep.slack) <= 2 * eps
    cfg = {"disks": [[_pt(d.center), d.radius] for d in fam.disks], "kind": seed % 4,
           "feasible": rep.feasible, "triples": triples_ok}
    return ok, rep.slack / fam.scale() if not agree else -math.inf, cfg


SUITES = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "lemma4": suite_lemma4,
    "lemma5": suite_lemma5,
    "lemma6": suite_lemma6,
    "helly": suite_helly,
}

RESIDUALS = {
    "lemma1": "max (x(q2) - x(q1)) / scale over maximal configurations",
    "lemma2": "max disk-pair gap / diameter",
    "lemma3": "max(dual-path discrepancy, circle residual) / scale",
    "lemma4": "count of side violations",
    "lemma5": "count of containment violations",
    "lemma6": "max constructed-witness slack on original disks / scale",
    "helly": "relative slack of verdict disagreements",
}


def _trial(item, rel):
    name, seed = item
    ok, resid, cfg = SUITES[name](seed, Tolerance(rel=rel))
    return name, seed, bool(ok), float(resid), cfg


def run_lemmas(seeds: int = 1000, only=None, tol: Optional[Tolerance] = None,
               dump_failures=None, jobs: int = 1, seed_start: int = 0) -> dict:
    tol = tol or Tolerance()
    names = list(SUITES) if not only else list(only)
    for name in names:
        if name not in SUITES:
            raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if seeds < 1:
        raise ValidationError("seed count must be at least 1")
    items = [(name, s) for name in names for s in range(seed_start, seed_start + seeds)]
    results = run_parallel(partial(_trial, rel=tol.rel), items, jobs)
    suites = {}
    for name in names:
        rows = [r for r in results if r[0] == name]
        finite = [r[3] for r in rows if math.isfinite(r[3])]
        failed = [r for r in rows if not r[2]]
        suites[name] = {
            "trials": len(rows),
            "passed": len(rows) - len(failed),
            "failed": len(failed),
            "failed_seeds": [r[1] for r in failed],
            "worst_residual": max(finite) if finite else None,
            "residual": RESIDUALS[name],
        }
        if dump_failures and failed:
            out = Path(dump_failures)
            out.mkdir(parents=True, exist_ok=True)
            for _, seed, _, _, cfg in failed:
                (out / f"{name}-seed{seed}.json").write_text(
                    dumps({"suite": name, "seed": seed, "tol": tol.rel, "config": cfg}))
    return {
        "report": "lemmas",
        "version": REPORT_VERSION,
        "params": {"seeds": [seed_start, seed_start + seeds - 1], "tol": tol.rel},
        "suites": suites,
        "summary": {"passed": all(s["failed"] == 0 for s in suites.values())},
    }


# -- strategy experiment ----------------------------------------------------------------

STRATEGIES = ("max-sq", "min-sq", "greedy", "random", "local2swap")
CSV_COLUMNS = ("strategy", "n", "seed", "weight", "feasible", "slack", "relative_slack",
               "pairwise_rate")


def strategy_matching(name, inst, seed, tol):
    if name == "max-sq":
        return max_matching(inst, tol)
    if name == "min-sq":
        return min_matching(inst)
    if name == "greedy":
        return greedy_matching(inst)
    if name == "random":
        return random_matching(inst, seed)
    if name == "local2swap":
        return local_search_2swap(inst, random_matching(inst, seed), seed, tol)
    raise ValidationError(f"unknown strategy {name!r}; choose from {STRATEGIES}")


def experiment_row(item, n_min, n_max, dist_name, rel):
    name, seed = item
    tol = Tolerance(rel=rel)
    n = n_for_seed(seed, n_min, n_max)
    inst = generate_instance(n, seed, dist_name)
    m = strategy_matching(name, inst, seed, tol)
    disks = disks_for(inst, m)
    rep = common_intersection_witness(DiskFamily(disks), tol)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    hits = sum(pairwise_intersects(disks[i], disks[j], tol) for i, j in pairs)
    return {
        "strategy": name, "n": n, "seed": seed, "weight": m.weight,
        "feasible": rep.feasible, "slack": rep.slack,
        "relative_slack": rep.slack / inst.diameter(),
        "pairwise_rate": hits / len(pairs) if pairs else 1.0,
    }


def run_experiment(strategies, n_min: int, n_max: int, seeds: int,
                   tol: Optional[Tolerance] = None, dist_name: str = "uniform",
                   seed_start: int = 0, jobs: int = 1):
    tol = tol or Tolerance()
    strategies = list(strategies)
    for s in strategies:
        if s not in STRATEGIES:
            raise ValidationError(f"unknown strategy {s!r}; choose from {STRATEGIES}")
    if seeds < 1 or n_min < 1 or n_max < n_min:
        raise ValidationError("need seeds >= 1 and 1 <= n-min <= n-max")
    items = [(s, k) for s in strategies for k in range(seed_start, seed_start + seeds)]
    fn = partial(experiment_row, n_min=n_min, n_max=n_max, dist_name=dist_name, rel=tol.rel)
    return run_parallel(fn, items, jobs)


def experiment_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else str(v).lower() if isinstance(v, bool)
                    else v for v in (r[c] for c in CSV_COLUMNS)])
    return buf.getvalue()


def experiment_summary(rows) -> dict:
    out = {}
    for r in rows:
        s = out.setdefault(r["strategy"], {"count": 0, "feasible": 0, "all_pairwise": 0})
        s["count"] += 1
        s["feasible"] += bool(r["feasible"])
        s["all_pairwise"] += r["pairwise_rate"] == 1.0
    return out
