"""Command-line entry point.

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage or
input errors.  Reports are JSON with sorted keys; the experiment writes CSV.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import campaigns
from .errors import DiamatchError
from .geom import Tolerance, default_tolerance
from .instances import DISTRIBUTIONS
from .io import read_instance
from .kgon import segment_counterexample, square_counterexample
from .svg import kgon_svg, matching_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _tolerance(args) -> Tolerance:
    if getattr(args, "tol", None) is not None:
        return Tolerance(rel=args.tol)
    return default_tolerance()


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_match(args) -> int:
    inst = read_instance(args.file)
    tol = _tolerance(args)
    out, m, family, rep = campaigns.match_report(inst, tol, timing=args.timing)
    out["report"] = "match"
    out["version"] = campaigns.REPORT_VERSION
    out["tol"] = tol.rel
    text = campaigns.dumps(out)
    _emit(text, args.json)
    if args.svg:
        Path(args.svg).write_text(matching_svg(inst, m, family.disks, rep.witness))
    return EXIT_OK if rep.feasible else EXIT_FAIL


def cmd_verify(args) -> int:
    seed_list = [args.replay] if args.replay is not None else None
    report = campaigns.run_verify(args.n_min, args.n_max, args.seeds, args.dist,
                                  _tolerance(args), args.seed_start, args.jobs,
                                  args.timing, seed_list)
    _emit(campaigns.dumps(report), args.out)
    s = report["summary"]
    for seed in s["failed_seeds"]:
        print(f"FAIL seed={seed} (replay: diamatch verify --n-min {args.n_min} "
              f"--n-max {args.n_max} --dist {args.dist} --replay {seed})", file=sys.stderr)
    print(f"verify: {s['passed']}/{s['count']} passed, worst relative slack "
          f"{s['worst_relative_slack']!r}", file=sys.stderr)
    return EXIT_OK if s["failed"] == 0 else EXIT_FAIL


def cmd_lemmas(args) -> int:
    only = args.only.split(",") if args.only else None
    report = campaigns.run_lemmas(args.seeds, only, _tolerance(args), args.dump_failures,
                                  args.jobs, args.seed_start)
    _emit(campaigns.dumps(report), args.out)
    for name, s in report["suites"].items():
        print(f"{name}: {s['passed']}/{s['trials']} passed, worst residual "
              f"{s['worst_residual']!r}", file=sys.stderr)
    return EXIT_OK if report["summary"]["passed"] else EXIT_FAIL


def cmd_counterexample(args) -> int:
    tol = _tolerance(args)
    if args.kind == "kgon":
        if args.k is None:
            raise DiamatchError("--k is required for --kind kgon")
        rep = square_counterexample(args.k, args.side, args.jitter, args.seed, tol)
        body = {
            "kind": "kgon", "k": rep.k, "side": rep.side,
            "reds": [list(p) for p in rep.instance.reds],
            "blues": [list(p) for p in rep.instance.blues],
            "matchings": [list(m.perm) for m in rep.matchings],
            "kgons": [[{"center": list(g.center), "circumradius": g.circumradius,
                        "orientation": g.orientation, "area": g.area} for g in pair]
                      for pair in rep.kgons],
            "disjoint": list(rep.disjoint), "gaps": list(rep.gaps), "margin": rep.margin,
            "all_disjoint": rep.all_disjoint,
        }
        ok = rep.all_disjoint
        if args.svg:
            Path(args.svg).write_text(kgon_svg(rep))
    else:
        rep = segment_counterexample(args.jitter, args.seed)
        body = {
            "kind": "segment",
            "reds": [list(p) for p in rep.instance.reds],
            "blues": [list(p) for p in rep.instance.blues],
            "matchings": [list(m.perm) for m in rep.matchings],
            "segments_intersect": list(rep.intersects),
            "no_three_collinear": rep.no_three_collinear,
            "convex_position": rep.convex_position,
            "some_non_intersecting": rep.some_non_intersecting,
        }
        ok = rep.some_non_intersecting
    body.update(report="counterexample", version=campaigns.REPORT_VERSION)
    _emit(campaigns.dumps(body), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_experiment(args) -> int:
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    rows = campaigns.run_experiment(strategies, args.n_min, args.n_max, args.seeds,
                                    _tolerance(args), args.dist, args.seed_start, args.jobs)
    _emit(campaigns.experiment_csv(rows), args.out)
    summary = campaigns.experiment_summary(rows)
    for name, s in summary.items():
        print(f"{name}: feasible {s['feasible']}/{s['count']}, all pairs intersecting "
              f"{s['all_pairwise']}/{s['count']}", file=sys.stderr)
    bad = ("max-sq" in summary and summary["max-sq"]["feasible"] < summary["max-sq"]["count"]) or \
          ("local2swap" in summary and
           summary["local2swap"]["all_pairwise"] < summary["local2swap"]["count"])
    return EXIT_FAIL if bad else EXIT_OK


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None,
                        help="relative tolerance (default: $DIAMATCH_TOL or 1e-9)")
    runs = argparse.ArgumentParser(add_help=False)
    runs.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    runs.add_argument("--seed-start", type=int, default=0)
    runs.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="diamatch",
                                description="Maximum squared-distance matchings and their diametral disks.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("match", parents=[common], help="match one instance file")
    m.add_argument("file")
    m.add_argument("--svg", default=None)
    m.add_argument("--json", default=None, help="write the report here instead of stdout")
    m.add_argument("--timing", action="store_true")
    m.set_defaults(func=cmd_match)

    v = sub.add_parser("verify", parents=[common, runs], help="seeded pipeline campaign")
    v.add_argument("--n-min", type=_positive_int, default=2)
    v.add_argument("--n-max", type=_positive_int, default=16)
    v.add_argument("--seeds", type=_positive_int, default=100)
    v.add_argument("--dist", choices=DISTRIBUTIONS, default="uniform")
    v.add_argument("--replay", type=int, default=None, help="run this single seed")
    v.add_argument("--timing", action="store_true", help="include per-instance seconds")
    v.set_defaults(func=cmd_verify)

    lm = sub.add_parser("lemmas", parents=[common, runs], help="property suites for the lemmas")
    lm.add_argument("--only", default=None, help=f"comma list from {','.join(campaigns.SUITES)}")
    lm.add_argument("--seeds", type=_positive_int, default=1000)
    lm.add_argument("--dump-failures", default=None, metavar="DIR")
    lm.set_defaults(func=cmd_lemmas)

    c = sub.add_parser("counterexample", parents=[common], help="k-gon or segment constructions")
    c.add_argument("--kind", choices=("kgon", "segment"), required=True)
    c.add_argument("--k", type=int, default=None)
    c.add_argument("--side", type=_positive_float, default=2.0)
    c.add_argument("--jitter", type=float, default=0.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--svg", default=None)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_counterexample)

    e = sub.add_parser("experiment", parents=[common, runs], help="strategy comparison CSV")
    e.add_argument("--strategies", default=",".join(campaigns.STRATEGIES))
    e.add_argument("--n-min", type=_positive_int, default=2)
    e.add_argument("--n-max", type=_positive_int, default=16)
    e.add_argument("--seeds", type=_positive_int, default=100)
    e.add_argument("--dist", choices=DISTRIBUTIONS, default="uniform")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DiamatchError, ValueError, OSError) as exc:
        print(f"diamatch {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
