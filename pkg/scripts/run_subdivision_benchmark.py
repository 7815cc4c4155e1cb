#!/usr/bin/env python3
"""Benchmark subdivision strategies on random cones over lattice simplices.

Generates d=5 simplicial cones with generators of equal coordinate sum
(the hard family: huge determinant, small height) and compares the
no-subdivision baseline against the chosen strategies, reporting the
result-table quantities: volume used, integer programs solved,
improvement factor, runtimes.
"""

import argparse
import csv
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from conekit import linalg as la
from conekit.cone import ConeInput
from conekit.pipeline import RunOptions, compute
from conekit.subdivide import SubdivisionConfig


def height_simplex(rng, d, h, entry, det_lo, det_hi):
    while True:
        rows = []
        for _ in range(d):
            v = [rng.randint(-entry, entry) for _ in range(d - 1)]
            v.append(h - sum(v))
            rows.append(tuple(v))
        if any(la.content(r) != 1 for r in rows):
            continue
        det = abs(la.determinant(la.as_mat(rows)))
        if det_lo <= det <= det_hi:
            return tuple(rows), det


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--dim", type=int, default=5)
    ap.add_argument("--height", type=int, default=10)
    ap.add_argument("--entry", type=int, default=80)
    ap.add_argument("--det-min", type=float, default=2e7)
    ap.add_argument("--det-max", type=float, default=7e7)
    ap.add_argument("--volume-bound", type=int, default=10**4)
    ap.add_argument("--node-limit", type=int, default=500)
    ap.add_argument("--strategies", default="ip,approx,ip_then_approx")
    ap.add_argument("--seed", type=int, default=108)
    ap.add_argument("--csv", default=None, help="write per-run rows to this file")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    instances = [height_simplex(rng, args.dim, args.height, args.entry,
                                int(args.det_min), int(args.det_max))
                 for _ in range(args.instances)]
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    goals = frozenset({"hilbert_series"})
    rows = []
    header = ("instance", "det", "strategy", "volume_used", "ips_solved",
              "improvement_factor", "seconds")
    print(f"{'det':>12} {'strategy':>16} {'used':>12} {'ips':>6} "
          f"{'improvement':>12} {'seconds':>8}")
    for idx, (gens, det) in enumerate(instances):
        ci = ConeInput(args.dim, generators=gens, grading=(1,) * args.dim)
        reference = None
        for strategy in ["none", *strategies]:
            cfg = SubdivisionConfig(
                strategy=strategy, volume_bound=args.volume_bound,
                time_limit_scale=Fraction(1, 10), node_limit=args.node_limit)
            t0 = time.monotonic()
            res = compute(ci, RunOptions(goals=goals, subdivision=cfg))
            dt = time.monotonic() - t0
            if reference is None:
                reference = res.series
            elif res.series != reference:
                raise SystemExit(f"series mismatch for strategy {strategy}")
            st = res.stats
            print(f"{det:>12} {strategy:>16} {st.volume_used:>12} "
                  f"{st.ips_solved:>6} {float(st.improvement_factor):>12.1f} "
                  f"{dt:>8.2f}")
            rows.append((idx, det, strategy, st.volume_used, st.ips_solved,
                         str(st.improvement_factor), f"{dt:.3f}"))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
