#!/usr/bin/env python3
"""Run every identity family on every applicable catalog entry, plus the
full transformation-law suite, and print a compact summary table.

This is the long-form laboratory run; the pytest acceptance module covers
the same ground with pinned tolerances.  Exit code 0 iff nothing failed.

Usage:
    python scripts/run_full_suite.py [--points N] [--seed N]
"""

import argparse
import sys
import time

from ctlab import catalog, conformal, identities

SCHEDULE = [
    # entry, kwargs, identity families
    ("euclidean", {"dim": 3}, ["COMM", "SOL"]),
    ("euclidean", {"dim": 4}, ["SOL", "HIGH"]),
    ("sphere", {"dim": 3}, ["COMM", "CE"]),
    ("sphere", {"dim": 4, "radius": 2.0}, ["CE"]),
    ("sphere_killing", {"dim": 3}, ["SOL", "GRS"]),
    ("hyperbolic", {"dim": 3}, ["CE"]),
    ("s2xs2", {}, ["COMM"]),
    ("conformal_s2xs2", {"seed": 0}, ["CE"]),
    ("cigar_x_line", {}, ["SOL", "GRS"]),
    ("cigar_x_flat", {"dim": 4}, ["SOL", "GRS", "HIGH"]),
    ("conformal_gaussian", {"dim": 4}, ["CGRS"]),
    ("gaussian_plus_killing", {"dim": 3}, ["SOL", "GRS"]),
    ("conformal_gaussian_plus_killing", {"dim": 3}, ["CGERS", "CGRS"]),
    ("random", {"dim": 3, "seed": 1}, ["COMM"]),
    ("random", {"dim": 4, "seed": 2}, ["COMM"]),
    ("random", {"dim": 5, "seed": 3}, ["COMM"]),
]

LAW_SCHEDULE = [
    ("conformal_gaussian", {"dim": 4}),
    ("conformal_gaussian_plus_killing", {"dim": 3}),
    ("random", {"dim": 4, "seed": 5}),
]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.time()
    failures = 0
    print(f"{'geometry':46} {'suite':6} {'pass':>4} {'skip':>4} "
          f"{'fail':>4} {'worst residual':>14}")
    for name, kw, fams in SCHEDULE:
        entry = catalog.load(name, **kw)
        rows = identities.verify(
            entry.geometry, identities.select_records(fams),
            entry.geometry.sample_points(args.points, args.seed))
        worst = max((r.max_residual for r in rows
                     if r.max_residual is not None), default=0.0)
        npass = sum(r.status == "pass" for r in rows)
        nskip = sum(r.status.startswith("skipped") for r in rows)
        nfail = sum(r.status == "fail" for r in rows)
        failures += nfail
        print(f"{entry.name:46} {'+'.join(fams):6} {npass:>4} {nskip:>4} "
              f"{nfail:>4} {worst:>14.3e}")
        for r in rows:
            if r.status == "fail":
                print(f"    FAIL {r.id}: {r.max_residual:.3e} > {r.tol:.1e}")

    for name, kw in LAW_SCHEDULE:
        entry = catalog.load(name, **kw)
        pair = conformal.rescale(entry.geometry)
        rows = conformal.verify_transform(
            pair, conformal.select_laws(),
            pair.base.sample_points(args.points, args.seed))
        worst = max((r.max_residual for r in rows
                     if r.max_residual is not None), default=0.0)
        npass = sum(r.status == "pass" for r in rows)
        nskip = sum(r.status.startswith("skipped") for r in rows)
        nfail = sum(r.status == "fail" for r in rows)
        failures += nfail
        print(f"{entry.name:46} {'LAW':6} {npass:>4} {nskip:>4} "
              f"{nfail:>4} {worst:>14.3e}")
        for r in rows:
            if r.status == "fail":
                print(f"    FAIL {r.id}: {r.max_residual:.3e} > {r.tol:.1e}")

    print(f"\ntotal time {time.time() - t0:.1f}s; "
          f"{'ALL PASS' if failures == 0 else f'{failures} FAILURES'}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
