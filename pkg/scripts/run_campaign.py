#!/usr/bin/env python3
"""Run a cross-validation campaign from a JSON config and summarize it.

Reports, per instance size, how many (instance, goal set) pairs were solved
and how the nim values are distributed.  Exits nonzero if any solvers disagree.

    python3 scripts/run_campaign.py src/convexgen/data/campaign_trees.json --out report.json
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter, defaultdict

from convexgen.explorer import CampaignConfig, cross_validate


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--out", help="report JSON (a counterexample file lands next to it)")
    ap.add_argument("--csv", help="per-evaluation CSV")
    ap.add_argument("--workers", type=int)
    args = ap.parse_args()

    cfg = CampaignConfig.load(args.config)
    if args.out:
        cfg.sink = args.out
    if args.csv:
        cfg.csv = args.csv
    if args.workers:
        cfg.workers = args.workers

    report = cross_validate(cfg)
    by_size: dict[int, Counter] = defaultdict(Counter)
    for rec in report["records"]:
        values = set(rec["nim"].values())
        if len(values) == 1:
            by_size[rec["n"]][values.pop()] += 1
    print(f"{report['instances']} instances, {report['evaluations']} evaluations")
    for n in sorted(by_size):
        hist = ", ".join(f"*{v}: {c}" for v, c in sorted(by_size[n].items()))
        print(f"  n = {n:2d}  {hist}")
    bad = report["disagreements"]
    if bad:
        print(f"{len(bad)} disagreements; first: {bad[0]}")
        return 1
    print("all solvers agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())
