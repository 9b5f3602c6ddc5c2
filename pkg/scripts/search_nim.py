#!/usr/bin/env python3
"""Random search for plane (or space) configurations with a large nim value.

Draws seeded random integer point sets, picks single-point goal sets, solves
with the structure solver, and keeps the best instance seen.  The winner is
written as an instance file that ``convexgen solve`` accepts.

    python3 scripts/search_nim.py --size 10 --trials 300 --seed 1 --out best.json
"""

from __future__ import annotations

import argparse
import time

from convexgen.explorer import SplitMix64, random_points
from convexgen.formats import Instance, dump_json, instance_json
from convexgen.builders import deleted_affine
from convexgen.game import GameSpec
from convexgen.structure import nim_structure


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=10)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="where to write the best instance")
    args = ap.parse_args()

    rng = SplitMix64(args.seed)
    best, best_inst = -1, None
    counts: dict[int, int] = {}
    start = time.perf_counter()
    for trial in range(args.trials):
        cfg = random_points(rng, args.size, args.dim)
        geom = deleted_affine(cfg)
        for w in range(geom.n):
            value = nim_structure(GameSpec(geom, 1 << w))
            counts[value] = counts.get(value, 0) + 1
            if value > best:
                best = value
                best_inst = Instance(geom, "points", winning=1 << w, points=cfg,
                                     name=f"search-{args.seed}-{trial}")
                print(f"trial {trial}: nim {value} (goal point {w})", flush=True)
    elapsed = time.perf_counter() - start
    print(f"{args.trials} configurations in {elapsed:.1f}s")
    for value in sorted(counts):
        print(f"  nim {value}: {counts[value]}")
    if args.out and best_inst is not None:
        dump_json(instance_json(best_inst), args.out)
        print(f"best instance (nim {best}) written to {args.out}")


if __name__ == "__main__":
    main()
