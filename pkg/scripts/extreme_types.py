#!/usr/bin/env python3
"""Print the class types of extreme-goal games next to the closed-form table.

For points in convex position around a few interior points, every class
X_I has deficiency |S \\ I|; this lists the type computed by type calculus and
the tabulated type for each deficiency, for both parities of |S|.
"""

from __future__ import annotations

from convexgen.builders import affine_geometry
from convexgen.closed_forms import type_table_extreme
from convexgen.game import GameSpec
from convexgen.geometry import parity
from convexgen.structure import solve_structure

HEXAGON = [(0, 0), (6, 0), (9, 5), (6, 10), (0, 10), (-3, 5)]
INTERIOR = [(2, 4), (4, 6)]


def main() -> None:
    for extra in (1, 2):
        geom = affine_geometry(HEXAGON + INTERIOR[:extra])
        spec = GameSpec(geom, (1 << len(HEXAGON)) - 1)
        diagram = solve_structure(spec)
        seen = {}
        for i, cls in diagram.classes.items():
            seen.setdefault((geom.full & ~i).bit_count(), set()).add(cls.type)
        print(f"|S| = {geom.n} ({'odd' if geom.n % 2 else 'even'}), |W| = {len(HEXAGON)}")
        for delta in sorted(seen):
            table = type_table_extreme(parity(geom.full), delta)
            computed = ", ".join(map(str, sorted(seen[delta])))
            mark = "ok" if seen[delta] == {table} else "MISMATCH"
            print(f"  delta {delta}: computed {computed}  table {table}  {mark}")


if __name__ == "__main__":
    main()
