"""Closed-form nim values: extreme-point goals, tree vertex geometries, lines.

Each formula checks its own hypotheses and raises :class:`NotApplicable`
outside them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .builders import PointConfig, TreeSpec, component_of, tree_components
from .game import GameSpec
from .geometry import elements_of, full_mask, parity


class NotApplicable(ValueError):
    """The instance lies outside the hypotheses of a closed form."""


class Signature(NamedTuple):
    e: int
    o: int


def nim_extreme_W(spec: GameSpec) -> int:
    geom = spec.geometry
    w = spec.winning
    if w & ~geom.extreme_points(geom.full):
        raise NotApplicable("winning set contains a point that is not extreme in S")
    odd = parity(geom.full)
    if w.bit_count() == 1:
        return 1 if odd else 2
    return 1 if odd else 0


_EXTREME_EVEN = {0: (0, 0, 0), 1: (1, 2, 1)}
_EXTREME_ODD = {0: (1, 0, 0), 1: (0, 1, 2)}


def type_table_extreme(parity_of_s: int, delta: int) -> tuple[int, int, int]:
    """Type of the class missing ``delta`` goal points when the goal is extreme in S."""
    if delta < 0:
        raise ValueError("deficiency must be non-negative")
    if parity_of_s == 0:
        if delta in _EXTREME_EVEN:
            return _EXTREME_EVEN[delta]
        return (0, 0, 1) if delta % 2 == 0 else (1, 0, 1)
    if delta in _EXTREME_ODD:
        return _EXTREME_ODD[delta]
    # |I| = |S| - delta, so an even deficiency leaves an odd class here
    return (1, 1, 0) if delta % 2 == 0 else (0, 1, 0)


@dataclass(frozen=True)
class TreeSignature:
    signature: Signature
    removed: dict[int, int]   # extreme goal vertex w -> V_w = S minus M_w


def tree_extreme_goals(tree: TreeSpec, winning: int) -> int:
    """Goal vertices whose other goal vertices share one component of T - w."""
    out = 0
    for w in elements_of(winning):
        others = winning & ~(1 << w)
        comps = tree_components(tree, w).values()
        if others == 0 or any(others & c == others for c in comps):
            out |= 1 << w
    return out


def tree_signature_multi(tree: TreeSpec, winning: int) -> TreeSignature:
    if winning.bit_count() < 2:
        raise NotApplicable("need at least two goal vertices")
    top = full_mask(tree.n)
    removed = {}
    e = o = 0
    for w in elements_of(tree_extreme_goals(tree, winning)):
        others = winning & ~(1 << w)
        start = (others & -others).bit_length() - 1
        m_w = component_of(tree.adjacency, start, top & ~(1 << w))
        v_w = top & ~m_w
        removed[w] = v_w
        if v_w.bit_count() % 2:
            o += 1
        else:
            e += 1
    return TreeSignature(Signature(e, o), removed)


_TREE_EVEN = {(1, 0): 1, (0, 1): 2, (1, 2): 2, (1, 1): 3, (2, 1): 3}
_TREE_ODD = {(0, 0): 0, (1, 1): 0, (1, 0): 2, (2, 0): 2}


def nim_from_tree_signature(n: int, sig: Sequence[int]) -> int:
    key = (sig[0], sig[1])
    if n % 2 == 0:
        return _TREE_EVEN.get(key, 0)
    return _TREE_ODD.get(key, 1)


def nim_tree_multi(tree: TreeSpec, winning: int) -> int:
    return nim_from_tree_signature(tree.n, tree_signature_multi(tree, winning).signature)


def tree_signature_single(tree: TreeSpec, w: int) -> Signature:
    if not 0 <= w < tree.n:
        raise ValueError(f"vertex {w} out of range")
    sizes = [c.bit_count() for c in tree_components(tree, w).values()]
    odd = sum(s % 2 for s in sizes)
    return Signature(len(sizes) - odd, odd)


def nim_from_single_signature(sig: Sequence[int]) -> int:
    e, o = sig
    if o == 0:
        return 1
    return 2 if e == 0 else 3


def nim_tree_single(tree: TreeSpec, w: int) -> int:
    return nim_from_single_signature(tree_signature_single(tree, w))


def nim_tree(tree: TreeSpec, winning: int) -> int:
    if winning == 0:
        raise ValueError("winning set must be nonempty")
    if winning.bit_count() == 1:
        return nim_tree_single(tree, winning.bit_length() - 1)
    return nim_tree_multi(tree, winning)


def nim_path_multi(n: int, indices: Sequence[int]) -> int:
    """Line of ``n`` points, goal at sorted 1-based positions ``indices`` (at least two)."""
    idx = list(indices)
    if len(idx) < 2:
        raise ValueError("need at least two goal indices")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing")
    if idx[0] < 1 or idx[-1] > n:
        raise ValueError(f"indices must lie in 1..{n}")
    first, last = idx[0] % 2, idx[-1] % 2
    if first != last:
        return 0
    if n % 2 == 0:
        return 3
    return 1 if first == 1 else 2


def nim_path_single(n: int, k: int) -> int:
    """Line of ``n`` points with the single goal at 1-based position ``k``."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    if n % 2 == 1:
        return 1 if k % 2 == 1 else 2
    return 2 if k in (1, n) else 3


def path_signature_multi(n: int, first: int, last: int) -> Signature:
    """Signature of a line game from the removed-end sizes ``first`` and ``n - last + 1``."""
    sizes = (first, n - last + 1)
    odd = sum(s % 2 for s in sizes)
    return Signature(2 - odd, odd)


def path_signature_single(n: int, k: int) -> Signature:
    sizes = [s for s in (k - 1, n - k) if s > 0]
    odd = sum(s % 2 for s in sizes)
    return Signature(len(sizes) - odd, odd)


@dataclass(frozen=True)
class LineReduction:
    kind: str                 # "multi" | "single" | "zero"
    n: int = 0
    indices: tuple[int, ...] = ()

    def nim(self) -> int:
        if self.kind == "zero":
            return 0
        if self.kind == "single":
            return nim_path_single(self.n, self.indices[0])
        return nim_path_multi(self.n, self.indices)


def line_reduction(config: PointConfig, winning: int) -> LineReduction:
    """Reduce a (possibly deleted) point set on a line to a path formula instance.

    ``winning`` indexes the surviving points in their original order.  With a
    deletion, every survivor between the extreme deleted points is always
    in the closure; the game only asks whether some point at or beyond the
    outermost goal on each side has been picked.
    """
    if config.dim != 1:
        raise NotApplicable("line reduction needs one-dimensional points")
    survivors = [i for i in range(len(config.points)) if i not in config.deleted]
    coord = {j: config.points[i][0] for j, i in enumerate(survivors)}
    goal = [coord[j] for j in elements_of(winning)]
    m = len(survivors)
    if not config.deleted:
        rank = {x: r + 1 for r, x in enumerate(sorted(coord.values()))}
        idx = sorted(rank[x] for x in goal)
        if len(idx) == 1:
            return LineReduction("single", m, (idx[0],))
        return LineReduction("multi", m, tuple(idx))
    dcoords = [config.points[i][0] for i in config.deleted]
    lo, hi = min(dcoords), max(dcoords)
    left_goal = [x for x in goal if x < lo]
    right_goal = [x for x in goal if x > hi]
    a = sum(1 for x in coord.values() if left_goal and x <= min(left_goal))
    b = sum(1 for x in coord.values() if right_goal and x >= max(right_goal))
    if a and b:
        return LineReduction("multi", m, (a, m - b + 1))
    if a or b:
        return LineReduction("single", m - (a or b) + 1, (1,))
    return LineReduction("zero")


def nim_closed(inst, winning: int | None = None) -> tuple[int, str]:
    """Pick the closed form that applies to an :class:`~convexgen.formats.Instance`.

    Returns ``(nim, family)``; raises :class:`NotApplicable` if none applies.
    """
    spec = inst.spec(winning)
    w = spec.winning
    if inst.tree is not None:
        return nim_tree(inst.tree, w), "tree"
    if inst.points is not None and inst.points.dim == 1:
        return line_reduction(inst.points, w).nim(), "line"
    geom = spec.geometry
    if w & ~geom.extreme_points(geom.full) == 0:
        return nim_extreme_W(spec), "extreme"
    raise NotApplicable("no closed form applies: not a tree, not a line, "
                        "and the goal is not made of extreme points of S")
