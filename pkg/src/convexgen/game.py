"""The achievement game GEN(S, W) and exhaustive nim-value computation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .geometry import Geometry, GeometryError, elements_of

BRUTE_LIMIT = 20


def mex(values: Iterable[int]) -> int:
    seen = set(values)
    m = 0
    while m in seen:
        m += 1
    return m


@dataclass(frozen=True)
class GameSpec:
    geometry: Geometry
    winning: int

    def __post_init__(self):
        if self.winning == 0:
            raise GeometryError("winning set must be nonempty")
        if self.winning & ~self.geometry.full:
            raise GeometryError("winning set has elements outside the ground set")

    @property
    def n(self) -> int:
        return self.geometry.n

    def with_winning(self, winning: int) -> "GameSpec":
        return GameSpec(self.geometry, winning)


def is_generating(spec: GameSpec, p: int) -> bool:
    return spec.winning & ~spec.geometry.closure(p) == 0


def options(spec: GameSpec, p: int) -> list[int]:
    if is_generating(spec, p):
        return []
    rest = spec.geometry.full & ~p
    out = []
    while rest:
        low = rest & -rest
        out.append(p | low)
        rest ^= low
    return out


def terminal_table(spec: GameSpec) -> list[bool]:
    w = spec.winning
    return [w & ~c == 0 for c in spec.geometry.closure_table()]


def nim_table(spec: GameSpec) -> list[int]:
    """Nim value of every position, indexed by mask.

    Options only add elements, so each option's mask is larger; a single
    descending sweep sees every option before its parent.
    """
    n = spec.n
    if n > BRUTE_LIMIT:
        raise GeometryError(f"exhaustive table limited to n <= {BRUTE_LIMIT}")
    top = spec.geometry.full
    term = terminal_table(spec)
    nim = [0] * (1 << n)
    bits = [1 << i for i in range(n)]
    for p in range(top, -1, -1):
        if term[p]:
            continue
        seen = 0
        for b in bits:
            if not p & b:
                seen |= 1 << nim[p | b]
        nim[p] = (~seen & (seen + 1)).bit_length() - 1
    return nim


class _Memo:
    def __init__(self, spec: GameSpec):
        if spec.n > BRUTE_LIMIT:
            raise GeometryError(f"exhaustive search limited to n <= {BRUTE_LIMIT}")
        self.spec = spec
        self.table: dict[int, int] = {}

    def __call__(self, p: int) -> int:
        got = self.table.get(p)
        if got is None:
            got = mex(self(q) for q in options(self.spec, p))
            self.table[p] = got
        return got


def nim_of_position(spec: GameSpec, p: int, memo: _Memo | None = None) -> int:
    """Grundy value of position ``p`` by memoized recursion over options."""
    if memo is None:
        memo = _Memo(spec)
    return memo(p)


def nim_bruteforce(spec: GameSpec) -> int:
    return nim_table(spec)[0]


def optimal_move(spec: GameSpec, p: int, table: list[int] | None = None) -> int | None:
    """Least-mask option with nim value 0, or None if every option is nonzero."""
    opts = options(spec, p)
    if not opts:
        raise GeometryError(f"position {elements_of(p)} is terminal")
    if table is None:
        table = nim_table(spec)
    for q in sorted(opts):
        if table[q] == 0:
            return q
    return None


def reachable_positions(spec: GameSpec) -> list[int]:
    """Positions reachable from the empty start, in increasing mask order."""
    seen = {0}
    stack = [0]
    while stack:
        p = stack.pop()
        for q in options(spec, p):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return sorted(seen)


class CycleError(ValueError):
    pass


def grundy_of_dag(arrows: Mapping[Hashable, Iterable[Hashable]]) -> dict[Hashable, int]:
    """Grundy value of every vertex of an explicit digraph ``{vertex: successors}``.

    Vertices that appear only as successors are sinks.
    """
    succ: dict[Hashable, list[Hashable]] = {}
    for v, outs in arrows.items():
        succ.setdefault(v, [])
        for u in outs:
            succ[v].append(u)
            succ.setdefault(u, [])
    # iterative post-order DFS; gray = on stack
    done = object()
    state: dict[Hashable, int] = {}
    order: list[Hashable] = []
    for root in succ:
        if root in state:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, done)
            if nxt is done:
                stack.pop()
                state[v] = 2
                order.append(v)
            elif state.get(nxt) == 1:
                raise CycleError(f"cycle through {nxt!r}")
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    values: dict[Hashable, int] = {}
    for v in order:
        values[v] = mex(values[u] for u in succ[v])
    return values
