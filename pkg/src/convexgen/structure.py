"""Structure equivalence: the quotient of the game by ``P -> ceil(P)``.

Positions with the same ceiling and the same parity share a nim value, so the
whole game is solved on the (usually tiny) digraph of intersection subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .game import GameSpec, mex
from .geometry import elements_of, parity, set_key

AUTOMORPHISM_BUDGET = 10 ** 6


def _is_generating(winning: int, closure: int) -> bool:
    return winning & ~closure == 0


def max_nongenerating(spec: GameSpec, exhaustive: bool = False) -> tuple[int, ...]:
    """Maximally non-generating sets, sorted canonically.

    Such sets are always convex, so by default only convex sets are scanned;
    ``exhaustive=True`` scans every subset instead.
    """
    geom = spec.geometry
    w = spec.winning
    top = geom.full
    candidates: Iterable[int] = range(top + 1) if exhaustive else geom.convex
    out = []
    for k in candidates:
        if _is_generating(w, geom.closure(k)):
            continue
        rest = top & ~k
        ok = True
        while rest:
            low = rest & -rest
            if not _is_generating(w, geom.closure(k | low)):
                ok = False
                break
            rest ^= low
        if ok:
            out.append(k)
    return tuple(sorted(out, key=set_key))


def intersection_subsets(family: Sequence[int], full: int) -> tuple[int, ...]:
    """Closure of ``family + [full]`` under pairwise intersection."""
    found = set(family) | {full}
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                c = a & b
                if c not in found:
                    found.add(c)
                    new.append(c)
        frontier = new
    return tuple(sorted(found, key=set_key))


def ceil(family: Sequence[int], full: int, p: int) -> int:
    """Intersection of the members of ``family`` containing ``p`` (``full`` if none)."""
    acc = full
    for m in family:
        if p & m == p:
            acc &= m
    return acc


@dataclass
class StructureClass:
    subset: int
    parity: int
    nim0: int | None = None
    nim1: int | None = None
    # whether the class holds positions of parity 0 / parity 1
    realized: tuple[bool, bool] = (True, True)

    @property
    def type(self) -> tuple[int, int | None, int | None]:
        return (self.parity, self.nim0, self.nim1)

    def nim(self, par: int) -> int | None:
        return self.nim1 if par else self.nim0


@dataclass
class StructureDiagram:
    n: int
    full: int
    max_nongenerating: tuple[int, ...]
    classes: dict[int, StructureClass]
    arrows: list[tuple[int, int]]
    labels: tuple[str, ...] | None = None
    _succ: dict[int, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._succ = {i: [] for i in self.classes}
        for a, b in self.arrows:
            self._succ[a].append(b)

    @property
    def frattini(self) -> int:
        return ceil(self.max_nongenerating, self.full, 0)

    def successors(self, i: int) -> list[int]:
        return self._succ[i]

    def ordered(self) -> list[int]:
        return sorted(self.classes, key=set_key)

    def typed(self) -> bool:
        return all(c.nim0 is not None and c.nim1 is not None for c in self.classes.values())

    def format_set(self, mask: int) -> str:
        if self.labels is None:
            return "{" + ",".join(map(str, elements_of(mask))) + "}"
        return "{" + ",".join(self.labels[i] for i in elements_of(mask)) + "}"

    def to_json(self) -> dict:
        order = self.ordered()
        index = {m: i for i, m in enumerate(order)}
        classes = []
        for m in order:
            c = self.classes[m]
            classes.append({"I": elements_of(m), "parity": c.parity, "nim0": c.nim0,
                            "nim1": c.nim1, "realized": list(c.realized)})
        arrows = sorted([index[a], index[b]] for a, b in self.arrows)
        return {"classes": classes, "arrows": arrows,
                "frattini": elements_of(self.frattini),
                "max_nongenerating": [elements_of(m) for m in self.max_nongenerating]}


def structure_digraph(spec: GameSpec) -> StructureDiagram:
    """Intersection subsets with option arrows; types left unset."""
    geom = spec.geometry
    top = geom.full
    mng = max_nongenerating(spec)
    subsets = intersection_subsets(mng, top)
    classes = {}
    arrows = []
    for i in subsets:
        targets = set()
        rest = top & ~i
        while rest:
            low = rest & -rest
            targets.add(ceil(mng, top, i | low))
            rest ^= low
        arrows.extend((i, j) for j in sorted(targets, key=set_key))
        realized = [False, False]
        realized[parity(i)] = True
        rest = i
        while rest:
            low = rest & -rest
            if ceil(mng, top, i ^ low) == i:
                realized[1 - parity(i)] = True
                break
            rest ^= low
        classes[i] = StructureClass(i, parity(i), realized=tuple(realized))
    return StructureDiagram(geom.n, top, mng, classes, arrows, geom.labels)


def type_calculus(diagram: StructureDiagram) -> StructureDiagram:
    """Fill in ``nim0``/``nim1`` for every class, largest subsets first."""
    for a, b in diagram.arrows:
        if b not in diagram.classes:
            raise KeyError(f"arrow target {elements_of(b)} is not a class")
        if b.bit_count() <= a.bit_count():
            raise ValueError("structure arrows must increase cardinality")
    for i in sorted(diagram.classes, key=set_key, reverse=True):
        c = diagram.classes[i]
        if i == diagram.full:
            c.nim0 = c.nim1 = 0
            continue
        opts = [diagram.classes[j] for j in diagram.successors(i)]
        own = mex(o.nim(1 - c.parity) for o in opts)
        other = mex([o.nim(c.parity) for o in opts] + [own])
        if c.parity == 0:
            c.nim0, c.nim1 = own, other
        else:
            c.nim1, c.nim0 = own, other
    return diagram


def type_from_options(par: int, option_types: Iterable[tuple[int, int, int]]) -> tuple[int, int, int]:
    """One type-calculus step for a class of parity ``par`` with the given option types."""
    opts = list(option_types)
    own = mex(t[2 - par] for t in opts)
    other = mex([t[1 + par] for t in opts] + [own])
    return (par, own, other) if par == 0 else (par, other, own)


def solve_structure(spec: GameSpec) -> StructureDiagram:
    return type_calculus(structure_digraph(spec))


def nim_structure(spec: GameSpec) -> int:
    diagram = solve_structure(spec)
    return diagram.classes[diagram.frattini].nim0


def class_of_position(diagram: StructureDiagram, p: int) -> tuple[StructureClass, int]:
    c = diagram.classes[ceil(diagram.max_nongenerating, diagram.full, p)]
    value = c.nim(parity(p))
    if value is None:
        raise ValueError("diagram has no types; run type_calculus first")
    return c, value


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class OrbitQuotient:
    diagram: StructureDiagram
    representatives: list[int]          # least class of each orbit, canonical order
    orbit: dict[int, int]               # class -> its representative
    sizes: dict[int, int]               # representative -> orbit size
    arrows: list[tuple[int, int]]       # between representatives


def _automorphism_exists(diagram: StructureDiagram, u: int, v: int, budget: list[int]) -> bool:
    verts = diagram.ordered()
    succ = {a: set(diagram.successors(a)) for a in verts}
    pred: dict[int, set[int]] = {a: set() for a in verts}
    for a, b in diagram.arrows:
        pred[b].add(a)

    def profile(a):
        return (a.bit_count(), len(succ[a]), len(pred[a]),
                tuple(sorted(b.bit_count() for b in succ[a])),
                tuple(sorted(b.bit_count() for b in pred[a])))

    prof = {a: profile(a) for a in verts}
    if prof[u] != prof[v]:
        return False
    order = [u] + [a for a in verts if a != u]
    image: dict[int, int] = {}
    used: set[int] = set()

    def fits(a, b):
        for x, y in image.items():
            if (x in succ[a]) != (y in succ[b]) or (a in succ[x]) != (b in succ[y]):
                return False
        return True

    def search(k):
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("automorphism search budget exceeded")
        if k == len(order):
            return True
        a = order[k]
        cands = [v] if k == 0 else [b for b in verts if b not in used and prof[b] == prof[a]]
        for b in cands:
            if fits(a, b):
                image[a] = b
                used.add(b)
                if search(k + 1):
                    return True
                del image[a]
                used.discard(b)
        return False

    return search(0)


def orbit_quotient(diagram: StructureDiagram, budget: int = AUTOMORPHISM_BUDGET) -> OrbitQuotient:
    """Quotient by the size-preserving automorphisms of the structure digraph.

    Orbit-mates must carry equal types; a mismatch raises ``AssertionError``.
    """
    verts = diagram.ordered()
    rep = {a: a for a in verts}
    left = [budget]
    for idx, a in enumerate(verts):
        if rep[a] != a:
            continue
        for b in verts[idx + 1:]:
            if rep[b] != b or b.bit_count() != a.bit_count():
                continue
            if _automorphism_exists(diagram, a, b, left):
                rep[b] = a
    for a in verts:
        ca, cr = diagram.classes[a], diagram.classes[rep[a]]
        if ca.type != cr.type:
            raise AssertionError(f"orbit-equivalent classes {elements_of(a)}, "
                                 f"{elements_of(rep[a])} have different types")
    reps = [a for a in verts if rep[a] == a]
    sizes = {r: sum(1 for a in verts if rep[a] == r) for r in reps}
    arrows = sorted({(rep[a], rep[b]) for a, b in diagram.arrows},
                    key=lambda e: (set_key(e[0]), set_key(e[1])))
    return OrbitQuotient(diagram, reps, rep, sizes, arrows)
