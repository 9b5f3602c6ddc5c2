"""Finite convex geometries stored as explicit families of bit-mask subsets.

Element ``i`` of the ground set is bit ``1 << i``.  A geometry keeps its
convex sets sorted by ``(cardinality, mask)`` so iteration and every report
built from it is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_ELEMENTS = 64
TABLE_LIMIT = 20


class GeometryError(ValueError):
    """Malformed geometry input (bad index, bad size), as opposed to an axiom failure."""


class InvalidGeometry(ValueError):
    def __init__(self, violations: list["AxiomViolation"]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str  # "full-set" | "intersection" | "accessibility"
    witness: tuple[int, ...]
    message: str


def popcount(mask: int) -> int:
    return mask.bit_count()


def parity(mask: int) -> int:
    return mask.bit_count() & 1


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def set_key(mask: int) -> tuple[int, int]:
    """Canonical sort key for subsets: by size, then numeric value."""
    return (mask.bit_count(), mask)


def _check_family(n: int, family: Iterable[int]) -> list[int]:
    if not 1 <= n <= MAX_ELEMENTS:
        raise GeometryError(f"ground set size must be in [1, {MAX_ELEMENTS}], got {n}")
    top = full_mask(n)
    out = []
    for k in family:
        if k < 0 or k & ~top:
            raise GeometryError(f"subset {elements_of(k)} has an element outside [0, {n})")
        out.append(k)
    return out


def validate_axioms(n: int, family: Iterable[int]) -> list[AxiomViolation]:
    """Return every violated convex-geometry axiom with a witness.

    An empty list means ``family`` is a convex geometry on ``n`` elements.
    Raises :class:`GeometryError` for structurally malformed input.
    """
    fam = sorted(set(_check_family(n, family)), key=set_key)
    members = set(fam)
    top = full_mask(n)
    report: list[AxiomViolation] = []
    if top not in members:
        report.append(AxiomViolation("full-set", (top,), "the full ground set is not convex"))
    seen_missing = set()
    for i, k in enumerate(fam):
        for l in fam[i + 1:]:
            meet = k & l
            if meet not in members and meet not in seen_missing:
                seen_missing.add(meet)
                report.append(AxiomViolation(
                    "intersection", (k, l),
                    f"{elements_of(k)} & {elements_of(l)} = {elements_of(meet)} is not convex"))
    for k in fam:
        if k == top:
            continue
        if not any((k | (1 << a)) in members for a in range(n) if not k >> a & 1):
            report.append(AxiomViolation(
                "accessibility", (k,), f"{elements_of(k)} has no convex one-element extension"))
    return report


class Geometry:
    """A convex geometry on ``{0, ..., n-1}``.

    ``parent`` records, for each element, its index in the geometry this one
    was derived from (by deletion), or is ``None``.
    """

    __slots__ = ("n", "convex", "labels", "parent", "_members", "_table")

    def __init__(self, n: int, convex: Iterable[int], labels: Sequence[str] | None = None,
                 parent: Sequence[int] | None = None, validate: bool = True):
        fam = sorted(set(_check_family(n, convex)), key=set_key)
        if validate:
            bad = validate_axioms(n, fam)
            if bad:
                raise InvalidGeometry(bad)
        if labels is not None and len(labels) != n:
            raise GeometryError(f"expected {n} labels, got {len(labels)}")
        self.n = n
        self.convex: tuple[int, ...] = tuple(fam)
        self.labels: tuple[str, ...] | None = tuple(labels) if labels is not None else None
        self.parent: tuple[int, ...] | None = tuple(parent) if parent is not None else None
        self._members = frozenset(fam)
        self._table: list[int] | None = None

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def __eq__(self, other):
        return isinstance(other, Geometry) and self.n == other.n and self.convex == other.convex

    def __hash__(self):
        return hash((self.n, self.convex))

    def __repr__(self):
        return f"Geometry(n={self.n}, convex={[elements_of(k) for k in self.convex]})"

    def __getstate__(self):
        return (self.n, self.convex, self.labels, self.parent)

    def __setstate__(self, state):
        n, convex, labels, parent = state
        self.n, self.convex, self.labels, self.parent = n, convex, labels, parent
        self._members = frozenset(convex)
        self._table = None

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def format_set(self, mask: int) -> str:
        return "{" + ",".join(self.label(i) for i in elements_of(mask)) + "}"

    def closure_table(self) -> list[int]:
        """All 2^n closures, filled top-down.

        For non-convex ``A`` some ``i`` outside ``A`` lies in ``cl(A)``, so
        ``cl(A) = cl(A | i)`` and every other ``cl(A | j)`` contains it.
        """
        if self._table is None:
            if self.n > TABLE_LIMIT:
                raise GeometryError(f"closure table needs n <= {TABLE_LIMIT}")
            n, top, members = self.n, self.full, self._members
            table = [0] * (1 << n)
            for a in range(top, -1, -1):
                if a in members:
                    table[a] = a
                    continue
                acc = top
                rest = top & ~a
                while rest:
                    low = rest & -rest
                    acc &= table[a | low]
                    rest ^= low
                table[a] = acc
            self._table = table
        return self._table

    def closure(self, a: int) -> int:
        if self.n <= TABLE_LIMIT:
            return self.closure_table()[a]
        acc = self.full
        for k in self.convex:
            if a & k == a:
                acc &= k
        return acc

    def is_convex(self, a: int) -> bool:
        return a in self._members

    def extreme_points(self, a: int) -> int:
        out = 0
        rest = a
        while rest:
            low = rest & -rest
            if not self.closure(a ^ low) & low:
                out |= low
            rest ^= low
        return out

    def delete(self, d: int) -> "Geometry":
        """Deletion by ``d``: keep ``K`` minus ``d`` for each convex ``K`` containing ``d``.

        Surviving elements are renumbered densely in increasing order.
        """
        if d & ~self.full:
            raise GeometryError("deleted set has elements outside the ground set")
        if d == self.full:
            raise GeometryError("cannot delete the whole ground set")
        if d == 0:
            return self
        keep = [i for i in range(self.n) if not d >> i & 1]
        family = []
        for k in self.convex:
            if k & d == d:
                family.append(_compress(k, keep))
        labels = [self.label(i) for i in keep] if self.labels is not None else None
        parent = [self.parent[i] for i in keep] if self.parent is not None else keep
        return Geometry(len(keep), family, labels, parent, validate=False)

    def permuted(self, perm: Sequence[int]) -> "Geometry":
        """Image under the element map ``i -> perm[i]``."""
        fam = [permute_mask(k, perm) for k in self.convex]
        return Geometry(self.n, fam, validate=False)


def _compress(mask: int, keep: Sequence[int]) -> int:
    out = 0
    for j, i in enumerate(keep):
        if mask >> i & 1:
            out |= 1 << j
    return out


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[i]
        mask >>= 1
        i += 1
    return out


def closure(geom: Geometry, a: int) -> int:
    return geom.closure(a)


def extreme_points(geom: Geometry, a: int) -> int:
    return geom.extreme_points(a)


def is_convex(geom: Geometry, a: int) -> bool:
    return geom.is_convex(a)


def delete(geom: Geometry, d: int) -> Geometry:
    return geom.delete(d)


def element_profile(geom: Geometry, i: int) -> tuple[int, ...]:
    """Number of convex sets containing ``i``, per cardinality."""
    counts = [0] * (geom.n + 1)
    bit = 1 << i
    for k in geom.convex:
        if k & bit:
            counts[k.bit_count()] += 1
    return tuple(counts)


def isomorphic(g1: Geometry, g2: Geometry) -> tuple[int, ...] | None:
    """Lexicographically least bijection carrying ``g1``'s family onto ``g2``'s, or None."""
    if g1.n != g2.n or len(g1.convex) != len(g2.convex):
        return None
    size_hist = lambda g: sorted(k.bit_count() for k in g.convex)
    if size_hist(g1) != size_hist(g2):
        return None
    n = g1.n
    p1 = [element_profile(g1, i) for i in range(n)]
    p2 = [element_profile(g2, i) for i in range(n)]
    if sorted(p1) != sorted(p2):
        return None
    members2 = g2._members
    members1 = g1._members
    # sets that become fully mapped once element i is assigned
    by_max1: list[list[int]] = [[] for _ in range(n)]
    for k in g1.convex:
        if k:
            by_max1[k.bit_length() - 1].append(k)
    perm = [-1] * n
    used = [False] * n
    inverse = [-1] * n

    def consistent(i: int) -> bool:
        for k in by_max1[i]:
            if permute_mask(k, perm) not in members2:
                return False
        img = 0
        for j in range(i + 1):
            img |= 1 << perm[j]
        # sets of g2 inside the current image must pull back to convex sets
        for k in g2.convex:
            if k and k & img == k and k & (1 << perm[i]):
                if permute_mask(k, inverse) not in members1:
                    return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or p1[i] != p2[j]:
                continue
            perm[i], used[j], inverse[j] = j, True, i
            if consistent(i) and search(i + 1):
                return True
            perm[i], used[j], inverse[j] = -1, False, -1
        return False

    if (0 in members1) != (0 in members2):
        return None
    return tuple(perm) if search(0) else None
