"""Geometries from exact rational point sets (optionally with deletions) and from trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .geometry import Geometry, GeometryError, full_mask, mask_of

Vector = tuple[Fraction, ...]

MAX_POINTS = 20


def parse_rational(value) -> Fraction:
    """Parse an integer or a ``"p/q"`` string; floats are refused."""
    if isinstance(value, bool):
        raise GeometryError(f"not a rational coordinate: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE"):
            raise GeometryError(f"decimal coordinates are not accepted: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"bad rational {value!r}") from exc
    raise GeometryError(f"not a rational coordinate: {value!r}")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def as_vector(p) -> Vector:
    if isinstance(p, (int, Fraction, str)):
        return (parse_rational(p),)
    return tuple(parse_rational(c) for c in p)


@dataclass(frozen=True)
class PointConfig:
    points: tuple[Vector, ...]
    deleted: frozenset[int] = frozenset()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.points:
            raise GeometryError("point configuration is empty")
        dims = {len(p) for p in self.points}
        if len(dims) != 1 or 0 in dims:
            raise GeometryError("points must share one positive dimension")
        if len(set(self.points)) != len(self.points):
            raise GeometryError("duplicate points")
        if any(not 0 <= d < len(self.points) for d in self.deleted):
            raise GeometryError("deleted index out of range")
        if len(self.deleted) == len(self.points):
            raise GeometryError("cannot delete every point")
        if self.labels is not None and len(self.labels) != len(self.points):
            raise GeometryError("label count does not match point count")

    @property
    def dim(self) -> int:
        return len(self.points[0])

    @classmethod
    def from_coords(cls, points, deleted=(), labels=None) -> "PointConfig":
        return cls(tuple(as_vector(p) for p in points), frozenset(deleted),
                   tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class TreeSpec:
    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None
    adjacency: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise GeometryError("a tree needs at least one vertex")
        if len(self.edges) != n - 1:
            raise GeometryError(f"a tree on {n} vertices has {n - 1} edges, got {len(self.edges)}")
        adj = [0] * n
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GeometryError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GeometryError(f"self-loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GeometryError(f"duplicate edge {key}")
            seen.add(key)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "adjacency", tuple(adj))
        if component_of(self.adjacency, 0, full_mask(n)) != full_mask(n):
            raise GeometryError("edge list is not connected (or contains a cycle)")
        if self.labels is not None and len(self.labels) != n:
            raise GeometryError("label count does not match vertex count")

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "TreeSpec":
        return cls(n, tuple((int(u), int(v)) for u, v in edges),
                   tuple(labels) if labels is not None else None)

    def neighbors(self, v: int) -> int:
        return self.adjacency[v]


def component_of(adj: Sequence[int], start: int, within: int) -> int:
    """Vertex mask of the component of ``start`` in the subgraph induced by ``within``."""
    reached = 1 << start
    frontier = reached
    while frontier:
        grow = 0
        while frontier:
            low = frontier & -frontier
            grow |= adj[low.bit_length() - 1]
            frontier ^= low
        grow &= within & ~reached
        reached |= grow
        frontier = grow
    return reached


def _solve_barycentric(simplex: Sequence[Vector], p: Vector) -> list[Fraction] | None:
    """Coefficients ``l`` with ``sum l_i s_i = p`` and ``sum l_i = 1``.

    Returns None when the system is inconsistent or the simplex is affinely
    dependent (not uniquely solvable).
    """
    k = len(simplex)
    dim = len(p)
    rows = [[Fraction(1)] * k + [Fraction(1)]]
    for c in range(dim):
        rows.append([s[c] for s in simplex] + [p[c]])
    rank = 0
    for col in range(k):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = 1 / pr[col]
        pr[:] = [x * inv for x in pr]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    if any(rows[r][k] != 0 for r in range(rank, len(rows))):
        return None
    return [rows[i][k] for i in range(k)]


def in_simplex(simplex: Sequence[Vector], p: Vector) -> bool:
    coeffs = _solve_barycentric(simplex, p)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def hull_membership(points: Sequence[Vector], a: Sequence[int] | int, p: Vector) -> bool:
    """Exact test of ``p`` in the convex hull of ``points[i]`` for ``i`` in ``a``.

    Checks every sub-simplex of at most ``dim + 1`` cited points.
    """
    idx = _indices(a)
    p = as_vector(p)
    pts = [as_vector(points[i]) for i in idx]
    if any(len(q) != len(p) for q in pts):
        raise GeometryError("dimension mismatch")
    if p in pts:
        return True
    for size in range(1, min(len(p) + 1, len(pts)) + 1):
        for simplex in combinations(pts, size):
            if in_simplex(simplex, p):
                return True
    return False


def _indices(a) -> list[int]:
    if isinstance(a, int):
        return [i for i in range(a.bit_length()) if a >> i & 1]
    return list(a)


def simplex_contents(points: Sequence[Vector]) -> dict[int, int]:
    """Map each simplex mask (at most ``dim + 1`` points) to the mask of points in its hull."""
    n = len(points)
    dim = len(points[0])
    out: dict[int, int] = {}
    for size in range(1, min(dim + 1, n) + 1):
        for combo in combinations(range(n), size):
            simplex = [points[i] for i in combo]
            m = mask_of(combo)
            for j in range(n):
                if not m >> j & 1 and in_simplex(simplex, points[j]):
                    m |= 1 << j
            out[mask_of(combo)] = m
    return out


def hull_table(points: Sequence[Vector]) -> list[int]:
    """``table[A]`` is the mask of points inside Conv(A), for every subset ``A``."""
    n = len(points)
    if n > MAX_POINTS:
        raise GeometryError(f"at most {MAX_POINTS} points supported, got {n}")
    simplex = simplex_contents(points)
    dim = len(points[0])
    table = [0] * (1 << n)
    for a in range(1, 1 << n):
        if a.bit_count() <= dim + 1:
            acc = simplex[a]
            rest = a
            while rest:
                low = rest & -rest
                acc |= table[a ^ low]
                rest ^= low
        else:
            # any simplex inside a misses one of its first dim + 2 elements
            acc = 0
            rest = a
            for _ in range(dim + 2):
                low = rest & -rest
                acc |= table[a ^ low]
                rest ^= low
        table[a] = acc
    return table


def affine_geometry(points, labels: Sequence[str] | None = None) -> Geometry:
    pts = [as_vector(p) for p in points]
    if len(set(pts)) != len(pts):
        raise GeometryError("duplicate points")
    table = hull_table(pts)
    family = [a for a, h in enumerate(table) if h == a]
    geom = Geometry(len(pts), family, labels, validate=False)
    geom._table = table
    return geom


def deleted_affine(config: PointConfig) -> Geometry:
    geom = affine_geometry(config.points, config.labels)
    return geom.delete(mask_of(config.deleted))


def tree_vertex_geometry(tree: TreeSpec) -> Geometry:
    """Convex sets are the empty set and the vertex sets of connected subgraphs."""
    adj = tree.adjacency
    family = [0]
    for a in range(1, 1 << tree.n):
        low = (a & -a).bit_length() - 1
        if component_of(adj, low, a) == a:
            family.append(a)
    return Geometry(tree.n, family, tree.labels, validate=False)


def path_tree(n: int) -> TreeSpec:
    if n < 1:
        raise GeometryError("path needs at least one vertex")
    return TreeSpec.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def path_geometry(n: int) -> Geometry:
    return tree_vertex_geometry(path_tree(n))


def tree_components(tree: TreeSpec, w: int) -> dict[int, int]:
    """Components of the forest left after removing ``w``, keyed by neighbor of ``w``."""
    within = full_mask(tree.n) & ~(1 << w)
    out = {}
    nb = tree.adjacency[w]
    while nb:
        low = nb & -nb
        v = low.bit_length() - 1
        out[v] = component_of(tree.adjacency, v, within)
        nb ^= low
    return out

