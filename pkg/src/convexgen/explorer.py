"""Enumeration of small geometries, seeded random instances, and solver campaigns."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import permutations, product
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .builders import PointConfig, TreeSpec, deleted_affine, tree_vertex_geometry
from .closed_forms import NotApplicable, nim_closed
from .formats import Instance, dump_json, instance_json, load_instance
from .game import nim_bruteforce
from .geometry import Geometry, GeometryError, elements_of, full_mask, permute_mask, set_key
from .structure import nim_structure

ENUM_LIMIT = 5
RANDOM_TREE_LIMIT = 20
RANDOM_POINT_LIMIT = 20

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64: state += 0x9E3779B97F4A7C15, then a fixed mixing function.

    Kept explicit so instance streams are reproducible outside Python.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound

    def sample(self, n: int, k: int) -> list[int]:
        """``k`` distinct values from ``range(n)`` (partial Fisher-Yates), sorted."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])


# ---------------------------------------------------------------- enumeration

def _labeled_geometries(n: int) -> Iterator[list[int]]:
    """Every convex geometry on ``n`` labeled elements.

    Subsets are decided largest first.  A subset may join only if some
    one-element extension already did (accessibility); intersections of
    members are recorded as required and must join when their turn comes.
    """
    top = full_mask(n)
    order = sorted((m for m in range(top)), key=lambda m: (-m.bit_count(), m))
    chosen = [top]
    members = {top}
    required: Counter = Counter()

    def accessible(k: int) -> bool:
        return any((k | (1 << a)) in members for a in range(n) if not k >> a & 1)

    def rec(pos: int) -> Iterator[list[int]]:
        if pos == len(order):
            yield list(chosen)
            return
        k = order[pos]
        can_take = accessible(k)
        if can_take:
            added = [k & m for m in chosen if (k & m) != k]
            chosen.append(k)
            members.add(k)
            for a in added:
                required[a] += 1
            yield from rec(pos + 1)
            for a in added:
                required[a] -= 1
            chosen.pop()
            members.discard(k)
        if required[k] == 0:
            yield from rec(pos + 1)

    yield from rec(0)


def _profile(family: Sequence[int], n: int, i: int) -> tuple[int, ...]:
    counts = [0] * (n + 1)
    for k in family:
        if k >> i & 1:
            counts[k.bit_count()] += 1
    return tuple(counts)


def canonical_form(n: int, family: Sequence[int]) -> tuple[int, ...]:
    """Least sorted image of ``family`` over relabelings that order elements by profile.

    The per-element profile (convex sets containing it, by size) is an
    isomorphism invariant, so only permutations inside equal-profile blocks
    need to be tried.
    """
    prof = [_profile(family, n, i) for i in range(n)]
    blocks: list[list[int]] = []
    for pr in sorted(set(prof)):
        blocks.append([i for i in range(n) if prof[i] == pr])
    best = None
    for choice in product(*(permutations(b) for b in blocks)):
        perm = [0] * n
        pos = 0
        for block in choice:
            for i in block:
                perm[i] = pos
                pos += 1
        img = tuple(sorted((permute_mask(k, perm) for k in family), key=set_key))
        if best is None or img < best:
            best = img
    return best


def enumerate_geometries(n: int, require_empty_convex: bool | None = None) -> list[Geometry]:
    """Convex geometries on ``n`` points up to isomorphism, canonically ordered.

    ``require_empty_convex``: True keeps only families containing the empty
    set, False only those without it, None keeps both.
    """
    if not 1 <= n <= ENUM_LIMIT:
        raise GeometryError(f"enumeration supports 1 <= n <= {ENUM_LIMIT}")
    forms = set()
    for fam in _labeled_geometries(n):
        has_empty = 0 in fam
        if require_empty_convex is not None and has_empty != require_empty_convex:
            continue
        forms.add(canonical_form(n, fam))
    return [Geometry(n, f, validate=False) for f in sorted(forms, key=lambda f: (len(f), f))]


def enumerate_trees(n: int) -> list[TreeSpec]:
    """Unlabeled trees on ``n`` vertices, one per isomorphism class."""
    if n == 1:
        return [TreeSpec(1, ())]
    import networkx as nx

    out = []
    for t in nx.nonisomorphic_trees(n):
        out.append(TreeSpec.from_edges(n, sorted(tuple(sorted(e)) for e in t.edges())))
    return sorted(out, key=lambda t: t.edges)


# ------------------------------------------------------------ random instances

def random_tree(rng: SplitMix64, size: int) -> TreeSpec:
    """Uniform labeled tree via a random Pruefer sequence."""
    if size < 1 or size > RANDOM_TREE_LIMIT:
        raise GeometryError(f"tree size must be in 1..{RANDOM_TREE_LIMIT}")
    if size == 1:
        return TreeSpec(1, ())
    if size == 2:
        return TreeSpec.from_edges(2, [(0, 1)])
    seq = [rng.below(size) for _ in range(size - 2)]
    degree = [1] * size
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(size) if degree[u] == 1)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(size) if degree[x] == 1]
    edges.append((u, w))
    return TreeSpec.from_edges(size, edges)


def random_points(rng: SplitMix64, size: int, dim: int, radius: int | None = None) -> PointConfig:
    """Distinct integer points in the cube ``[-radius, radius]^dim``."""
    if size < 1 or size > RANDOM_POINT_LIMIT:
        raise GeometryError(f"point count must be in 1..{RANDOM_POINT_LIMIT}")
    if dim < 1:
        raise GeometryError("dimension must be positive")
    r = radius if radius is not None else max(2, size // 2 + 1)
    if (2 * r + 1) ** dim < size:
        raise GeometryError("radius too small for that many distinct points")
    seen: list[tuple[int, ...]] = []
    while len(seen) < size:
        p = tuple(rng.below(2 * r + 1) - r for _ in range(dim))
        if p not in seen:
            seen.append(p)
    return PointConfig.from_coords(seen)


def random_winning(rng: SplitMix64, n: int, k: int | None = None) -> int:
    if k is None:
        while True:
            w = rng.next() & full_mask(n)
            if w:
                return w
    if not 1 <= k <= n:
        raise GeometryError(f"cannot pick {k} goal points out of {n}")
    w = 0
    for i in rng.sample(n, k):
        w |= 1 << i
    return w


def random_instance(kind: str, size: int, dim: int = 2, seed: int = 0,
                    k: int | None = None) -> Instance:
    """Deterministic random tree or point-set instance with a goal set."""
    rng = SplitMix64(seed)
    if kind == "tree":
        tree = random_tree(rng, size)
        inst = Instance(tree_vertex_geometry(tree), "tree", tree=tree,
                        name=f"tree-{size}-{seed}")
    elif kind == "points":
        cfg = random_points(rng, size, dim)
        inst = Instance(deleted_affine(cfg), "points", points=cfg,
                        name=f"points-{dim}d-{size}-{seed}")
    else:
        raise GeometryError(f"unknown instance kind {kind!r}")
    inst.winning = random_winning(rng, inst.geometry.n, k)
    return inst


# ------------------------------------------------------------------ campaigns

@dataclass
class CampaignConfig:
    source: str = "enumerated"   # enumerated | trees | random-tree | random-points | file
    min_size: int = 1
    max_size: int = 3
    count: int = 10              # random sources: number of instances
    seed: int = 0
    dim: int = 2
    winning: str = "all"         # all | random-k | fixed
    k: int | None = None
    fixed: list = field(default_factory=list)
    solvers: list[str] = field(default_factory=lambda: ["brute", "structure", "closed"])
    files: list[str] = field(default_factory=list)
    empty_convex: bool | None = None
    workers: int = 1
    sink: str | None = None
    csv: str | None = None

    @classmethod
    def from_json(cls, data: dict) -> "CampaignConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise GeometryError(f"unknown campaign keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "CampaignConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _brute(inst: Instance, w: int) -> int:
    return nim_bruteforce(inst.spec(w))


def _structure(inst: Instance, w: int) -> int:
    return nim_structure(inst.spec(w))


def _closed(inst: Instance, w: int) -> int:
    return nim_closed(inst, w)[0]


SOLVERS: dict[str, Callable[[Instance, int], int]] = {
    "brute": _brute, "structure": _structure, "closed": _closed,
}


def iter_instances(config: CampaignConfig) -> Iterator[Instance]:
    src = config.source
    sizes = range(config.min_size, config.max_size + 1)
    if src == "enumerated":
        for n in sizes:
            for j, g in enumerate(enumerate_geometries(n, config.empty_convex)):
                yield Instance(g, "family", name=f"geom-{n}-{j}")
    elif src == "trees":
        for n in sizes:
            for j, t in enumerate(enumerate_trees(n)):
                yield Instance(tree_vertex_geometry(t), "tree", tree=t, name=f"tree-{n}-{j}")
    elif src in ("random-tree", "random-points"):
        rng = SplitMix64(config.seed)
        kind = "tree" if src == "random-tree" else "points"
        span = config.max_size - config.min_size + 1
        for _ in range(config.count):
            size = config.min_size + rng.below(span)
            yield random_instance(kind, size, config.dim, rng.next(), config.k)
    elif src == "file":
        for path in config.files:
            yield load_instance(path)
    else:
        raise GeometryError(f"unknown instance source {src!r}")


def _winning_sets(inst: Instance, config: CampaignConfig) -> list[int]:
    n = inst.geometry.n
    if config.winning == "all":
        return list(range(1, 1 << n))
    if config.winning == "fixed":
        if config.fixed:
            return [inst.resolve(config.fixed)]
        if inst.winning is None:
            raise GeometryError(f"{inst.name}: no winning set for policy 'fixed'")
        return [inst.winning]
    if config.winning == "random-k":
        if inst.winning is not None:
            return [inst.winning]
        return [random_winning(SplitMix64(config.seed ^ n), n, config.k)]
    raise GeometryError(f"unknown winning policy {config.winning!r}")


def _evaluate(job) -> list[dict]:
    inst, config, solvers = job
    table = SOLVERS if solvers is None else solvers
    rows = []
    for w in _winning_sets(inst, config):
        values: dict[str, int] = {}
        for name in config.solvers:
            try:
                values[name] = table[name](inst, w)
            except NotApplicable:
                continue
        rows.append({"instance": inst.name, "n": inst.geometry.n,
                     "winning": elements_of(w), "nim": values,
                     "agree": len(set(values.values())) <= 1})
    return rows


def _run(config: CampaignConfig, solvers=None) -> tuple[list[Instance], list[list[dict]]]:
    instances = list(iter_instances(config))
    jobs = [(inst, config, solvers) for inst in instances]
    if config.workers > 1 and solvers is None:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=4))
    else:
        results = [_evaluate(j) for j in jobs]
    return instances, results


def cross_validate(config: CampaignConfig,
                   solvers: dict[str, Callable[[Instance, int], int]] | None = None) -> dict:
    """Run every configured solver on every instance and goal set; report disagreements.

    ``solvers`` replaces the built-in solver table (used for fault injection).
    The first disagreement is written next to the sink as a replayable file.
    """
    instances, results = _run(config, solvers)
    records = [r for rows in results for r in rows]
    bad = [r for r in records if not r["agree"]]
    report = {
        "config": asdict(config),
        "instances": len(instances),
        "evaluations": len(records),
        "disagreements": bad,
        "records": records,
    }
    if bad and config.sink:
        first = bad[0]
        inst = next(i for i in instances if i.name == first["instance"])
        w = 0
        for e in first["winning"]:
            w |= 1 << e
        report["counterexample"] = str(Path(config.sink).with_suffix(".counterexample.json"))
        dump_json(instance_json(inst, w), report["counterexample"])
    if config.sink:
        dump_json(report, config.sink)
    if config.csv:
        Path(config.csv).write_text(records_csv(records, config.solvers), encoding="utf-8")
    return report


def records_csv(records: list[dict], solvers: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["instance", "n", "w_size", *[f"nim_{s}" for s in solvers], "agree"])
    for r in records:
        writer.writerow([r["instance"], r["n"], len(r["winning"]),
                         *[r["nim"].get(s, "") for s in solvers], int(r["agree"])])
    return buf.getvalue()


def spectrum(config: CampaignConfig,
             solvers: dict[str, Callable[[Instance, int], int]] | None = None,
             extra: Sequence[Instance] = ()) -> dict:
    """Histogram of nim values (first configured solver) with one witness per value."""
    instances, results = _run(config, solvers)
    name = config.solvers[0]
    counts: Counter = Counter()
    witnesses: dict[int, dict] = {}
    by_name = {i.name: i for i in instances}
    rows = [r for rs in results for r in rs]
    for inst in extra:
        by_name[inst.name] = inst
        try:
            value = (solvers or SOLVERS)[name](inst, inst.spec().winning)
        except NotApplicable:
            continue
        rows.append({"instance": inst.name, "winning": elements_of(inst.winning),
                     "nim": {name: value}})
    for r in rows:
        if name not in r["nim"]:
            continue
        v = r["nim"][name]
        counts[v] += 1
        if v not in witnesses:
            w = 0
            for e in r["winning"]:
                w |= 1 << e
            witnesses[v] = instance_json(by_name[r["instance"]], w)
    report = {"solver": name, "total": sum(counts.values()),
              "counts": {str(k): counts[k] for k in sorted(counts)},
              "witnesses": {str(k): witnesses[k] for k in sorted(witnesses)}}
    if config.sink:
        dump_json(report, config.sink)
    return report
