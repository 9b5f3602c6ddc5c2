"""JSON instance files: explicit families, point sets, and trees.

Sets are arrays of element indices.  In point files, indices (including
``winning``) refer to positions in the ``points`` list, deleted points
included; the solvers work on the renumbered survivors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .builders import PointConfig, TreeSpec, deleted_affine, format_rational, tree_vertex_geometry
from .game import GameSpec
from .geometry import Geometry, GeometryError, elements_of, mask_of


@dataclass
class Instance:
    geometry: Geometry
    kind: str                          # "family" | "points" | "tree"
    winning: int | None = None         # mask over geometry elements
    tree: TreeSpec | None = None
    points: PointConfig | None = None
    name: str = "instance"

    def spec(self, winning: int | None = None) -> GameSpec:
        w = self.winning if winning is None else winning
        if w is None:
            raise GeometryError("no winning set given (use \"winning\" in the file or --winning)")
        return GameSpec(self.geometry, w)

    def source_index(self, element: int) -> int:
        """File index of a geometry element."""
        if self.geometry.parent is not None:
            return self.geometry.parent[element]
        return element

    def resolve(self, tokens: Iterable) -> int:
        """Mask for file indices or labels; deleted points are rejected."""
        to_elem = {self.source_index(i): i for i in range(self.geometry.n)}
        names = {}
        if self.points is not None and self.points.labels is not None:
            names = {lab: k for k, lab in enumerate(self.points.labels)}
        elif self.geometry.labels is not None:
            names = {lab: self.source_index(i) for i, lab in enumerate(self.geometry.labels)}
        mask = 0
        for tok in tokens:
            if isinstance(tok, str):
                tok = tok.strip()
                if tok in names:
                    idx = names[tok]
                else:
                    try:
                        idx = int(tok)
                    except ValueError:
                        raise GeometryError(f"unknown element {tok!r}") from None
            else:
                idx = int(tok)
            if idx not in to_elem:
                raise GeometryError(f"element {tok!r} is not a playable point")
            mask |= 1 << to_elem[idx]
        return mask


def split_tokens(text: str) -> list[str]:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def parse_instance(data: dict, name: str = "instance") -> Instance:
    kind = data.get("type")
    labels = data.get("labels")
    if kind == "family":
        n = int(data["n"])
        family = []
        for s in data["convex"]:
            if len(set(s)) != len(s):
                raise GeometryError(f"repeated element in {s}")
            for e in s:
                if not isinstance(e, int) or not 0 <= e < n:
                    raise GeometryError(f"element {e!r} outside [0, {n})")
            family.append(mask_of(s))
        inst = Instance(Geometry(n, family, labels), "family", name=name)
    elif kind == "points":
        for p in data["points"]:
            if len(p) != int(data.get("dim", len(p))):
                raise GeometryError("point dimension does not match \"dim\"")
        config = PointConfig.from_coords(data["points"], data.get("deleted", ()), labels)
        inst = Instance(deleted_affine(config), "points", points=config, name=name)
    elif kind == "tree":
        tree = TreeSpec.from_edges(int(data["n"]), data["edges"], labels)
        inst = Instance(tree_vertex_geometry(tree), "tree", tree=tree, name=name)
    else:
        raise GeometryError(f"unknown instance type {kind!r}")
    if data.get("winning") is not None:
        inst.winning = inst.resolve(data["winning"])
    return inst


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return parse_instance(data, name=path.stem)


def load_family_raw(path: str | Path) -> tuple[int, list[int]]:
    """Family file contents without axiom validation (for reporting violations)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("type") != "family":
        raise GeometryError("not a family file")
    n = int(data["n"])
    fam = []
    for s in data["convex"]:
        for e in s:
            if not isinstance(e, int) or not 0 <= e < n:
                raise GeometryError(f"element {e!r} outside [0, {n})")
        fam.append(mask_of(s))
    return n, fam


def family_json(geom: Geometry, winning: int | None = None) -> dict:
    out: dict = {"type": "family", "n": geom.n}
    if geom.labels is not None:
        out["labels"] = list(geom.labels)
    out["convex"] = [elements_of(k) for k in geom.convex]
    if winning is not None:
        out["winning"] = elements_of(winning)
    return out


def instance_json(inst: Instance, winning: int | None = None) -> dict:
    w = inst.winning if winning is None else winning
    if inst.kind == "tree" and inst.tree is not None:
        out: dict = {"type": "tree", "n": inst.tree.n, "edges": [list(e) for e in inst.tree.edges]}
        if inst.tree.labels is not None:
            out["labels"] = list(inst.tree.labels)
    elif inst.kind == "points" and inst.points is not None:
        cfg = inst.points
        out = {"type": "points", "dim": cfg.dim,
               "points": [[format_rational(c) for c in p] for p in cfg.points]}
        if cfg.deleted:
            out["deleted"] = sorted(cfg.deleted)
        if cfg.labels is not None:
            out["labels"] = list(cfg.labels)
    else:
        return family_json(inst.geometry, w)
    if w is not None:
        out["winning"] = sorted(inst.source_index(i) for i in elements_of(w))
    return out


def dump_json(data: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")
