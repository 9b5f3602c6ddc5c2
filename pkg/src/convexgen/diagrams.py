"""Graphviz DOT text for game digraphs, structure diagrams and orbit quotients."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

from .game import GameSpec, nim_table, options, reachable_positions
from .geometry import GeometryError, elements_of, set_key
from .structure import StructureDiagram, orbit_quotient

GAME_NODE_LIMIT = 12


@dataclass(frozen=True)
class DiagramStyle:
    kind: str = "structure"      # game | structure | orbit
    use_labels: bool = True
    annotate_nim: bool = True


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + escaped + '"'


def _set_text(mask: int, labels) -> str:
    if mask == 0:
        return "∅"
    names = [labels[i] if labels is not None else str(i) for i in elements_of(mask)]
    return "{" + ",".join(names) + "}"


def _ranks(nodes, name_of) -> list[str]:
    lines = []
    for _, group in groupby(sorted(nodes, key=set_key), key=lambda m: m.bit_count()):
        ids = " ".join(name_of(m) for m in group)
        lines.append(f"  {{ rank=same; {ids} }}")
    return lines


def emit_game_dot(spec: GameSpec, style: DiagramStyle = DiagramStyle("game")) -> str:
    """Every reachable position with its nim value, one edge per option."""
    if spec.n > GAME_NODE_LIMIT:
        raise GeometryError(f"game digraph limited to n <= {GAME_NODE_LIMIT}")
    labels = spec.geometry.labels if style.use_labels else None
    nim = nim_table(spec)
    nodes = sorted(reachable_positions(spec), key=set_key)
    name = lambda m: f"p{m}"
    out = ["digraph game {", "  rankdir=TB;", "  node [shape=plaintext];"]
    for m in nodes:
        text = _set_text(m, labels)
        if style.annotate_nim:
            text += f"\n*{nim[m]}"
        out.append(f"  {name(m)} [label={_quote(text)}];")
    for m in nodes:
        for q in sorted(options(spec, m), key=set_key):
            out.append(f"  {name(m)} -> {name(q)};")
    out.extend(_ranks(nodes, name))
    out.append("}")
    return "\n".join(out) + "\n"


def _pair(c, annotate: bool) -> str:
    if not annotate:
        return ""
    parts = []
    for par, value in ((0, c.nim0), (1, c.nim1)):
        text = str(value)
        parts.append(text if c.realized[par] else f"({text})")
    return ",".join(parts)


def emit_structure_dot(diagram: StructureDiagram, style: DiagramStyle = DiagramStyle()) -> str:
    """Triangles (up for even, down for odd) labelled ``nim0,nim1``.

    A component in parentheses belongs to a parity with no position in that
    class.  With ``kind="orbit"`` one node per orbit is drawn, marked with
    its orbit size.
    """
    if not diagram.typed():
        raise ValueError("structure diagram has no types; run type_calculus first")
    labels = diagram.labels if style.use_labels else None
    if style.kind == "orbit":
        quotient = orbit_quotient(diagram)
        nodes, arrows, sizes = quotient.representatives, quotient.arrows, quotient.sizes
    elif style.kind == "structure":
        nodes, arrows, sizes = diagram.ordered(), sorted(
            diagram.arrows, key=lambda e: (set_key(e[0]), set_key(e[1]))), None
    else:
        raise ValueError(f"unknown diagram kind {style.kind!r}")
    name = lambda m: f"c{m}"
    out = [f"digraph {style.kind} {{", "  rankdir=TB;"]
    for m in nodes:
        c = diagram.classes[m]
        shape = "invtriangle" if c.parity else "triangle"
        text = _pair(c, style.annotate_nim)
        if sizes is not None and sizes[m] > 1:
            text += f" x{sizes[m]}"
        xlabel = _set_text(m, labels)
        out.append(f"  {name(m)} [shape={shape}, label={_quote(text)}, xlabel={_quote(xlabel)}];")
    for a, b in arrows:
        out.append(f"  {name(a)} -> {name(b)};")
    out.extend(_ranks(nodes, name))
    out.append("}")
    return "\n".join(out) + "\n"
