from __future__ import annotations

import re

import pytest

from convexgen.builders import affine_geometry, path_geometry
from convexgen.diagrams import DiagramStyle, emit_game_dot, emit_structure_dot
from convexgen.game import GameSpec, options, reachable_positions
from convexgen.geometry import Geometry, GeometryError
from convexgen.structure import orbit_quotient, solve_structure, structure_digraph

NODE = re.compile(r"^\s+(\w+) \[(.*)\];$", re.M)
EDGE = re.compile(r"^\s+(\w+) -> (\w+);$", re.M)


def parse(dot):
    nodes = {m.group(1): m.group(2) for m in NODE.finditer(dot) if m.group(1) != "node"}
    edges = [(m.group(1), m.group(2)) for m in EDGE.finditer(dot)]
    return nodes, edges


def test_line_game_digraph(load):
    dot = emit_game_dot(load("three_in_line.json").spec())
    nodes, edges = parse(dot)
    assert len(nodes) == 8
    # three options from the start, two from each singleton, one from {-1,0} and {0,1}
    assert len(edges) == 11
    assert 'label="∅\\n*1"' in nodes["p0"]
    assert 'label="{-1}\\n*2"' in nodes["p1"]
    assert ("p5", "p7") not in edges and not any(a == "p5" for a, _ in edges)


def test_zero_move_game():
    spec = GameSpec(Geometry(2, [0b01, 0b11]), 0b01)
    nodes, edges = parse(emit_game_dot(spec))
    assert list(nodes) == ["p0"] and edges == []
    assert "∅\\n*0" in nodes["p0"]


def test_path_game_counts():
    spec = GameSpec(path_geometry(4), 0b1111)
    nodes, edges = parse(emit_game_dot(spec))
    reach = reachable_positions(spec)
    assert len(nodes) == len(reach)
    assert len(edges) == sum(len(options(spec, p)) for p in reach)


def test_game_digraph_size_limit():
    with pytest.raises(GeometryError):
        emit_game_dot(GameSpec(path_geometry(13), 1))


def test_structure_diagram(load):
    d = solve_structure(load("three_in_line.json").spec())
    nodes, edges = parse(emit_structure_dot(d))
    assert len(nodes) == 4 and len(edges) == 4
    shapes = sorted(re.search(r"shape=(\w+)", v).group(1) for v in nodes.values())
    assert shapes == ["invtriangle", "invtriangle", "triangle", "triangle"]
    assert 'label="1,0"' in nodes["c2"]


def test_orbit_diagram(load):
    d = solve_structure(load("three_in_line.json").spec())
    nodes, edges = parse(emit_structure_dot(d, DiagramStyle("orbit")))
    assert len(nodes) == len(orbit_quotient(d).representatives) == 3
    assert any(" x2" in v for v in nodes.values())


def test_caterpillar_lattice_diagram(load):
    d = solve_structure(load("caterpillar_tree.json").spec())
    nodes, edges = parse(emit_structure_dot(d))
    assert len(nodes) == 8 and len(edges) == len(d.arrows) == 12


def test_labels_match_types(load):
    d = solve_structure(load("nim6_points.json").spec())
    nodes, _ = parse(emit_structure_dot(d))
    for mask, c in d.classes.items():
        label = re.search(r'label="([^"]*)"', nodes[f"c{mask}"]).group(1)
        pair = [int(x.strip("()")) for x in label.split(",")]
        assert pair == [c.nim0, c.nim1]


def test_unrealized_components_are_bracketed():
    # the two middle goals split the line, so the Frattini class holds only the empty set
    d = solve_structure(GameSpec(affine_geometry([[0], [1], [2], [3]]), 0b0110))
    assert d.frattini == 0
    nodes, _ = parse(emit_structure_dot(d))
    assert re.search(r'label="\d+,\(\d+\)"', nodes["c0"])
    assert sum(v.count("(") for v in nodes.values()) == 1


def test_output_is_stable(load):
    spec = load("seven_points.json").spec()
    assert emit_structure_dot(solve_structure(spec)) == emit_structure_dot(solve_structure(spec))
    assert emit_game_dot(spec) == emit_game_dot(spec)


def test_untyped_diagram_is_refused(load):
    with pytest.raises(ValueError):
        emit_structure_dot(structure_digraph(load("three_in_line.json").spec()))
