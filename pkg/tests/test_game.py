from __future__ import annotations

import pytest
from hypothesis import given, settings

from convexgen.builders import TreeSpec, tree_vertex_geometry
from convexgen.game import (CycleError, GameSpec, grundy_of_dag, is_generating, mex, nim_bruteforce,
                            nim_of_position, nim_table, optimal_move, options, reachable_positions)
from convexgen.geometry import Geometry, GeometryError, elements_of, mask_of

import oracles
import strategies as sts


@pytest.mark.parametrize("values, expected", [((), 0), ((0, 1, 3), 2), ((1, 2), 0)])
def test_mex(values, expected):
    assert mex(values) == expected


@pytest.fixture
def line(load):
    inst = load("three_in_line.json")
    return inst, inst.spec()


def test_generating(line):
    inst, spec = line
    assert is_generating(spec, inst.resolve(["-1", "1"]))
    assert is_generating(spec, spec.geometry.full)
    assert not is_generating(spec, inst.resolve(["-1", "0"]))


def test_options(line):
    inst, spec = line
    assert options(spec, inst.resolve(["-1", "1"])) == []
    assert len(options(spec, 0)) == 3
    assert set(options(spec, inst.resolve(["0"]))) == {inst.resolve(["-1", "0"]),
                                                        inst.resolve(["0", "1"])}


def test_position_values(line):
    inst, spec = line
    expected = {(): 1, ("0",): 0, ("-1",): 2, ("-1", "0"): 1, ("-1", "1"): 0}
    for labels, value in expected.items():
        assert nim_of_position(spec, inst.resolve(labels)) == value


def test_optimal_move(line):
    inst, spec = line
    assert optimal_move(spec, 0) == inst.resolve(["0"])
    assert optimal_move(spec, inst.resolve(["-1"])) == inst.resolve(["-1", "1"])
    # every option of {0} has value 1
    assert optimal_move(spec, inst.resolve(["0"])) is None
    with pytest.raises(ValueError):
        optimal_move(spec, spec.geometry.full)


def test_starting_position_already_terminal():
    spec = GameSpec(Geometry(2, [0b01, 0b11]), 0b01)
    assert nim_bruteforce(spec) == 0
    assert reachable_positions(spec) == [0]


def test_goal_validation():
    g = Geometry(2, [0b01, 0b11])
    with pytest.raises(GeometryError):
        GameSpec(g, 0)
    with pytest.raises(GeometryError):
        GameSpec(g, 0b100)


def test_star_agrees_with_literal_recursion():
    tree = TreeSpec.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    geom = tree_vertex_geometry(tree)
    family = [frozenset(elements_of(k)) for k in geom.convex]
    for w in range(1, 16):
        table = nim_table(GameSpec(geom, w))
        for p in range(16):
            assert table[p] == oracles.game_value(4, family, elements_of(w), elements_of(p))


def test_nimber_two_digraph():
    values = grundy_of_dag({"*2": ["*1", "*0"], "*1": ["*0"], "*0": []})
    assert values == {"*2": 2, "*1": 1, "*0": 0}
    assert grundy_of_dag({"x": []}) == {"x": 0}
    chain = {i: list(range(i)) for i in range(6)}
    assert grundy_of_dag(chain)[5] == 5


def test_grundy_detects_cycles():
    with pytest.raises(CycleError):
        grundy_of_dag({"a": ["b"], "b": ["a"]})


@settings(max_examples=300)
@given(sts.games(max_size=5))
def test_game_invariants(spec):
    table = nim_table(spec)
    memo_values = [nim_of_position(spec, p) for p in range(spec.geometry.full + 1)]
    assert table == memo_values
    for p in range(spec.geometry.full + 1):
        opts = options(spec, p)
        if is_generating(spec, p):
            assert opts == [] and table[p] == 0
        else:
            assert len(opts) == spec.n - p.bit_count()
        assert table[p] <= spec.n


@settings(max_examples=300)
@given(sts.games(max_size=5))
def test_full_goal_equals_extreme_goal(spec):
    geom = spec.geometry
    whole = spec.with_winning(geom.full)
    ex = geom.extreme_points(geom.full)
    if ex:
        assert nim_bruteforce(whole) == nim_bruteforce(spec.with_winning(ex))


@settings(max_examples=150)
@given(sts.games(max_size=4))
def test_table_matches_literal_recursion(spec):
    geom = spec.geometry
    family = [frozenset(elements_of(k)) for k in geom.convex]
    assert nim_bruteforce(spec) == oracles.game_value(geom.n, family, elements_of(spec.winning))


def test_masks_round_trip():
    assert elements_of(mask_of([4, 0, 2])) == [0, 2, 4]
