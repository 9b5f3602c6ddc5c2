from __future__ import annotations

import pytest
from hypothesis import given, settings

from convexgen.builders import affine_geometry
from convexgen.game import GameSpec, nim_bruteforce, nim_table, options
from convexgen.geometry import Geometry, elements_of, mask_of
from convexgen.structure import (BudgetExceeded, ceil, class_of_position, intersection_subsets,
                                 max_nongenerating, nim_structure, orbit_quotient, solve_structure,
                                 structure_digraph, type_from_options)

import strategies as sts


def test_max_nongenerating_examples():
    line4 = affine_geometry([[0], [1], [2], [3]])
    assert set(max_nongenerating(GameSpec(line4, mask_of({1, 2})))) == {0b0011, 0b1100}
    two = GameSpec(Geometry(2, [0b01, 0b11]), 0b01)
    assert max_nongenerating(two) == ()
    assert intersection_subsets((), 0b11) == (0b11,)
    assert nim_structure(two) == 0


def test_intersection_subsets_of_the_line(load):
    inst = load("three_in_line.json")
    m = lambda *ls: inst.resolve(ls)
    got = intersection_subsets([m("-1", "0"), m("0", "1")], inst.geometry.full)
    assert set(got) == {m("0"), m("-1", "0"), m("0", "1"), m("-1", "0", "1")}


def test_three_in_line_digraph(load):
    inst = load("three_in_line.json")
    m = lambda *ls: inst.resolve(ls)
    d = structure_digraph(inst.spec())
    assert len(d.classes) == 4
    assert set(d.arrows) == {(m("0"), m("-1", "0")), (m("0"), m("0", "1")),
                             (m("-1", "0"), inst.geometry.full), (m("0", "1"), inst.geometry.full)}
    assert not d.typed()


def test_no_max_nongenerating_sets_gives_one_class():
    d = solve_structure(GameSpec(Geometry(2, [0b01, 0b11]), 0b01))
    assert list(d.classes) == [0b11] and d.arrows == []


def test_caterpillar_lattice(load):
    inst = load("caterpillar_tree.json")
    d = solve_structure(inst.spec())
    assert len(d.classes) == 8
    goals = mask_of([3, 6, 8])
    assert {i & goals for i in d.classes} == {x for x in range(goals + 1) if x & ~goals == 0}
    assert d.frattini == mask_of([0, 1, 2])


@pytest.mark.parametrize("par, expected", [(0, (0, 1, 3)), (1, (1, 2, 1))])
def test_type_from_options(par, expected):
    assert type_from_options(par, [(0, 0, 3), (1, 2, 0)]) == expected


def test_class_of_position(load):
    inst = load("three_in_line.json")
    d = solve_structure(inst.spec())
    cls, value = class_of_position(d, inst.resolve(["-1"]))
    assert cls.subset == inst.resolve(["-1", "0"]) and value == 2
    cls, value = class_of_position(d, inst.resolve(["-1", "1"]))
    assert cls.subset == inst.geometry.full and value == 0
    for i, c in d.classes.items():
        assert class_of_position(d, i)[1] == c.nim(c.parity)


def test_untyped_diagram_refuses_queries(load):
    d = structure_digraph(load("three_in_line.json").spec())
    with pytest.raises(ValueError):
        class_of_position(d, 0)


def test_orbit_quotient_merges_the_ends(load):
    inst = load("three_in_line.json")
    q = orbit_quotient(solve_structure(inst.spec()))
    assert len(q.representatives) == 3
    assert q.orbit[inst.resolve(["0", "1"])] == q.orbit[inst.resolve(["-1", "0"])]
    assert sorted(q.sizes.values()) == [1, 1, 2]


def test_orbit_quotient_of_four_extreme_goals_is_a_chain():
    square = affine_geometry([[0, 0], [4, 0], [4, 4], [0, 4], [1, 2]])
    d = solve_structure(GameSpec(square, 0b1111))
    assert len(d.classes) == 16
    q = orbit_quotient(d)
    sizes = [r.bit_count() for r in q.representatives]
    assert sizes == sorted(set(sizes)) and len(sizes) == 5
    assert len(q.arrows) == 4


def test_identity_quotient():
    # two goals on a line of four points: the two classes are not symmetric
    line = affine_geometry([[0], [1], [2], [3]])
    d = solve_structure(GameSpec(line, mask_of({0, 2})))
    q = orbit_quotient(d)
    assert len(q.representatives) == len(d.classes)


def test_budget_is_enforced():
    square = affine_geometry([[0, 0], [4, 0], [4, 4], [0, 4]])
    with pytest.raises(BudgetExceeded):
        orbit_quotient(solve_structure(GameSpec(square, 0b1111)), budget=1)


def test_nim6(load):
    spec = load("nim6_points.json").spec()
    assert nim_structure(spec) == 6


def test_json_shape(load):
    data = solve_structure(load("three_in_line.json").spec()).to_json()
    assert data["frattini"] == [1]
    assert len(data["classes"]) == 4 and len(data["arrows"]) == 4
    assert data["classes"][0] == {"I": [1], "parity": 1, "nim0": 1, "nim1": 0,
                                  "realized": [True, True]}


@settings(max_examples=300)
@given(sts.games(max_size=5))
def test_structure_invariants(spec):
    geom = spec.geometry
    d = solve_structure(spec)
    assert nim_structure(spec) == nim_bruteforce(spec)
    assert set(max_nongenerating(spec)) == set(max_nongenerating(spec, exhaustive=True))
    for m in d.max_nongenerating:
        assert geom.is_convex(m)
    phi = geom.full
    for m in d.max_nongenerating:
        phi &= m
    assert d.frattini == phi
    for a, b in d.arrows:
        assert b.bit_count() > a.bit_count()
    table = nim_table(spec)
    ceiling = [ceil(d.max_nongenerating, geom.full, p) for p in range(geom.full + 1)]
    by_class: dict[tuple[int, int], set[int]] = {}
    reach: dict[int, set[frozenset]] = {}
    for p in range(geom.full + 1):
        by_class.setdefault((ceiling[p], p.bit_count() % 2), set()).add(table[p])
        assert class_of_position(d, p)[1] == table[p]
        others = frozenset(ceiling[q] for q in options(spec, p)) - {ceiling[p]}
        reach.setdefault(ceiling[p], set()).add(others)
    # same class and parity share a value; same class means the same foreign options
    assert all(len(v) == 1 for v in by_class.values())
    assert all(len(v) == 1 for v in reach.values())
    for c in d.classes.values():
        for par in (0, 1):
            assert c.realized[par] == ((c.subset, par) in by_class)
    orbit_quotient(d)
