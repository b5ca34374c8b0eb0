from __future__ import annotations

import random
from fractions import Fraction

import pytest

from dimernet.algebra import ExactScalar, format_scalar
from dimernet.errors import (
    IsLoopError,
    NonAxisParallelInExactMode,
    NotADirectedCycle,
    NotUnicolored,
    StraightAngleError,
)
from dimernet.geometry import Curve
from dimernet.instances import example1, load_bundled, perturb, random_perfect_orientation, random_weights, square_grid
from dimernet.network import (
    apply_moves,
    as_network,
    bipartite_double,
    black_to_white_count,
    contract_edge,
    fractional_marking,
    insert_vertex,
    measurement_preconditions,
    perfectness_violations,
    prepare_for_measurement,
    psi_map,
    reverse_cycle,
    switch_count,
    turning_numbers,
    validate_network,
    validate_rim_cut,
    verify_marking,
)
from dimernet.torus import BLACK, WHITE, CurvePair, Edge, ToricGraph, Vertex, compute_faces

F = Fraction
Z = ExactScalar.zeta
I = Z(2)


def test_bundled_networks_valid():
    for name in ("example1", "example1_switched", "grid_sg", "grid_sg2"):
        assert validate_network(load_bundled(name)).ok, name


def test_reversed_edge_breaks_perfectness():
    g = example1()
    bad = g.with_edges(e.reversed() if e.id == "e3" else e for e in g.edges)
    assert "PERFECTNESS_VIOLATION" in validate_network(bad).codes()


def test_example1_rim_cut_valid():
    rep = validate_rim_cut(example1())
    assert rep.ok
    assert rep.info["rim_crossers"] == ["e5", "e6"]


def test_rim_crossed_both_ways_not_ideal():
    g = square_grid(4, 2, "sg2")
    assert "NOT_IDEAL" in validate_rim_cut(g).codes()


def test_cut_meeting_rim_twice():
    g = example1()
    cut = Curve(((F(0), F(1, 12)), (F(2), F(13, 12))))
    h = ToricGraph(g.vertices, g.edges, CurvePair(g.curves.rim, cut))
    assert "CUT_NOT_SIMPLE_CROSSING" in validate_rim_cut(h).codes()


# -- moves -------------------------------------------------------------------


def test_insert_then_contract_restores_network():
    g = as_network(example1())
    h = insert_vertex(g, "e3", WHITE)
    assert perfectness_violations(h) == []
    back = contract_edge(h, "e3.1")
    assert {v.id for v in back.vertices} == {v.id for v in g.vertices}
    restored = back.edge("e3.2")
    assert (restored.tail, restored.head, restored.lift) == ("C", "C1", g.edge("e3").lift)
    assert restored.weight == g.edge("e3").weight


def test_insert_splits_weight_first_fragment_full():
    h = insert_vertex(as_network(example1()), "e4")
    assert h.edge("e4.1").weight == ExactScalar.rational(7)
    assert h.edge("e4.2").weight == ExactScalar.rational(1)


def test_reverse_two_cycle_twice():
    g = as_network(example1())
    once = reverse_cycle(g, ["e3", "e5"])
    assert validate_network(once).ok
    twice = reverse_cycle(once, ["e3", "e5"])
    assert [(e.id, e.tail, e.head, e.weight) for e in twice.edges] == [(e.id, e.tail, e.head, e.weight) for e in g.edges]


def test_move_errors():
    g = as_network(example1())
    with pytest.raises(NotUnicolored):
        contract_edge(g, "e3")
    with pytest.raises(NotADirectedCycle):
        reverse_cycle(g, ["e3", "e4"])
    looped = g.with_edges(list(g.edges) + [Edge("loop", "C", "C", ExactScalar.rational(1), (F(1), F(0)))])
    with pytest.raises(IsLoopError):
        contract_edge(looped, "loop")


def test_apply_moves_transcript():
    g = as_network(example1())
    out = apply_moves(g, [{"move": "insert", "args": {"edge": "e3", "color": WHITE}},
                          {"move": "contract", "args": {"edge": "e3.1"}}])
    assert len(out.edges) == len(g.edges)


def black_two_cycle() -> ToricGraph:
    b1 = Vertex("b1", BLACK, (F(1, 4), F(1, 2)))
    b2 = Vertex("b2", BLACK, (F(3, 4), F(1, 2)))
    one = ExactScalar.rational
    return ToricGraph((b1, b2), (Edge("p", "b1", "b2", one(3), (F(1, 2), F(0))),
                                 Edge("q", "b2", "b1", one(5), (F(1, 2), F(0)))))


def test_bipartite_double_of_black_two_cycle():
    g, corr = bipartite_double(black_two_cycle())
    assert len(g.vertices) == 4 and len(g.edges) == 4
    assert sorted(v.color for v in g.vertices) == [BLACK, BLACK, WHITE, WHITE]
    assert perfectness_violations(g) == []
    for orig, frags in corr.items():
        prod = ExactScalar.rational(1)
        for f in frags:
            prod = prod * g.edge(f).weight
        assert prod == black_two_cycle().edge(orig).weight


def test_bipartite_double_keeps_bipartite_network():
    g, corr = bipartite_double(example1())
    assert all(len(v) == 1 for v in corr.values())
    assert [e.id for e in g.edges] == [e.id for e in example1().edges]


def test_psi_on_example1():
    g = psi_map(example1())
    got = [format_scalar(e.weight) for e in g.edges]
    assert got == ["2", "3", "5", "1/7", "1/11", "13"]
    assert psi_map(g).weights() == example1().weights()
    ones = example1((1,) * 6)
    assert psi_map(ones).weights() == ones.weights()


# -- turning numbers ---------------------------------------------------------


def test_grid_sg_turning_numbers_all_one():
    t = turning_numbers(square_grid(4, 2, "sg"))
    assert t.exact
    assert all(t.turn(e) == ExactScalar.rational(1) for e in t.entries)


SG2_LABELS = {
    # drawn columns are x0..x3, drawn rows A = y0 and B = y1
    "h0.0": 1, "h2.0": 1, "h0.1": 1, "h2.1": 1,
    "u0.0": I, "u0.1": -I, "u2.0": I, "u2.1": -I,
    "u1.0": I, "u1.1": -I, "u3.0": I, "u3.1": -I,
}


def test_grid_sg2_marking_matches_drawn_labels():
    g = square_grid(4, 2, "sg2")
    t = turning_numbers(g)
    m = fractional_marking(g, t)
    for eid, label in SG2_LABELS.items():
        assert m[eid] == label, eid
    for e in g.edges:
        if g.color(e.tail) == BLACK:
            assert m[e.id] == ExactScalar.rational(-1)
    assert verify_marking(g, m).ok


def test_straight_angle_rejected():
    w = Vertex("w", WHITE, (F(1, 2), F(1, 2)))
    b = Vertex("b", BLACK, (F(3, 4), F(1, 2)))
    one = ExactScalar.rational(1)
    g = ToricGraph((w, b), (Edge("e", "w", "b", one, (F(1, 4), F(0))),
                            Edge("f", "b", "w", one, (F(-1, 4), F(0)))))
    with pytest.raises(StraightAngleError):
        turning_numbers(g)


def test_exact_mode_rejects_skew_embeddings():
    g = perturb(square_grid(4, 2, "sg", curves=False), random.Random(1), float_weights=False)
    with pytest.raises(NonAxisParallelInExactMode):
        turning_numbers(g, "exact")


@pytest.mark.parametrize("seed", range(10))
def test_float_perturbed_marking(seed):
    rng = random.Random(seed)
    g = random_perfect_orientation(square_grid(4, 2, None, curves=False), rng)
    g = perturb(random_weights(g, rng), rng)
    t = turning_numbers(g, "float")
    rep = verify_marking(g, fractional_marking(g, t, "float"))
    assert rep.ok, rep.to_json()


@pytest.mark.parametrize("seed", range(6))
def test_switch_count_identity_on_random_orientations(seed):
    rng = random.Random(seed)
    g = random_perfect_orientation(square_grid(4, 4, None, curves=False), rng)
    for f in compute_faces(g):
        assert switch_count(f) == f.length - 2 * black_to_white_count(g, f)


def test_example1_marking_faces():
    g = example1()
    rep = verify_marking(g, fractional_marking(g))
    assert rep.ok


def test_preparation_example1():
    prepared, log = prepare_for_measurement(example1())
    assert measurement_preconditions(prepared).ok
    assert log[0]["edge"] == "e6"
    assert validate_network(prepared).ok


def test_preparation_reports_non_parallel_crossers():
    g = perturb(square_grid(4, 2, "sg"), random.Random(3), float_weights=False)
    prepared, _ = prepare_for_measurement(g)
    assert "RIM_CROSSERS_NOT_PARALLEL" in measurement_preconditions(prepared).codes()
