from __future__ import annotations

import random
from fractions import Fraction

import pytest

from dimernet.algebra import FLOAT, LaurentPoly2, RationalFunction
from dimernet.errors import PreconditionViolation, SingularPathSystem
from dimernet.instances import example1, random_cylinder_network, square_grid
from dimernet.measurement import (
    DIRECT,
    RATIO,
    CylEdge,
    CylinderNetwork,
    boundary_measurement_matrix,
    boundary_path_matrix,
    charpoly_boundary,
    charpoly_direct,
    charpoly_ratio_general,
    cut_to_cylinder,
    render,
)
from dimernet.network import prepare_for_measurement, turning_numbers

from oracles import enumerate_paths, truncated_series

LAM = LaurentPoly2.lam()
ONE = LaurentPoly2.constant(1)


def prepared_example1(weights=(2, 3, 5, 7, 11, 13)):
    p, _ = prepare_for_measurement(example1(weights))
    return p, turning_numbers(p)


def test_example1_measurement_matrix():
    p, t = prepared_example1()
    M = boundary_measurement_matrix(p, t)
    expected = [[55 * ONE, 273 * ONE + 182 * LAM], [0 * ONE, 91 * ONE]]
    for i in range(2):
        for j in range(2):
            assert M[i, j].equals(RationalFunction(expected[i][j])), (i, j)
    assert render(charpoly_boundary(p, t)) == "1 - 146*mu + 5005*mu^2"


def test_example1_direct_equals_ratio():
    p, t = prepared_example1()
    assert charpoly_boundary(p, t, DIRECT).equals(charpoly_boundary(p, t, RATIO))
    general = charpoly_ratio_general(cut_to_cylinder(p, t))
    assert general.equals(charpoly_boundary(p, t, RATIO))


def test_path_matrix_unchanged_by_preparation():
    raw = boundary_path_matrix(cut_to_cylinder(example1()))
    p, _ = prepare_for_measurement(example1())
    assert raw.equals(boundary_path_matrix(cut_to_cylinder(p)))


def test_cut_requires_curves():
    g = square_grid(4, 2, "sg", curves=False)
    with pytest.raises(PreconditionViolation):
        cut_to_cylinder(g)


def test_grid_direct_equals_ratio():
    weights = {f"h{i}.{j}": i + 2 * j + 1 for i in range(4) for j in range(2)}
    p, _ = prepare_for_measurement(square_grid(4, 2, "sg", weights=weights))
    t = turning_numbers(p)
    assert charpoly_boundary(p, t, DIRECT).equals(charpoly_boundary(p, t, RATIO))


def test_single_path():
    c = CylinderNetwork(("v",), ("s",), ("t",), (CylEdge("s", "v", Fraction(2), 1), CylEdge("v", "t", Fraction(3), 0)))
    B = boundary_path_matrix(c)
    assert B[0, 0].equals(RationalFunction(6 * LAM))
    assert render(charpoly_direct(c)) == "1 - 6*lambda*mu"


def test_loop_gives_geometric_series():
    edges = (CylEdge("s", "v", Fraction(1)), CylEdge("v", "v", Fraction(1, 2), 1), CylEdge("v", "t", Fraction(1)))
    B = boundary_path_matrix(CylinderNetwork(("v",), ("s",), ("t",), edges))
    assert B[0, 0].equals(RationalFunction(ONE, ONE - Fraction(1, 2) * LAM))


def test_source_to_sink_edge_rejected():
    with pytest.raises(ValueError):
        CylinderNetwork((), ("s",), ("t",), (CylEdge("s", "t", Fraction(1)),))


def _as_rational(cell: dict) -> RationalFunction:
    return RationalFunction(LaurentPoly2({(k, 0): w for k, w in cell.items()}))


@pytest.mark.parametrize("seed", range(25))
def test_acyclic_path_matrix_matches_enumeration(seed):
    c = random_cylinder_network(random.Random(seed), acyclic=True)
    B = boundary_path_matrix(c)
    paths = enumerate_paths(c)
    zero = RationalFunction(LaurentPoly2({}))
    for i in range(c.size):
        for j in range(c.size):
            want = _as_rational(paths[(i, j)]) if (i, j) in paths else zero
            assert B[i, j].equals(want), (i, j)


@pytest.mark.parametrize("seed", range(25))
def test_direct_equals_glued_ratio(seed):
    c = random_cylinder_network(random.Random(100 + seed))
    try:
        direct = charpoly_direct(c)
    except SingularPathSystem:
        pytest.skip("singular path system")
    assert direct.equals(charpoly_ratio_general(c))


@pytest.mark.parametrize("seed", range(15))
def test_cyclic_path_matrix_matches_truncated_series(seed):
    c = random_cylinder_network(random.Random(200 + seed), scale=Fraction(1, 108))
    got = boundary_path_matrix(c).evaluate(1)
    want = truncated_series(c, 1, depth=60)
    for i in range(c.size):
        for j in range(c.size):
            assert abs(complex(got[i][j]) - want[i][j]) < 1e-9


@pytest.mark.parametrize("seed", range(8))
def test_float_backend_agrees_with_series(seed):
    c = random_cylinder_network(random.Random(300 + seed), backend=FLOAT, scale=Fraction(1, 108))
    got = boundary_path_matrix(c).evaluate(1)
    want = truncated_series(c, 1, depth=60)
    for i in range(c.size):
        for j in range(c.size):
            assert abs(complex(got[i][j]) - want[i][j]) < 1e-6
