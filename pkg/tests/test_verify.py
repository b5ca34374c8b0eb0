from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimernet.algebra import format_poly
from dimernet.errors import FloatBackendUnsupported, PreconditionViolation
from dimernet.instances import example1, load_bundled, random_weights, square_grid
from dimernet.network import insert_vertex, reverse_cycle
from dimernet.torus import WHITE, gauge_transform
from dimernet.verify import THEOREM_HOLDS, compare_systems, verify_theorem1

from oracles import euclid_gcd, lambda_list, sylvester_resultant


def test_example1_frozen_values():
    r = verify_theorem1(example1())
    assert r.verdict == THEOREM_HOLDS
    assert format_poly(r.lhs.num) == "1 - 146*mu + 5005*mu^2"
    assert format_poly(r.rhs_raw) == "-(1/77) + (146/77)*mu - 65*mu^2"
    assert r.spin == (1, 1)
    assert format_poly(r.Q) == "1"
    assert r.systems_coincide


def test_example1_unit_weights():
    r = verify_theorem1(example1((1,) * 6))
    assert r.holds
    assert format_poly(r.lhs.num) == "1 - 2*mu + mu^2"


def test_switched_example():
    r = verify_theorem1(example1(switched=True))
    assert r.holds
    assert format_poly(r.lhs.num) == "1"
    assert format_poly(r.Q) == "5005 - 146*lambda + lambda^2"
    assert r.systems_coincide is False


def _scalar_coefficients(K) -> Counter:
    return Counter(str(c) for c in K.terms.values())


def test_switching_keeps_coefficient_multiset():
    a = verify_theorem1(example1())
    b = verify_theorem1(example1(switched=True))
    assert _scalar_coefficients(a.rhs_raw) == _scalar_coefficients(b.rhs_raw)


def test_gstv_signs_substitute_lambda():
    plain = verify_theorem1(example1())
    signed = verify_theorem1(example1(), gstv_signs=True)
    assert signed.holds
    assert signed.lhs.num == plain.lhs.num.substitute(-1, 1)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["B", "C", "B1", "C1"]), st.integers(1, 9), st.integers(1, 9))
def test_gauge_keeps_verdict(vid, p, q):
    moved = verify_theorem1(gauge_transform(example1(), vid, Fraction(p, q)))
    assert moved.holds
    assert moved.lhs.equals(moved.rhs)


def test_vertex_insertion_invariance():
    base = verify_theorem1(example1())
    # e1 and e5 meet a curve at their midpoints, so their new vertex goes a quarter of the way along
    for eid, color, t in [("e3", WHITE, Fraction(1, 2)), ("e1", None, Fraction(1, 4)), ("e5", None, Fraction(1, 4))]:
        r = verify_theorem1(insert_vertex(example1(), eid, color, t))
        assert r.holds, eid
        assert r.lhs.equals(base.lhs), eid


def test_cycle_reversal_across_rim_breaks_ideal_rim():
    # every directed cycle of this network crosses the rim, so reversing one
    # leaves rim crossers pointing both ways
    with pytest.raises(PreconditionViolation) as err:
        verify_theorem1(reverse_cycle(example1(), ["e3", "e5"]))
    assert "NOT_IDEAL" in err.value.codes()


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9), min_size=6, max_size=6))
def test_example1_random_weights(ws):
    assert verify_theorem1(example1(tuple(ws))).holds


@pytest.mark.parametrize("cols,rows,seed", [(2, 2, 0), (2, 2, 1), (4, 2, 2), (4, 2, 3), (4, 4, 4)])
def test_grid_random_weights(cols, rows, seed):
    g = random_weights(square_grid(cols, rows, "sg"), random.Random(seed))
    assert verify_theorem1(g).holds


def test_float_backend_on_grid():
    g = random_weights(square_grid(4, 2, "sg"), random.Random(9))
    r = verify_theorem1(g, backend="float")
    assert r.verdict == THEOREM_HOLDS
    assert r.Q is None


def test_preconditions_reported():
    with pytest.raises(PreconditionViolation) as err:
        verify_theorem1(load_bundled("broken"))
    assert "LEAFLESS_VIOLATION" in err.value.codes()
    with pytest.raises(PreconditionViolation) as err:
        verify_theorem1(square_grid(4, 2, "sg2"))
    assert "NOT_IDEAL" in err.value.codes()


def test_compare_systems_float_rejected():
    with pytest.raises(FloatBackendUnsupported):
        compare_systems(example1(), verify_theorem1(example1(), backend="float"))


@pytest.mark.parametrize("switched", [False, True])
def test_coincidence_matches_euclid_and_resultant(switched):
    s = compare_systems(example1(switched=switched))
    parts = [lambda_list(p) for p in s.gk.values()]
    g = parts[0]
    for part in parts[1:]:
        g = euclid_gcd(g, part)
    assert (len(g) == 1) == s.coincide
    assert [x / g[-1] for x in g] == lambda_list(s.Q.shift(-s.Q.min_degrees()[0], 0)) or s.coincide


def test_resultant_detects_shared_lambda_factor():
    # Q = 5005 - 146 lambda + lambda^2 divides every coefficient in the switched case,
    # so the resultant of Q with any of them vanishes
    s = compare_systems(example1(switched=True))
    q = lambda_list(s.Q)
    for part in s.gk.values():
        assert sylvester_resultant(q, lambda_list(part)) == 0
    plain = compare_systems(example1())
    assert plain.coincide


def test_gstv_system_is_gk_divided_by_Q():
    s = compare_systems(example1(switched=True))
    assert s.gstv_trivial
    assert format_poly(s.Q) == "5005 - 146*lambda + lambda^2"
