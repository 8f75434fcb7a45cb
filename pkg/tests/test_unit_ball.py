import math
from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from slitnorm.errors import ValidationError
from slitnorm.oracle import CoverScene, oracle_norm
from slitnorm.torus import VERTEX, HClass, VerticalSlitTorus, classify_direction, norm_value, stable_norm_vector
from slitnorm.unit_ball import (
    adjacent_pairs,
    are_adjacent_vertices,
    boundary_polyline,
    deviation_profile,
    enumerate_vertices,
    farey_sequence,
)

T25 = VerticalSlitTorus(F(2, 5))


def _classes(entries):
    return [(e.cls.m, e.cls.n) for e in entries]


def test_vertices_small_bound():
    assert sorted(_classes(enumerate_vertices(T25, 2))) == [(0, 1), (1, 0), (1, 1)]


def test_vertices_include_first_child():
    entries = {(e.cls.m, e.cls.n): e for e in enumerate_vertices(T25, 3.2)}
    assert entries[(3, 1)].norm == pytest.approx(3.165094263209011, rel=1e-12)
    assert entries[(3, 1)].kind == "ChildOfVisible"
    assert entries[(2, 1)].kind == "Visible"


def test_vertices_sorted_by_slope():
    slopes = [F(e.cls.n, e.cls.m) if e.cls.m else math.inf for e in enumerate_vertices(T25, 8)]
    assert slopes == sorted(slopes)


@pytest.mark.parametrize("rho", [F(2, 5), F(3, 10), F(1, 4), F(3, 7)])
def test_vertices_match_brute_force(rho):
    T = VerticalSlitTorus(rho)
    X = 14
    brute = set()
    for m in range(0, X + 1):
        for n in range(0, X + 1):
            if gcd(m, n) == 1 and classify_direction(T, HClass(m, n)) == VERTEX:
                if norm_value(T, HClass(m, n)) <= X:
                    brute.add((m, n))
    got = _classes(enumerate_vertices(T, X))
    assert len(got) == len(set(got))
    assert set(got) == brute


def test_vertex_norms_match_oracle():
    S = CoverScene.vertical(F(2, 5))
    for e in enumerate_vertices(T25, 6):
        assert e.norm == pytest.approx(oracle_norm(S, (e.cls.m, e.cls.n)), rel=1e-9)


def test_farey_sequence():
    assert farey_sequence(3) == [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]


def test_gap_values():
    assert 1 - math.sqrt(53) / norm_value(T25, HClass(7, 2)) == pytest.approx(0.002935, abs=5e-7)
    assert 1 - math.sqrt(10) / norm_value(T25, HClass(3, 1)) == pytest.approx(0.00088990, abs=5e-8)


def test_profile_zero_exactly_at_visible():
    prof = deviation_profile(T25, 200)
    zero = {(int(s.m), int(s.n)) for s in prof if s.kind != "Fill" and s.gap == 0}
    assert zero == {(1, 0), (2, 1), (1, 1)}
    assert all(s.gap > 0 for s in prof if s.kind == "Fill")
    coords = [s.coord for s in prof]
    assert coords == sorted(coords) and 0 <= coords[0] and coords[-1] <= 1


def test_profile_validation():
    with pytest.raises(ValidationError):
        deviation_profile(T25, 1)


def test_boundary_polyline():
    pts = boundary_polyline(T25, 1)
    assert pts == pytest.approx([(1, 0), (1 / math.sqrt(2), 1 / math.sqrt(2)), (0, 1)])
    pts3 = boundary_polyline(T25, 3)
    assert (2 / math.sqrt(5), 1 / math.sqrt(5)) == pytest.approx(pts3[2])
    assert pts3[1] == pytest.approx((3 / 3.165094263209011, 1 / 3.165094263209011))


def test_adjacency():
    assert are_adjacent_vertices(T25, HClass(3, 1), HClass(4, 1))
    assert are_adjacent_vertices(T25, HClass(3, 1), HClass(5, 2))
    assert not are_adjacent_vertices(T25, HClass(1, 0), HClass(1, 1))
    assert not are_adjacent_vertices(T25, HClass(2, 1), HClass(3, 1))


def test_adjacent_pairs_bound_flats():
    for v, w in adjacent_pairs(T25, 12):
        mid = ((v.m / norm_value(T25, v) + w.m / norm_value(T25, w)) / 2,
               (v.n / norm_value(T25, v) + w.n / norm_value(T25, w)) / 2)
        assert stable_norm_vector(T25, mid) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40)
@given(st.floats(0, math.pi / 2), st.sampled_from([F(2, 5), F(3, 10), F(1, 7)]))
def test_ball_between_circle_and_square(theta, rho):
    T = VerticalSlitTorus(rho)
    v = (math.cos(theta), math.sin(theta))
    r = stable_norm_vector(T, v)
    assert 1 - 1e-12 <= r <= abs(v[0]) + abs(v[1]) + 1e-12
