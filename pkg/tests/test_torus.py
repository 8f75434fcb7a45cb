import math
from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from slitnorm.errors import NonPrimitive, ValidationError, ZeroClass
from slitnorm.oracle import CoverScene, segment_clear
from slitnorm.torus import (
    FLAT_INTERIOR,
    FLAT_SPLIT,
    TWO_SEGMENT,
    VERTEX,
    VISIBLE,
    HClass,
    VerticalSlitTorus,
    classify_direction,
    is_visible,
    minimizing_path,
    norm_value,
    path_length,
    stable_norm,
    stable_norm_vector,
)

T25 = VerticalSlitTorus(F(2, 5))

# frozen from the shortest-path oracle
NORM_3_1 = 3.165094263209011
NORM_7_2 = 7.3015389327915825
NORM_5_2 = 5.3986503732314794


def test_torus_validation():
    for bad in (F(0), F(1), F(3, 2), F(-1, 5)):
        with pytest.raises(ValidationError):
            VerticalSlitTorus(bad)
    assert T25.max_visible_m == 2


@pytest.mark.parametrize("h, expected", [((2, 1), True), ((1, 7), True), ((1, -4), True), ((3, 1), False)])
def test_is_visible(h, expected):
    assert is_visible(T25, HClass(*h)) is expected


def test_is_visible_rejects_bad_classes():
    with pytest.raises(ZeroClass):
        is_visible(T25, HClass(0, 0))
    with pytest.raises(NonPrimitive):
        is_visible(T25, HClass(4, 2))


def test_closed_form_values():
    assert stable_norm(T25, HClass(3, 1)).value == pytest.approx(math.sqrt(1.16) + math.sqrt(4.36), rel=1e-15)
    assert stable_norm(T25, HClass(3, 1)).value == pytest.approx(NORM_3_1, rel=1e-12)
    assert stable_norm(T25, HClass(1, 1)).value == pytest.approx(math.sqrt(2))
    assert stable_norm(T25, HClass(7, 2)).value == pytest.approx(NORM_7_2, rel=1e-12)
    assert stable_norm(T25, HClass(7, 2)).value == pytest.approx(
        stable_norm(T25, HClass(4, 1)).value + NORM_3_1, rel=1e-15
    )
    assert stable_norm(T25, HClass(5, 2)).value == pytest.approx(math.sqrt(10.96) + math.sqrt(4.36), rel=1e-15)


def test_certificate_shapes():
    c = stable_norm(T25, HClass(3, 1))
    assert c.kind == TWO_SEGMENT
    assert c.bend == (1, F(2, 5))
    assert [tuple(p) for p in ((q.m, q.n) for q in c.parents)] == [(1, 0), (2, 1)]
    flat = stable_norm(T25, HClass(7, 2))
    assert flat.kind == FLAT_SPLIT
    assert [ch.cls for ch in flat.children] == [HClass(4, 1), HClass(3, 1)]
    assert stable_norm(T25, HClass(2, 1)).kind == VISIBLE
    d = flat.to_dict()
    assert d["class"] == [7, 2] and len(d["children"]) == 2


def test_multiples_scale():
    c = stable_norm(T25, HClass(6, 2))
    assert c.multiplicity == 2
    assert c.value == pytest.approx(2 * NORM_3_1, rel=1e-15)


@pytest.mark.parametrize(
    "h, expected", [((2, 1), VERTEX), ((3, 1), VERTEX), ((7, 2), FLAT_INTERIOR), ((0, 1), VERTEX)]
)
def test_classify_direction(h, expected):
    assert classify_direction(T25, HClass(*h)) == expected


def test_minimizing_path_examples():
    assert minimizing_path(T25, HClass(1, 1)) == [(0, 0), (1, 1)]
    assert minimizing_path(T25, HClass(3, 1)) == [(0, 0), (1, F(2, 5)), (3, 1)]
    assert minimizing_path(T25, HClass(7, 2)) == [(0, 0), (1, F(2, 5)), (4, 1), (5, F(7, 5)), (7, 2)]


def test_hclass_parsing_and_arithmetic():
    h = HClass.parse("6,-4")
    assert h.gcd == 2 and h.primitive_part == HClass(3, -2)
    assert h + HClass(1, 1) == HClass(7, -3)
    assert -h == HClass(-6, 4)
    with pytest.raises(ValidationError):
        HClass.parse("1;2")


rhos = st.sampled_from([F(2, 5), F(1, 4), F(3, 10), F(1, 7), F(5, 8), F(13, 100)])
primitive = st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(lambda t: gcd(*t) == 1)


@given(rhos, primitive)
def test_sign_symmetry(rho, h):
    T = VerticalSlitTorus(rho)
    m, n = h
    v = norm_value(T, HClass(m, n))
    for s in ((-m, -n), (-m, n), (m, -n)):
        assert norm_value(T, HClass(*s)) == pytest.approx(v, rel=1e-12)


@given(rhos, primitive)
def test_norm_at_least_euclidean_and_visible_is_euclidean(rho, h):
    T = VerticalSlitTorus(rho)
    H = HClass(*h)
    v = norm_value(T, H)
    assert v >= H.euclidean() * (1 - 1e-15)
    if is_visible(T, H):
        assert v == H.euclidean()
    else:
        assert v > H.euclidean()


@settings(max_examples=60)
@given(rhos, primitive)
def test_path_realises_norm_and_avoids_slits(rho, h):
    T = VerticalSlitTorus(rho)
    H = HClass(*h)
    path = minimizing_path(T, H)
    assert path[0] == (0, 0) and path[-1] == (H.m, H.n)
    assert path_length(path) == pytest.approx(norm_value(T, H), rel=1e-12)
    scene = CoverScene.vertical(rho)
    for p, q in zip(path, path[1:]):
        assert segment_clear(scene, p, q)


@given(rhos, primitive, st.integers(1, 5))
def test_vector_norm_agrees_on_lattice(rho, h, k):
    T = VerticalSlitTorus(rho)
    v = (k * h[0], k * h[1])
    assert stable_norm_vector(T, v) == pytest.approx(norm_value(T, HClass(*v)), rel=1e-12)


def test_long_flat_chain_is_additive():
    # (3j+4, j+1) = (4,1) + j (3,1): one flat, norm linear in j
    j = 10**6
    expected = j * NORM_3_1 + norm_value(T25, HClass(4, 1))
    assert norm_value(T25, HClass(3 * j + 4, j + 1)) == pytest.approx(expected, rel=1e-12)
    assert classify_direction(T25, HClass(3 * j + 4, j + 1)) == FLAT_INTERIOR


def test_vector_norm_near_axis():
    # (1,0) is a corner: the one-sided slope toward (k,1) is hypot(1, rho) - 1
    slope = math.hypot(1, 0.4) - 1
    for theta in (1e-12, 1e-9, 1e-7):
        v = (math.cos(theta), math.sin(theta))
        assert stable_norm_vector(T25, v) == pytest.approx(1 + slope * theta, abs=1e-13)
    for theta in (5e-324, 1e-300, math.pi / 2 - 1e-15):
        assert stable_norm_vector(T25, (math.cos(theta), math.sin(theta))) == pytest.approx(1.0, abs=1e-14)
