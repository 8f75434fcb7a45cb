import math
from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from slitnorm.errors import NotUnimodular, SlopeNotRational, ValidationError, VisibilityIndeterminate
from slitnorm.general import (
    IDENTITY,
    GeneralSlitTorus,
    LinearMap,
    classify_sheared,
    convergent_norm,
    general_norm,
    intrinsic_classify,
    intrinsic_norm,
    irrational_norm,
    irrational_visible,
    norm_sheared,
    pullback_matrix,
    rational_pullback,
    rational_visible,
    shadow,
    slit_parents,
)
from slitnorm.oracle import CoverScene, oracle_norm, segment_clear
from slitnorm.torus import FLAT_SPLIT, TWO_SEGMENT, HClass, VerticalSlitTorus, classify_direction, norm_value

T25 = VerticalSlitTorus(F(2, 5))
DIAG = GeneralSlitTorus((F(3, 10), F(3, 10)))
IRR = GeneralSlitTorus((0.3, 0.3 * math.sqrt(2)))
small = [(m, n) for m in range(-6, 7) for n in range(-6, 7) if gcd(m, n) == 1]


def test_linear_map_checks_determinant():
    with pytest.raises(NotUnimodular):
        LinearMap(2, 0, 0, 1)
    M = LinearMap(2, 1, 1, 1)
    assert M.inverse().apply(M.apply((3, -7))) == (3, -7)
    with pytest.raises(NotUnimodular):
        LinearMap(1.0, 0.5, 0.0, 1.1)


def test_identity_shear_is_vertical_torus():
    for h in small:
        assert norm_sheared(IDENTITY, F(2, 5), h).value == pytest.approx(norm_value(T25, HClass(*h)), rel=1e-15)


@pytest.mark.parametrize(
    "rows",
    [((1, 1), (0, 1)), ((2, 1), (1, 1)), ((F(3, 2), F(1, 3)), (F(3, 4), F(5, 6))), ((2.0, 0.5), (1.0, 0.75))],
)
def test_sheared_against_oracle(rows):
    M = LinearMap.from_rows(rows)
    S = CoverScene.sheared(rows, F(2, 5))
    for h in [(3, 1), (5, 2), (7, 2), (-3, 1), (4, -3), (1, 4)]:
        assert norm_sheared(M, F(2, 5), h).value == pytest.approx(oracle_norm(S, h), rel=1e-9)


def test_shear_keeps_classification():
    for h in small:
        assert classify_sheared(F(2, 5), HClass(*h)) == classify_direction(T25, HClass(*h))
    assert classify_sheared(F(2, 5), HClass(7, 2)) == "FlatInterior"


def test_pullback_matrix_is_unimodular_with_slit_column():
    for p, q in [(1, 1), (2, 3), (-1, 4), (5, 2), (0, 1)]:
        M = pullback_matrix(p, q)
        assert M.a * M.d - M.b * M.c == 1
        assert (M.b, M.d) == (q, p) or (p == 0 and M.b == q)


def test_rational_pullback_diagonal():
    M, rho = rational_pullback(DIAG)
    assert rho == F(3, 10)
    assert M.apply((0, rho)) == (F(3, 10), F(3, 10))
    with pytest.raises(SlopeNotRational):
        rational_pullback(IRR)


def test_rational_examples():
    assert rational_visible(DIAG, HClass(1, 0))
    assert general_norm(DIAG, (1, 0)).value == 1.0
    assert not rational_visible(DIAG, HClass(3, -1))
    assert general_norm(DIAG, (3, -1)).value == pytest.approx(3.1657403666206525, rel=1e-12)
    # (2,-2) is twice the visible class (1,-1)
    assert general_norm(DIAG, (2, -2)).value == pytest.approx(2 * math.sqrt(2), rel=1e-15)


@pytest.mark.parametrize("G", [GeneralSlitTorus((0, F(2, 5))), DIAG, GeneralSlitTorus((F(1, 5), F(3, 10)))])
def test_rational_visibility_matches_clearance(G):
    S = CoverScene.general(*G.slit_vector)
    for h in small:
        assert rational_visible(G, HClass(*h)) is segment_clear(S, (0, 0), h)


def test_intrinsic_agrees_with_pullback():
    for G in (DIAG, GeneralSlitTorus((F(1, 5), F(3, 10))), GeneralSlitTorus((F(2, 7), F(-1, 7)))):
        for h in small:
            assert intrinsic_norm(G, h).value == pytest.approx(general_norm(G, h).value, rel=1e-12)
            assert intrinsic_norm(G, h).kind == general_norm(G, h).kind


def test_slit_parents_split_shadow():
    for h in [(3, -1), (10, -3), (7, -2)]:
        w = shadow(IRR, h)
        if w < 0:
            h = (-h[0], -h[1])
            w = -w
        p1, p2 = slit_parents(IRR, h)
        assert (p1[0] + p2[0], p1[1] + p2[1]) == h
        assert p1[0] * p2[1] - p1[1] * p2[0] == 1
        assert 0 < shadow(IRR, p1) < w


def test_irrational_examples():
    assert irrational_visible(IRR, HClass(1, 1))
    assert irrational_visible(IRR, HClass(0, 1))
    assert not irrational_visible(IRR, HClass(10, -3))
    with pytest.raises(ValidationError):
        irrational_norm(IRR, (1, 1))
    r = irrational_norm(IRR, (3, -1))
    assert r.certificate.kind == TWO_SEGMENT
    assert r.certificate.value == pytest.approx(3.1894996089679113, rel=1e-12)
    assert r.alternative > r.certificate.value
    flat = irrational_norm(IRR, (10, -3)).certificate
    assert flat.kind == FLAT_SPLIT
    assert flat.value == pytest.approx(sum(c.value for c in flat.children), rel=1e-15)


def test_irrational_boundary_is_indeterminate():
    G = GeneralSlitTorus((0.0, 0.5 + 1e-14))
    with pytest.raises(VisibilityIndeterminate):
        irrational_visible(G, HClass(2, 1))


@pytest.mark.parametrize("h", [(3, -1), (4, -1), (7, -2), (10, -3), (2, 5)])
def test_irrational_against_oracle_and_convergents(h):
    S = CoverScene.general(0.3, 0.3 * math.sqrt(2))
    v = intrinsic_norm(IRR, h).value
    assert v == pytest.approx(oracle_norm(S, h), rel=1e-9)
    assert v == pytest.approx(convergent_norm(IRR, h), rel=1e-9)


@settings(max_examples=50)
@given(
    st.tuples(st.integers(-9, 9), st.integers(1, 9)).filter(lambda t: gcd(*t) == 1),
    st.sampled_from([F(1, 5), F(3, 10), F(2, 5)]),
    st.tuples(st.integers(-30, 30), st.integers(-30, 30)).filter(lambda t: gcd(*t) == 1),
)
def test_intrinsic_equals_pullback_property(direction, length, h):
    # slit of rational slope q/p scaled so the pulled-back length is `length`
    p, q = direction
    G = GeneralSlitTorus((length * q, length * p)) if q else GeneralSlitTorus((0, length))
    try:
        expected = general_norm(G, h).value
    except ValidationError:
        return
    assert intrinsic_norm(G, h).value == pytest.approx(expected, rel=1e-12)
    assert intrinsic_classify(G, HClass(*h)) in ("Vertex", "FlatInterior")
