import math
from fractions import Fraction as F
from math import gcd

import pytest

from slitnorm.errors import ValidationError, ZeroClass
from slitnorm.oracle import CoverScene, dense_shortest_path, dump_edges_csv, oracle_norm, segment_clear, shortest_path

V25 = CoverScene.vertical(F(2, 5))


@pytest.mark.parametrize(
    "end, clear",
    [((2, 1), True), ((3, 1), False), ((1, 9), True), ((1, -9), True), ((0, 5), True)],
)
def test_segment_clear_vertical(end, clear):
    assert segment_clear(V25, (0, 0), end) is clear


def test_visible_target_is_straight():
    r = shortest_path(V25, (1, 1))
    assert r.length == pytest.approx(math.sqrt(2), rel=1e-15)
    assert r.polyline == [(0, 0), (1, 1)]


def test_two_segment_target():
    r = shortest_path(V25, (3, 1))
    assert r.length == pytest.approx(3.165094263209011, rel=1e-12)
    assert r.polyline == [(0, 0), (1, F(2, 5)), (3, 1)]


@pytest.mark.parametrize("target, expected", [((0, 3), 3.0), ((7, 2), 7.3015389327915825), ((5, 2), 5.3986503732314794)])
def test_frozen_lengths(target, expected):
    assert shortest_path(V25, target).length == pytest.approx(expected, rel=1e-12)


def test_zero_target_rejected():
    with pytest.raises(ZeroClass):
        shortest_path(V25, (0, 0))


def test_overlapping_slits_rejected():
    with pytest.raises(ValidationError):
        CoverScene.general(0, 1)


@pytest.mark.parametrize("rho", [F(2, 5), F(3, 10), F(1, 4)])
@pytest.mark.parametrize("target", [(3, 1), (5, 2), (7, 2), (4, 3), (6, 1)])
def test_sweep_matches_dense_search(rho, target):
    S = CoverScene.vertical(rho)
    fast = shortest_path(S, target).length
    dense, _, _ = dense_shortest_path(S, target, fast * 1.02 + 0.1)
    assert dense == pytest.approx(fast, rel=1e-12)


@pytest.mark.parametrize("target", [(7, 2), (9, 4), (11, 3)])
def test_window_growth_is_monotone(target):
    base = shortest_path(CoverScene.vertical(F(3, 10)), target).length
    for pad in (2, 4, 8):
        wide = shortest_path(CoverScene.vertical(F(3, 10), pad=pad), target).length
        assert wide == pytest.approx(base, rel=1e-12)


@pytest.mark.parametrize("h", [(3, 1), (5, 3), (7, 2), (4, 1), (8, 5)])
def test_hedlund_constancy(h):
    f1 = shortest_path(V25, h).length
    for N in (2, 3):
        fN = shortest_path(V25, (N * h[0], N * h[1])).length
        assert fN == pytest.approx(N * f1, rel=1e-9)


def test_oracle_norm_factors_gcd():
    assert oracle_norm(V25, (6, 2)) == pytest.approx(6.330188526418022, rel=1e-12)


def test_sheared_scene_matches_plain_lengths_for_identity():
    S = CoverScene.sheared(((1, 0), (0, 1)), F(2, 5))
    for t in [(3, 1), (7, 2)]:
        assert shortest_path(S, t).length == pytest.approx(shortest_path(V25, t).length, rel=1e-14)


def test_float_scene_agrees_with_exact():
    Sf = CoverScene.general(0.0, 0.4)
    for t in [(3, 1), (5, 2), (7, 2)]:
        assert shortest_path(Sf, t).length == pytest.approx(shortest_path(V25, t).length, rel=1e-9)


def test_diagonal_slit_visibility():
    S = CoverScene.general(F(3, 10), F(3, 10))
    for m in range(-6, 7):
        for n in range(-6, 7):
            if gcd(m, n) != 1:
                continue
            shadow = abs(m * F(3, 10) - n * F(3, 10))
            assert segment_clear(S, (0, 0), (m, n)) is (shadow <= 1)


def test_edge_dump():
    r = shortest_path(V25, (3, 1), record_edges=True)
    text = dump_edges_csv(r)
    lines = text.strip().splitlines()
    assert lines[0] == "x0,y0,x1,y1,weight"
    assert len(lines) > 2
    assert r.to_dict()["polyline"][1] == [1.0, 0.4]
