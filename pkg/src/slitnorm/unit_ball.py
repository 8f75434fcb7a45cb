"""Vertices, boundary and deviation profile of the stable-norm unit ball.

All enumerations are over first-quadrant representatives (m, n >= 0); the
ball is symmetric under both sign flips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import ValidationError
from .farey import farey_parents
from .torus import (
    FLAT_INTERIOR,
    VERTEX,
    HClass,
    VerticalSlitTorus,
    _two_segment_length,
    classify_direction,
    is_visible,
    norm_value,
    stable_norm_vector,
)

KIND_VISIBLE = "Visible"
KIND_CHILD = "ChildOfVisible"


@dataclass(frozen=True)
class VertexEntry:
    cls: HClass
    norm: float
    kind: str

    def to_dict(self) -> dict:
        return {"m": self.cls.m, "n": self.cls.n, "norm": self.norm, "kind": self.kind}


@dataclass(frozen=True)
class ProfileSample:
    coord: float
    gap: float
    m: float
    n: float
    kind: str


def slope_key(m, n):
    return (Fraction(n, m) if m else Fraction(10**18), m)


def visible_classes(T: VerticalSlitTorus, bound: float) -> Iterator[tuple]:
    """First-quadrant visible primitive classes with Euclidean norm <= bound."""
    if bound >= 1:
        yield (0, 1)
    for m in range(1, min(T.max_visible_m, math.floor(bound)) + 1):
        n = 0
        while math.hypot(m, n) <= bound:
            if math.gcd(m, n) == 1:
                yield (m, n)
            n += 1


def _neighbours_below(P):
    """Farey neighbours of P that generate its child chains (first quadrant)."""
    b, a = P
    if b == 1:
        out = [(1, a + 1)]
        if a >= 1:
            out.append((1, a - 1))
        return out
    low, high = farey_parents(Fraction(a, b))
    return [(low.denominator, low.numerator), (high.denominator, high.numerator)]


def _canonical(P, Q) -> bool:
    """Whether visible P wins over visible Q as the parent that reports a child."""
    return (P[0], Fraction(P[1], P[0])) < (Q[0], Fraction(Q[1], Q[0]))


def child_vertices(T: VerticalSlitTorus, bound: float) -> Iterator[tuple]:
    """Non-visible first-quadrant vertex classes with stable norm <= bound.

    Yields ``(cls, norm, visible_parent)``.  Every such class is ``Q + kP``
    for a visible P and one of P's Farey neighbours Q; a class with two
    visible parents is reported once, by the canonical one.
    """
    rho = T.rho
    rf = float(rho)
    for P in visible_classes(T, bound):
        if P[0] == 0:
            continue
        for Q in _neighbours_below(P):
            prev = Q
            while True:
                C = (prev[0] + P[0], prev[1] + P[1])
                euclid = math.hypot(*C)
                if euclid > bound and C[0] * P[0] + C[1] * P[1] > 0:
                    break
                if C[0] * rho > 1 and euclid <= bound:
                    prev_visible = prev[0] * rho <= 1
                    if not prev_visible or _canonical(P, prev):
                        # lower-slope parent takes the +rho shift
                        if P[1] * prev[0] < prev[1] * P[0]:
                            value = _two_segment_length(rf, P, prev)
                        else:
                            value = _two_segment_length(rf, prev, P)
                        if value <= bound:
                            yield C, value, P
                prev = C


def enumerate_vertices(T: VerticalSlitTorus, max_norm: float) -> list:
    if max_norm < 1:
        raise ValidationError("max_norm must be >= 1")
    out = [VertexEntry(HClass(*P), math.hypot(*P), KIND_VISIBLE) for P in visible_classes(T, max_norm)]
    out += [VertexEntry(HClass(*C), v, KIND_CHILD) for C, v, _ in child_vertices(T, max_norm)]
    out.sort(key=lambda e: slope_key(e.cls.m, e.cls.n))
    return out


def farey_sequence(order: int) -> list:
    """F_order on [0, 1] as (num, den) pairs, increasing."""
    a, b, c, d = 0, 1, 1, order
    out = [(a, b)]
    while c <= order:
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append((a, b))
    return out


def _gap(T, v) -> float:
    return 1.0 - math.hypot(float(v[0]), float(v[1])) / stable_norm_vector(T, v)


def deviation_profile(T: VerticalSlitTorus, octant_samples: int) -> list:
    """Gap between the unit circle and the unit ball over angles [0, pi/4].

    Half of the samples are Farey slopes (exact vertex and flat directions),
    the rest a uniform angular fill at cell midpoints.
    """
    if octant_samples < 2:
        raise ValidationError("octant_samples must be >= 2")
    n_farey = octant_samples // 2
    order = 1
    while len(farey_sequence(order)) < n_farey:
        order += 1
    samples = []
    for num, den in farey_sequence(order):
        h = HClass(den, num)
        if is_visible(T, h):
            kind = KIND_VISIBLE
            gap = 0.0
        else:
            kind = classify_direction(T, h)
            gap = 1.0 - h.euclidean() / norm_value(T, h)
        coord = math.atan2(num, den) / (math.pi / 4)
        samples.append(ProfileSample(coord, gap, den, num, kind))
    n_fill = octant_samples - n_farey
    for i in range(n_fill):
        theta = (i + 0.5) / n_fill * (math.pi / 4)
        v = (math.cos(theta), math.sin(theta))
        samples.append(ProfileSample(theta / (math.pi / 4), _gap(T, v), v[0], v[1], "Fill"))
    samples.sort(key=lambda s: (s.coord, s.kind))
    return samples


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def vertex_classes_up_to(T: VerticalSlitTorus, max_denominator: int) -> list:
    """First-quadrant vertex classes with m, n <= max_denominator."""
    out = []
    for m in range(0, max_denominator + 1):
        for n in range(0, max_denominator + 1):
            if math.gcd(m, n) == 1 and classify_direction(T, HClass(m, n)) == VERTEX:
                out.append(HClass(m, n))
    return out


def boundary_polyline(T: VerticalSlitTorus, max_denominator: int) -> list:
    """Hull of the normalized vertex points, ordered by angle from (1,0) to (0,1)."""
    if max_denominator < 1:
        raise ValidationError("max_denominator must be >= 1")
    pts = []
    for h in vertex_classes_up_to(T, max_denominator):
        v = norm_value(T, h)
        pts.append((math.atan2(h.n, h.m), h.m / v, h.n / v))
    pts.sort()
    chain: list = []
    for _, x, y in pts:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], (x, y)) <= 0:
            chain.pop()
        chain.append((x, y))
    return chain


def are_adjacent_vertices(T: VerticalSlitTorus, v: HClass, w: HClass) -> bool:
    """Consecutive vertices of the ball boundary.

    Visible vertices are accumulation points of other vertices, so only two
    non-visible vertex classes that are Farey neighbours can be consecutive;
    their mediant then has two non-visible parents and lies on a flat.
    """
    v, w = HClass(*v) if not isinstance(v, HClass) else v, HClass(*w) if not isinstance(w, HClass) else w
    if v.is_zero or w.is_zero or not (v.is_primitive and w.is_primitive):
        return False
    if abs(v.m * w.n - v.n * w.m) != 1:
        return False
    if is_visible(T, v) or is_visible(T, w):
        return False
    mediant = v + w
    return (
        classify_direction(T, v) == VERTEX
        and classify_direction(T, w) == VERTEX
        and classify_direction(T, mediant) == FLAT_INTERIOR
    )


def adjacent_pairs(T: VerticalSlitTorus, bound: float) -> list:
    """Consecutive non-visible vertex pairs along child chains, first quadrant."""
    pairs = []
    for P in visible_classes(T, bound):
        if P[0] == 0:
            continue
        for Q in _neighbours_below(P):
            prev = Q
            while True:
                C = (prev[0] + P[0], prev[1] + P[1])
                if math.hypot(*C) > bound:
                    break
                if prev[0] * T.rho > 1 and C[0] * T.rho > 1:
                    pairs.append((HClass(*prev), HClass(*C)))
                prev = C
    return sorted(set(pairs))
