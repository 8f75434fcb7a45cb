"""Stable norm of the square torus with a vertical slit of length rho.

Classification is exact (rational rho); lengths are doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import NonPrimitive, ValidationError, ZeroClass
from .farey import as_rational, farey_parents

VISIBLE = "VisibleSegment"
TWO_SEGMENT = "TwoSegmentSimple"
FLAT_SPLIT = "FlatSplit"

VERTEX = "Vertex"
FLAT_INTERIOR = "FlatInterior"


@dataclass(frozen=True)
class VerticalSlitTorus:
    rho: Fraction

    def __post_init__(self):
        rho = as_rational(self.rho)
        if not 0 < rho < 1:
            raise ValidationError(f"slit length must lie in (0,1), got {rho}")
        object.__setattr__(self, "rho", rho)

    @property
    def max_visible_m(self) -> int:
        return math.floor(1 / self.rho)


@dataclass(frozen=True, order=True)
class HClass:
    m: int
    n: int

    @classmethod
    def parse(cls, text: str) -> "HClass":
        try:
            m, n = (int(t) for t in text.split(","))
        except ValueError as exc:
            raise ValidationError(f"cannot parse class {text!r}, expected 'm,n'") from exc
        return cls(m, n)

    @property
    def is_zero(self) -> bool:
        return self.m == 0 and self.n == 0

    @property
    def gcd(self) -> int:
        return math.gcd(self.m, self.n)

    @property
    def is_primitive(self) -> bool:
        return self.gcd == 1

    @property
    def primitive_part(self) -> "HClass":
        k = self.gcd
        return HClass(self.m // k, self.n // k)

    def __add__(self, other: "HClass") -> "HClass":
        return HClass(self.m + other.m, self.n + other.n)

    def __sub__(self, other: "HClass") -> "HClass":
        return HClass(self.m - other.m, self.n - other.n)

    def __neg__(self) -> "HClass":
        return HClass(-self.m, -self.n)

    def scaled(self, k: int) -> "HClass":
        return HClass(k * self.m, k * self.n)

    def euclidean(self) -> float:
        return math.hypot(self.m, self.n)

    def __str__(self) -> str:
        return f"{self.m},{self.n}"


@dataclass(frozen=True)
class NormCertificate:
    """Value of the stable norm and the decomposition that realises it.

    ``kind``, ``bend``, ``parents`` and ``children`` describe the primitive
    part of ``cls``; ``value`` already includes the factor ``multiplicity``.
    """

    cls: HClass
    value: float
    kind: str
    multiplicity: int = 1
    bend: Optional[tuple] = None
    parents: Optional[tuple] = None
    children: tuple = field(default=())

    def to_dict(self) -> dict:
        out = {"class": [self.cls.m, self.cls.n], "value": self.value, "kind": self.kind}
        if self.multiplicity != 1:
            out["multiplicity"] = self.multiplicity
        if self.bend is not None:
            out["bend"] = [float(c) for c in self.bend]
        if self.parents is not None:
            out["parents"] = [[p.m, p.n] for p in self.parents]
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out


def _check_class(h: HClass, primitive: bool = False) -> HClass:
    if not isinstance(h, HClass):
        h = HClass(*h)
    if h.is_zero:
        raise ZeroClass("the zero class has no direction")
    if primitive and not h.is_primitive:
        raise NonPrimitive(f"({h}) has gcd {h.gcd}")
    return h


def _split(rho: Fraction, m: int, n: int):
    """Kind and Farey parents (lower slope first) of primitive (m, n), m > 0."""
    if m * rho <= 1:
        return VISIBLE, None, None
    low, high = farey_parents(Fraction(n, m))
    p1 = (low.denominator, low.numerator)
    p2 = (high.denominator, high.numerator)
    if p1[0] * rho <= 1 or p2[0] * rho <= 1:
        return TWO_SEGMENT, p1, p2
    return FLAT_SPLIT, p1, p2


def _two_segment_length(rho: float, p1, p2) -> float:
    (b, a), (d, c) = p1, p2
    return math.hypot(b, a + rho) + math.hypot(d, c - rho)


# chains up to this length are summed term by term, so a flat class is
# bitwise the sum of its two parents; longer ones use the closed form
CHAIN_SUM_LIMIT = 64


def _flat_chain(rho: Fraction, key, p1, p2):
    """(P, k, Q) with key = Q + k P for a flat class.

    P is the parent of smaller m.  Every key - iP with i < k is flat with
    parents P and key - (i+1)P, so the norm is k |P| + |Q|; Q is the last
    non-visible class of the chain.  Short chains return the parents as is
    (k = 1).
    """
    P = p1 if p1[0] <= p2[0] else p2
    k = math.ceil((key[0] - 1 / rho) / P[0]) - 1
    if k <= CHAIN_SUM_LIMIT:
        return P, 1, (key[0] - P[0], key[1] - P[1])
    return P, k, (key[0] - k * P[0], key[1] - k * P[1])


@lru_cache(maxsize=1 << 18)
def _primitive_value(rho: Fraction, m: int, n: int) -> float:
    """Norm of primitive (m, n) with m >= 0; iterative so flats never recurse deeply."""
    if m == 0:
        return float(abs(n))
    rf = float(rho)
    memo: dict = {}
    stack = [(m, n)]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        kind, p1, p2 = _split(rho, *key)
        if kind == VISIBLE:
            memo[key] = math.hypot(*key)
        elif kind == TWO_SEGMENT:
            memo[key] = _two_segment_length(rf, p1, p2)
        else:
            P, k, Q = _flat_chain(rho, key, p1, p2)
            pending = [p for p in (P, Q) if p not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[key] = k * memo[P] + memo[Q]
        stack.pop()
    return memo[(m, n)]


def _oriented(h: HClass) -> tuple[int, int, int]:
    """(m, n) with m > 0, or m == 0 and n > 0; the sign flip is returned too."""
    if h.m < 0 or (h.m == 0 and h.n < 0):
        return -h.m, -h.n, -1
    return h.m, h.n, 1


def is_visible(T: VerticalSlitTorus, h: HClass) -> bool:
    h = _check_class(h, primitive=True)
    return abs(h.m) * T.rho <= 1


def classify_direction(T: VerticalSlitTorus, h: HClass) -> str:
    h = _check_class(h, primitive=True)
    m, n, _ = _oriented(h)
    if m == 0:
        return VERTEX
    kind, _, _ = _split(T.rho, m, n)
    return FLAT_INTERIOR if kind == FLAT_SPLIT else VERTEX


def norm_value(T: VerticalSlitTorus, h: HClass) -> float:
    """Just the number; the cached fast path used by bulk workloads."""
    h = _check_class(h)
    k = h.gcd
    m, n, _ = _oriented(h)
    return k * _primitive_value(T.rho, m // k, n // k)


def _build_certificate(rho: Fraction, m: int, n: int) -> NormCertificate:
    """Certificate tree, built iteratively; shared subtrees are reused."""
    memo: dict = {}
    stack = [(m, n)]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        cls = HClass(*key)
        if key[0] == 0:
            memo[key] = NormCertificate(cls, float(abs(key[1])), VISIBLE)
            stack.pop()
            continue
        kind, p1, p2 = _split(rho, *key)
        if kind == VISIBLE:
            memo[key] = NormCertificate(cls, math.hypot(*key), VISIBLE)
        elif kind == TWO_SEGMENT:
            bend = (Fraction(p1[0]), p1[1] + rho)
            value = _two_segment_length(float(rho), p1, p2)
            memo[key] = NormCertificate(cls, value, TWO_SEGMENT, bend=bend, parents=(HClass(*p1), HClass(*p2)))
        else:
            pending = [p for p in (p1, p2) if p not in memo]
            if pending:
                stack.extend(pending)
                continue
            children = (memo[p1], memo[p2])
            memo[key] = NormCertificate(
                cls,
                children[0].value + children[1].value,
                FLAT_SPLIT,
                parents=(HClass(*p1), HClass(*p2)),
                children=children,
            )
        stack.pop()
    return memo[(m, n)]


def stable_norm(T: VerticalSlitTorus, h: HClass) -> NormCertificate:
    """Certificate for ``h``; the tree is expressed for the primitive part with m >= 0."""
    h = _check_class(h)
    k = h.gcd
    m, n, _ = _oriented(h)
    base = _build_certificate(T.rho, m // k, n // k)
    return NormCertificate(
        cls=h,
        value=k * base.value,
        kind=base.kind,
        multiplicity=k,
        bend=base.bend,
        parents=base.parents,
        children=base.children,
    )


def _raw_path(rho: Fraction, m: int, n: int) -> list:
    if m == 0:
        return [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(n))]
    kind, p1, p2 = _split(rho, m, n)
    origin = (Fraction(0), Fraction(0))
    end = (Fraction(m), Fraction(n))
    if kind == VISIBLE:
        return [origin, end]
    if kind == TWO_SEGMENT:
        return [origin, (Fraction(p1[0]), p1[1] + rho), end]
    first = _raw_path(rho, *p1)
    second = _raw_path(rho, *p2)
    ox, oy = first[-1]
    return first + [(ox + x, oy + y) for x, y in second[1:]]


def minimizing_path(T: VerticalSlitTorus, h: HClass) -> list:
    """Polyline from the origin to ``h`` in the cover, exact coordinates.

    Negative m is handled by the reflection x -> -x, which maps the slit
    family to itself; negative n needs no special care because Farey parents
    of negative slopes are integer translates of positive ones.
    """
    h = _check_class(h, primitive=True)
    if h.m < 0:
        return [(-x, y) for x, y in _raw_path(T.rho, -h.m, h.n)]
    return _raw_path(T.rho, h.m, h.n)


def path_length(points) -> float:
    return sum(
        math.hypot(float(x1 - x0), float(y1 - y0))
        for (x0, y0), (x1, y1) in zip(points, points[1:])
    )


def _unit_cone_norm(T: VerticalSlitTorus, cls: tuple) -> float:
    return _primitive_value(T.rho, *cls)


_BRACKET_CAP = 2**53


def _cap_step(base, step, j: int) -> int:
    """Largest j' <= j keeping base + j' * step within the bracket cap."""
    size = max(abs(step[0]), abs(step[1]))
    room = (_BRACKET_CAP - max(abs(base[0]), abs(base[1]))) // size
    return max(0, min(j, room))


def stable_norm_vector(T: VerticalSlitTorus, v) -> float:
    """Stable norm of a real vector.

    Walks the Stern-Brocot tree toward the exact slope of ``v`` until either
    the slope is a node, or both bracketing classes are non-visible (the cone
    between them is then a single flat and the norm is linear there).
    """
    x = abs(Fraction(v[0]))
    y = abs(Fraction(v[1]))
    if x == 0 and y == 0:
        return 0.0
    if x == 0:
        return float(y)
    s = y / x
    lo, hi = (1, 0), (0, 1)
    limit = 1 / T.rho

    def on(cls):
        return cls[0] != 0 and Fraction(cls[1], cls[0]) == s

    def scale(cls):
        return float(x / cls[0]) * _unit_cone_norm(T, cls)

    if on(lo):
        return scale(lo)
    def linear():
        alpha = x * hi[1] - y * hi[0]
        beta = lo[0] * y - lo[1] * x
        return float(alpha) * _unit_cone_norm(T, lo) + float(beta) * _unit_cone_norm(T, hi)

    while True:
        if lo[0] > limit and hi[0] > limit:
            return linear()
        med = (lo[0] + hi[0], lo[1] + hi[1])
        if on(med):
            return scale(med)
        if s < Fraction(med[1], med[0]):
            # hi + j*lo stays above s for j < bound
            bound = (hi[1] - s * hi[0]) / (s * lo[0] - lo[1])
            j = math.ceil(bound) - 1
            capped = _cap_step(hi, lo, j)
            hi = (hi[0] + capped * lo[0], hi[1] + capped * lo[1])
        else:
            bound = (s * lo[0] - lo[1]) / (hi[1] - s * hi[0])
            j = math.ceil(bound) - 1
            capped = _cap_step(lo, hi, j)
            lo = (lo[0] + capped * hi[0], lo[1] + capped * hi[1])
        if capped < j:
            # the cone is narrower than float resolution; the chord is exact to rounding
            return linear()
