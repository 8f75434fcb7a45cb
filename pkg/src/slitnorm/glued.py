"""Surfaces glued from slit tori along a flat cylinder of width w.

For ``w`` larger than every slit length the stable norm is block additive:
a class splits into one block per torus and each block is normed on its own
torus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CylinderTooShort, NotAdjacent, ValidationError, ZeroClass
from .oracle import CoverScene, dense_shortest_path, shortest_path
from .torus import (
    FLAT_INTERIOR,
    HClass,
    VerticalSlitTorus,
    classify_direction,
    stable_norm,
    stable_norm_vector,
)
from .unit_ball import are_adjacent_vertices, enumerate_vertices


@dataclass(frozen=True)
class GluedSurface:
    components: tuple
    width: float

    def __post_init__(self):
        comps = tuple(c if isinstance(c, VerticalSlitTorus) else VerticalSlitTorus(c) for c in self.components)
        if len(comps) < 2:
            raise ValidationError("a glued surface needs at least two tori")
        width = self.width
        # a float width is read by its decimal value, so 0.4 equals rho = 2/5
        w_exact = Fraction(repr(width)) if isinstance(width, float) else Fraction(width)
        if not w_exact > max(c.rho for c in comps):
            raise CylinderTooShort(f"cylinder width {self.width} must exceed every slit length")
        object.__setattr__(self, "components", comps)

    @property
    def genus(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class GluedClass:
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(b if isinstance(b, HClass) else HClass(*b) for b in self.blocks))

    @classmethod
    def parse(cls, text: str) -> "GluedClass":
        return cls(tuple(HClass.parse(part) for part in text.split(";")))

    @property
    def nonzero(self) -> list:
        return [i for i, b in enumerate(self.blocks) if not b.is_zero]

    def __str__(self) -> str:
        return ";".join(str(b) for b in self.blocks)


@dataclass(frozen=True)
class GluedNorm:
    cls: GluedClass
    value: float
    blocks: tuple

    def to_dict(self) -> dict:
        return {
            "class": [[b.m, b.n] for b in self.cls.blocks],
            "value": self.value,
            "blocks": [None if c is None else c.to_dict() for c in self.blocks],
        }


def _as_glued(S: GluedSurface, H) -> GluedClass:
    if not isinstance(H, GluedClass):
        H = GluedClass(tuple(H))
    if len(H.blocks) != S.genus:
        raise ValidationError(f"class has {len(H.blocks)} blocks, surface has {S.genus} tori")
    return H


def glued_norm(S: GluedSurface, H) -> GluedNorm:
    H = _as_glued(S, H)
    if not H.nonzero:
        raise ZeroClass("the zero class has no direction")
    certs = tuple(
        None if b.is_zero else stable_norm(T, b) for T, b in zip(S.components, H.blocks)
    )
    return GluedNorm(H, sum(c.value for c in certs if c is not None), certs)


def glued_classify(S: GluedSurface, H) -> str:
    H = _as_glued(S, H)
    nz = H.nonzero
    if not nz:
        raise ZeroClass("the zero class has no direction")
    if len(nz) > 1:
        return FLAT_INTERIOR
    i = nz[0]
    return classify_direction(S.components[i], H.blocks[i].primitive_part)


def glued_vertices(S: GluedSurface, max_norm: float) -> list:
    """Single-block embeddings of each component's first-quadrant vertices."""
    out = []
    zero = HClass(0, 0)
    for i, T in enumerate(S.components):
        for entry in enumerate_vertices(T, max_norm):
            blocks = [zero] * S.genus
            blocks[i] = entry.cls
            out.append((GluedClass(tuple(blocks)), entry.norm))
    return out


def glued_norm_vector(S: GluedSurface, blocks) -> float:
    return sum(stable_norm_vector(T, v) for T, v in zip(S.components, blocks))


def flat_face_check(S: GluedSurface, v1, v2, w1, w2, weights, tol: float = 1e-9) -> bool:
    """Whether a convex combination of four unit vertex points has glued norm 1.

    ``v1, v2`` must be consecutive vertices of the first component's ball and
    ``w1, w2`` of the second.
    """
    T1, T2 = S.components[0], S.components[1]
    for T, a, b in ((T1, v1, v2), (T2, w1, w2)):
        if not are_adjacent_vertices(T, a, b):
            raise NotAdjacent(f"({a}) and ({b}) are not consecutive vertices")
    lam = [float(x) for x in weights]
    if len(lam) != 4 or min(lam) < 0 or abs(sum(lam) - 1) > 1e-12:
        raise ValidationError("weights must be a probability vector of length 4")

    def unit(T, h):
        h = h if isinstance(h, HClass) else HClass(*h)
        r = stable_norm(T, h).value
        return (h.m / r, h.n / r)

    a1, a2 = unit(T1, v1), unit(T1, v2)
    b1, b2 = unit(T2, w1), unit(T2, w2)
    blocks = [(0.0, 0.0)] * S.genus
    blocks[0] = (lam[0] * a1[0] + lam[1] * a2[0], lam[0] * a1[1] + lam[1] * a2[1])
    blocks[1] = (lam[2] * b1[0] + lam[3] * b2[0], lam[2] * b1[1] + lam[3] * b2[1])
    return abs(glued_norm_vector(S, blocks) - 1.0) <= tol


@dataclass(frozen=True)
class CylinderCheck:
    length: float
    sweep_length: float
    cylinder_edges_used: int


def single_block_oracle(S: GluedSurface, index: int, h) -> CylinderCheck:
    """Shortest path for a one-block class with cylinder excursions allowed.

    An excursion leaves through a slit, crosses the cylinder twice and comes
    back through the same slit, so a path crossing one slit that way costs at
    least its straight length plus ``2w - rho``.  Such crossings are offered
    to a dense search at exactly that lower bound.
    """
    T = S.components[index]
    h = h if isinstance(h, HClass) else HClass(*h)
    scene = CoverScene.vertical(T.rho)
    base = shortest_path(scene, (h.m, h.n)).length
    U = base * (1 + 1e-9) + 1e-9
    length, _, used = dense_shortest_path(scene, (h.m, h.n), U, portal_cost=2 * float(S.width) - float(T.rho))
    return CylinderCheck(length, base, used)
