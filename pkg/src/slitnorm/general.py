"""Slit tori beyond the vertical model.

Three routes to the stable norm:

* ``norm_sheared``: the image ``M X`` of a vertical-slit torus under
  ``M`` in SL(2,R).  Classification happens in the unsheared coordinates;
  only the lengths see ``M``.
* ``rational_slit_norm``: a slit of rational slope on the square torus is
  pulled back to a vertical slit by an integer unimodular matrix.
* ``intrinsic_norm``: works directly with the shadow ``w(P) = det(P, s)``
  of a class on the slit.  A class is visible iff ``|w| <= 1``.  Its slit
  parents are the unique splitting ``h = P1 + P2`` with ``det(P1, P2) = 1``
  and ``0 < w(P1) < w(h)``.  This needs no rationality and is what the
  irrational case uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    NotUnimodular,
    SlopeNotRational,
    ValidationError,
    VisibilityIndeterminate,
    ZeroClass,
)
from .farey import continued_fraction
from .torus import (
    FLAT_INTERIOR,
    FLAT_SPLIT,
    TWO_SEGMENT,
    VERTEX,
    VISIBLE,
    HClass,
    NormCertificate,
    VerticalSlitTorus,
    _flat_chain,
    _split,
)

BOUNDARY_TOL = 1e-12


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class LinearMap:
    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if self.is_exact:
            if det != 1:
                raise NotUnimodular(f"determinant {det} != 1")
        elif abs(float(det) - 1) > 1e-12:
            raise NotUnimodular(f"determinant {float(det)!r} != 1")

    @classmethod
    def from_rows(cls, rows) -> "LinearMap":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def is_exact(self) -> bool:
        return all(_exact(v) for v in (self.a, self.b, self.c, self.d))

    @property
    def rows(self) -> tuple:
        return ((self.a, self.b), (self.c, self.d))

    def apply(self, v) -> tuple:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def inverse(self) -> "LinearMap":
        return LinearMap(self.d, -self.b, -self.c, self.a)


IDENTITY = LinearMap(1, 0, 0, 1)


@dataclass(frozen=True)
class GeneralSlitTorus:
    """Slit ``(beta, alpha)`` on the torus ``R^2 / B Z^2`` (``B`` defaults to I)."""

    slit_vector: tuple
    basis: LinearMap = IDENTITY

    def __post_init__(self):
        beta, alpha = self.slit_vector
        if beta == 0 and alpha == 0:
            raise ValidationError("slit vector must be nonzero")

    @property
    def length(self) -> float:
        return math.hypot(float(self.slit_vector[0]), float(self.slit_vector[1]))

    @property
    def sigma(self) -> tuple:
        """Slit vector in lattice coordinates."""
        return self.basis.inverse().apply(self.slit_vector)

    @property
    def slope_kind(self) -> str:
        beta, alpha = self.slit_vector
        if beta == 0:
            return "Vertical"
        if _exact(beta) and _exact(alpha):
            return "RationalSlope"
        return "IrrationalSlope"

    @property
    def slope(self) -> Optional[Fraction]:
        beta, alpha = self.slit_vector
        if beta == 0 or not (_exact(beta) and _exact(alpha)):
            return None
        return Fraction(alpha) / Fraction(beta)


def _check(h) -> HClass:
    if not isinstance(h, HClass):
        h = HClass(*h)
    if h.is_zero:
        raise ZeroClass("the zero class has no direction")
    return h


def _hyp(M: LinearMap, v) -> float:
    x, y = M.apply(v)
    return math.hypot(float(x), float(y))


# ---------------------------------------------------------------- sheared


def _sheared_value(M: LinearMap, rho: Fraction, m: int, n: int, memo: dict) -> float:
    stack = [(m, n)]
    rf = rho
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        kind, p1, p2 = _split(rho, *key)
        if kind == VISIBLE:
            memo[key] = _hyp(M, key)
        elif kind == TWO_SEGMENT:
            (b, a), (d, c) = p1, p2
            memo[key] = _hyp(M, (b, a + rf)) + _hyp(M, (d, c - rf))
        else:
            P, k, Q = _flat_chain(rho, key, p1, p2)
            pending = [p for p in (P, Q) if p not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[key] = k * memo[P] + memo[Q]
        stack.pop()
    return memo[(m, n)]


def norm_sheared(M, rho, h) -> NormCertificate:
    """Stable norm of ``h`` on ``M X_rho``; ``h`` is in the unsheared basis."""
    if not isinstance(M, LinearMap):
        M = LinearMap.from_rows(M)
    T = VerticalSlitTorus(rho)
    h = _check(h)
    k = h.gcd
    m, n = h.m // k, h.n // k
    # h and -h always share a norm; no other sign symmetry survives shearing
    if m < 0 or (m == 0 and n < 0):
        m, n = -m, -n
    if m == 0:
        value = _hyp(M, (0, 1))
        return NormCertificate(h, k * value, VISIBLE, multiplicity=k)
    memo: dict = {}
    value = _sheared_value(M, T.rho, m, n, memo)
    kind, p1, p2 = _split(T.rho, m, n)
    parents = None if p1 is None else (HClass(*p1), HClass(*p2))
    bend = None
    children = ()
    if kind == TWO_SEGMENT:
        bend = M.apply((Fraction(p1[0]), p1[1] + T.rho))
    elif kind == FLAT_SPLIT:
        children = tuple(norm_sheared(M, rho, p) for p in parents)
    return NormCertificate(h, k * value, kind, multiplicity=k, bend=bend, parents=parents, children=children)


def classify_sheared(rho, h) -> str:
    """Vertex classification is unchanged by shearing."""
    from .torus import classify_direction

    return classify_direction(VerticalSlitTorus(rho), h)


# ---------------------------------------------------------- rational slits


def _normalize_slit(beta, alpha):
    # s and -s give isometric tori (a translation), so fix the orientation
    if beta < 0 or (beta == 0 and alpha < 0):
        return -beta, -alpha
    return beta, alpha


def pullback_matrix(slope_num: int, slope_den: int) -> LinearMap:
    """Integer M = [[v, q], [u, p]] with det 1 and second column (q, p).

    ``u`` is the smallest nonnegative choice; for a horizontal slit (p = 0)
    the only solution has ``u = -1`` and ``v = 0`` is used.
    """
    p, q = slope_num, slope_den
    if q == 0:
        return LinearMap(1, 0, 0, 1)
    if p == 0:
        return LinearMap(0, q, -1, 0)
    # v p - u q = 1: v is the inverse of p mod q, then shift along (q, p)
    v = pow(p, -1, q) if q > 1 else 0
    u = (v * p - 1) // q
    step = abs(p)
    shift = -(u // step) if p > 0 else (u // step)
    v, u = v + shift * q, u + shift * p
    return LinearMap(v, q, u, p)


def rational_pullback(G: GeneralSlitTorus):
    """(M, rho') with G equal to M applied to the vertical torus of slit rho'."""
    if G.basis != IDENTITY:
        raise ValidationError("rational pull-back expects the square lattice")
    beta, alpha = G.slit_vector
    if not (_exact(beta) and _exact(alpha)):
        raise SlopeNotRational("slit data must be exact rationals")
    beta, alpha = _normalize_slit(Fraction(beta), Fraction(alpha))
    if beta == 0:
        M, rho = IDENTITY, alpha
    else:
        s = alpha / beta
        M = pullback_matrix(s.numerator, s.denominator)
        rho = beta / s.denominator
    if not 0 < rho < 1:
        raise ValidationError(f"pulled-back slit length {rho} must lie in (0,1): slits overlap")
    return M, rho


def rational_slit_norm(G: GeneralSlitTorus, h) -> NormCertificate:
    h = _check(h)
    M, rho = rational_pullback(G)
    back = M.inverse().apply((h.m, h.n))
    cert = norm_sheared(M, rho, HClass(int(back[0]), int(back[1])))
    return NormCertificate(
        h,
        cert.value,
        cert.kind,
        multiplicity=cert.multiplicity,
        bend=cert.bend,
        parents=cert.parents,
        children=cert.children,
    )


def shadow(G: GeneralSlitTorus, h) -> object:
    """``det(h, sigma)``: signed area swept by the slit along h, lattice units."""
    sx, sy = G.sigma
    return h[0] * sy - h[1] * sx


def rational_visible(G: GeneralSlitTorus, h) -> bool:
    h = _check(h)
    if not h.is_primitive:
        from .errors import NonPrimitive

        raise NonPrimitive(f"({h}) has gcd {h.gcd}")
    beta, alpha = G.slit_vector
    return abs(h.m * alpha - h.n * beta) <= 1


# --------------------------------------------------------------- intrinsic


def _egcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def slit_parents(G: GeneralSlitTorus, h):
    """The splitting h = P1 + P2, det(P1, P2) = 1, 0 < w(P1) < w(h) (needs w(h) > 0)."""
    m, n = h
    g, s, t = _egcd(n, m)
    if abs(g) != 1:
        raise ValidationError("slit parents need a primitive class")
    # s*n + t*m = g, so P0 = (s, -t)/g has det(P0, h) = 1
    p0 = (s * g, -t * g)
    w0, wh = shadow(G, p0), shadow(G, h)
    k = math.floor(-w0 / wh) + 1
    p1 = (p0[0] + k * m, p0[1] + k * n)
    p2 = (m - p1[0], n - p1[1])
    return p1, p2


def _visible_intrinsic(G: GeneralSlitTorus, w, strict: bool) -> bool:
    if _exact(w):
        return abs(w) <= 1
    if strict and abs(abs(w) - 1) <= BOUNDARY_TOL:
        raise VisibilityIndeterminate(f"|shadow| = {abs(w)!r} is within {BOUNDARY_TOL} of 1")
    return abs(w) <= 1


def _orient_class(G, m, n):
    w = shadow(G, (m, n))
    if w < 0 or (w == 0 and (m, n) < (0, 0)):
        return -m, -n
    return m, n


def _intrinsic_kind(G, m, n, strict):
    """(kind, P1, P2) for primitive (m, n) with nonnegative shadow."""
    if _visible_intrinsic(G, shadow(G, (m, n)), strict):
        return VISIBLE, None, None
    p1, p2 = slit_parents(G, (m, n))
    if _visible_intrinsic(G, shadow(G, p1), strict) or _visible_intrinsic(G, shadow(G, p2), strict):
        return TWO_SEGMENT, p1, p2
    return FLAT_SPLIT, p1, p2


def _intrinsic_value(G, m, n, strict, memo):
    sig = G.sigma
    B = G.basis
    stack = [(m, n)]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        kind, p1, p2 = _intrinsic_kind(G, *key, strict)
        if kind == VISIBLE:
            memo[key] = _hyp(B, key)
        elif kind == TWO_SEGMENT:
            memo[key] = _hyp(B, (p1[0] + sig[0], p1[1] + sig[1])) + _hyp(
                B, (p2[0] - sig[0], p2[1] - sig[1])
            )
        else:
            pending = [p for p in (p1, p2) if p not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[key] = memo[p1] + memo[p2]
        stack.pop()
    return memo[(m, n)]


def intrinsic_norm(G: GeneralSlitTorus, h, strict: bool = True) -> NormCertificate:
    """Stable norm from slit parents; valid for any slit direction."""
    h = _check(h)
    k = h.gcd
    m, n = _orient_class(G, h.m // k, h.n // k)
    memo: dict = {}
    value = _intrinsic_value(G, m, n, strict, memo)
    kind, p1, p2 = _intrinsic_kind(G, m, n, strict)
    parents = None if p1 is None else (HClass(*p1), HClass(*p2))
    bend = None
    children = ()
    if kind == TWO_SEGMENT:
        sig = G.sigma
        bend = G.basis.apply((p1[0] + sig[0], p1[1] + sig[1]))
    elif kind == FLAT_SPLIT:
        children = tuple(intrinsic_norm(G, p, strict) for p in parents)
    return NormCertificate(h, k * value, kind, multiplicity=k, bend=bend, parents=parents, children=children)


def intrinsic_classify(G: GeneralSlitTorus, h, strict: bool = True) -> str:
    h = _check(h)
    if not h.is_primitive:
        from .errors import NonPrimitive

        raise NonPrimitive(f"({h}) has gcd {h.gcd}")
    m, n = _orient_class(G, h.m, h.n)
    kind, _, _ = _intrinsic_kind(G, m, n, strict)
    return FLAT_INTERIOR if kind == FLAT_SPLIT else VERTEX


# -------------------------------------------------------------- irrational


def irrational_visible(G: GeneralSlitTorus, h) -> bool:
    """``|m alpha - n beta| <= 1``; raises within 1e-12 of the boundary."""
    h = _check(h)
    beta, alpha = G.slit_vector
    w = h.m * float(alpha) - h.n * float(beta)
    if abs(abs(w) - 1) <= BOUNDARY_TOL:
        raise VisibilityIndeterminate(f"|m alpha - n beta| = {abs(w)!r} is within tolerance of 1")
    return abs(w) <= 1


@dataclass(frozen=True)
class IrrationalResult:
    certificate: NormCertificate
    alternative: Optional[float]
    candidates_close: bool


def irrational_norm(G: GeneralSlitTorus, h, tol: float = 1e-9) -> IrrationalResult:
    """Norm of a non-visible class.

    The visible neighbours of a non-visible h are exactly its visible slit
    parents up to sign, so the two-term formula is fixed by the parents.  The
    swapped sign assignment is evaluated too and reported as ``alternative``.
    """
    h = _check(h)
    if irrational_visible(G, h.primitive_part):
        raise ValidationError(f"({h}) is visible; irrational_norm expects a non-visible class")
    cert = intrinsic_norm(G, h)
    alt = None
    close = False
    if cert.kind == TWO_SEGMENT:
        sig = G.sigma
        p1, p2 = (cert.parents[0].m, cert.parents[0].n), (cert.parents[1].m, cert.parents[1].n)
        B = G.basis
        alt = cert.multiplicity * (
            _hyp(B, (p1[0] - sig[0], p1[1] - sig[1])) + _hyp(B, (p2[0] + sig[0], p2[1] + sig[1]))
        )
        close = abs(alt - cert.value) <= tol * cert.value
    return IrrationalResult(cert, alt, close)


def convergent_slits(G: GeneralSlitTorus, depth: int):
    """Slits of the same length along the convergent directions of the slope."""
    beta, alpha = _normalize_slit(float(G.slit_vector[0]), float(G.slit_vector[1]))
    L = math.hypot(beta, alpha)
    if beta == 0:
        return [(0.0, L)]
    cf = continued_fraction(alpha / beta, max_depth=depth, tol=0.0)
    out = []
    for c in cf.convergents:
        q, p = c.denominator, c.numerator
        r = math.hypot(q, p)
        out.append((L * q / r, L * p / r))
    return out


def convergent_norm(G: GeneralSlitTorus, h, depth: int = 20, tol: float = 1e-9) -> float:
    """Norm on the limit of rational-direction slits; checked stable under depth + 5."""
    h = _check(h)

    def at(d):
        s = convergent_slits(G, d)[-1]
        return intrinsic_norm(GeneralSlitTorus(s, G.basis), h, strict=False).value

    v1, v2 = at(depth), at(depth + 5)
    if abs(v1 - v2) > tol * max(1.0, v1):
        raise VisibilityIndeterminate(f"convergent norms unstable: {v1!r} vs {v2!r}")
    return v2


def general_norm(G: GeneralSlitTorus, h) -> NormCertificate:
    """Dispatch: vertical and rational slopes go through the pull-back."""
    if G.basis == IDENTITY and G.slope_kind in ("Vertical", "RationalSlope"):
        return rational_slit_norm(G, h)
    return intrinsic_norm(G, h)
