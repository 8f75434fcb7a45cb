"""Counting simple classes of stable norm at most x.

Convention: primitive vertex classes, with ``h`` and ``-h`` counted
separately (``oriented=True``, the default).  With ``oriented=False`` each
pair ``{h, -h}`` counts once; that is the normalisation under which the
leading coefficient is ``4 * sum_{b <= 1/rho} phi(b)/b``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import IllConditioned, ValidationError
from .farey import as_rational
from .torus import VerticalSlitTorus
from .unit_ball import child_vertices, visible_classes


def totient(n: int) -> int:
    result, k, m = n, 2, n
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def totient_sum(rho) -> Fraction:
    rho = as_rational(rho)
    if not 0 < rho < 1:
        raise ValidationError("rho must lie in (0,1)")
    return sum((Fraction(totient(b), b) for b in range(1, math.floor(1 / rho) + 1)), Fraction(0))


def _multiplicity(m: int, n: int) -> int:
    # sign images of a first-quadrant class: 4 off the axes, 2 on them
    return 4 if m and n else 2


def simple_norms(T: VerticalSlitTorus, xmax: float) -> tuple:
    """Sorted norms of first-quadrant simple classes up to ``xmax`` and their cumulative multiplicities."""
    items = [(math.hypot(*P), _multiplicity(*P)) for P in visible_classes(T, xmax)]
    items += [(v, _multiplicity(*C)) for C, v, _ in child_vertices(T, xmax)]
    items.sort()
    norms = [v for v, _ in items]
    cum = []
    total = 0
    for _, mult in items:
        total += mult
        cum.append(total)
    return norms, cum


def count_simple(T: VerticalSlitTorus, x: float, oriented: bool = True) -> int:
    if x < 1:
        raise ValidationError("x must be >= 1")
    norms, cum = simple_norms(T, x)
    total = cum[-1] if cum else 0
    return total if oriented else total // 2


@dataclass(frozen=True)
class CountTable:
    rho: Fraction
    rows: list
    copies: int = 1
    oriented: bool = True
    fit: tuple = field(default=None)

    def check(self) -> None:
        ps = [p for _, p in self.rows]
        if any(b < a for a, b in zip(ps, ps[1:])):
            raise AssertionError("count table is not monotone")
        if self.oriented and any(p % 2 for p in ps):
            raise AssertionError("oriented counts must be even")


def count_table(T: VerticalSlitTorus, xs, copies: int = 1, oriented: bool = True) -> CountTable:
    xs = sorted(float(x) for x in xs)
    if not xs or xs[0] < 1:
        raise ValidationError("thresholds must be >= 1")
    norms, cum = simple_norms(T, xs[-1])
    rows = []
    for x in xs:
        i = bisect.bisect_right(norms, x * (1 + 1e-12))
        total = cum[i - 1] if i else 0
        rows.append((x, copies * (total if oriented else total // 2)))
    table = CountTable(T.rho, rows, copies, oriented)
    table.check()
    return table


def asymptotic_estimate(rho, x: float, glued_copies: int = 1) -> float:
    if x <= 1:
        raise ValidationError("x must exceed 1")
    return 4 * glued_copies * float(totient_sum(rho)) * x * math.log(x)


def leading_coefficient(rho, glued_copies: int = 1) -> Fraction:
    return 4 * glued_copies * totient_sum(rho)


@dataclass(frozen=True)
class FitResult:
    A: float
    B: float
    residual: float


def fit_coefficient(rows) -> FitResult:
    """Least squares for p(x) ~ A x ln x + B x; ``residual`` is relative (L2)."""
    if isinstance(rows, CountTable):
        rows = rows.rows
    xs = np.array([r[0] for r in rows], dtype=float)
    ps = np.array([r[1] for r in rows], dtype=float)
    if len(xs) < 10 or xs.min() <= 1 or xs.max() < 10 * xs.min():
        raise IllConditioned("need >= 10 rows spanning a decade of x > 1")
    design = np.column_stack([xs * np.log(xs), xs])
    coef, _, rank, sv = np.linalg.lstsq(design, ps, rcond=None)
    if rank < 2 or sv[-1] <= 1e-10 * sv[0]:
        raise IllConditioned("design matrix is rank deficient")
    resid = float(np.linalg.norm(design @ coef - ps) / np.linalg.norm(ps))
    return FitResult(float(coef[0]), float(coef[1]), resid)


def decade_grid(lo: float, hi: float, n: int) -> list:
    return [float(x) for x in np.geomspace(lo, hi, n)]
