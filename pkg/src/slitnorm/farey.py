"""Farey-sequence combinatorics over exact rationals.

Rationals are :class:`fractions.Fraction`; a fraction ``p/q`` with ``q > 0``
stands for the homology class ``(q, p)`` (denominator first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import IntegerHasNoParents, NotCoprime, NotNeighbors, ValidationError

Rational = Fraction
Real = Union[int, float, Fraction]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise ValidationError(f"expected an exact rational, got {x!r}")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            if int(den) == 0:
                raise ValidationError(f"zero denominator in {text!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except ValueError as exc:
        raise ValidationError(f"cannot parse rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class FareyParents:
    low: Fraction
    high: Fraction

    def __iter__(self):
        yield self.low
        yield self.high


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: list
    convergents: list

    def __str__(self) -> str:
        q = self.quotients
        if len(q) == 1:
            return f"[{q[0]}]"
        return f"[{q[0]}; " + ", ".join(str(a) for a in q[1:]) + "]"


def mediant(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


def _det(a: Fraction, b: Fraction) -> int:
    return b.numerator * a.denominator - a.numerator * b.denominator


def are_neighbors(a: Fraction, b: Fraction) -> bool:
    if a == b:
        raise ValidationError("are_neighbors needs two distinct rationals")
    return abs(_det(a, b)) == 1


def continued_fraction(x: Real, max_depth: int = 64, tol: float = 1e-12) -> ContinuedFraction:
    """Partial quotients and convergents of ``x``.

    Exact input terminates on its own (canonical form, last quotient >= 2).
    Float input is expanded from its exact binary value and stops after
    ``max_depth`` quotients or once the remainder is within ``tol``.
    """
    if max_depth < 1:
        raise ValidationError("max_depth must be >= 1")
    exact = isinstance(x, (int, Fraction))
    r = Fraction(x)
    quotients: list[int] = []
    convergents: list[Fraction] = []
    # p/q is the latest convergent, p_prev/q_prev the one before
    p, p_prev = 1, 0
    q, q_prev = 0, 1
    while len(quotients) < max_depth:
        a = math.floor(r)
        quotients.append(a)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        convergents.append(Fraction(p, q))
        frac = r - a
        if frac == 0:
            break
        if not exact and (frac < tol or abs(float(Fraction(x) - convergents[-1])) < tol):
            break
        r = 1 / frac
    return ContinuedFraction(quotients, convergents)


def farey_parents(x: Fraction) -> FareyParents:
    """The two Farey neighbours of ``x`` whose mediant is ``x``."""
    x = as_rational(x)
    if x.denominator == 1:
        raise IntegerHasNoParents(f"{format_rational(x)} is an integer")
    shift = math.floor(x)
    y = x - shift
    cf = continued_fraction(y)
    prev = cf.convergents[-2]
    other = Fraction(y.numerator - prev.numerator, y.denominator - prev.denominator)
    low, high = sorted((prev, other))
    return FareyParents(low + shift, high + shift)


def child_toward(base: Fraction, neighbor: Fraction, k: int) -> Fraction:
    if k < 1:
        raise ValidationError("k must be a positive integer")
    if base == neighbor or not are_neighbors(base, neighbor):
        raise NotNeighbors(f"{format_rational(base)} and {format_rational(neighbor)}")
    return Fraction(
        k * base.numerator + neighbor.numerator,
        k * base.denominator + neighbor.denominator,
    )


def cutting_word(m: int, n: int) -> str:
    """The word ``st V'`` recording grid crossings of the segment (0,0)-(m,n)."""
    if (m, n) == (1, 0):
        return "s"
    if (m, n) == (0, 1):
        return "t"
    if m < 1 or n < 1:
        raise ValidationError("cutting words are defined for m, n >= 1 and the base cases")
    if math.gcd(m, n) != 1:
        raise NotCoprime(f"({m},{n})")
    letters = ["s", "t"]
    # x = k is crossed at time k/m, y = j at time j/n; coprimality rules out ties
    k, j = 1, 1
    while k < m or j < n:
        if j >= n or (k < m and k * n < j * m):
            letters.append("s")
            k += 1
        else:
            letters.append("t")
            j += 1
    return "".join(letters)
