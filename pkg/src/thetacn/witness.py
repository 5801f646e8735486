"""Bounded-height search for rational points with y != 0.

A point is written x = a/d^2, y = c/d^3 with gcd(a, d) = 1, which turns
the curve equation into the integer condition c^2 = a(a - e1 d^2)(a - e2 d^2).
A successful search proves n is theta-congruent; a failed one proves
nothing beyond "no point up to this height".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .descent import Curve

__all__ = ["WitnessPoint", "search_point", "check_point", "is_witness"]

Rational = Union[int, Fraction]

# Largest |product| handled in int64 before falling back to Python integers.
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class WitnessPoint:
    curve: Curve
    x_num: int
    x_den_sq_root: int
    y_num: int

    def __post_init__(self):
        a, d, c = self.x_num, self.x_den_sq_root, self.y_num
        if c == 0:
            raise ValueError("a witness needs y != 0")
        if d < 1 or math.gcd(a, d) != 1:
            raise ValueError("x must be given in lowest terms with d >= 1")
        if c * c != _scaled_rhs(self.curve, a, d):
            raise ValueError(f"({a}/{d}^2, {c}/{d}^3) is not on {self.curve}")

    @property
    def x(self) -> Fraction:
        return Fraction(self.x_num, self.x_den_sq_root**2)

    @property
    def y(self) -> Fraction:
        return Fraction(self.y_num, self.x_den_sq_root**3)

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


def _scaled_rhs(c: Curve, a: int, d: int) -> int:
    _, e1, e2 = c.roots
    d2 = d * d
    return a * (a - e1 * d2) * (a - e2 * d2)


def check_point(c: Curve, x: Rational, y: Rational) -> bool:
    """Exact test of y^2 = x(x - e1)(x - e2); 2-torsion points pass too."""
    x, y = Fraction(x), Fraction(y)
    return y * y == c.rhs(x)


def is_witness(c: Curve, x: Rational, y: Rational) -> bool:
    return Fraction(y) != 0 and check_point(c, x, y)


_CHUNK = 1 << 20


# Squares modulo 64 and 63; together they reject all but about 6% of non-squares.
_SQ64 = np.zeros(64, dtype=bool)
_SQ64[[(k * k) % 64 for k in range(64)]] = True
_SQ63 = np.zeros(63, dtype=bool)
_SQ63[[(k * k) % 63 for k in range(63)]] = True


def _square_candidates(values: np.ndarray) -> np.ndarray:
    """Indices, ascending, where ``values`` is a positive perfect square."""
    idx = np.flatnonzero((values > 0) & _SQ64[values & 63])
    if idx.size:
        idx = idx[_SQ63[values[idx] % 63]]
    if not idx.size:
        return idx
    v = values[idx]
    roots = np.sqrt(v.astype(np.float64)).astype(np.int64)
    hit = np.zeros(v.shape, dtype=bool)
    for delta in (-1, 0, 1):
        r = roots + delta
        hit |= (r >= 0) & (r * r == v)
    return idx[hit]


def _exact_hit(c: Curve, a: int, d: int) -> Optional[WitnessPoint]:
    if d > 1 and math.gcd(a, d) != 1:
        return None
    val = _scaled_rhs(c, a, d)
    if val <= 0:
        return None
    root = math.isqrt(val)
    if root * root != val:
        return None
    return WitnessPoint(c, a, d, root)


def _positive_ranges(c: Curve, d: int, lo: int, hi: int):
    """Sub-ranges of |a| in [lo, hi] where the right-hand side can be positive, with signs.

    Over the reals the cubic is positive only for e_min d^2 < a < 0 or
    a > e_max d^2, so every other a is skipped without evaluation.
    """
    _, e1, e2 = c.roots
    d2 = d * d
    pos_lo = max(e1, e2) * d2 + 1
    neg_hi = -min(e1, e2) * d2 - 1
    if max(lo, pos_lo) <= hi:
        yield 1, max(lo, pos_lo), hi
    if lo <= min(hi, neg_hi):
        yield -1, lo, min(hi, neg_hi)


def _candidates(c: Curve, d: int, lo: int, hi: int, fast: bool) -> list[int]:
    _, e1, e2 = c.roots
    d2 = d * d
    out: list[int] = []
    for sign, a_lo, a_hi in _positive_ranges(c, d, lo, hi):
        if not fast:
            out.extend(sign * m for m in range(a_lo, a_hi + 1))
            continue
        a = sign * np.arange(a_lo, a_hi + 1, dtype=np.int64)
        vals = a * (a - e1 * d2) * (a - e2 * d2)
        out.extend(a[_square_candidates(vals)].tolist())
    # scan order: smallest |a| first, positive before negative
    out.sort(key=lambda a: (abs(a), a < 0))
    return out


def search_point(c: Curve, height: int) -> Optional[WitnessPoint]:
    """First point with y != 0, scanning d = 1..height and |a| <= height^2 max(3n, 1).

    Within one d the scan goes a = 1, -1, 2, -2, ...; values with
    gcd(a, d) > 1 are skipped because they reappear at a smaller d.
    """
    if height < 1:
        raise ValueError(f"height must be at least 1, got {height}")
    bound = height * height * max(3 * c.n, 1)
    _, e1, e2 = c.roots
    for d in range(1, height + 1):
        d2 = d * d
        fast = bound * (bound + abs(e1) * d2) * (bound + abs(e2) * d2) < _INT64_SAFE
        for lo in range(1, bound + 1, _CHUNK):
            hi = min(lo + _CHUNK - 1, bound)
            for a in _candidates(c, d, lo, hi, fast):
                found = _exact_hit(c, a, d)
                if found:
                    return found
    return None
