"""Exact integer and square-class arithmetic.

Everything here works on plain Python integers.  Square classes of
Q*/(Q*)^2 are represented by :class:`SquareClass`, a sign plus a sorted
tuple of distinct primes, so that products reduce to a symmetric
difference of prime sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Union

__all__ = [
    "ArithmeticError_",
    "NotSquareFree",
    "ZeroInput",
    "PInSupport",
    "SquareClass",
    "IDENTITY",
    "is_prime",
    "factor",
    "factor_square_free",
    "is_square_free",
    "legendre",
    "class_of",
    "class_mul",
    "class_prod",
    "legendre_of_class",
    "hilbert",
    "INFINITY",
    "MAX_SUPPORTED",
]

#: Documented upper bound for inputs to the factoring routines.
MAX_SUPPORTED = 1 << 62

#: Marker for the real place in :func:`hilbert`.
INFINITY = "inf"

_TRIAL_LIMIT = 1 << 20
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ArithmeticError_(ValueError):
    """Base class for input errors raised by this module."""


class NotSquareFree(ArithmeticError_):
    def __init__(self, n: int, p: int):
        super().__init__(f"{n} is not square-free: {p}^2 divides it")
        self.n = n
        self.p = p


class ZeroInput(ArithmeticError_):
    pass


class PInSupport(ArithmeticError_):
    def __init__(self, d: "SquareClass", p: int):
        super().__init__(f"prime {p} lies in the support of {d.representative()}")
        self.d = d
        self.p = p


# ---------------------------------------------------------------- primality


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; n is odd, composite and has no factor below the trial limit.
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    g = _pollard_rho(n)
    _split(g, out)
    _split(n // g, out)


def factor(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"factor() needs a positive integer, got {n}")
    if n >= MAX_SUPPORTED:
        raise ValueError(f"{n} exceeds the supported bound 2^62")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    step = 2
    while p * p <= n and p < _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        if p * p > n:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, out)
    return dict(sorted(out.items()))


def factor_square_free(n: int) -> list[int]:
    """Ascending list of the primes of a square-free ``n >= 1``.

    Raises :class:`NotSquareFree` naming the smallest prime whose square divides n.
    """
    if n < 1:
        raise ValueError(f"expected n >= 1, got {n}")
    fac = factor(n)
    for p, e in fac.items():
        if e > 1:
            raise NotSquareFree(n, p)
    return list(fac)


def is_square_free(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factor(abs(n)).values())


# ---------------------------------------------------------------- symbols


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, computed by reciprocity."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"legendre() needs an odd prime, got {p}")
    a %= p
    result = 1
    n = p
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------- square classes


@dataclass(frozen=True, order=True)
class SquareClass:
    """An element of Q*/(Q*)^2: a sign and a strictly increasing prime support."""

    negative: bool = False
    support: tuple[int, ...] = ()

    def __post_init__(self):
        sup = tuple(self.support)
        if any(b <= a for a, b in zip(sup, sup[1:])):
            raise ValueError(f"support must be strictly increasing: {sup}")
        if any(not is_prime(p) for p in sup):
            raise ValueError(f"support must consist of primes: {sup}")
        object.__setattr__(self, "support", sup)

    def representative(self) -> int:
        """Signed square-free integer in this class."""
        r = math.prod(self.support)
        return -r if self.negative else r

    def __int__(self) -> int:
        return self.representative()

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return class_mul(self, other)

    def __contains__(self, p: int) -> bool:
        return p in self.support

    def is_identity(self) -> bool:
        return not self.negative and not self.support

    def mod(self, m: int) -> int:
        """Non-negative residue of the representative mod m."""
        return self.representative() % m

    def __repr__(self) -> str:
        return f"SquareClass({self.representative()})"


IDENTITY = SquareClass()


def class_of(k: int) -> SquareClass:
    """Square class of a nonzero integer (square factors stripped, sign kept)."""
    if k == 0:
        raise ZeroInput("0 has no square class")
    support = tuple(p for p, e in factor(abs(k)).items() if e % 2)
    return SquareClass(k < 0, support)


def _unchecked(negative: bool, support: Iterable[int]) -> SquareClass:
    # Skips the primality re-check for supports built from existing classes.
    c = object.__new__(SquareClass)
    object.__setattr__(c, "negative", negative)
    object.__setattr__(c, "support", tuple(support))
    return c


def class_mul(a: SquareClass, b: SquareClass) -> SquareClass:
    return _unchecked(a.negative != b.negative, sorted(set(a.support) ^ set(b.support)))


def class_prod(classes: Iterable[SquareClass]) -> SquareClass:
    return reduce(class_mul, classes, IDENTITY)


def legendre_of_class(d: SquareClass, p: int) -> int:
    """(d/p) as a product of symbols over the support of d.

    The caller must cancel p first; a class containing p raises
    :class:`PInSupport`.
    """
    if p in d.support:
        raise PInSupport(d, p)
    result = legendre(-1, p) if d.negative else 1
    for q in d.support:
        result *= legendre(q, p)
    return result


# ---------------------------------------------------------------- Hilbert symbol

Place = Union[int, str]


def _unit_split(a: int, p: int) -> tuple[int, int]:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def hilbert(a: int, b: int, place: Place) -> int:
    """Local Hilbert symbol (a, b)_v at v = ``INFINITY``, 2 or an odd prime."""
    if a == 0 or b == 0:
        raise ZeroInput("Hilbert symbol of 0 is undefined")
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    alpha, u = _unit_split(a, p)
    beta, v = _unit_split(b, p)
    if p == 2:
        eps_u, eps_v = (u - 1) // 2 % 2, (v - 1) // 2 % 2
        om_u, om_v = (u * u - 1) // 8 % 2, (v * v - 1) // 8 % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * legendre(u, p) ** beta * legendre(v, p) ** alpha
