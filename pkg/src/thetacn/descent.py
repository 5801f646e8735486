"""Selmer groups of E_{n,pi/3}: y^2 = x(x-n)(x+3n) and E_{n,2pi/3}: y^2 = x(x+n)(x-3n).

Both curves have the shape y^2 = x^3 + A x^2 + B x.  The 2-isogeny descent
maps E(Q) and the isogenous curve E'(Q) into Q*/(Q*)^2 through the
x-coordinate; ``S'`` collects the classes that lie in the local image of
E(Q_v) at every bad place v and ``S`` does the same for E'(Q_v).  The local
images are decided by closed-form tables in n mod 8, n mod 9 and Legendre
symbols, implemented in :func:`in_image_dual` (for ``S'``) and
:func:`in_image` (for ``S``).

Congruences on a square class use the non-negative residue of its signed
square-free representative, e.g. -3 = 1 (mod 4).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from .arith import (
    INFINITY,
    SquareClass,
    class_mul,
    class_of,
    factor_square_free,
    legendre_of_class,
    _unchecked,
)

__all__ = [
    "Theta",
    "Curve",
    "Place",
    "PlaceNotInM",
    "NotInDescentGroup",
    "InternalConsistencyError",
    "SelmerReport",
    "descent_group",
    "places",
    "in_image_dual",
    "in_image",
    "selmer",
    "torsion_seed",
    "curve",
]


class Theta(enum.Enum):
    PI_3 = "pi_3"
    TWO_PI_3 = "2pi_3"

    @classmethod
    def parse(cls, text: str) -> "Theta":
        key = text.strip().lower().replace("_", "").replace("/", "")
        aliases = {"pi3": cls.PI_3, "2pi3": cls.TWO_PI_3}
        if key not in aliases:
            raise ValueError(f"unknown angle {text!r}; expected pi3 or 2pi3")
        return aliases[key]

    @property
    def sign(self) -> int:
        """+1 for pi/3, -1 for 2pi/3: the curve is y^2 = x(x - s n)(x + 3 s n)."""
        return 1 if self is Theta.PI_3 else -1


Place = Union[int, str]


class PlaceNotInM(ValueError):
    pass


class NotInDescentGroup(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class Curve:
    n: int
    theta: Theta
    primes: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        object.__setattr__(self, "primes", tuple(factor_square_free(self.n)))

    @property
    def roots(self) -> tuple[int, int, int]:
        s = self.theta.sign
        return (0, s * self.n, -3 * s * self.n)

    @property
    def a_coeff(self) -> int:
        return 2 * self.theta.sign * self.n

    @property
    def b_coeff(self) -> int:
        return -3 * self.n * self.n

    def rhs(self, x):
        """Right-hand side x(x - e1)(x - e2) of the Weierstrass equation."""
        _, e1, e2 = self.roots
        return x * (x - e1) * (x - e2)

    def __str__(self) -> str:
        return f"E_{{{self.n},{'pi/3' if self.theta is Theta.PI_3 else '2pi/3'}}}"


def places(c: Curve) -> list[Place]:
    """The bad places infinity, 2, 3 and every prime p >= 5 dividing n."""
    return [INFINITY, 2, 3, *(p for p in c.primes if p >= 5)]


def _generators(c: Curve) -> list[SquareClass]:
    primes = sorted({2, 3, *c.primes})
    return [_unchecked(True, ())] + [_unchecked(False, (p,)) for p in primes]


def descent_group(c: Curve) -> list[SquareClass]:
    """All of D(E) = <-1, 2, 3, p | n>, sorted by representative."""
    gens = _generators(c)
    out = []
    for bits in itertools.product((0, 1), repeat=len(gens)):
        d = _unchecked(False, ())
        for b, g in zip(bits, gens):
            if b:
                d = class_mul(d, g)
        out.append(d)
    return sorted(out, key=SquareClass.representative)


def _check(c: Curve, v: Place, d: SquareClass) -> None:
    if v != INFINITY and v not in (2, 3) and v not in c.primes:
        raise PlaceNotInM(f"{v} is not a bad place of {c}")
    allowed = {2, 3, *c.primes}
    if not set(d.support) <= allowed:
        raise NotInDescentGroup(f"{d.representative()} is outside D(E) for {c}")


def _n9_target(theta: Theta) -> int:
    return 6 if theta is Theta.PI_3 else 3


def in_image_dual(c: Curve, v: Place, d: SquareClass) -> bool:
    """Whether d lies in the local image of E(Q_v); these define S'."""
    _check(c, v, d)
    return _dual(c, v, d)


def _dual(c: Curve, v: Place, d: SquareClass) -> bool:
    n = c.n
    theta = c.theta
    rep = d.representative()
    if v == INFINITY:
        return True
    if v == 2:
        if rep % 2 == 0:
            return n % 2 == 0 and (rep - theta.sign * n) % 8 == 0
        bad = (2, 5, 6) if theta is Theta.PI_3 else (2, 3, 6)
        return not (n % 8 in bad and rep % 4 == 3)
    if v == 3:
        if n % 9 != _n9_target(theta):
            return True
        if rep % 3 == 0:
            return (rep // 3) % 3 != 1
        return rep % 3 != 2
    p = v
    if p % 3 != 1:
        return True
    if p in d.support:
        q = class_mul(class_of(theta.sign * n), d)
        return legendre_of_class(q, p) != -1
    return legendre_of_class(d, p) != -1


def in_image(c: Curve, v: Place, d: SquareClass) -> bool:
    """Whether d lies in the local image of the isogenous curve E'(Q_v); these define S."""
    _check(c, v, d)
    return _primal(c, v, d)


def _primal(c: Curve, v: Place, d: SquareClass) -> bool:
    n = c.n
    theta = c.theta
    rep = d.representative()
    if v == INFINITY:
        return rep > 0
    if v == 2:
        if rep % 2 == 0:
            return False
        r8 = n % 8
        # the "free" residue where every odd d is in the image
        free, mod4 = (5, (1, 3, 7)) if theta is Theta.PI_3 else (3, (1, 5, 7))
        if r8 == free:
            return True
        if r8 in mod4:
            return rep % 4 == 1
        two = (1, 7) if theta is Theta.PI_3 else (1, 3)
        six = (1, 3) if theta is Theta.PI_3 else (1, 7)
        if r8 == 2:
            return rep % 8 in two
        if r8 == 6:
            return rep % 8 in six
        raise InternalConsistencyError(f"n = {n} is not square-free")
    if v == 3:
        if rep % 3 == 0:
            return n % 9 == _n9_target(theta) and (rep // 3) % 3 == 1
        return rep % 3 == 1
    p = v
    if p in d.support:
        # pi/3 uses -n/d, 2pi/3 uses n/d
        q = class_mul(class_of(-theta.sign * n), d)
        return p % 3 == 1 and legendre_of_class(q, p) == 1
    return legendre_of_class(d, p) == 1


def torsion_seed(c: Curve) -> frozenset[SquareClass]:
    """Images of the 2-torsion of E: {1, n, -3n, -3} for pi/3, {1, -n, 3n, -3} for 2pi/3."""
    s = c.theta.sign
    return frozenset(class_of(k) for k in (1, s * c.n, -3 * s * c.n, -3))


@dataclass(frozen=True)
class SelmerReport:
    curve: Curve
    s_prime: tuple[SquareClass, ...]
    s: tuple[SquareClass, ...]
    rk2_s_prime: int
    rk2_s: int
    s_rank: int

    def s_prime_set(self) -> frozenset[SquareClass]:
        return frozenset(self.s_prime)

    def s_set(self) -> frozenset[SquareClass]:
        return frozenset(self.s)


def _log2_exact(k: int, what: str) -> int:
    if k <= 0 or k & (k - 1):
        raise InternalConsistencyError(f"{what} has size {k}, not a power of two")
    return k.bit_length() - 1


@lru_cache(maxsize=8192)
def selmer(c: Curve) -> SelmerReport:
    """Filter D(E) through every local image; short-circuits on the first failing place."""
    vs = places(c)
    group = descent_group(c)
    s_prime = tuple(d for d in group if all(_dual(c, v, d) for v in vs))
    s = tuple(d for d in group if all(_primal(c, v, d) for v in vs))
    rk_sp = _log2_exact(len(s_prime), "S'")
    rk_s = _log2_exact(len(s), "S")
    s_rank = rk_s + rk_sp - 2
    if s_rank < 0:
        raise InternalConsistencyError(f"negative Selmer rank for {c}")
    return SelmerReport(c, s_prime, s, rk_sp, rk_s, s_rank)


def curve(n: int, theta: Union[Theta, str]) -> Curve:
    """Convenience constructor accepting ``"pi3"`` / ``"2pi3"``."""
    if isinstance(theta, str):
        theta = Theta.parse(theta)
    return Curve(n, theta)

