"""Graph criteria for vanishing Selmer rank, checked against direct descent.

Every criterion pairs a hypothesis on n (residue mod 24, residues of the
prime divisors mod 3 or 12) with a prediction computed from residue graphs,
and a statement about S or S' computed by :mod:`thetacn.descent`.  Descent
is treated as ground truth; a criterion "agrees" at n when the prediction
matches it (or, for one-directional criteria, when prediction implies it).

Two criteria carry a statement reading and a proof reading of their
partition filter.  Both are evaluated by :func:`sweep`; the reading listed
in :data:`PRODUCTION_READINGS` is the one used by :func:`classify` and for
the exit status of :func:`verify_range`.
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional

from .arith import IDENTITY, NotSquareFree, factor_square_free, is_square_free, legendre_of_class
from .descent import Curve, SelmerReport, Theta, selmer, torsion_seed
from .graph import (
    MINUS_ONE,
    ResidueGraph,
    Side,
    build_goto_G,
    build_goto_g,
    build_unified,
    check_constrained_oddness,
    is_odd_graph,
)
from .witness import WitnessPoint, search_point

__all__ = [
    "CriterionId",
    "Kind",
    "Reading",
    "CriterionVerdict",
    "ClassificationRecord",
    "Disagreement",
    "SweepSummary",
    "ConjectureReport",
    "OutOfScope",
    "EvenOrNonSquareFree",
    "PRODUCTION_READINGS",
    "CERTIFIED",
    "UNKNOWN",
    "eval_criterion",
    "classify",
    "verify_range",
    "sweep",
    "conjecture_report",
    "odd_square_free_range",
]

CERTIFIED = "certified"
UNKNOWN = "unknown"
DEFAULT_WITNESS_HEIGHT = 6

CONJ_NON_PI3 = frozenset({1, 3, 5, 7, 9, 15, 19})
CONJ_NON_2PI3 = frozenset({1, 3, 7, 11, 13})


class CriterionId(enum.Enum):
    Thm3_2_I = "Thm3_2_I"
    Thm3_2_II = "Thm3_2_II"
    Thm4_1_I1 = "Thm4_1_I1"
    Thm4_1_I2 = "Thm4_1_I2"
    Thm4_1_II1 = "Thm4_1_II1"
    Thm4_1_II2 = "Thm4_1_II2"
    Cor4_2_I = "Cor4_2_I"
    Cor4_2_II = "Cor4_2_II"
    Cor4_3_I = "Cor4_3_I"
    Cor4_3_II = "Cor4_3_II"
    Thm4_4_I = "Thm4_4_I"
    Thm4_4_II = "Thm4_4_II"
    Cor4_5 = "Cor4_5"
    Thm5_1_I1 = "Thm5_1_I1"
    Thm5_1_I2 = "Thm5_1_I2"
    Thm5_1_II1 = "Thm5_1_II1"
    Thm5_1_II2 = "Thm5_1_II2"
    Thm5_2_I1 = "Thm5_2_I1"
    Thm5_2_I2 = "Thm5_2_I2"
    Thm5_2_II1 = "Thm5_2_II1"
    Thm5_2_II2 = "Thm5_2_II2"
    Cor5_3 = "Cor5_3"

    def __str__(self) -> str:
        return self.value


class Kind(enum.Enum):
    IFF = "iff"
    IMPLIES = "implies"


class Reading(enum.Enum):
    STATEMENT = "statement"
    PROOF = "proof"


IMPLICATIONS = frozenset({CriterionId.Cor4_3_II, CriterionId.Cor5_3})

#: Criteria whose statement and proof disagree on the partition filter.
READINGS: dict[CriterionId, tuple[Reading, ...]] = {
    CriterionId.Thm4_1_II2: (Reading.STATEMENT, Reading.PROOF),
    CriterionId.Thm5_2_I2: (Reading.STATEMENT, Reading.PROOF),
}

#: Readings selected by sweeping [5, 3000]; the other reading disagrees with descent there.
PRODUCTION_READINGS: dict[CriterionId, Reading] = {
    CriterionId.Thm4_1_II2: Reading.PROOF,
    CriterionId.Thm5_2_I2: Reading.PROOF,
}


class OutOfScope(ValueError):
    def __init__(self, n: int, reason: str):
        super().__init__(f"n = {n} is out of scope: {reason}")
        self.n = n
        self.reason = reason


EvenOrNonSquareFree = OutOfScope


def _validate(n: int) -> list[int]:
    if n < 5:
        raise OutOfScope(n, "n must be at least 5 (1, 2, 3 and 6 are excluded)")
    if n % 2 == 0:
        raise OutOfScope(n, "not square-free or even: only odd n are covered")
    try:
        return factor_square_free(n)
    except NotSquareFree as exc:
        raise OutOfScope(n, f"not square-free or even: {exc}") from exc


class _Facts:
    """Per-n data shared by all criteria; graphs and reports are built lazily."""

    def __init__(self, n: int, primes: list[int]):
        self.n = n
        self.primes = primes
        self.r24 = n % 24
        big = [p for p in primes if p >= 5]
        self.ones = [p for p in big if p % 3 == 1]
        self.twos = [p for p in big if p % 3 == 2]
        self.s = len(self.twos)
        self.coprime6 = n % 3 != 0
        self.pq = n // 3 if n % 3 == 0 else n
        self._graphs: dict = {}

    def graph(self, m: int) -> ResidueGraph:
        if m not in self._graphs:
            self._graphs[m] = build_unified(m)
        return self._graphs[m]

    def odd(self, m: int) -> bool:
        return is_odd_graph(self.graph(m))

    @cached_property
    def reports(self) -> dict[Theta, SelmerReport]:
        return {t: selmer(Curve(self.n, t)) for t in Theta}

    def seed_exact(self, theta: Theta) -> bool:
        r = self.reports[theta]
        return r.s_prime_set() == torsion_seed(r.curve)

    def s_trivial(self, theta: Theta) -> bool:
        return self.reports[theta].s == (IDENTITY,)

    def rank_zero(self, theta: Theta) -> bool:
        return self.reports[theta].s_rank == 0


# ---------------------------------------------------------------- filters


def _any(a: Side, b: Side) -> bool:
    return True


def _d_mod(m: int, r: int) -> Callable[[Side, Side], bool]:
    return lambda a, b: a.d.mod(m) == r


def _inside(allowed: Iterable[int], *extra: Callable[[Side], bool]) -> Callable[[Side, Side], bool]:
    allowed = frozenset(allowed)

    def accept(a: Side, b: Side) -> bool:
        return bool(a.labels) and a.labels <= allowed and all(f(a) for f in extra)

    return accept


def _residue_one(q: int) -> Callable[[Side], bool]:
    return lambda a: legendre_of_class(a.d, q) == 1


# ---------------------------------------------------------------- criteria
# Each returns None when the hypothesis fails, else (prediction, truth).

Outcome = Optional[tuple[bool, bool]]


def _thm3_2_i(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 19):
        return None
    g = f.s == 0 and check_constrained_oddness(build_goto_G(f.n), _any, [{MINUS_ONE, 3}])
    return g, f.seed_exact(Theta.PI_3)


def _thm3_2_ii(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 19) or f.s:
        return None
    return is_odd_graph(build_goto_g(f.n)), f.s_trivial(Theta.PI_3)


def _cond_4_1_i1(f: _Facts) -> bool:
    return f.s == 0 and check_constrained_oddness(f.graph(-3 * f.n), _any, [{MINUS_ONE, 3}])


def _cond_4_1_i2(f: _Facts) -> bool:
    accept = _inside(f.primes, lambda a: a.d.representative() > 1 and a.d.mod(4) == 1)
    return check_constrained_oddness(f.graph(-f.n), accept)


def _cond_4_1_ii1(f: _Facts) -> bool:
    return f.s == 1 and check_constrained_oddness(f.graph(-3 * f.n), _d_mod(4, 1), [{MINUS_ONE, 3}])


def _cond_4_1_ii2(f: _Facts, reading: Reading) -> bool:
    if reading is Reading.STATEMENT:
        accept = _inside(f.primes)
    else:
        accept = _inside(f.ones, _residue_one(f.twos[0]))
    return check_constrained_oddness(f.graph(-f.n), accept)


def _thm4_1_i1(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 19):
        return None
    return _cond_4_1_i1(f), f.seed_exact(Theta.PI_3)


def _thm4_1_i2(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 19) or f.s:
        return None
    return _cond_4_1_i2(f), f.s_trivial(Theta.PI_3)


def _thm4_1_ii1(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 != 5:
        return None
    return _cond_4_1_ii1(f), f.seed_exact(Theta.PI_3)


def _thm4_1_ii2(f: _Facts, reading: Reading) -> Outcome:
    if not f.coprime6 or f.r24 != 5 or f.s != 1:
        return None
    return _cond_4_1_ii2(f, reading), f.s_trivial(Theta.PI_3)


def _cor4_2_i(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 19):
        return None
    g = _cond_4_1_i1(f) and _cond_4_1_i2(f)
    return g, f.rank_zero(Theta.PI_3)


def _cor4_2_ii(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 != 5:
        return None
    g = _cond_4_1_ii1(f) and _cond_4_1_ii2(f, PRODUCTION_READINGS[CriterionId.Thm4_1_II2])
    return g, f.rank_zero(Theta.PI_3)


def _cor4_3_i(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (7, 19) or f.s:
        return None
    return f.odd(f.n), f.rank_zero(Theta.PI_3)


def _cor4_3_ii(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 != 5:
        return None
    fives = [p for p in f.primes if p % 12 == 5]
    if len(fives) != 1 or any(p % 12 != 1 for p in f.primes if p != fives[0]):
        return None
    return f.odd(f.n), f.rank_zero(Theta.PI_3)


def _thm4_4_i(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 11, 13):
        return None
    g = f.s == 0 and f.r24 in (1, 7, 13) and f.odd(-f.n)
    return g, f.seed_exact(Theta.TWO_PI_3)


def _thm4_4_ii(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 not in (1, 7, 13) or f.s:
        return None
    return f.r24 == 7 and f.odd(f.n), f.s_trivial(Theta.TWO_PI_3)


def _cor4_5(f: _Facts, reading) -> Outcome:
    if not f.coprime6 or f.r24 != 7 or f.s:
        return None
    return f.odd(f.n), f.rank_zero(Theta.PI_3) and f.rank_zero(Theta.TWO_PI_3)


def _gcd3(f: _Facts, residues: tuple[int, ...]) -> bool:
    return not f.coprime6 and f.r24 in residues


def _thm5_1_i1(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3, 9, 15)) or f.pq % 3 != 1:
        return None
    return f.s == 0 and f.odd(f.n), f.seed_exact(Theta.PI_3)


def _thm5_1_i2(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3, 9, 15)) or f.pq % 3 != 2:
        return None
    g = f.s == 1 and check_constrained_oddness(f.graph(f.n), _inside(f.ones))
    return g, f.seed_exact(Theta.PI_3)


def _thm5_1_ii1(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3, 9, 15)) or f.pq % 3 != 1 or f.s:
        return None
    return f.r24 == 9 and f.odd(f.n // 3), f.s_trivial(Theta.PI_3)


def _thm5_1_ii2(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3, 9, 15)) or f.pq % 3 != 2 or f.s != 1:
        return None
    accept = _inside([3, *f.ones], lambda a: a.d.mod(4) == 1, _residue_one(f.twos[0]))
    return check_constrained_oddness(f.graph(-f.n), accept), f.s_trivial(Theta.PI_3)


def _thm5_2_i1(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3,)) or f.pq % 3 != 1:
        return None
    if f.s == 0:
        g = check_constrained_oddness(f.graph(-f.n), _d_mod(4, 1), [{MINUS_ONE, 3}])
    elif f.s == 2:
        # both congruences kept as stated although mod 12 implies mod 4
        accept = lambda a, b: a.d.mod(4) == 1 and a.d.mod(12) == 1  # noqa: E731
        g = check_constrained_oddness(f.graph(-f.n), accept, [[*f.ones, *f.twos]])
    else:
        g = False
    return g, f.seed_exact(Theta.TWO_PI_3)


def _thm5_2_i2(f: _Facts, reading: Reading) -> Outcome:
    if not _gcd3(f, (3,)) or f.pq % 3 != 2:
        return None
    accept = _any if reading is Reading.STATEMENT else _d_mod(4, 1)
    g = f.s == 1 and check_constrained_oddness(f.graph(-f.n), accept, [{MINUS_ONE, 3}])
    return g, f.seed_exact(Theta.TWO_PI_3)


def _thm5_2_ii1(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3,)) or f.pq % 3 != 1 or f.s not in (0, 2):
        return None
    g = f.s == 2 and check_constrained_oddness(
        f.graph(f.n), _inside([3, *f.ones], _residue_one(f.twos[0]), _residue_one(f.twos[1]))
    )
    return g, f.s_trivial(Theta.TWO_PI_3)


def _thm5_2_ii2(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3,)) or f.pq % 3 != 2 or f.s != 1:
        return None
    accept = _inside(f.ones, _residue_one(f.twos[0]))
    return check_constrained_oddness(f.graph(f.n), accept), f.s_trivial(Theta.TWO_PI_3)


def _cor5_3(f: _Facts, reading) -> Outcome:
    if not _gcd3(f, (3,)):
        return None
    rest = [p for p in f.primes if p != 3]
    fives = [p for p in rest if p % 12 == 5]
    if len(fives) != 1 or any(p % 12 != 1 for p in rest if p != fives[0]):
        return None
    return f.odd(f.n // 3), f.rank_zero(Theta.PI_3) and f.rank_zero(Theta.TWO_PI_3)


_EVALUATORS: dict[CriterionId, Callable[[_Facts, Optional[Reading]], Outcome]] = {
    CriterionId.Thm3_2_I: _thm3_2_i,
    CriterionId.Thm3_2_II: _thm3_2_ii,
    CriterionId.Thm4_1_I1: _thm4_1_i1,
    CriterionId.Thm4_1_I2: _thm4_1_i2,
    CriterionId.Thm4_1_II1: _thm4_1_ii1,
    CriterionId.Thm4_1_II2: _thm4_1_ii2,
    CriterionId.Cor4_2_I: _cor4_2_i,
    CriterionId.Cor4_2_II: _cor4_2_ii,
    CriterionId.Cor4_3_I: _cor4_3_i,
    CriterionId.Cor4_3_II: _cor4_3_ii,
    CriterionId.Thm4_4_I: _thm4_4_i,
    CriterionId.Thm4_4_II: _thm4_4_ii,
    CriterionId.Cor4_5: _cor4_5,
    CriterionId.Thm5_1_I1: _thm5_1_i1,
    CriterionId.Thm5_1_I2: _thm5_1_i2,
    CriterionId.Thm5_1_II1: _thm5_1_ii1,
    CriterionId.Thm5_1_II2: _thm5_1_ii2,
    CriterionId.Thm5_2_I1: _thm5_2_i1,
    CriterionId.Thm5_2_I2: _thm5_2_i2,
    CriterionId.Thm5_2_II1: _thm5_2_ii1,
    CriterionId.Thm5_2_II2: _thm5_2_ii2,
    CriterionId.Cor5_3: _cor5_3,
}


@dataclass(frozen=True)
class CriterionVerdict:
    id: CriterionId
    applicable: bool
    graph_prediction: Optional[bool] = None
    descent_truth: Optional[bool] = None
    agree: Optional[bool] = None
    reading: Optional[Reading] = None

    @property
    def kind(self) -> Kind:
        return Kind.IMPLIES if self.id in IMPLICATIONS else Kind.IFF


def _evaluate(cid: CriterionId, f: _Facts, reading: Optional[Reading]) -> CriterionVerdict:
    if cid in READINGS:
        reading = reading or PRODUCTION_READINGS[cid]
    else:
        reading = None
    out = _EVALUATORS[cid](f, reading)
    if out is None:
        return CriterionVerdict(cid, False, reading=reading)
    g, t = out
    if cid in IMPLICATIONS:
        agree = t or not g
    elif cid is CriterionId.Cor4_5:
        # three-way equivalence: graph, s-rank(pi/3) = 0, s-rank(2pi/3) = 0
        agree = g == f.rank_zero(Theta.PI_3) == f.rank_zero(Theta.TWO_PI_3)
    else:
        agree = g == t
    return CriterionVerdict(cid, True, g, t, agree, reading)


def eval_criterion(cid: CriterionId, n: int, reading: Optional[Reading] = None) -> CriterionVerdict:
    """Evaluate one criterion at odd square-free n >= 5."""
    primes = _validate(n)
    if reading is not None and cid not in READINGS:
        raise ValueError(f"{cid} has a single reading")
    return _evaluate(cid, _Facts(n, primes), reading)


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class ClassificationRecord:
    n: int
    factors: tuple[int, ...]
    n_mod_24: int
    reports: dict[Theta, SelmerReport]
    non_pi3_cn: str
    non_2pi3_cn: str
    non_tn: str
    tn_witness: Optional[WitnessPoint]
    criteria: tuple[CriterionVerdict, ...]
    fired: tuple[CriterionId, ...]
    witness_height: int = 0


def classify(n: int, witness_height: int = DEFAULT_WITNESS_HEIGHT) -> ClassificationRecord:
    """Certify what vanishing Selmer ranks prove about n; optionally look for a witness point.

    ``witness_height = 0`` disables the point search.
    """
    primes = _validate(n)
    f = _Facts(n, primes)
    reports = f.reports
    zero = {t: reports[t].s_rank == 0 for t in Theta}
    witness = None
    if witness_height > 0:
        for t in Theta:
            if zero[t]:
                continue
            witness = search_point(reports[t].curve, witness_height)
            if witness:
                break
    verdicts = tuple(v for v in (_evaluate(c, f, None) for c in CriterionId) if v.applicable)
    fired = tuple(v.id for v in verdicts if v.graph_prediction)
    return ClassificationRecord(
        n=n,
        factors=tuple(primes),
        n_mod_24=f.r24,
        reports=reports,
        non_pi3_cn=CERTIFIED if zero[Theta.PI_3] else UNKNOWN,
        non_2pi3_cn=CERTIFIED if zero[Theta.TWO_PI_3] else UNKNOWN,
        non_tn=CERTIFIED if all(zero.values()) else UNKNOWN,
        tn_witness=witness,
        criteria=verdicts,
        fired=fired,
        witness_height=witness_height,
    )


# ---------------------------------------------------------------- sweeps


def odd_square_free_range(lo: int, hi: int) -> list[int]:
    return [n for n in range(max(lo, 5), hi + 1) if n % 2 and is_square_free(n)]


@dataclass(frozen=True)
class Disagreement:
    n: int
    id: CriterionId
    kind: Kind
    graph_prediction: bool
    descent_truth: bool
    reading: Optional[Reading] = None


@dataclass
class SweepSummary:
    lo: int
    hi: int
    applicable: Counter = field(default_factory=Counter)
    agree: Counter = field(default_factory=Counter)
    disagreements: list[Disagreement] = field(default_factory=list)
    # keyed by (criterion, reading) for criteria with two readings
    reading_applicable: Counter = field(default_factory=Counter)
    reading_disagreements: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def reading_matches(self, cid: CriterionId) -> list[Reading]:
        """Readings of ``cid`` with zero disagreements over the sweep."""
        return [r for r in READINGS[cid] if not self.reading_disagreements.get((cid, r))]


def _sweep_one(n: int) -> tuple[int, list[CriterionVerdict], list[CriterionVerdict]]:
    f = _Facts(n, factor_square_free(n))
    production = [_evaluate(c, f, None) for c in CriterionId]
    alternatives = [_evaluate(c, f, r) for c in READINGS for r in READINGS[c]]
    return n, production, alternatives


def _map(fn, items: list[int], jobs: int):
    if jobs <= 1 or len(items) < 64:
        return list(map(fn, items))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (jobs * 8))))


def sweep(lo: int, hi: int, jobs: int = 1) -> SweepSummary:
    """Evaluate every criterion (and every reading) over odd square-free n in [lo, hi]."""
    summary = SweepSummary(lo, hi)
    for n, production, alternatives in _map(_sweep_one, odd_square_free_range(lo, hi), jobs):
        for v in production:
            if not v.applicable:
                continue
            summary.applicable[v.id] += 1
            if v.agree:
                summary.agree[v.id] += 1
            else:
                summary.disagreements.append(
                    Disagreement(n, v.id, v.kind, v.graph_prediction, v.descent_truth, v.reading)
                )
        for v in alternatives:
            if not v.applicable:
                continue
            key = (v.id, v.reading)
            summary.reading_applicable[key] += 1
            if not v.agree:
                summary.reading_disagreements.setdefault(key, []).append(n)
    return summary


def verify_range(lo: int, hi: int, jobs: int = 1) -> list[Disagreement]:
    """All criterion violations over [lo, hi] under the production readings."""
    return sweep(lo, hi, jobs).disagreements


@dataclass(frozen=True)
class ConjectureReport:
    lo: int
    hi: int
    non_pi3: tuple[int, ...]
    non_2pi3: tuple[int, ...]
    non_tn: tuple[int, ...]
    anomalies_pi3: tuple[int, ...]
    anomalies_2pi3: tuple[int, ...]


def _ranks(n: int) -> tuple[int, int, int]:
    return n, selmer(Curve(n, Theta.PI_3)).s_rank, selmer(Curve(n, Theta.TWO_PI_3)).s_rank


def conjecture_report(lo: int, hi: int, jobs: int = 1) -> ConjectureReport:
    """Certified non-CN values whose residue mod 24 falls outside the conjectured classes."""
    rows = _map(_ranks, odd_square_free_range(lo, hi), jobs)
    pi3 = tuple(n for n, a, _ in rows if a == 0)
    two = tuple(n for n, _, b in rows if b == 0)
    tn = tuple(n for n, a, b in rows if a == 0 and b == 0)
    return ConjectureReport(
        lo,
        hi,
        pi3,
        two,
        tn,
        tuple(n for n in pi3 if n % 24 not in CONJ_NON_PI3),
        tuple(n for n in two if n % 24 not in CONJ_NON_2PI3),
    )
