"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are written to
the terminal even when output capture is on.
"""

import subprocess
import sys
import time

import pytest

import oracles
from thetacn.arith import INFINITY, class_of, hilbert
from thetacn.cli import main
from thetacn.criteria import (
    CERTIFIED,
    IMPLICATIONS,
    Kind,
    classify,
    conjecture_report,
    odd_square_free_range,
    sweep,
)
from thetacn.descent import Curve, Theta, descent_group, in_image, in_image_dual, places, selmer, torsion_seed
from thetacn.graph import (
    build_goto_G,
    build_goto_g,
    build_unified,
    even_partition_count,
    even_partition_count_exhaustive,
)
from thetacn.witness import search_point

LO, HI = 5, 3000
SWEEP = odd_square_free_range(LO, HI)


@pytest.fixture
def report_line(capsys):
    def emit(number: int, ok: bool, text: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {text}")

    return emit


def reps(ds):
    return sorted(d.representative() for d in ds)


def test_criterion_1_n7_fixed_point(report_line):
    t0 = time.perf_counter()
    r = selmer(Curve(7, Theta.PI_3))
    brute = oracles.selmer_oracle(7, 1)
    rec = classify(7)
    ok = (
        reps(r.s_prime) == [-21, -3, 1, 7]
        and reps(r.s) == [1]
        and r.s_rank == 0
        and brute == ((-21, -3, 1, 7), (1,))
        and rec.non_tn == CERTIFIED
    )
    ms = (time.perf_counter() - t0) * 1e3
    report_line(1, ok, f"S'={reps(r.s_prime)} S={reps(r.s)} s_rank={r.s_rank} non_tn={rec.non_tn} ({ms:.0f} ms)")
    assert ok


def test_criterion_2_example_point(report_line):
    w = search_point(Curve(5, Theta.TWO_PI_3), 10)
    point_ok = w is not None and (w.x, w.y) == (-1, 8)
    rec = classify(5)
    certified = [k for k in ("non_pi3_cn", "non_2pi3_cn", "non_tn") if getattr(rec, k) == CERTIFIED]
    attached = rec.tn_witness is not None and (rec.tn_witness.x, rec.tn_witness.y) == (-1, 8)
    ok = point_ok and attached and not certified
    report_line(
        2,
        ok,
        f"point={w} attached={attached} certified={certified or 'nothing'}"
        f" (s_rank pi/3 = {rec.reports[Theta.PI_3].s_rank})",
    )
    assert ok


def test_criterion_3_equivalence_sweep(report_line, capsys):
    t0 = time.perf_counter()
    code = main(["verify", str(LO), str(HI)])
    secs = time.perf_counter() - t0
    capsys.readouterr()
    s = sweep(LO, HI)
    bicond = [d for d in s.disagreements if d.kind is Kind.IFF]
    by_id = {}
    for d in bicond:
        by_id.setdefault(d.id.value, []).append(d.n)
    summary = ", ".join(f"{k}: {len(v)} (first n={v[0]})" for k, v in by_id.items()) or "none"
    ok = code == 0 and not bicond and secs < 60
    report_line(3, ok, f"verify {LO} {HI} exit={code} in {secs:.1f}s; biconditional disagreements: {summary}")
    assert ok


def test_criterion_4_implication_sweep(report_line):
    s = sweep(LO, HI)
    bad = [d for d in s.disagreements if d.id in IMPLICATIONS]
    counts = {c.value: s.applicable[c] for c in IMPLICATIONS}
    ok = not bad and all(counts.values())
    report_line(4, ok, f"applicable {counts}, violations {len(bad)}")
    assert ok


def _sweep_graphs(n):
    yield build_unified(n)
    yield build_unified(-n)
    if n % 3:
        yield build_unified(-3 * n)
        yield build_goto_G(n)
        yield build_goto_g(n)
    elif n > 3:
        yield build_unified(n // 3)


def test_criterion_5_even_partition_count(report_line):
    checked = 0
    bad = []
    for n in SWEEP:
        for g in _sweep_graphs(n):
            if g.size > 12:
                continue
            checked += 1
            if even_partition_count_exhaustive(g) != even_partition_count(g):
                bad.append(g.source)
    ok = checked > 0 and not bad
    report_line(5, ok, f"{checked} graphs with <= 12 vertices, exceptions {len(bad)}")
    assert ok


def _basis(elems):
    basis, span = [], {class_of(1)}
    for e in elems:
        if e not in span:
            basis.append(e)
            span |= {e * x for x in span}
    return basis, span


def test_criterion_6_structural_invariants(report_line):
    problems = []
    pairs = 0
    for n in SWEEP:
        for theta in Theta:
            c = Curve(n, theta)
            r = selmer(c)
            for name, group in (("S'", r.s_prime_set()), ("S", r.s_set())):
                if _basis(group)[1] != group:
                    problems.append((n, theta.value, f"{name} not a subgroup"))
            if not torsion_seed(c) <= r.s_prime_set():
                problems.append((n, theta.value, "seed"))
            if r.s_rank < 0:
                problems.append((n, theta.value, "rank"))
            group = descent_group(c)
            for v in places(c):
                dual = [d for d in group if in_image_dual(c, v, d)]
                prim = [d for d in group if in_image(c, v, d)]
                bd, sd = _basis(dual)
                bp, sp = _basis(prim)
                if sd != set(dual) or sp != set(prim):
                    problems.append((n, theta.value, f"local image at {v} not a subgroup"))
                    continue
                # bimultiplicativity reduces orthogonality to the bases
                for a in bd:
                    for b in bp:
                        pairs += 1
                        if hilbert(a.representative(), b.representative(), v) != 1:
                            problems.append((n, theta.value, f"pairing at {v}"))
    ok = not problems
    report_line(
        6,
        ok,
        f"{2 * len(SWEEP)} curves, {pairs} basis pairings, places incl. {INFINITY}; problems {len(problems)}"
        + (f" e.g. {problems[:3]}" if problems else ""),
    )
    assert ok


def test_criterion_7_positive_rank_primes(report_line):
    ps = [p for p in range(23, HI + 1, 24) if oracles.is_prime_slow(p)]
    bad = [
        p
        for p in ps
        if selmer(Curve(p, Theta.PI_3)).s_rank < 1 or selmer(Curve(p, Theta.TWO_PI_3)).s_rank < 1
    ]
    ok = bool(ps) and not bad
    report_line(7, ok, f"{len(ps)} primes p = 23 mod 24 up to {HI}; s_rank 0 at {bad or 'none'}")
    assert ok


def test_criterion_8_conjecture_report(report_line):
    r = conjecture_report(LO, HI)
    ok = not r.anomalies_pi3 and not r.anomalies_2pi3
    report_line(
        8,
        ok,
        f"certified non-pi/3-CN {len(r.non_pi3)}, non-2pi/3-CN {len(r.non_2pi3)};"
        f" anomalies pi/3 {list(r.anomalies_pi3)}, 2pi/3 {list(r.anomalies_2pi3)}",
    )
    assert ok


def test_criterion_9_determinism(report_line):
    cmd = [sys.executable, "-m", "thetacn", "scan", "5", "1000", "--format", "json", "--jobs", "8"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    ok = a == b and len(a) > 0
    lines = len(a.splitlines())
    report_line(9, ok, f"two runs, {lines} lines, {len(a)} bytes, identical={a == b}")
    assert ok
