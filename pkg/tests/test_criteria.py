import pytest

import oracles
from thetacn.criteria import (
    CERTIFIED,
    PRODUCTION_READINGS,
    READINGS,
    UNKNOWN,
    CriterionId,
    Kind,
    OutOfScope,
    Reading,
    classify,
    conjecture_report,
    eval_criterion,
    odd_square_free_range,
    sweep,
    verify_range,
)
from thetacn.descent import Theta

NS = odd_square_free_range(5, 600)


def oracle_key(cid, reading):
    return cid.value + (f"/{reading.value}" if reading else "")


@pytest.mark.parametrize("n", NS)
def test_every_criterion_matches_oracle(n):
    for cid in CriterionId:
        for reading in READINGS.get(cid, (None,)):
            v = eval_criterion(cid, n, reading)
            want = oracles.criterion_oracle(oracle_key(cid, reading), n)
            got = (v.graph_prediction, v.descent_truth) if v.applicable else None
            assert got == want, (cid, reading)


def test_cor4_5_at_seven():
    v = eval_criterion(CriterionId.Cor4_5, 7)
    assert v.applicable and v.graph_prediction and v.descent_truth and v.agree


def test_first_case_at_five():
    v = eval_criterion(CriterionId.Thm4_1_II1, 5)
    assert v.applicable
    # G(-15) has no arcs, so {5} | {-1, 3} is even; it is excepted, and so are
    # the other two even splits by the d = 1 (mod 4) filter, making the graph side true.
    assert v.graph_prediction is True
    assert v.descent_truth is True
    assert v.agree


def test_not_applicable_when_three_divides():
    v = eval_criterion(CriterionId.Thm4_1_I1, 15)
    assert not v.applicable
    assert v.graph_prediction is None and v.agree is None


def test_kinds():
    assert eval_criterion(CriterionId.Cor4_3_II, 5).kind is Kind.IMPLIES
    assert eval_criterion(CriterionId.Cor4_5, 7).kind is Kind.IFF


def test_reading_argument():
    with pytest.raises(ValueError):
        eval_criterion(CriterionId.Cor4_5, 7, Reading.PROOF)
    v = eval_criterion(CriterionId.Thm4_1_II2, 5)
    assert v.reading is PRODUCTION_READINGS[CriterionId.Thm4_1_II2]


@pytest.mark.parametrize("n", [1, 3, 4, 12, 45, 0, -7])
def test_out_of_scope(n):
    with pytest.raises(OutOfScope):
        eval_criterion(CriterionId.Cor4_5, n)
    with pytest.raises(OutOfScope):
        classify(n)


def test_out_of_scope_message():
    with pytest.raises(OutOfScope, match="not square-free or even"):
        classify(12)


def test_classify_seven():
    rec = classify(7)
    assert (rec.non_pi3_cn, rec.non_2pi3_cn, rec.non_tn) == (CERTIFIED,) * 3
    assert rec.tn_witness is None
    assert CriterionId.Cor4_5 in rec.fired


def test_classify_five():
    rec = classify(5)
    w = rec.tn_witness
    assert w is not None and w.curve.theta is Theta.TWO_PI_3
    assert (w.x, w.y) == (-1, 8)
    assert rec.non_2pi3_cn == UNKNOWN and rec.non_tn == UNKNOWN


def test_classify_twenty_three():
    rec = classify(23)
    assert (rec.non_pi3_cn, rec.non_2pi3_cn, rec.non_tn) == (UNKNOWN,) * 3


def test_certificates_follow_ranks():
    for n in odd_square_free_range(5, 400):
        rec = classify(n, witness_height=0)
        z1 = rec.reports[Theta.PI_3].s_rank == 0
        z2 = rec.reports[Theta.TWO_PI_3].s_rank == 0
        assert (rec.non_pi3_cn == CERTIFIED) == z1
        assert (rec.non_2pi3_cn == CERTIFIED) == z2
        assert (rec.non_tn == CERTIFIED) == (z1 and z2)


def test_odd_square_free_range():
    assert odd_square_free_range(1, 30) == [5, 7, 11, 13, 15, 17, 19, 21, 23, 29]
    assert odd_square_free_range(9, 5) == []


def test_sweep_is_order_and_job_independent():
    a = sweep(5, 400)
    b = sweep(5, 400, jobs=2)
    assert a.applicable == b.applicable and a.agree == b.agree
    assert a.disagreements == b.disagreements


def test_proof_readings_are_the_empirically_consistent_ones():
    s = sweep(5, 1500)
    for cid in READINGS:
        assert s.reading_matches(cid) == [Reading.PROOF]
        assert s.reading_disagreements[(cid, Reading.STATEMENT)]


def test_only_the_known_criterion_disagrees_below_five_hundred():
    bad = verify_range(5, 500)
    assert {d.id for d in bad} <= {CriterionId.Thm4_4_I}
    assert all(d.n % 24 == 11 for d in bad)


def test_conjecture_report_small_range():
    r = conjecture_report(5, 500)
    assert r.anomalies_pi3 == () and r.anomalies_2pi3 == ()
    assert 7 in r.non_tn and 5 in r.non_pi3 and 5 not in r.non_2pi3
