from fractions import Fraction

import pytest

from selmer_twist.congruence import LocalCondition, CongruenceSet, t_prime_set
from selmer_twist.correlation import (
    analyze,
    correlation_bound,
    eta_bound_closed_form,
    parity_report,
    verify_samples,
)
from selmer_twist.curve import CurveEab
from selmer_twist.errors import HypothesisNoneError


def test_bound_formula():
    prev = None
    for m in range(7):
        c = correlation_bound(m)
        assert c.s0_lb == Fraction(1, 2 * 3**m)
        assert c.avg_min_lb + c.avg_max_ub == 4
        if prev is not None:
            assert c.s0_lb < prev
        prev = c.s0_lb
    assert correlation_bound(2).s0_lb == Fraction(1, 18)
    assert correlation_bound(0).s0_lb == Fraction(1, 2)
    with pytest.raises(ValueError):
        correlation_bound(-1)


def test_analyze_2_minus_1():
    r = analyze(CurveEab(2, -1), sample_height=2000)
    assert r.hypothesis.kind == "case1" and r.hypothesis.witnesses == (5,)
    assert r.certificate.m == 2 and r.m_source == "exact"
    assert r.m_sampled == 2
    assert r.relative_proportion_lb == Fraction(1, 18)
    assert 0 < r.absolute_proportion_lb < r.t_prime_density
    assert all(set(t.values()) == {0} for _, t in r.sample_verification)


def test_analyze_4_minus_5():
    r = analyze(CurveEab(4, -5), sample_height=2000)
    assert str(r.hypothesis) == "Case2(q1=199, q2=5)"
    assert r.certificate.m == 3
    assert r.relative_proportion_lb == Fraction(1, 54)


def test_analyze_hypothesis_none():
    with pytest.raises(HypothesisNoneError):
        analyze(CurveEab(2, 1), sample_height=100)


def test_closed_form_none_when_unconstrained():
    c = CurveEab(2, -1)
    assert eta_bound_closed_form(c, CongruenceSet("sigma")) is None
    assert eta_bound_closed_form(c, t_prime_set(c)) == 2


def test_worker_count_does_not_change_output(monkeypatch):
    c = CurveEab(2, -1)
    from selmer_twist.congruence import enumerate_set

    ds = enumerate_set(t_prime_set(c), 3000)
    serial = verify_samples(c, ds, n_workers=1)
    parallel = verify_samples(c, ds, n_workers=2)
    assert serial == parallel


def test_parity_report():
    rep = parity_report(CurveEab(2, -1), -1)
    assert rep["parity"] == "even" and rep["log3_c_theta"] % 2 == 0
    assert len(rep["narrative"]) == 3
