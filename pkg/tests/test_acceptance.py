"""Acceptance criteria 1-9, one PASS/FAIL line each.

Runs under pytest (lines are collected into the terminal summary) or
directly: python tests/test_acceptance.py
"""

import io
import json
import math
import random
import sys
import time
from fractions import Fraction

import pytest

from selmer_twist.arith import power_free_rep
from selmer_twist.cli import main
from selmer_twist.congruence import (
    CongruenceSet,
    density,
    empirical_density,
    explicit_T_prop510,
    t_prime_set,
)
from selmer_twist.correlation import correlation_bound
from selmer_twist.curve import CurveEab
from selmer_twist.oracle import random_curve, random_sigma_twist, residue_class_oracle, tamagawa_table_run
from selmer_twist.prym import (
    PrymFamily,
    all_scenarios,
    branch_a_proportion,
    prym_local_ratio,
    prym_sigma,
)
from selmer_twist.congruence import enumerate_set
from selmer_twist.selmer import FOUR, INF, local_ratio, parity_of_theta, places


def _cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, json.loads(buf.getvalue())


def _squarefree_range(X):
    for d in range(-X, X + 1):
        if d and power_free_rep(d, 2) == d:
            yield d


def criterion_1():
    t0 = time.perf_counter()
    code, doc = _cli("analyze", "2", "-1")
    body = doc["body"]
    tp = CongruenceSet.from_text("\n".join(body["t_prime"]))
    T = explicit_T_prop510()
    bad = [d for d in _squarefree_range(10**4) if (d in tp) != (d in T)]
    dt = time.perf_counter() - t0
    ok = (
        code == 0
        and body["hypothesis"]["tag"] == "Case1(q=5)"
        and not bad
        and body["certificate"]["m"] == "2"
        and body["relative_proportion_lb"] == "1/18"
        and dt < 10
    )
    return ok, (f"hypothesis={body['hypothesis']['tag']} discrepancies={len(bad)} "
                f"m={body['certificate']['m']} s0_lb={body['relative_proportion_lb']} time={dt:.1f}s")


def criterion_2():
    t0 = time.perf_counter()
    rep = tamagawa_table_run(1000, seed=0)
    dt = time.perf_counter() - t0
    ok = rep.checked >= 1000 and rep.passed and dt < 60
    return ok, f"checked={rep.checked} mismatches={len(rep.mismatches)} time={dt:.1f}s"


def criterion_3():
    rng = random.Random(2024)
    samples = mismatches = 0
    while samples < 1000:
        c = random_curve(rng)
        d = random_sigma_twist(c, rng, bound=10**5)
        samples += 1
        for v in places(c, d):
            if local_ratio(c, "phi", d, v) != local_ratio(c, "psi'", d, v):
                mismatches += 1
            if local_ratio(c, "phi'", d, v) != local_ratio(c, "psi", d, v):
                mismatches += 1
    return mismatches == 0, f"samples={samples} mismatches={mismatches}"


def criterion_4():
    details = []
    ok = True
    for a, b in ((2, -1), (4, -5)):
        code, doc = _cli("scan", str(a), str(b), "--height", "10^4")
        rows = doc["body"]["members"]
        bad = [r["d"] for r in rows if not r["ratios_ok"]]
        ok &= code == 0 and bool(rows) and not bad
        details.append(f"({a},{b}): members={len(rows)} nonzero={len(bad)}")
    return ok, " ".join(details)


def criterion_5():
    got = residue_class_oracle(3, 3, "cube")
    want = {r % 27 for r in (1, -1, 8, -8, 10, -10)}
    return got == want, f"got={sorted(got)}"


def criterion_6():
    c = CurveEab(2, -1)
    T = explicit_T_prop510()
    members = [d for d in _squarefree_range(10**4) if d in T]
    odd = [d for d in members if parity_of_theta(c, d) != "even"]
    return bool(members) and not odd, f"members={len(members)} odd={len(odd)}"


def criterion_7():
    t0 = time.perf_counter()
    T = explicit_T_prop510()
    pred, obs = density(T).value, float(empirical_density(T, 10**6))
    rel_T = abs(obs - pred) / pred
    sq = 6 / math.pi**2
    obs_sq = float(empirical_density(CongruenceSet("squarefree"), 10**6))
    rel_sq = abs(obs_sq - sq) / sq
    dt = time.perf_counter() - t0
    ok = rel_T < 0.05 and rel_sq < 0.005 and dt < 120
    return ok, f"T rel_err={rel_T:.4f} squarefree rel_err={rel_sq:.5f} time={dt:.1f}s"


def criterion_8():
    vals = [correlation_bound(m).s0_lb for m in range(7)]
    formula = all(v == Fraction(1, 3**m) / 2 for m, v in enumerate(vals))
    mono = all(x > y for x, y in zip(vals, vals[1:]))
    ok = formula and mono and correlation_bound(2).s0_lb == Fraction(1, 18)
    return ok, f"formula={formula} monotone={mono} m=2 -> {correlation_bound(2).s0_lb}"


def criterion_9():
    sc = all_scenarios()
    six = len(sc) == 6 and len(set(sc)) == 6 and all(sum(s.exponents) == 2 for s in sc)
    third = branch_a_proportion() == Fraction(1, 3)
    bad_inf = 0
    signs = set()
    for a, b in ((2, 1), (5, 2), (7, 4)):
        f = PrymFamily(a, b)
        for d in enumerate_set(prym_sigma(f), 300):
            signs.add(d > 0)
            want = -1 if d > 0 else 0
            bad_inf += any(prym_local_ratio(f, iso, d, INF).exponent != want for iso in FOUR)
    ok = six and third and not bad_inf and signs == {True, False}
    return ok, f"scenarios={len(sc)} branch_A={branch_a_proportion()} c_inf_mismatches={bad_inf}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(n, ok, detail):
    return f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, acceptance_log):
    ok, detail = CRITERIA[n - 1]()
    line = _line(n, ok, detail)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for n, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        failed += not ok
        print(_line(n, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
