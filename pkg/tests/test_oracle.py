import math
import random

import pytest

from selmer_twist.arith import is_prime
from selmer_twist.congruence import CongruenceSet, explicit_T_prop510
from selmer_twist.curve import CurveEab
from selmer_twist.errors import DomainError
from selmer_twist.oracle import (
    check_residue_predicates,
    density_check,
    density_oracle,
    is_prime_oracle,
    residue_class_oracle,
    residue_contract,
    tamagawa_ratio_oracle,
    tamagawa_table_run,
)
from selmer_twist.selmer import local_ratio

E = CurveEab(2, -1)


def test_residue_examples():
    assert residue_class_oracle(3, 3, "cube") == {1, 8, 10, 17, 19, 26}
    assert residue_class_oracle(7, 1, "cube") == {1, 6}
    assert residue_class_oracle(2, 3, "square") == {1}
    assert residue_class_oracle(5, 1, "square") == {1, 4}


def test_residue_oracle_bounds():
    with pytest.raises(ValueError):
        residue_class_oracle(3, 13, "cube")
    with pytest.raises(ValueError):
        residue_class_oracle(5, 1, "fourth")


@pytest.mark.parametrize("p,k,pred", [(2, 6, "sixth"), (3, 5, "cube"), (7, 3, "sixth"), (97, 2, "square")])
def test_residue_spot_checks(p, k, pred):
    assert check_residue_predicates(p, k, pred).passed


def test_residue_contract_full():
    # build-order contract: every p <= 100, every k with p^k <= 10^6
    rep = residue_contract()
    assert rep.passed, rep.mismatches[:5]
    assert rep.checked > 10**7


def test_tamagawa_examples():
    # d = 2 is a square at 7, d = -1 a square at 5
    assert tamagawa_ratio_oracle(E, 7, 2).exponent == 1
    assert tamagawa_ratio_oracle(E, 5, -1).exponent == 0
    with pytest.raises(DomainError):
        tamagawa_ratio_oracle(E, 3, 1)
    with pytest.raises(DomainError):
        tamagawa_ratio_oracle(E, 7, 7)
    with pytest.raises(DomainError):
        tamagawa_ratio_oracle(E, 11, 1)


def test_tamagawa_oracle_agrees_on_sigma_members():
    from selmer_twist.congruence import enumerate_set, sigma_set

    for d in enumerate_set(sigma_set(E), 300):
        for p in (5, 7):
            if d % p:
                assert tamagawa_ratio_oracle(E, p, d) == local_ratio(E, "phi", d, p)


def test_tamagawa_table_run():
    rep = tamagawa_table_run(1000, seed=1)
    assert rep.checked == 1000
    assert rep.passed, rep.mismatches[:5]
    cov = rep.details["coverage"]
    assert all(n > 0 for n in cov.values()), cov


def test_density_oracle_anchors():
    sq = CongruenceSet("squarefree")
    assert abs(float(density_oracle(sq, 10**6)) - 6 / math.pi**2) / (6 / math.pi**2) < 0.005
    assert density_check(CongruenceSet("sixth-power-free"), 10**6, 0.005).passed
    assert density_check(explicit_T_prop510(), 10**6, 0.05).passed
    with pytest.raises(ValueError):
        density_oracle(sq, 10**7 + 1)


def test_primality_cross_check():
    rng = random.Random(3)
    for n in [rng.randint(1, 10**7) for _ in range(3000)] + list(range(200)):
        assert is_prime(n) == is_prime_oracle(n)


def test_report_serializes():
    d = tamagawa_table_run(20, seed=2).to_dict()
    assert d["passed"] is True and d["checked"] == 20 and d["mismatches"] == []
