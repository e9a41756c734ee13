import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selmer_twist.arith import (
    FACTOR_BOUND,
    Factorization,
    TwistClass,
    as_twist,
    factorize,
    height,
    is_cube_in_Qp,
    is_prime,
    is_sixth_power_in_Qp,
    is_square_in_Qp,
    power_free_rep,
    primes_up_to,
    unit_part,
    valuation,
)
from selmer_twist.oracle import is_prime_oracle

nonzero = st.integers(min_value=-(10**12), max_value=10**12).filter(bool)


@pytest.mark.parametrize(
    "n, sign, factors",
    [(-35, -1, ((5, 1), (7, 1))), (1, 1, ()), (262144, 1, ((2, 18),))],
)
def test_factorize_examples(n, sign, factors):
    assert factorize(n) == Factorization(sign, factors)


def test_factorize_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_large_semiprime():
    p, q = 1_000_000_007, 998_244_353
    assert factorize(p * q).factors == ((q, 1), (p, 1))
    big = (2**61 - 1) * (2**31 - 1)
    assert big < FACTOR_BOUND
    assert factorize(big).value() == big


@given(nonzero)
@settings(max_examples=300)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.value() == n
    assert all(is_prime(p) for p in f.primes())
    assert f.primes() == sorted(f.primes())


def test_is_prime_against_trial_division():
    for n in range(-5, 5000):
        assert is_prime(n) == is_prime_oracle(n)
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_is_prime_pratt_range():
    # above the Miller-Rabin bound: 2^89 - 1 is a Mersenne prime
    assert is_prime(2**89 - 1)
    assert not is_prime((2**89 - 1) * 3)


@pytest.mark.parametrize("n, p, v", [(35, 7, 1), (262144, 2, 18), (35, 3, 0)])
def test_valuation(n, p, v):
    assert valuation(n, p) == v


def test_valuation_zero():
    with pytest.raises(ValueError):
        valuation(0, 2)


def test_unit_part():
    assert unit_part(-96, 2) == (5, -3)


@pytest.mark.parametrize("d, k, rep", [(64, 6, 1), (-128, 6, -2), (12, 6, 12), (-8, 3, -1), (72, 2, 2)])
def test_power_free_rep(d, k, rep):
    assert power_free_rep(d, k) == rep


@given(nonzero.filter(lambda n: abs(n) < 10**6), st.integers(1, 20))
def test_power_free_rep_class(d, k):
    rep = power_free_rep(d, 6)
    assert power_free_rep(d * k**6, 6) == rep
    assert all(e < 6 for _, e in factorize(rep).factors)
    assert (rep > 0) == (d > 0)


@pytest.mark.parametrize("d, h", [(12, 12), (-5, 5), (1, 1)])
def test_height(d, h):
    assert height(d) == h
    assert TwistClass(d).height == h


def test_twist_class_validation():
    with pytest.raises(ValueError):
        TwistClass(64)
    with pytest.raises(ValueError):
        TwistClass(0)
    assert as_twist(-128).d == -2
    assert TwistClass.of(3 * 2**7).d == 6


@pytest.mark.parametrize("d, p, want", [(-3, 7, True), (17, 2, True), (5, 5, False), (3, 2, False), (4, 2, True)])
def test_is_square(d, p, want):
    assert is_square_in_Qp(d, p) is want


@pytest.mark.parametrize("d, p, want", [(10, 3, True), (-1, 7, True), (2, 3, False), (2, 7, False), (16, 2, False), (24, 2, True)])
def test_is_cube(d, p, want):
    assert is_cube_in_Qp(d, p) is want


@pytest.mark.parametrize("d, p, want", [(-1, 5, True), (2, 5, False), (64, 2, True)])
def test_is_sixth_power(d, p, want):
    assert is_sixth_power_in_Qp(d, p) is want


def test_predicates_reject_zero():
    for f in (is_square_in_Qp, is_cube_in_Qp, is_sixth_power_in_Qp):
        with pytest.raises(ValueError):
            f(0, 5)


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 13]))
def test_square_of_anything_is_square(u, p):
    assert is_square_in_Qp(u * u, p)
    assert is_cube_in_Qp(u**3, p)
    assert is_sixth_power_in_Qp(u**6, p)


def test_cube_residues_mod_27_are_the_unit_cubes():
    cubes = {pow(u, 3, 27) for u in range(27) if u % 3}
    assert cubes == {r for r in range(27) if r % 3 and is_cube_in_Qp(r, 3)}
    assert len(cubes) == 6
