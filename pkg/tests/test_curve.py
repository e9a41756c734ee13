import random
from fractions import Fraction

import pytest

from selmer_twist.arith import factorize
from selmer_twist.curve import (
    CurveEab,
    ReductionType,
    bad_primes,
    discriminant,
    genus2_model,
    hypothesis_case,
    j_invariants,
    new_curve,
    reduction_type,
    tamagawa_number,
    twisted_reduction_type,
    weierstrass_discriminant,
    weierstrass_j,
    frac_valuation,
)
from selmer_twist.errors import (
    DivisibleByThreeError,
    DomainError,
    InvalidCurveError,
    NotCoprimeError,
    SingularCurveError,
)


def valid_box(n=50):
    for a in range(-n, n + 1):
        for b in range(-n, n + 1):
            try:
                yield CurveEab(a, b)
            except InvalidCurveError:
                pass


BOX = list(valid_box())


def test_new_curve_examples():
    c = new_curve(2, -1)
    assert c.conductor == 35
    assert new_curve(4, -5).bad_primes == (5, 199)


@pytest.mark.parametrize(
    "a, b, err",
    [(3, 1, DivisibleByThreeError), (2, 3, DivisibleByThreeError), (2, 4, NotCoprimeError), (3, 1, InvalidCurveError), (1, 0, DivisibleByThreeError)],
)
def test_new_curve_rejects(a, b, err):
    with pytest.raises(err):
        new_curve(a, b)


def test_singular_curve_error_is_distinct():
    # a^3 = 27b is impossible with 3 not dividing a; build the check directly
    assert issubclass(SingularCurveError, InvalidCurveError)
    assert not issubclass(SingularCurveError, NotCoprimeError)


@pytest.mark.parametrize("ab, disc", [((2, -1), -35), ((1, 1), -26)])
def test_discriminant(ab, disc):
    assert discriminant(CurveEab(*ab)) == disc


def test_discriminant_matches_weierstrass():
    for c in BOX[::7]:
        assert discriminant(c) == weierstrass_discriminant(c.a, 0, c.b, 0, 0)
        assert j_invariants(c)[0] == weierstrass_j(c.a, 0, c.b, 0, 0)


def test_j_invariants_example():
    j, jp = j_invariants(CurveEab(2, -1))
    assert j == Fraction(-262144, 35)
    assert jp == Fraction(8 * (-208) ** 3, -42875)
    assert frac_valuation(jp, 5) == frac_valuation(jp, 7) == -3


def test_j_denominators_supported_on_bad_primes():
    for c in BOX:
        bad = set(c.bad_primes)
        for j in j_invariants(c):
            assert set(factorize(j.denominator).primes()) <= bad


def test_valuation_identities():
    for c in BOX:
        j, jp = j_invariants(c)
        for p in c.bad_primes:
            if p == 2:
                continue
            if c.m % p == 0:
                assert frac_valuation(jp, p) == 3 * frac_valuation(j, p)
            else:
                assert frac_valuation(j, p) == 3 * frac_valuation(jp, p)


@pytest.mark.parametrize("ab, bad", [((2, -1), {5, 7}), ((1, 1), {2, 13}), ((4, -5), {5, 199})])
def test_bad_primes(ab, bad):
    assert bad_primes(CurveEab(*ab)) == bad


def test_reduction_types():
    c = CurveEab(2, -1)
    assert reduction_type(c, 7) is ReductionType.SPLIT
    assert reduction_type(c, 5) is ReductionType.NONSPLIT
    assert reduction_type(c, 11) is ReductionType.GOOD
    for c in BOX[::3]:
        assert reduction_type(c, 3) is ReductionType.GOOD


def test_twisted_reduction_types():
    c = CurveEab(2, -1)
    # -1 = 4 = 2^2 mod 5 is a square, so it does not flip; 2 is a nonresidue and does
    assert twisted_reduction_type(c, 5, -1) is ReductionType.NONSPLIT
    assert twisted_reduction_type(c, 5, 2) is ReductionType.SPLIT
    # squares mod 7 are {1, 2, 4}: 2 keeps the split fibre, 3 flips it
    assert twisted_reduction_type(c, 7, 2) is ReductionType.SPLIT
    assert twisted_reduction_type(c, 7, 3) is ReductionType.NONSPLIT
    assert twisted_reduction_type(c, 7, 1 + 49) is ReductionType.SPLIT
    with pytest.raises(DomainError):
        twisted_reduction_type(c, 5, 10)


def test_twisted_reduction_square_invariance():
    rng = random.Random(1)
    for c in BOX[::11]:
        for p in c.bad_primes:
            for _ in range(3):
                d = rng.choice([-1, 1]) * rng.randint(1, 500)
                m = rng.randint(1, 40)
                if d % p == 0 or m % p == 0 or (p == 2 and d % 4 == 3):
                    continue
                dm2 = d * m * m
                if p == 2 and dm2 % 4 == 3:
                    continue
                assert twisted_reduction_type(c, p, d) is twisted_reduction_type(c, p, dm2)


def test_genus2_model():
    g = genus2_model(CurveEab(2, -1))
    assert g.alpha == Fraction(-31, 2)
    rng = random.Random(7)
    for c in rng.sample(BOX, 20):
        g = genus2_model(c)
        j, j_prime = j_invariants(c)
        assert g.j_plus() == j
        assert g.j_minus() == j_prime


def test_genus2_alpha_antisymmetry():
    g = genus2_model(CurveEab(2, -1))
    assert g.quotient_rhs(-g.alpha, 1) == g.e_minus_rhs
    assert g.quotient_rhs(-g.alpha, -1) == g.e_plus_rhs


def test_hypothesis_case():
    assert str(hypothesis_case(CurveEab(2, -1))) == "Case1(q=5)"
    assert str(hypothesis_case(CurveEab(1, 1))) == "Case1(q=2)"
    assert str(hypothesis_case(CurveEab(4, -5))) == "Case2(q1=199, q2=5)"
    none = hypothesis_case(CurveEab(2, 1))
    assert none.kind == "none" and str(none) == "None"


def test_tamagawa_numbers():
    c = CurveEab(2, -1)
    assert tamagawa_number(c, 7, 1, "E") == 1
    assert tamagawa_number(c, 7, 1, "Eprime") == 3
    assert tamagawa_number(c, 5, 1, "E") == 1
    with pytest.raises(DomainError):
        tamagawa_number(c, 11, 1)
    with pytest.raises(DomainError):
        tamagawa_number(c, 7, 7)
    with pytest.raises(DomainError):
        tamagawa_number(c, 3, 1)
    with pytest.raises(ValueError):
        tamagawa_number(c, 7, 1, "F")
