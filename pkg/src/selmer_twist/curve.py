"""Elliptic curves E_{a,b}: y^2 + a*x*y + b*y = x^3 with the rational 3-torsion point (0, 0).

The isogenous curve E' = E/<(0,0)> is never modelled as a curve; only its
j-invariant is needed.  With gcd(a, b) = 1 and 3 not dividing ab the given
model is minimal and semistable away from 3, and has good reduction at 3,
so v_p(minimal discriminant) = -v_p(j) at every bad prime.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .arith import as_twist, factorize, is_square_in_Qp, valuation
from .errors import (
    DivisibleByThreeError,
    DomainError,
    NotCoprimeError,
    SingularCurveError,
)


class ReductionType(enum.Enum):
    GOOD = "good"
    SPLIT = "split"
    NONSPLIT = "nonsplit"

    @property
    def multiplicative(self):
        return self is not ReductionType.GOOD


@dataclass(frozen=True)
class CurveEab:
    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if math.gcd(a, b) != 1:
            raise NotCoprimeError(f"gcd({a}, {b}) != 1")
        if (a * b) % 3 == 0:
            raise DivisibleByThreeError(f"3 divides ab for (a, b) = ({a}, {b})")
        if b == 0 or a**3 - 27 * b == 0:
            raise SingularCurveError(f"zero discriminant for (a, b) = ({a}, {b})")

    def __str__(self):
        return f"E_({self.a},{self.b})"

    @property
    def m(self) -> int:
        """a^3 - 27b, the factor of the discriminant prime to b."""
        return self.a**3 - 27 * self.b

    @property
    def c4(self) -> int:
        return self.a * (self.a**3 - 24 * self.b)

    @property
    def c6(self) -> int:
        a, b = self.a, self.b
        return -(a**6) + 36 * a**3 * b - 216 * b**2

    @cached_property
    def bad_primes(self) -> tuple[int, ...]:
        return tuple(sorted(set(factorize(self.b).primes()) | set(factorize(self.m).primes())))

    @cached_property
    def conductor(self) -> int:
        # semistable: squarefree product of the bad primes
        return math.prod(self.bad_primes)


def new_curve(a: int, b: int) -> CurveEab:
    return CurveEab(a, b)


def discriminant(c: CurveEab) -> int:
    return c.b**3 * c.m


def weierstrass_discriminant(a1, a2, a3, a4, a6):
    """Discriminant of a general Weierstrass model (standard b-invariant formulas)."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def weierstrass_j(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    c4 = b2 * b2 - 24 * b4
    return Fraction(c4**3) / weierstrass_discriminant(a1, a2, a3, a4, a6)


def j_invariants(c: CurveEab) -> tuple[Fraction, Fraction]:
    """(j(E), j(E')) as exact rationals."""
    a, b, m = c.a, c.b, c.m
    j = Fraction(a**3 * (a**3 - 24 * b) ** 3, b**3 * m)
    j_prime = Fraction(a**3 * (a**3 + 216 * b) ** 3, b * m**3)
    return j, j_prime


def frac_valuation(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def bad_primes(c: CurveEab) -> set[int]:
    return set(c.bad_primes)


def reduction_type(c: CurveEab, p: int) -> ReductionType:
    if c.b % p and c.m % p:
        return ReductionType.GOOD
    if p == 2:
        # the model is minimal at 2 (c4 is odd whenever 2 is bad)
        return ReductionType.SPLIT if is_square_in_Qp(-c.c4 * c.c6, 2) else ReductionType.NONSPLIT
    if c.b % p == 0:
        return ReductionType.SPLIT
    return ReductionType.SPLIT if p % 3 == 1 else ReductionType.NONSPLIT


def _flip(kind):
    return ReductionType.NONSPLIT if kind is ReductionType.SPLIT else ReductionType.SPLIT


def twisted_reduction_type(c: CurveEab, p: int, d) -> ReductionType:
    """Reduction type of the quadratic twist E_d at p, for p not dividing d.

    At p = 2 a twist by d = 3 mod 4 is ramified and makes a bad fibre
    additive; that case is rejected together with p | d.
    """
    d = as_twist(d).d
    if d % p == 0:
        raise DomainError(f"p={p} divides d={d}: twist may be additive")
    base = reduction_type(c, p)
    if base is ReductionType.GOOD:
        return base
    if p == 2 and d % 4 == 3:
        raise DomainError(f"d={d} is ramified at 2: twist has additive reduction")
    return base if is_square_in_Qp(d, p) else _flip(base)


@dataclass(frozen=True)
class Genus2Model:
    """y^2 = x^6 + alpha x^3 + 1 together with its two elliptic quotients.

    e_plus_rhs / e_minus_rhs are the coefficients (c3, c2, c1, c0) of
    x^3 + (3x + 2 +- alpha)^2.
    """

    alpha: Fraction
    e_plus_rhs: tuple[Fraction, Fraction, Fraction, Fraction]
    e_minus_rhs: tuple[Fraction, Fraction, Fraction, Fraction]

    @staticmethod
    def quotient_rhs(alpha, sign):
        t = 2 + sign * alpha
        return (Fraction(1), Fraction(9), Fraction(6) * t, t * t)

    def j_plus(self):
        _, a2, a4, a6 = self.e_plus_rhs
        return weierstrass_j(0, a2, 0, a4, a6)

    def j_minus(self):
        _, a2, a4, a6 = self.e_minus_rhs
        return weierstrass_j(0, a2, 0, a4, a6)


def genus2_model(c: CurveEab) -> Genus2Model:
    alpha = Fraction(108 * c.b, c.a**3) - 2
    return Genus2Model(alpha, Genus2Model.quotient_rhs(alpha, 1), Genus2Model.quotient_rhs(alpha, -1))


@dataclass(frozen=True)
class HypothesisCase:
    kind: str  # "case1", "case2" or "none"
    witnesses: tuple[int, ...] = ()

    def __str__(self):
        if self.kind == "case1":
            return f"Case1(q={self.witnesses[0]})"
        if self.kind == "case2":
            return f"Case2(q1={self.witnesses[0]}, q2={self.witnesses[1]})"
        return "None"


def hypothesis_case(c: CurveEab) -> HypothesisCase:
    """Which positive-proportion hypothesis holds, with the smallest witnesses.

    Case 1: some prime q = 2 mod 3 divides a^3 - 27b.
    Case 2: primes q1 = 1 mod 3 dividing a^3 - 27b and q2 = 2 mod 3 dividing b.
    """
    m_primes = factorize(c.m).primes()
    b_primes = factorize(c.b).primes()
    q = [p for p in m_primes if p % 3 == 2]
    if q:
        return HypothesisCase("case1", (q[0],))
    q1 = [p for p in m_primes if p % 3 == 1]
    q2 = [p for p in b_primes if p % 3 == 2]
    if q1 and q2:
        return HypothesisCase("case2", (q1[0], q2[0]))
    return HypothesisCase("none")


def tamagawa_number(c: CurveEab, p: int, d, which: str = "E") -> int:
    """Tamagawa number of E_d or E'_d at a multiplicative prime p not dividing 3d.

    Split: -v_p(j).  Nonsplit: 2 if v_p(j) is even, else 1.
    """
    if which not in ("E", "Eprime"):
        raise ValueError(f"which must be 'E' or 'Eprime', not {which!r}")
    d = as_twist(d).d
    if p == 3 or d % p == 0:
        raise DomainError(f"tamagawa_number refuses p={p} with d={d}")
    kind = twisted_reduction_type(c, p, d)
    if kind is ReductionType.GOOD:
        raise DomainError(f"good reduction at p={p}")
    j, j_prime = j_invariants(c)
    v = -frac_valuation(j if which == "E" else j_prime, p)
    if kind is ReductionType.SPLIT:
        return v
    return 2 if v % 2 == 0 else 1
