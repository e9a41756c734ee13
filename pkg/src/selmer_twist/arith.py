"""Exact integer and p-adic predicate arithmetic.

Everything here works on Python integers; nothing is approximated.  The
p-adic predicates use closed-form unit-residue criteria:

* squares: even valuation, and the unit part is a quadratic residue mod p
  (p odd) or is 1 mod 8 (p = 2);
* cubes: valuation divisible by 3, and the unit part is a cubic residue
  mod p (p = 1 mod 3), anything (p = 2 mod 3), or +-1 mod 9 (p = 3).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import FactorizationIncomplete

FACTOR_BOUND = 2**96

# Miller-Rabin with the first 13 prime bases is deterministic below this
# (Sorenson-Webster); above it a Pratt certificate is built instead.
_MR_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 1 << 12
_RHO_MAX_STEPS = 1 << 27


def _small_primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = _small_primes(_TRIAL_LIMIT)


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit."""
    if limit < 2:
        return []
    if limit <= _TRIAL_LIMIT:
        return [p for p in _SMALL_PRIMES if p <= limit]
    return _small_primes(limit)


def _miller_rabin(n, bases):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic primality test for n <= FACTOR_BOUND."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:60]:
        if n == p:
            return True
        if n % p == 0:
            return False
    if not _miller_rabin(n, _MR_BASES):
        return False
    if n < _MR_BOUND:
        return True
    if n > FACTOR_BOUND:
        raise FactorizationIncomplete(f"primality of {n} not certified above 2^96")
    return _pratt(n)


def _pratt(n):
    # Lucas: n is prime iff some g has order n - 1 modulo n.
    qs = [q for q, _ in factorize(n - 1).factors]
    for g in range(2, 200):
        if pow(g, n - 1, n) != 1:
            return False
        if all(pow(g, (n - 1) // q, n) != 1 for q in qs):
            return True
    raise FactorizationIncomplete(f"no Lucas witness found for {n}")


def _brent_rho(n, rng):
    if n % 2 == 0:
        return 2
    steps = 0
    while steps < _RHO_MAX_STEPS:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            steps += r
            if steps > _RHO_MAX_STEPS:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationIncomplete(f"rho found no factor of {n}")


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def _split(n, out, rng):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = math.isqrt(n)
    if root * root == n:
        _split(root, out, rng)
        _split(root, out, rng)
        return
    f = _brent_rho(n, rng)
    _split(f, out, rng)
    _split(n // f, out, rng)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Complete prime factorization of a nonzero integer.

    Correct for |n| <= 2**96; larger inputs either factor completely or
    raise FactorizationIncomplete.  Never returns a partial answer.
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    sign = -1 if n < 0 else 1
    m = abs(n)
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        # deterministic seed: repeated calls give identical work
        _split(m, out, random.Random(m))
    return Factorization(sign, tuple(sorted(out.items())))


def valuation(n: int, p: int) -> int:
    """Largest k with p**k dividing n."""
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def unit_part(n: int, p: int) -> tuple[int, int]:
    """Split n = p**v * u with p not dividing u; returns (v, u)."""
    v = valuation(n, p)
    return v, n // p**v


def power_free_rep(d: int, k: int) -> int:
    """The unique k-th-power-free integer in the class of d mod Q^x^k."""
    if d == 0:
        raise ValueError("zero has no power-free representative")
    if k < 1:
        raise ValueError("k must be positive")
    # the quotient d/d0 must be a k-th power of a positive rational
    out = -1 if d < 0 else 1
    for p, e in factorize(d).factors:
        out *= p ** (e % k)
    return out


@dataclass(frozen=True, order=True)
class TwistClass:
    """A sixth-power-free nonzero integer representing a class in Q^x/Q^x6."""

    d: int

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("twist class must be nonzero")
        if power_free_rep(self.d, 6) != self.d:
            raise ValueError(f"{self.d} is not sixth-power-free")

    @classmethod
    def of(cls, n: int) -> "TwistClass":
        return cls(power_free_rep(n, 6))

    @property
    def height(self) -> int:
        return abs(self.d)

    def __int__(self):
        return self.d


def as_twist(d) -> TwistClass:
    """Accept an int or a TwistClass; ints are normalized."""
    if isinstance(d, TwistClass):
        return d
    return TwistClass.of(int(d))


def height(d) -> int:
    """Height of a twist class over Q: absolute value of the sixth-power-free lift."""
    return as_twist(d).height


def is_square_in_Qp(d: int, p: int) -> bool:
    if d == 0:
        raise ValueError("d must be nonzero")
    v, u = unit_part(d, p)
    if v % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


def is_cube_in_Qp(d: int, p: int) -> bool:
    if d == 0:
        raise ValueError("d must be nonzero")
    v, u = unit_part(d, p)
    if v % 3:
        return False
    if p == 3:
        return u % 9 in (1, 8)
    if p % 3 == 2:
        return True
    return pow(u % p, (p - 1) // 3, p) == 1


def is_sixth_power_in_Qp(d: int, p: int) -> bool:
    return is_square_in_Qp(d, p) and is_cube_in_Qp(d, p)
