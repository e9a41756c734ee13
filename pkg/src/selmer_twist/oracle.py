"""Brute-force cross-checks for the table-driven code paths.

Each oracle recomputes a quantity by a route that shares no code with the
thing it checks: residue sets by exhaustive powering, Tamagawa ratios from
j-invariant valuations and the sign of -c6 (never the bad-reduction
table), densities by counting.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    as_twist,
    is_cube_in_Qp,
    is_sixth_power_in_Qp,
    is_square_in_Qp,
    power_free_rep,
    primes_up_to,
)
from .congruence import CongruenceSet, density, empirical_density, sigma_set
from .curve import CurveEab, frac_valuation, j_invariants
from .errors import DomainError, InvalidCurveError
from .selmer import SelmerRatio, local_ratio

_CLOSED_FORM = {"square": is_square_in_Qp, "cube": is_cube_in_Qp, "sixth": is_sixth_power_in_Qp}


@dataclass
class OracleReport:
    name: str
    checked: int = 0
    mismatches: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def record(self, inp, expected, got):
        self.checked += 1
        if expected != got:
            self.mismatches.append((inp, expected, got))

    def to_dict(self):
        return {
            "name": self.name,
            "checked": self.checked,
            "passed": self.passed,
            "mismatches": [[str(i), str(e), str(g)] for i, e, g in self.mismatches],
            "details": self.details,
        }


def residue_class_oracle(p: int, k: int, predicate: str) -> set[int]:
    """{u^e mod p^k : u a unit} by exhaustive enumeration."""
    if predicate not in _CLOSED_FORM:
        raise ValueError(f"unknown predicate {predicate!r}")
    n = p**k
    if n > 10**6:
        raise ValueError("p^k must be at most 10^6")
    u = np.arange(1, n, dtype=np.int64)
    u = u[u % p != 0]
    cube = u * u % n * u % n
    out = {"square": u * u % n, "cube": cube, "sixth": cube * cube % n}[predicate]
    return set(np.unique(out).tolist())


def _precision_needed(p, predicate):
    if p == 2 and predicate in ("square", "sixth"):
        return 3
    if p == 3 and predicate in ("cube", "sixth"):
        return 2
    return 1


def check_residue_predicates(p: int, k: int, predicate: str) -> OracleReport:
    """Compare the closed-form predicate with the enumerated residue set mod p^k.

    Skipped (zero checks) when p^k is too coarse to decide the predicate.
    """
    report = OracleReport(f"residues p={p} k={k} {predicate}")
    if k < _precision_needed(p, predicate):
        return report
    powers = residue_class_oracle(p, k, predicate)
    closed = _CLOSED_FORM[predicate]
    units = [u for u in range(1, p**k) if u % p]
    report.checked = len(units)
    report.mismatches = [((p, k, u), u in powers, got) for u in units if (u in powers) != (got := closed(u, p))]
    return report


def residue_contract(max_p: int = 100, max_modulus: int = 10**6) -> OracleReport:
    """Run check_residue_predicates for every p <= max_p and p^k <= max_modulus."""
    total = OracleReport("residue contract")
    for p in primes_up_to(max_p):
        k = 1
        while p**k <= max_modulus:
            for pred in _CLOSED_FORM:
                r = check_residue_predicates(p, k, pred)
                total.checked += r.checked
                total.mismatches.extend(r.mismatches)
            k += 1
    return total


def _split_twist(c: CurveEab, p: int, d: int) -> bool:
    # a multiplicative fibre is split iff -c6 is a p-adic square; twisting by d scales c6 by d^3
    return is_square_in_Qp(-c.c6 * d, p)


def _tamagawa(v_j: int, split: bool) -> int:
    n = -v_j
    if split:
        return n
    return 2 if n % 2 == 0 else 1


def _log3(x: Fraction) -> int:
    k, num, den = 0, x.numerator, x.denominator
    while num % 3 == 0:
        num //= 3
        k += 1
    while den % 3 == 0:
        den //= 3
        k -= 1
    if num != 1 or den != 1:
        raise DomainError(f"{x} is not a power of 3")
    return k


def tamagawa_ratio_oracle(c: CurveEab, p: int, d) -> SelmerRatio:
    """c_p(theta_d) = c_p(E'_d) / c_p(E_d) from Tamagawa numbers alone."""
    d = as_twist(d).d
    if p not in c.bad_primes or p == 3 or d % p == 0:
        raise DomainError(f"oracle needs p | conductor and p not dividing 3d (p={p}, d={d})")
    if p == 2 and d % 4 == 3:
        # ramified twist: type I_n^*, both Tamagawa numbers lie in {2, 4}
        return SelmerRatio(0)
    split = _split_twist(c, p, d)
    j, j_prime = j_invariants(c)
    ratio = Fraction(
        _tamagawa(frac_valuation(j_prime, p), split), _tamagawa(frac_valuation(j, p), split)
    )
    return SelmerRatio(_log3(ratio))


def random_curve(rng: random.Random, bound: int = 60) -> CurveEab:
    while True:
        a, b = rng.randint(-bound, bound), rng.randint(-bound, bound)
        try:
            return CurveEab(a, b)
        except InvalidCurveError:
            continue


def random_sigma_twist(c: CurveEab, rng: random.Random, bound: int = 10**5, avoid=None, tries=5000):
    """A random d in Sigma(c) with |d| <= bound, optionally prime to `avoid`."""
    s = sigma_set(c)
    for _ in range(tries):
        d = rng.randint(1, bound) * rng.choice((-1, 1))
        d = power_free_rep(d, 6)
        if avoid is not None and d % avoid == 0:
            continue
        if d in s:
            return d
    raise RuntimeError(f"no Sigma twist found for {c}")


def tamagawa_table_run(samples: int = 1000, seed: int = 0) -> OracleReport:
    """Table versus Tamagawa-ratio oracle on random (curve, p, d)."""
    rng = random.Random(seed)
    report = OracleReport("bad-prime table vs tamagawa oracle")
    columns = {"p=2": 0, "p=1 mod 3": 0, "p=2 mod 3": 0, "p|b": 0, "p|a^3-27b": 0}
    while report.checked < samples:
        c = random_curve(rng)
        p = rng.choice(c.bad_primes)
        d = random_sigma_twist(c, rng, avoid=p)
        expected = tamagawa_ratio_oracle(c, p, d)
        got = local_ratio(c, "phi", d, p)
        report.record((c.a, c.b, p, d), expected.exponent, got.exponent)
        columns["p=2" if p == 2 else "p=1 mod 3" if p % 3 == 1 else "p=2 mod 3"] += 1
        columns["p|b" if c.b % p == 0 else "p|a^3-27b"] += 1
    report.details["coverage"] = columns
    return report


def density_oracle(s: CongruenceSet, X: int) -> Fraction:
    """Exact count ratio #{d in s : |d| <= X} / 2X."""
    if X > 10**7:
        raise ValueError("X must be at most 10^7")
    return empirical_density(s, X)


def density_check(s: CongruenceSet, X: int, rel_tol: float) -> OracleReport:
    report = OracleReport(f"density X={X}")
    predicted = density(s).value
    observed = float(density_oracle(s, X))
    rel = abs(observed - predicted) / predicted
    report.details.update(predicted=predicted, observed=observed, relative_error=rel, tolerance=rel_tol)
    report.record(X, True, rel <= rel_tol)
    return report


def is_prime_oracle(n: int) -> bool:
    """Trial division, for cross-checking the fast primality test."""
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True

