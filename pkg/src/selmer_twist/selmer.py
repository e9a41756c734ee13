"""Local and global Selmer ratios for the 3-isogeny diagram of a sextic twist.

For a twist d of the abelian surface attached to E_{a,b}, the isogeny
pi_d factors through three 3-isogenies in three ways,

    pi_d = phi'_d . phi_d = psi'_d . psi_d = eta'_d . eta_d,

and each local ratio c_v(alpha) = #coker / #ker is a power of 3.  Ratios
are kept as integer exponents throughout.

The rules used, for d in Sigma:

* primes p not dividing 3*f*d: every ratio is 1;
* primes p dividing d: every ratio (eta included) is 1;
* p = 3: c_3(phi) = 1, c_3(phi') = 3;
* infinity: 1/3 for d > 0 and 1 for d < 0 (phi, phi', psi, psi', eta);
* bad primes p not dividing 3d: the bad-reduction table for phi, phi'
  (split by p = 2, p = 1 mod 3, p = 2 mod 3, the square class of d and of
  -3d, and whether p divides a^3 - 27b or b); psi' and psi come from the
  elliptic 3-isogeny theta: c_p(psi'_d) = c_p(theta_d) and
  c_p(psi_d) = c_p(theta-hat_{-3d}) = 1 / c_p(theta_{-3d}).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .arith import as_twist, factorize, is_square_in_Qp, power_free_rep
from .congruence import sigma_set
from .curve import CurveEab, ReductionType, frac_valuation, j_invariants, twisted_reduction_type
from .errors import DomainError, NotComputableError, NotInSigmaError

INF = "inf"


class IsogenyId(enum.Enum):
    PHI = "phi"
    PHI_PRIME = "phi'"
    PSI = "psi"
    PSI_PRIME = "psi'"
    ETA = "eta"
    ETA_PRIME = "eta'"
    PI = "pi"
    THETA = "theta"
    THETA_HAT_MINUS3 = "theta_hat_-3"

    @classmethod
    def parse(cls, s):
        if isinstance(s, cls):
            return s
        for iso in cls:
            if s in (iso.value, iso.name, iso.name.lower()):
                return iso
        raise ValueError(f"unknown isogeny {s!r}")


FOUR = (IsogenyId.PHI, IsogenyId.PHI_PRIME, IsogenyId.PSI, IsogenyId.PSI_PRIME)


@dataclass(frozen=True, order=True)
class SelmerRatio:
    """The exact value 3**exponent."""

    exponent: int

    @property
    def value(self) -> Fraction:
        return Fraction(3) ** self.exponent

    def __mul__(self, other):
        return SelmerRatio(self.exponent + other.exponent)

    def __truediv__(self, other):
        return SelmerRatio(self.exponent - other.exponent)

    def __str__(self):
        return str(self.value)


def check_sigma(c: CurveEab, d: int) -> None:
    reason = sigma_set(c).violation(d)
    if reason is not None:
        raise NotInSigmaError(d, reason)


# rows: (d square, -3d square, neither) at p = 2; (d square, d not square) at odd p.
# entries: exponent of (c_p(phi_d), c_p(phi'_d)).
_TABLE = {
    (2, "m"): [(0, -1), (1, 0), (0, 0)],
    (2, "b"): [(-1, 0), (0, 1), (0, 0)],
    (1, "m"): [(1, -1), (0, 0)],
    (1, "b"): [(-1, 1), (0, 0)],
    (-1, "m"): [(0, -1), (1, 0)],
    (-1, "b"): [(-1, 0), (0, 1)],
}


def bad_prime_table(c: CurveEab, p: int, d: int) -> tuple[int, int]:
    """Exponents of (c_p(phi_d), c_p(phi'_d)) at a bad prime p not dividing 3d.

    Pure table lookup; no Sigma check, so it can be evaluated at -3d too.
    """
    if p == 3 or d % p == 0:
        raise DomainError(f"table needs p not dividing 3d (p={p}, d={d})")
    in_m, in_b = c.m % p == 0, c.b % p == 0
    if in_m and in_b:
        raise DomainError(f"p={p} divides both a^3-27b and b")
    if not (in_m or in_b):
        raise DomainError(f"p={p} is a prime of good reduction")
    column = "m" if in_m else "b"
    if p == 2:
        row = 0 if is_square_in_Qp(d, 2) else 1 if is_square_in_Qp(-3 * d, 2) else 2
        return _TABLE[(2, column)][row]
    row = 0 if is_square_in_Qp(d, p) else 1
    return _TABLE[(1 if p % 3 == 1 else -1, column)][row]


def theta_local_ratio(c: CurveEab, d, p: int, dual: bool = False) -> SelmerRatio:
    """c_p(theta_d) for the elliptic 3-isogeny theta: E -> E' at a bad prime p not dividing 3d.

    Nonsplit (or, at 2, ramified-additive) twists give 1; split twists give
    v_p(j(E')) / v_p(j(E)), which is 3 or 1/3.  With dual=True this returns
    c_p(theta-hat_{-3d}) = 1 / c_p(theta_{-3d}).
    """
    d = as_twist(d).d
    if p not in c.bad_primes:
        raise DomainError(f"p={p} does not divide the conductor")
    if p == 3 or d % p == 0:
        raise DomainError(f"p={p} divides 3d")
    if dual:
        return SelmerRatio(-theta_local_ratio(c, power_free_rep(-3 * d, 6), p).exponent)
    if p == 2 and d % 4 == 3:
        # additive potentially multiplicative fibre: Tamagawa numbers are 2-powers
        return SelmerRatio(0)
    if twisted_reduction_type(c, p, d) is ReductionType.NONSPLIT:
        return SelmerRatio(0)
    j, j_prime = j_invariants(c)
    ratio = Fraction(frac_valuation(j_prime, p), frac_valuation(j, p))
    if ratio == 3:
        return SelmerRatio(1)
    if ratio == Fraction(1, 3):
        return SelmerRatio(-1)
    raise DomainError(f"unexpected valuation ratio {ratio} at p={p}")


def local_ratio_infty(iso, d) -> SelmerRatio:
    iso = IsogenyId.parse(iso)
    d = as_twist(d).d
    if iso is IsogenyId.ETA_PRIME:
        raise NotComputableError("eta' is only constrained through pi = eta' . eta")
    if iso is IsogenyId.PI:
        return SelmerRatio(-2 if d > 0 else 0)
    return SelmerRatio(-1 if d > 0 else 0)


def local_ratio(c: CurveEab, iso, d, p) -> SelmerRatio:
    """c_p(alpha_d) for alpha in the diagram and d in Sigma; p is a prime or INF."""
    iso = IsogenyId.parse(iso)
    d = as_twist(d).d
    check_sigma(c, d)
    if p == INF:
        return local_ratio_infty(iso, d)
    if iso is IsogenyId.PI:
        return local_ratio(c, IsogenyId.PHI, d, p) * local_ratio(c, IsogenyId.PHI_PRIME, d, p)
    if iso is IsogenyId.ETA and d % p == 0:
        return SelmerRatio(0)
    if iso in (IsogenyId.ETA, IsogenyId.ETA_PRIME):
        raise NotComputableError(f"c_{p}({iso.value}) is only bounded below")
    if d % p == 0:
        return SelmerRatio(0)
    if p == 3:
        upper = iso in (IsogenyId.PHI_PRIME, IsogenyId.PSI, IsogenyId.THETA_HAT_MINUS3)
        return SelmerRatio(1 if upper else 0)
    if p not in c.bad_primes:
        return SelmerRatio(0)
    if iso is IsogenyId.PHI:
        return SelmerRatio(bad_prime_table(c, p, d)[0])
    if iso is IsogenyId.PHI_PRIME:
        return SelmerRatio(bad_prime_table(c, p, d)[1])
    if iso in (IsogenyId.PSI_PRIME, IsogenyId.THETA):
        return theta_local_ratio(c, d, p)
    return theta_local_ratio(c, d, p, dual=True)


def places(c: CurveEab, d) -> list:
    """The places that can contribute: infinity, 3, bad primes and primes dividing d."""
    d = as_twist(d).d
    finite = {3} | set(c.bad_primes) | set(factorize(d).primes())
    return [INF] + sorted(finite)


def local_ratios(c: CurveEab, iso, d) -> dict:
    return {v: local_ratio(c, iso, d, v) for v in places(c, d)}


def global_ratio(c: CurveEab, iso, d) -> SelmerRatio:
    """Product of local ratios; every other place contributes 1."""
    iso = IsogenyId.parse(iso)
    if iso in (IsogenyId.ETA, IsogenyId.ETA_PRIME):
        raise NotComputableError(f"c({iso.value}) is only bounded, see eta_exponent_bound")
    return SelmerRatio(sum(r.exponent for r in local_ratios(c, iso, d).values()))


def eta_exponent_bound(c: CurveEab, d) -> int:
    """Smallest m certified by local bounds with c(eta_d) >= 3^-m.

    c_v(eta_d) >= 1/#A_d[eta_d](Q_v), and the kernel has a rational point
    exactly when d is a square at v; at primes dividing d the ratio is 1.
    """
    d = as_twist(d).d
    check_sigma(c, d)
    m = int(d > 0) + int(is_square_in_Qp(d, 3))
    m += sum(is_square_in_Qp(d, p) for p in c.bad_primes if d % p)
    return m


def theta_global_exponent(c: CurveEab, d) -> int:
    """log_3 c(theta_d), summed over places via the elliptic isogeny."""
    d = as_twist(d).d
    check_sigma(c, d)
    total = -1 if d > 0 else 0
    for p in c.bad_primes:
        if d % p:
            total += theta_local_ratio(c, d, p).exponent
    return total


def parity_of_theta(c: CurveEab, d) -> str:
    return "odd" if theta_global_exponent(c, d) % 2 else "even"
