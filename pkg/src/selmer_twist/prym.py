"""Twist families of Prym surfaces A_d attached to y^3 = (x^2 - d a^2)(x^2 - d b^2).

The local picture is much coarser than for E_{a,b}: on Sigma every finite
ratio away from 3 is 1, the ratio at infinity is 1/3 or 1 by sign, and at 3
only the product c_3(phi_d) c_3(phi'_d) c_3(phi_{-27d}) c_3(phi'_{-27d}) = 9
is known, with each factor 1 or 3.  So the c_3 data is an input (a scenario)
and the rank bound is a two-branch case analysis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .arith import as_twist, factorize, is_square_in_Qp, is_sixth_power_in_Qp
from .congruence import CongruenceSet, LocalCondition, density
from .correlation import correlation_bound
from .errors import InvalidCurveError, NotComputableError, NotInSigmaError, ScenarioError
from .selmer import FOUR, INF, IsogenyId, SelmerRatio

# inputs to the Sigma' branch, taken from prior work
SEL_PHI_TRIVIAL_SHARE = Fraction(1, 2)
SEL_PHI_PRIME_RANK1_SHARE = Fraction(5, 6)


@dataclass(frozen=True)
class PrymFamily:
    a: int
    b: int
    bad_primes: tuple[int, ...] = ()
    default_bad_set: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not (self.a > self.b > 0):
            raise InvalidCurveError(f"need a > b > 0, got (a, b) = ({self.a}, {self.b})")
        if self.bad_primes:
            primes = set(self.bad_primes)
            object.__setattr__(self, "default_bad_set", False)
        else:
            # over-approximation: primes of 6ab(a-b)(a+b)
            n = 6 * self.a * self.b * (self.a - self.b) * (self.a + self.b)
            primes = set(factorize(n).primes())
        object.__setattr__(self, "bad_primes", tuple(sorted(primes | {3})))

    @property
    def places(self) -> tuple[int, ...]:
        """Primes dividing 3f, 3 included."""
        return self.bad_primes


def _prym_pred(p):
    return lambda n: not is_square_in_Qp(n, p) and not is_square_in_Qp(-3 * n, p)


def prym_sigma(f: PrymFamily) -> CongruenceSet:
    """Squarefree d with d and -3d nonsquares at every prime dividing 3f."""
    conds = [
        LocalCondition.from_predicate(p, _prym_pred(p), "square", valuations=(0, 1), by_character=True)
        for p in f.places
    ]
    return CongruenceSet("squarefree", tuple(conds))


def check_prym_sigma(f: PrymFamily, d: int) -> None:
    reason = prym_sigma(f).violation(d)
    if reason is not None:
        raise NotInSigmaError(d, reason)


def prym_local_ratio(f: PrymFamily, iso, d, p) -> Optional[SelmerRatio]:
    """c_p(alpha_d) for alpha in {phi, phi', psi, psi'}; None where only the c_3 product is known."""
    iso = IsogenyId.parse(iso)
    if iso not in FOUR:
        raise NotComputableError(f"no Prym rule for {iso.value}")
    d = as_twist(d).d
    check_prym_sigma(f, d)
    if p == INF:
        return SelmerRatio(-1 if d > 0 else 0)
    if p == 3:
        return None
    return SelmerRatio(0)


@dataclass(frozen=True)
class C3Scenario:
    """Exponents of (c_3(phi_d), c_3(phi'_d), c_3(phi_{-27d}), c_3(phi'_{-27d}))."""

    exponents: tuple[int, int, int, int]

    def __post_init__(self):
        e = tuple(self.exponents)
        if len(e) != 4 or any(x not in (0, 1) for x in e):
            raise ScenarioError(f"exponents must be four values in {{0, 1}}, got {e}")
        if sum(e) != 2:
            raise ScenarioError(f"exponents must sum to 2 (c_3([3]) = 9), got {e}")
        object.__setattr__(self, "exponents", e)

    @property
    def branch(self) -> str:
        e1, e2 = self.exponents[:2]
        return "A" if e1 != e2 else "B"

    def __str__(self):
        return "(" + ",".join(map(str, self.exponents)) + ")"


def all_scenarios() -> list[C3Scenario]:
    out = []
    for ones in itertools.combinations(range(4), 2):
        out.append(C3Scenario(tuple(int(i in ones) for i in range(4))))
    return out


def branch_a_proportion() -> Fraction:
    # at least 5/6 have the phi' side of rank 1; at most 1/2 miss Sel(phi) = 0
    return SEL_PHI_PRIME_RANK1_SHARE + SEL_PHI_TRIVIAL_SHARE - 1


def global_phi_exponents(scenario: C3Scenario, d: int) -> tuple[int, int]:
    """log_3 of (c(phi_d), c(phi'_d)): the c_3 input plus the sign at infinity."""
    inf = -1 if d > 0 else 0
    return scenario.exponents[0] + inf, scenario.exponents[1] + inf


def _squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def sign_flip_multiplier(f: PrymFamily, d, limit: int = 10**7) -> int:
    """Smallest |k| with k < 0 squarefree, coprime to d, and a unit sixth power at every p | 3f.

    A sixth power is in particular a square, and d*k then lies in the same
    class as d in Q_p^x / Q_p^x6 at every such p, so all local data there is unchanged.
    """
    d = as_twist(d).d
    step = 8 if 2 in f.places else 2
    for n in range(step - 1, limit, step):
        k = -n
        if math.gcd(k, d) != 1 or not _squarefree(n):
            continue
        if all(k % p and is_sixth_power_in_Qp(k, p) for p in f.places):
            return k
    raise ScenarioError(f"no sign-flip multiplier below {limit}")


def parse_scenario_file(text: str) -> dict[int, C3Scenario]:
    """Rows 'd,e1,e2,e3,e4'; blank lines and '#' comments are skipped."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [t.strip() for t in line.split(",")]
        if len(parts) != 5:
            raise ScenarioError(f"line {lineno}: expected 5 comma-separated integers")
        try:
            d, *e = (int(t) for t in parts)
        except ValueError:
            raise ScenarioError(f"line {lineno}: non-integer field") from None
        if d in out:
            raise ScenarioError(f"line {lineno}: duplicate d={d}")
        try:
            out[d] = C3Scenario(tuple(e))
        except ScenarioError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
    return out


@dataclass
class PrymCertificate:
    family: PrymFamily
    sigma_density: float
    branch_a: dict
    branch_b: dict
    resolved: Optional[str] = None  # "A", "B", "mixed" or None without an oracle
    rows: list = field(default_factory=list)
    narrative: list = field(default_factory=list)


NARRATIVE = [
    "Away from 3 and infinity every local ratio on Sigma is 1; at infinity it is 1/3 for d > 0 and 1 for d < 0.",
    "At 3 only the product of the four c_3 values (equal to 9) is known, each factor being 1 or 3.",
    "Branch A inputs from prior work: Sel(phi_d) = 0 = Sel(phi-hat_d) for at least 1/2 of Sigma', and the phi' side has dimension 1 for at least 5/6.",
    "Branch B: outside Sigma' the four ratios agree, so T is nonempty with positive density after the sign flip; the correlation trick then gives rank 0.",
    "The bad-prime set is an over-approximation unless supplied; enlarging it only shrinks Sigma.",
]


def _branch_b(f: PrymFamily) -> dict:
    # on prym Sigma, d is a nonsquare at 3 and at every bad prime, so the
    # eta lower bound only loses a factor at infinity: m <= 1 on all of T
    cert = correlation_bound(1)
    return {
        "condition": "Sigma' has density 0",
        "patterns": {
            "(1,1,0,0)": "d > 0 lies in T directly; d < 0 moves to d*k > 0",
            "(0,0,1,1)": "d < 0 lies in T directly; d > 0 moves to d*k < 0",
        },
        "sign_flip_rule": "k < 0 squarefree, coprime to d, a unit sixth power at every p | 3f",
        "eta_exponent_m": cert.m,
        "rank0_proportion_lb_in_T": cert.s0_lb,
    }


def scenario_analysis(f: PrymFamily, scenario_oracle: Optional[Mapping[int, C3Scenario]] = None) -> PrymCertificate:
    sigma = prym_sigma(f)
    cert = PrymCertificate(
        family=f,
        sigma_density=density(sigma).value,
        branch_a={
            "condition": "Sigma' has positive density",
            "claim": "rank A_d <= 1",
            "proportion_lb_in_sigma_prime": branch_a_proportion(),
            "inputs": [SEL_PHI_TRIVIAL_SHARE, SEL_PHI_PRIME_RANK1_SHARE],
        },
        branch_b=_branch_b(f),
        narrative=list(NARRATIVE),
    )
    if scenario_oracle is None:
        return cert
    branches = set()
    for d, sc in sorted(scenario_oracle.items()):
        if not isinstance(sc, C3Scenario):
            sc = C3Scenario(tuple(sc))
        reason = sigma.violation(d)
        if reason is not None:
            raise ScenarioError(f"d={d} is not in Sigma: {reason}")
        phi, phi_prime = global_phi_exponents(sc, d)
        row = {"d": d, "scenario": sc, "branch": sc.branch, "phi": phi, "phi_prime": phi_prime}
        if sc.branch == "B":
            row["in_T"] = phi == phi_prime == 0
            if not row["in_T"]:
                k = sign_flip_multiplier(f, d)
                row["flip_k"] = k
                row["flipped_phi"] = global_phi_exponents(sc, d * k)
        branches.add(sc.branch)
        cert.rows.append(row)
    cert.resolved = branches.pop() if len(branches) == 1 else ("mixed" if branches else None)
    return cert
