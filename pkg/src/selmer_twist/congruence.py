"""Congruence-defined twist sets: membership, height enumeration, densities.

A local condition at p is stored as a finite set of *local classes*
(v, r): the valuation v = v_p(d) in 0..5 and the residue r of the signed
unit part d / p^v modulo M(p) (8 for p = 2, 27 for p = 3, p otherwise),
or r = None for "any unit".  That modulus determines every square, cube
and sixth-power question at p, so all conditions reduce to class sets.

Densities follow the independent-local-factor model inside an ambient
set of integers whose valuations are restricted at every prime:

    squarefree         v_p in {0, 1}
    sixth-power-free   v_p in {0, ..., 5}
    sigma              v_p in {0, 1, 3, 5}

Within an ambient with allowed valuations V, v_p = j has probability
p^-j / sum_{i in V} p^-i and unit parts are equidistributed mod M(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Optional

import numpy as np

from .arith import factorize, is_cube_in_Qp, is_square_in_Qp, power_free_rep, primes_up_to, unit_part
from .curve import CurveEab, hypothesis_case
from .errors import HypothesisNoneError

AMBIENTS = {
    "squarefree": (0, 1),
    "sixth-power-free": (0, 1, 2, 3, 4, 5),
    "sigma": (0, 1, 3, 5),
}
SCOPES = ("all", "neg", "pos")
KINDS = ("valuation", "residue", "square", "cube", "sixth", "divisibility")


# residue sets mod p are stored explicitly only up to this prime
EXPLICIT_LIMIT = 10**5


def class_modulus(p: int) -> int:
    if p == 2:
        return 8
    if p == 3:
        return 27
    return p


def n_units(p: int) -> int:
    m = class_modulus(p)
    return m - m // p


@lru_cache(maxsize=None)
def unit_residues(p: int) -> tuple[int, ...]:
    m = class_modulus(p)
    return tuple(r for r in range(1, m) if r % p)


def unit_labels(p: int) -> tuple[str, ...]:
    """Character classes of units at p > 3: (s)quare/(n)ot, then (c)ube/(n)ot."""
    if p <= 3:
        raise ValueError("character labels are only used for p > 3")
    return ("sc", "sn", "nc", "nn") if p % 3 == 1 else ("sc", "nc")


def unit_label(u: int, p: int) -> str:
    u %= p
    sq = pow(u, (p - 1) // 2, p) == 1
    cube = p % 3 == 2 or pow(u, (p - 1) // 3, p) == 1
    return ("s" if sq else "n") + ("c" if cube else "n")


def label_fraction(label: str, p: int) -> Fraction:
    if p % 3 == 2:
        return Fraction(1, 2)
    return Fraction(1, 6) if label[1] == "c" else Fraction(1, 3)


@lru_cache(maxsize=4096)
def label_representatives(p: int) -> dict:
    """Smallest positive unit in each character class."""
    want, out, r = set(unit_labels(p)), {}, 1
    while len(out) < len(want):
        out.setdefault(unit_label(r, p), r)
        r += 1
    return out


@dataclass(frozen=True)
class LocalCondition:
    prime: int
    kind: str
    # (v, r): r is a residue mod class_modulus(prime), a character label, or None for any unit
    allowed: frozenset
    scope: str = "all"

    def __post_init__(self):
        if self.scope not in SCOPES:
            raise ValueError(f"bad scope {self.scope!r}")
        if not self.allowed:
            raise ValueError(f"empty local condition at p={self.prime}")
        object.__setattr__(self, "allowed", _canonical(self.prime, self.allowed))

    @classmethod
    def from_predicate(
        cls,
        p: int,
        pred: Callable[[int], bool],
        kind: str,
        scope: str = "all",
        valuations: Iterable[int] = range(6),
        by_character: bool = False,
    ) -> "LocalCondition":
        """Collect every class (v, r) whose representative p^v * r satisfies pred.

        The representative is p-adically interchangeable with any d in the
        class, whatever its sign, so pred is written directly in terms of d.
        With by_character (p > 3 only) pred must depend on d's square and
        cube classes alone and is evaluated once per character label.
        """
        if by_character and p > 3:
            reps = label_representatives(p)
            allowed = {(v, lab) for v in valuations for lab, r in reps.items() if pred(p**v * r)}
        else:
            if p > EXPLICIT_LIMIT:
                raise ValueError(f"p={p} too large for an explicit residue set")
            allowed = {(v, r) for v in valuations for r in unit_residues(p) if pred(p**v * r)}
        return cls(p, kind, frozenset(allowed), scope)

    def applies_to(self, sign: int) -> bool:
        return self.scope == "all" or (self.scope == "pos") == (sign > 0)

    @cached_property
    def _has_labels(self) -> bool:
        return any(isinstance(r, str) for _, r in self.allowed)

    def contains_class(self, v: int, u: int) -> bool:
        p = self.prime
        if (v, None) in self.allowed or (v, u % class_modulus(p)) in self.allowed:
            return True
        return self._has_labels and (v, unit_label(u, p)) in self.allowed

    def contains(self, d: int) -> bool:
        v, u = unit_part(d, self.prime)
        return self.contains_class(v, u)

    def measure(self, valuations) -> Fraction:
        """Probability of this condition for a random member of the ambient."""
        p = self.prime
        weights = {v: Fraction(1, p**v) for v in valuations}
        total = sum(weights.values())
        out = Fraction(0)
        for v, r in self.allowed:
            if v not in weights:
                continue
            if r is None:
                share = Fraction(1)
            elif isinstance(r, str):
                share = label_fraction(r, p)
            else:
                share = Fraction(1, n_units(p))
            out += weights[v] / total * share
        return out

    def table(self) -> np.ndarray:
        """Boolean lookup [v, r] over v in 0..5 and residues mod M(p)."""
        p = self.prime
        if p > EXPLICIT_LIMIT:
            raise ValueError(f"no explicit table for p={p}")
        m = class_modulus(p)
        t = np.zeros((6, m), dtype=bool)
        labels = {}
        if self._has_labels:
            for r in unit_residues(p):
                labels.setdefault(unit_label(r, p), []).append(r)
        for v, r in self.allowed:
            if v > 5:
                continue
            if r is None:
                t[v, list(unit_residues(p))] = True
            elif isinstance(r, str):
                t[v, labels.get(r, [])] = True
            else:
                t[v, r] = True
        return t

    def to_line(self) -> str:
        toks = [f"{v}:{'*' if r is None else r}" for v, r in _sorted_classes(self.allowed)]
        return f"p={self.prime} kind={self.kind} allowed={','.join(toks)} scope={self.scope}"

    @classmethod
    def from_line(cls, line: str) -> "LocalCondition":
        fields = dict(tok.split("=", 1) for tok in line.split())
        allowed = set()
        for tok in fields["allowed"].split(","):
            v, r = tok.split(":")
            allowed.add((int(v), None if r == "*" else r if r.isalpha() else int(r)))
        return cls(int(fields["p"]), fields["kind"], frozenset(allowed), fields["scope"])


def _class_key(c):
    v, r = c
    if r is None:
        return (v, 0, 0, "")
    if isinstance(r, str):
        return (v, 1, 0, r)
    return (v, 2, r, "")


def _sorted_classes(allowed):
    return sorted(allowed, key=_class_key)


def _canonical(p, allowed):
    """Normal form: labels where a residue set is a union of character classes, None for all units."""
    m = class_modulus(p)
    by_v: dict = {}
    for v, r in allowed:
        if isinstance(r, str):
            if p <= 3 or r not in unit_labels(p):
                raise ValueError(f"label {r!r} is not valid at p={p}")
        elif r is not None and r % p == 0:
            raise ValueError(f"residue {r} is not a unit at p={p}")
        by_v.setdefault(v, set()).add(r % m if isinstance(r, int) else r)
    out = set()
    for v, rs in by_v.items():
        if None in rs:
            out.add((v, None))
            continue
        ints = {r for r in rs if isinstance(r, int)}
        labels = rs - ints
        if p > 3 and ints and p <= EXPLICIT_LIMIT:
            classes: dict = {}
            for r in unit_residues(p):
                classes.setdefault(unit_label(r, p), set()).add(r)
            if labels:
                ints |= set().union(*(classes[lab] for lab in labels))
            full = {lab for lab, members in classes.items() if members <= ints}
            if set().union(set(), *(classes[lab] for lab in full)) == ints:
                ints, labels = set(), full
        if len(ints) == n_units(p) or (p > 3 and labels == set(unit_labels(p))):
            out.add((v, None))
        else:
            out.update((v, r) for r in ints | labels)
    return frozenset(out)


@dataclass(frozen=True)
class CongruenceSet:
    ambient: str
    conditions: tuple[LocalCondition, ...] = field(default=())

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise ValueError(f"unknown ambient {self.ambient!r}")
        conds = tuple(sorted(self.conditions, key=lambda c: (c.prime, SCOPES.index(c.scope))))
        seen = {}
        for c in conds:
            scopes = seen.setdefault(c.prime, set())
            if c.scope in scopes or ("all" in scopes) or (c.scope == "all" and scopes):
                raise ValueError(f"prime {c.prime} constrained twice")
            scopes.add(c.scope)
        object.__setattr__(self, "conditions", conds)

    @property
    def valuations(self):
        return AMBIENTS[self.ambient]

    @property
    def primes(self) -> list[int]:
        return sorted({c.prime for c in self.conditions})

    def conditions_for(self, sign: int) -> list[LocalCondition]:
        return [c for c in self.conditions if c.applies_to(sign)]

    def violation(self, d: int) -> Optional[str]:
        """None for members, otherwise a description of the first failed condition.

        d is first reduced to its sixth-power-free representative.
        """
        if d == 0:
            raise ValueError("d must be nonzero")
        d = power_free_rep(d, 6)
        for p, e in factorize(d).factors:
            if e not in self.valuations:
                return f"v_{p}(d) = {e} not allowed in {self.ambient} ambient"
        for c in self.conditions_for(d):
            if not c.contains(d):
                return f"local condition failed: {c.to_line()}"
        return None

    def __contains__(self, d) -> bool:
        return self.violation(int(d)) is None

    def to_text(self) -> str:
        return "\n".join([f"ambient={self.ambient}"] + [c.to_line() for c in self.conditions]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CongruenceSet":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("ambient="):
            raise ValueError("missing ambient= header")
        ambient = lines[0].split("=", 1)[1]
        return cls(ambient, tuple(LocalCondition.from_line(ln) for ln in lines[1:]))


def membership(s: CongruenceSet, d: int) -> bool:
    return int(d) in s


# -- densities ---------------------------------------------------------------


@dataclass(frozen=True)
class Density:
    """ambient_density * relative, with the relative factor kept exact."""

    ambient: str
    relative: Fraction

    @property
    def ambient_value(self) -> float:
        return ambient_density(self.ambient)

    @property
    def value(self) -> float:
        return self.ambient_value * float(self.relative)

    def __float__(self):
        return self.value


AMBIENT_SYMBOLIC = {
    "squarefree": "6/pi^2",
    "sixth-power-free": "945/pi^6",
    "sigma": "prod_p (1-1/p)(1+1/p+1/p^3+1/p^5)",
}


@lru_cache(maxsize=None)
def ambient_density(ambient: str) -> float:
    if ambient == "squarefree":
        return 6 / math.pi**2
    if ambient == "sixth-power-free":
        return 945 / math.pi**6
    if ambient == "sigma":
        # 6/pi^2 * prod_p (1 + x + x^3 + x^5)/(1 + x); the tail beyond 1e5 is < 1e-10
        x = 1.0 / np.array(primes_up_to(100_000), dtype=float)
        return 6 / math.pi**2 * float(np.prod((1 + x + x**3 + x**5) / (1 + x)))
    raise ValueError(ambient)


def density(s: CongruenceSet) -> Density:
    """Natural density of s among nonzero integers ordered by |d|.

    Sign-scoped conditions are handled by averaging the two sign branches
    with weight 1/2 each.
    """
    branches = []
    for sign in (-1, 1):
        f = Fraction(1)
        for c in s.conditions_for(sign):
            f *= c.measure(s.valuations)
        branches.append(f)
    return Density(s.ambient, (branches[0] + branches[1]) / 2)


# -- enumeration --------------------------------------------------------------


def _valuation_array(p, n):
    v = np.zeros(len(n), dtype=np.int64)
    pk = p
    while pk <= len(n):
        v[pk - 1 :: pk] += 1
        pk *= p
    return v


def _member_masks(s: CongruenceSet, X: int):
    n = np.arange(1, X + 1, dtype=np.int64)
    base = np.ones(X, dtype=bool)
    allowed_v = np.zeros(64, dtype=bool)
    allowed_v[list(s.valuations)] = True
    for p in primes_up_to(math.isqrt(X)):
        base &= allowed_v[_valuation_array(p, n)]
    masks = {-1: base.copy(), 1: base.copy()}
    for p in s.primes:
        v = _valuation_array(p, n)
        u = n // p**v
        vv = np.minimum(v, 5)
        for sign in (-1, 1):
            for c in s.conditions_for(sign):
                if c.prime == p:
                    masks[sign] &= _condition_mask(c, v, vv, sign * u, masks[sign])
    return n, masks


def _powmod(base, e, p):
    # elementwise base**e mod p; exact in int64 while p < 2**31
    out = np.ones_like(base)
    base = base % p
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def _condition_mask(c: "LocalCondition", v, vv, u, alive):
    p = c.prime
    if p <= EXPLICIT_LIMIT:
        return c.table()[vv, u % class_modulus(p)] & (v <= 5)
    ok = np.zeros(len(u), dtype=bool)
    idx = np.flatnonzero(alive & (v <= 5))
    if not len(idx):
        return ok
    uu, vs = u[idx] % p, v[idx]
    if p < 2**31:
        sq = _powmod(uu, (p - 1) // 2, p) == 1
        cube = np.ones(len(uu), dtype=bool) if p % 3 == 2 else _powmod(uu, (p - 1) // 3, p) == 1
        labels = np.where(sq, "s", "n").astype(object) + np.where(cube, "c", "n").astype(object)
    else:
        labels = np.array([unit_label(int(x), p) for x in uu], dtype=object)
    hit = np.zeros(len(idx), dtype=bool)
    for w, r in c.allowed:
        at_w = vs == w
        if r is None:
            hit |= at_w
        elif isinstance(r, str):
            hit |= at_w & (labels == r)
        else:
            hit |= at_w & (uu == r)
    ok[idx] = hit
    return ok


def enumerate_set(s: CongruenceSet, X: int) -> list[int]:
    """All members with height <= X, ordered by (height, sign)."""
    if X < 1:
        return []
    n, masks = _member_masks(s, X)
    out = []
    neg, pos = masks[-1], masks[1]
    for k in np.flatnonzero(neg | pos):
        h = int(n[k])
        if neg[k]:
            out.append(-h)
        if pos[k]:
            out.append(h)
    return out


def count_members(s: CongruenceSet, X: int) -> int:
    if X < 1:
        return 0
    _, masks = _member_masks(s, X)
    return int(masks[-1].sum() + masks[1].sum())


def empirical_density(s: CongruenceSet, X: int) -> Fraction:
    """Exact count ratio #{members with |d| <= X} / 2X."""
    return Fraction(count_members(s, X), 2 * X)


# -- the concrete twist sets --------------------------------------------------


def _cube(n: int, p: int) -> bool:
    return is_cube_in_Qp(n, p)


@lru_cache(maxsize=256)
def sigma_set(c: CurveEab) -> CongruenceSet:
    """Twists where the local-ratio rules are proven.

    Valuations in {0, 1, 3, 5} everywhere; at 3 the twist is a unit cube;
    at each bad prime p, either p | d or d is a unit cube.
    """
    conds = [LocalCondition.from_predicate(3, lambda n: _cube(n, 3), "cube", valuations=(0,))]
    for p in c.bad_primes:
        conds.append(
            LocalCondition.from_predicate(
                p, lambda n, p=p: n % p == 0 or _cube(n, p), "cube", valuations=(0, 1, 3, 5), by_character=True
            )
        )
    return CongruenceSet("sigma", tuple(conds))


def t_prime_set(c: CurveEab) -> CongruenceSet:
    """The constructive subset of Sigma on which all four global ratios are 1."""
    case = hypothesis_case(c)
    if case.kind == "none":
        raise HypothesisNoneError(f"{c}: neither hypothesis holds")
    special = set(case.witnesses)

    def cond(p, pred, kind, scope="all", valuations=(0, 1, 3, 5)):
        return LocalCondition.from_predicate(p, pred, kind, scope, valuations, by_character=True)

    conds = [cond(3, lambda n: _cube(n, 3), "cube", valuations=(0,))]
    for p in c.bad_primes:
        if p in special:
            continue
        if p == 2:
            pred = lambda n: n % 2 == 0 or not (is_square_in_Qp(n, 2) or is_square_in_Qp(-3 * n, 2))
        elif p % 3 == 1:
            pred = lambda n, p=p: n % p == 0 or (_cube(n, p) and not is_square_in_Qp(n, p))
        else:
            pred = lambda n, p=p: n % p == 0
        conds.append(cond(p, pred, "divisibility"))
    if case.kind == "case1":
        q = case.witnesses[0]
    else:
        q1, q = case.witnesses
        conds.append(cond(q1, lambda n: is_square_in_Qp(n, q1) and _cube(n, q1), "sixth", valuations=(0,)))
    conds.append(cond(q, lambda n: is_square_in_Qp(n, q), "square", "neg", (0,)))
    conds.append(cond(q, lambda n: is_square_in_Qp(-3 * n, q), "square", "pos", (0,)))
    return CongruenceSet("sigma", tuple(conds))


def explicit_T_prop510() -> CongruenceSet:
    """The explicit squarefree twist set for y^2 + 2xy - y = x^3.

    d = +-1, +-8, +-10 mod 27; d = -1, 0 mod 7; d = +-1 mod 5 if d < 0 and
    d = +-2 mod 5 if d > 0.
    """
    conds = [
        LocalCondition.from_predicate(3, lambda n: n % 27 in (1, 26, 8, 19, 10, 17), "residue"),
        LocalCondition.from_predicate(7, lambda n: n % 7 in (6, 0), "residue"),
        LocalCondition.from_predicate(5, lambda n: n % 5 in (1, 4), "residue", "neg"),
        LocalCondition.from_predicate(5, lambda n: n % 5 in (2, 3), "residue", "pos"),
    ]
    return CongruenceSet("squarefree", tuple(conds))
