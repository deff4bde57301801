"""Obstructions to reducibility of the residual representations.

Three ingredients: the unit condition on characters with prescribed
inertia at p (a product of conjugates of u over the primes above p must be
1), orders of small ray class groups of K, and the two contradictions that
turn these into the bound p <= 5.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from sympy import factorint

from .finitefield import get_field
from .hyperelliptic import reduce_coefficient
from .numfield import (PHI, Q5, PrimeIdealK, QuadElement, ResidueRing, factor_rational_prime,
                       format_element)

CYCLOTOMIC_SPLIT = "chi_p + 1"
LEVEL_TWO = "psi + psi^p"


# ---------------------------------------------------------------------------
# unit condition

def _check_unit(u: QuadElement) -> None:
    if not u.is_integral() or abs(u.norm()) != 1:
        raise ValueError(f"{format_element(u)} is not a unit")


def _congruent_to_one(u: QuadElement, modulus: dict) -> bool:
    for P, e in modulus.items():
        if ResidueRing(P, e).reduce(u - 1) != 0:
            return False
    return True


@dataclass(frozen=True)
class UnitBound:
    u: QuadElement                  # the unit as given
    used: QuadElement               # totally positive unit actually used
    norm: int                       # N(used - 1)
    given_norm: int                 # N(u - 1)
    primes: frozenset               # prime divisors of norm


def unit_bound(u, modulus: Optional[dict] = None) -> UnitBound:
    """Norm of u - 1 for the totally positive choice among u, u^2."""
    u = QuadElement.coerce(u)
    modulus = dict(modulus or {})
    _check_unit(u)
    if u == 1:
        raise ValueError("u = 1 gives N(u - 1) = 0 and no information")
    if not _congruent_to_one(u, modulus):
        raise ValueError(f"{format_element(u)} is not 1 modulo the given modulus")
    used = u if u.is_totally_positive() else u * u
    if used == 1:
        raise ValueError("u^2 = 1 gives no information")
    n = int((used - 1).norm())
    primes = frozenset(factorint(abs(n))) if abs(n) > 1 else frozenset()
    return UnitBound(u, used, n, int((u - 1).norm()), primes)


def unit_product_bound(u, modulus: Optional[dict] = None) -> frozenset:
    """Primes p that survive the unit condition: the prime divisors of N(u - 1)."""
    return unit_bound(u, modulus).primes


def smallest_power_congruent_to_one(u, modulus: dict) -> int:
    u = QuadElement.coerce(u)
    _check_unit(u)
    n, acc = 1, u
    while not _congruent_to_one(acc, modulus):
        acc = acc * u
        n += 1
        if n > 10 ** 6:
            raise ArithmeticError("order search did not terminate")
    return n


# ---------------------------------------------------------------------------
# exponent patterns at p and the full unit product

@dataclass(frozen=True)
class ExponentPattern:
    """n_P(sigma) for each prime P above p and embedding sigma of its residue field."""

    p: int
    exponents: tuple            # ((label, sigma_index, n), ...)
    shape: str = ""

    def as_dict(self) -> dict:
        return {(lab, s): n for lab, s, n in self.exponents}

    def is_unramified(self) -> bool:
        return all(n == 0 for _, _, n in self.exponents)


def _embeddings(P: PrimeIdealK) -> int:
    return P.residue_degree


def enumerate_patterns(p: int, shape: str) -> list[ExponentPattern]:
    """Inertia exponents of theta for theta + theta' equal to one of the two shapes.

    For chi_p + 1 each prime above p contributes all-ones or all-zeros; for
    psi + psi^p each prime contributes a single 1 (a fundamental character of
    level 2 is defined only where the residue degree allows it, so at a split
    prime this shape is realized as (1) or (0)).  Only patterns where theta
    and its complement both ramify somewhere are returned.
    """
    if p in (2, 5) or p < 2:
        raise ValueError("p must be an odd prime unramified in K, not 5")
    primes = factor_rational_prime(p)
    per_prime = []
    for P in primes:
        f = _embeddings(P)
        if shape == CYCLOTOMIC_SPLIT:
            opts = [(1,) * f, (0,) * f]
        elif shape == LEVEL_TWO:
            if f == 2:
                opts = [(1, 0), (0, 1)]
            else:
                opts = [(1,), (0,)]
        else:
            raise ValueError(f"unknown shape {shape}")
        per_prime.append(opts)
    out = []
    for combo in itertools.product(*per_prime):
        ents = tuple((P.label, i, n) for P, ns in zip(primes, combo) for i, n in enumerate(ns))
        comp = tuple((lab, i, 1 - n) for lab, i, n in ents)
        if all(n == 0 for *_, n in ents) or all(n == 0 for *_, n in comp):
            continue
        out.append(ExponentPattern(p, ents, shape))
    return out


def unit_product(u, pattern: ExponentPattern) -> int:
    """prod_P prod_sigma sigma(u mod P)^n as an element of GF(p^2)."""
    u = QuadElement.coerce(u)
    p = pattern.p
    F = get_field(p, 2)
    acc = 1
    exps = pattern.as_dict()
    for P in factor_rational_prime(p):
        r = reduce_coefficient(u, P, F)
        for i in range(_embeddings(P)):
            n = exps.get((P.label, i), 0)
            if n:
                conj = int(F.power(r, p ** i))
                acc = int(F.mul(acc, F.power(conj, n)))
    return acc


def kraus_survives(u, p: int, shapes: Iterable[str] = (CYCLOTOMIC_SPLIT, LEVEL_TWO)) -> bool:
    """Whether some admissible pattern satisfies the unit condition at p."""
    u = QuadElement.coerce(u)
    for shape in shapes:
        for pat in enumerate_patterns(p, shape):
            if unit_product(u, pat) == 1:
                return True
    return False


# ---------------------------------------------------------------------------
# ray class groups

@dataclass(frozen=True)
class RayClassDatum:
    modulus: tuple              # ((label, exponent), ...)
    arch: tuple                 # subset of (1, 2)
    order: int
    structure: tuple            # invariant factors

    @property
    def in_tested_range(self) -> bool:
        """Only m = (1) and m = q5 (times both infinite places) enter the irreducibility argument."""
        return self.modulus in ((), ((Q5.label, 1),)) and self.arch == (1, 2)

    def __str__(self):
        mod = " * ".join(f"({lab})^{e}" for lab, e in self.modulus) or "(1)"
        inf = "".join(f" inf{i}" for i in self.arch)
        flag = "" if self.in_tested_range else "  [untested modulus: not used by the argument]"
        return f"Cl_m for m = {mod}{inf}: order {self.order}, structure {list(self.structure)}{flag}"


MAX_RAY_NORM = 10 ** 4


def _invariant_factors(order: int, elements, op, identity) -> tuple:
    """Invariant factors of a finite abelian group given by its element list."""
    def power(x, n):
        acc, base = identity, x
        while n:
            if n & 1:
                acc = op(acc, base)
            base = op(base, base)
            n >>= 1
        return acc

    cyc_by_prime = {}
    for ell, k in factorint(order).items():
        logs = [0]
        for j in range(1, k + 1):
            cnt = sum(1 for x in elements if power(x, ell ** j) == identity)
            s = 0
            while ell ** s < cnt:
                s += 1
            logs.append(s)
        # number of cyclic factors of order >= ell^j
        at_least = [logs[j] - logs[j - 1] for j in range(1, k + 1)]
        exps = []
        for j in range(len(at_least)):
            nxt = at_least[j + 1] if j + 1 < len(at_least) else 0
            exps += [j + 1] * (at_least[j] - nxt)
        cyc_by_prime[ell] = sorted(exps, reverse=True)
    width = max((len(v) for v in cyc_by_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for ell, exps in cyc_by_prime.items():
            if i < len(exps):
                d *= ell ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))


def ray_class_order(modulus: Optional[dict] = None, arch: Iterable[int] = (1, 2)) -> RayClassDatum:
    """Ray class group of K for m = prod P^e times the given real places.

    Class number one gives Cl_m = ((O/m)^x x {+-1}^arch) / image of the units.
    """
    modulus = dict(modulus or {})
    arch = tuple(sorted(set(arch)))
    if any(a not in (1, 2) for a in arch):
        raise ValueError("real places are 1 and 2")
    norm = 1
    for P, e in modulus.items():
        norm *= P.norm ** e
    if norm > MAX_RAY_NORM:
        raise ValueError(f"modulus of norm {norm} is too large")
    rings = [ResidueRing(P, e) for P, e in modulus.items()]
    unit_lists = [list(R.units()) for R in rings]

    def image(u: QuadElement) -> tuple:
        res = tuple(R.reduce(u) for R in rings)
        signs = tuple(u.sign(i - 1) for i in arch)
        return res + signs

    def op(x, y):
        return tuple(a * b for a, b in zip(x, y))

    identity = image(QuadElement(1))
    # subgroup generated by -1 and phi
    H = {identity}
    frontier = [identity]
    gens = [image(QuadElement(-1)), image(PHI)]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = op(h, g)
                if k not in H:
                    H.add(k)
                    nxt.append(k)
        frontier = nxt
    sign_parts = list(itertools.product((1, -1), repeat=len(arch)))
    G = [tuple(c) + s for c in itertools.product(*unit_lists) for s in sign_parts]
    order_G = len(G)
    if order_G % len(H):
        raise ArithmeticError("unit image does not divide the group order")
    order = order_G // len(H)
    # cosets, represented by their minimal element under a fixed key
    Hl = list(H)

    def key(x):
        return tuple(repr(c) for c in x)

    def canon(x):
        return min((op(x, h) for h in Hl), key=key)

    seen = {}
    for x in G:
        c = canon(x)
        seen.setdefault(key(c), c)
    cosets = list(seen.values())
    if order == 1:
        structure = ()
    else:
        qop = lambda x, y: canon(op(x, y))
        structure = _invariant_factors(order, cosets, qop, canon(identity))
    lab = tuple((P.label, e) for P, e in modulus.items())
    return RayClassDatum(lab, arch, order, structure)


# ---------------------------------------------------------------------------
# the reducibility contradictions

@dataclass
class Obstruction:
    name: str
    value: object
    forced_primes: frozenset
    detail: str = ""


@dataclass
class ObstructionReport:
    case: str
    items: list = field(default_factory=list)

    @property
    def forced_primes(self) -> frozenset:
        out = frozenset()
        for it in self.items:
            out |= it.forced_primes
        return out

    @property
    def bound(self) -> int:
        return max(self.forced_primes | {5})

    def irreducible_for(self, p: int) -> bool:
        return p > self.bound

    def lines(self) -> list[str]:
        out = [f"case {self.case}"]
        for it in self.items:
            fp = "{" + ", ".join(str(q) for q in sorted(it.forced_primes)) + "}"
            out.append(f"  {it.name}: {it.value}  forced primes {fp}  {it.detail}".rstrip())
        out.append(f"  irreducible for p > {self.bound}")
        return out


def _default_triples(case: str):
    import random
    from .frey import sample_local_triple
    rng = random.Random(20240101 if case == "I" else 20240202)
    return [sample_local_triple(rng, case) for _ in range(3)]


def reducibility_contradictions(case: str, triples=None) -> ObstructionReport:
    from .frey import PLUS, frey_model
    from .numfield import Q2
    rep = ObstructionReport(case)
    if case == "I":
        triples = triples or _default_triples("I")
        from .frobenius import trace_at_prime
        traces = {trace_at_prime(frey_model(t, PLUS), Q2) for t in triples}
        if len(traces) != 1:
            raise ArithmeticError("traces at q_2 differ between triples")
        tr = traces.pop()
        a = tr.a
        if a != tr.a_conj or not a.is_rational():
            raise ArithmeticError(f"unexpected trace pair {tr} at q_2")
        value = 1 + 4 - int(a.x)
        forced = frozenset(factorint(abs(value))) if abs(value) > 1 else frozenset()
        rep.items.append(Obstruction("1 + N(q2) - a_q2(J+)", value, forced,
                                     f"a_q2 = {int(a.x)}"))
        ray = ray_class_order({}, (1, 2))
        rep.items.append(Obstruction("ray class group mod inf1 inf2", ray.order, frozenset(),
                                     "unramified theta is trivial"))
        ub = unit_bound(PHI)
        rep.items.append(Obstruction("N(u - 1), u = phi", ub.given_norm, ub.primes,
                                     f"totally positive u^2: N = {ub.norm}"))
    elif case == "II":
        triples = triples or _default_triples("II")
        from .localred import minus_conductor_at_5
        degrees = sorted({minus_conductor_at_5(t).semistabilizing_degree for t in triples})
        ray = ray_class_order({Q5: 1}, (1, 2))
        incompatible = bool(degrees) and all(d and d % 4 == 0 for d in degrees) and ray.order % 4 != 0
        rep.items.append(Obstruction("ray class group mod q5 inf1 inf2", ray.order, frozenset(),
                                     f"inertia orders at q5 {degrees}; "
                                     f"{'incompatible' if incompatible else 'compatible'}"))
        n1 = smallest_power_congruent_to_one(PHI, {Q5: 1})
        ub = unit_bound(PHI ** n1, {Q5: 1})
        rep.items.append(Obstruction(f"N(u - 1), u = phi^{n1}", ub.norm, ub.primes))
    else:
        raise ValueError("case must be 'I' or 'II'")
    return rep
