"""Quadratic characters of K = Q(sqrt 5) and the 2-Selmer group K(S, 2).

Since K has class number one, K(S, 2) is generated modulo squares by the
units -1, phi and the generators of the primes in S.  Classes are kept in a
square-free normal form: sign * phi^e * prod pi_P^(0 or 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from sympy import factorint

from .numfield import (PHI, Q2, PrimeIdealK, QuadElement, ResidueRing,
                       factor_rational_prime, format_sqrt5, reduce_mod_prime_power,
                       unit_log, valuation_at)


def _support_primes(d: QuadElement) -> list[PrimeIdealK]:
    n = d.norm()
    ells = set(factorint(abs(n.numerator))) | set(factorint(n.denominator))
    ells.discard(1)
    out = []
    for ell in sorted(ells):
        out.extend(factor_rational_prime(ell))
    return out


def squarefree_normal_form(d) -> QuadElement:
    """Canonical representative of the class of d in K^x/(K^x)^2."""
    d = QuadElement.coerce(d)
    if not d:
        raise ValueError("zero has no square class")
    rep = QuadElement(1)
    rest = d
    for P in _support_primes(d):
        v = valuation_at(rest, P)
        if v:
            rest = rest / P.generator ** v
            if v % 2:
                rep = rep * P.generator
    sign, k = unit_log(rest)
    rep = rep * sign
    if k % 2:
        rep = rep * PHI
    return rep


def same_class(d1, d2) -> bool:
    return squarefree_normal_form(d1) == squarefree_normal_form(d2)


@dataclass(frozen=True)
class QuadraticCharacter:
    """chi_d, the character of K(sqrt d)/K."""

    d: QuadElement

    def __post_init__(self):
        object.__setattr__(self, "d", squarefree_normal_form(self.d))

    @property
    def is_trivial(self) -> bool:
        return self.d == 1

    def __mul__(self, other: "QuadraticCharacter") -> "QuadraticCharacter":
        return QuadraticCharacter(self.d * other.d)

    def value_at(self, P: PrimeIdealK) -> int:
        """chi_d(Frob_P) for P prime to 2d."""
        return quadratic_residue_symbol(self.d, P)


def quadratic_residue_symbol(d, P: PrimeIdealK) -> int:
    """(d/P) for an odd prime P not dividing d."""
    if P.residue_char == 2:
        raise ValueError("residue symbol needs an odd prime")
    d = QuadElement.coerce(d)
    if valuation_at(d, P) != 0:
        raise ValueError(f"{d} is not a unit at {P.label}")
    R = ResidueRing(P, 1)
    s = R.reduce(d) ** ((P.norm - 1) // 2)
    if s == 1:
        return 1
    if s == -1:
        return -1
    raise ArithmeticError("Euler criterion returned neither 1 nor -1")


@dataclass(frozen=True)
class SelmerSet:
    representatives: tuple
    support: tuple

    def __len__(self):
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def __contains__(self, d) -> bool:
        return squarefree_normal_form(d) in self.representatives

    @property
    def rank(self) -> int:
        return len(self.representatives).bit_length() - 1


def display_representative(d: QuadElement) -> str:
    """Render a class on the basis {1, sqrt5}, using phi^-1 = (sqrt5 - 1)/2 for phi."""
    sign, k = unit_log(d / _prime_part(d)) if d else (1, 0)
    rep = d * PHI ** (-2) if k % 2 else d
    return format_sqrt5(rep)


def _prime_part(d: QuadElement) -> QuadElement:
    out = QuadElement(1)
    for P in _support_primes(d):
        v = valuation_at(d, P)
        out = out * P.generator ** v
    return out


def selmer_group(S: Iterable[PrimeIdealK], m: int = 2) -> SelmerSet:
    """K(S, 2): square classes with even valuation outside S, unramified at 2 unless q_2 in S."""
    if m != 2:
        raise ValueError("only m = 2 is supported")
    S = tuple(sorted(set(S), key=lambda P: (P.norm, P.index)))
    gens = [QuadElement(-1), PHI] + [P.generator for P in S]
    classes = []
    for bits in itertools.product((0, 1), repeat=len(gens)):
        d = QuadElement(1)
        for b, g in zip(bits, gens):
            if b:
                d = d * g
        nf = squarefree_normal_form(d)
        if nf not in classes:
            classes.append(nf)
    if Q2 not in S:
        classes = [d for d in classes if is_unramified_at_q2(d)]
    return SelmerSet(tuple(classes), S)


@dataclass(frozen=True)
class UnramifiedCertificate:
    """x with d x^-2 = d1 = 1 (mod 4); disc of O[(1 + sqrt d1)/2] is the unit d1."""

    x: QuadElement
    d1: QuadElement
    determinant: QuadElement


def q2_unramified_certificate(d) -> Optional[UnramifiedCertificate]:
    d = QuadElement.coerce(d)
    v = valuation_at(d, Q2)
    if v % 2:
        return None
    d0 = d / QuadElement(2) ** v
    R = ResidueRing(Q2, 2)
    target = R.reduce(d0)
    for x in R.units():
        if x * x == target:
            xl = x.lift()
            d1 = d0 / (xl * xl)
            # Gram determinant of {1, beta}: Tr(1) Tr(beta^2) - Tr(beta)^2 = d1
            tr1, trb, trb2 = QuadElement(2), QuadElement(1), (1 + d1) / 2
            det = tr1 * trb2 - trb * trb
            return UnramifiedCertificate(xl, d1, det)
    return None


def is_unramified_at_q2(d) -> bool:
    """Whether K(sqrt d)/K is unramified at q_2."""
    cert = q2_unramified_certificate(d)
    if cert is None:
        return False
    assert cert.determinant == cert.d1 and valuation_at(cert.determinant, Q2) == 0
    assert reduce_mod_prime_power(cert.d1, Q2, 2) == 1
    return True


def unramifying_twist(d) -> QuadElement:
    """d0 in K({q_2}, 2) with chi_d chi_d0 unramified at q_2."""
    d = squarefree_normal_form(d)
    for d0 in selmer_group([Q2]):
        if is_unramified_at_q2(d * d0):
            return d0
    raise ArithmeticError(f"no unramifying twist for {d}")
