"""Point counts, L-polynomials and real-multiplication Frobenius traces.

A curve y^2 + h(x) y = f(x) of genus g is counted on its weighted projective
closure: the affine points plus the solutions of v^2 + h_{g+1} v = f_{2g+2}
at infinity (one point for odd-degree models).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .finitefield import GF, get_field
from .hyperelliptic import (HyperellipticModel, coeff_valuation, discriminant,
                            good_reduction_via_odd_model, reduce_poly)
from .numfield import PrimeIdealK, QuadElement


class RMFactorizationError(ArithmeticError):
    """The L-polynomial does not split over Z[phi]."""


class BadReductionError(ValueError):
    """Frobenius traces requested at a prime of bad (or unproven good) reduction."""


# ---------------------------------------------------------------------------
# counting over a finite field; polynomials are lists of field encodings

def _fiber_counts(F: GF, hx: np.ndarray, fx: np.ndarray) -> np.ndarray:
    """Number of y with y^2 + h y = f, for each pair (h, f)."""
    if F.p == 2:
        out = np.ones_like(hx)
        nz = hx != 0
        if np.any(nz):
            h2 = F.mul(hx[nz], hx[nz])
            ratio = F.div(fx[nz], h2)
            out[nz] = np.where(F.abs_trace[ratio] == 0, 2, 0)
        return out
    disc = F.add(F.mul(hx, hx), F.mul(np.full_like(fx, F.from_int(4)), fx))
    return 1 + F.quadratic_character(disc)


def count_curve(F: GF, f: Sequence[int], h: Sequence[int], g: int) -> int:
    """#C(F) for y^2 + h y = f with deg f <= 2g+2, deg h <= g+1."""
    xs = F.elements()
    hx = F.eval_poly(list(h), xs) if len(h) else np.zeros_like(xs)
    fx = F.eval_poly(list(f), xs)
    affine = int(_fiber_counts(F, hx, fx).sum())
    h_top = h[g + 1] if len(h) > g + 1 else 0
    f_top = f[2 * g + 2] if len(f) > 2 * g + 2 else 0
    inf = int(_fiber_counts(F, np.array([h_top]), np.array([f_top]))[0])
    return affine + inf


def brute_force_count(F: GF, f: Sequence[int], h: Sequence[int], g: int) -> int:
    """Independent count: enumerate all (x, y) and the chart at infinity."""
    q = F.q
    xs = np.repeat(np.arange(q), q)
    ys = np.tile(np.arange(q), q)

    def ev(coeffs, pts):
        return F.eval_poly(list(coeffs), pts) if len(coeffs) else np.zeros_like(pts)

    lhs = F.add(F.mul(ys, ys), F.mul(ev(h, xs), ys))
    affine = int(np.count_nonzero(lhs == ev(f, xs)))
    # chart x = 1/w, y = v/w^(g+1) at w = 0
    H = list(h) + [0] * (g + 2 - len(h))
    Fp = list(f) + [0] * (2 * g + 3 - len(f))
    htop, ftop = H[g + 1], Fp[2 * g + 2]
    vs = np.arange(q)
    lhs = F.add(F.mul(vs, vs), F.mul(np.full_like(vs, htop), vs))
    return affine + int(np.count_nonzero(lhs == ftop))


@dataclass(frozen=True)
class AffineCountResult:
    q: int                  # size of the base field
    g: int
    counts: tuple           # #C(F_{q^i}) for i = 1, 2, ...
    singular: bool = False

    def hasse_weil_ok(self) -> bool:
        for i, n in enumerate(self.counts, start=1):
            Q = self.q ** i
            # |n - (Q + 1)| <= 2g sqrt(Q), compared exactly
            dev = abs(n - (Q + 1))
            if dev * dev > 4 * self.g * self.g * Q:
                return False
        return True


def count_points(model: HyperellipticModel, prime: PrimeIdealK,
                 max_degree: int | None = None) -> AffineCountResult:
    """Counts of the reduction of an integral model over F_{N(prime)^i}."""
    if not model.is_integral_at(prime):
        raise ValueError(f"model is not integral at {prime.label}")
    g = model.g
    D = discriminant(model)
    singular = D == 0 or coeff_valuation(D, prime) > 0
    k = max_degree or g
    q, f = prime.residue_char, prime.residue_degree
    counts = []
    for i in range(1, k + 1):
        F = get_field(q, f * i)
        counts.append(count_curve(F, reduce_poly(model.P, prime, F),
                                  reduce_poly(model.Q, prime, F), g))
    return AffineCountResult(prime.norm, g, tuple(counts), singular)


# ---------------------------------------------------------------------------
# L-polynomials and traces

@dataclass(frozen=True)
class LPolynomial:
    q: int
    g: int
    coeffs: tuple           # (1, c1, c2, q c1, q^2) for g = 2, (1, c1, q) for g = 1

    @property
    def c1(self) -> int:
        return self.coeffs[1]

    @property
    def c2(self) -> int:
        return self.coeffs[2]

    def roots_have_weight(self, tol: float = 1e-6) -> bool:
        rts = np.roots(list(reversed(self.coeffs)))
        return all(abs(abs(1 / z) - math.sqrt(self.q)) < tol * max(1.0, self.q) for z in rts)


def l_polynomial(counts: Sequence[int], q: int, g: int = 2) -> LPolynomial:
    N1 = counts[0]
    c1 = N1 - q - 1
    if g == 1:
        return LPolynomial(q, 1, (1, c1, q))
    if g != 2:
        raise ValueError("L-polynomials implemented for genus 1 and 2")
    N2 = counts[1]
    twice = c1 * c1 + N2 - q * q - 1
    if twice % 2:
        raise ArithmeticError("inconsistent point counts")
    c2 = twice // 2
    return LPolynomial(q, 2, (1, c1, c2, q * c1, q * q))


@dataclass(frozen=True)
class FrobeniusTrace:
    """The unordered pair {a, sigma(a)} with a in Z[phi]."""

    a: QuadElement
    a_conj: QuadElement

    def __post_init__(self):
        # canonical order: nonnegative phi-coordinate first
        if self.a.y < 0:
            a, b = self.a_conj, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "a_conj", b)

    @property
    def trace(self) -> int:
        return int(self.a.trace())

    @property
    def norm(self) -> int:
        return int(self.a.norm())

    def pair(self) -> frozenset:
        return frozenset((self.a, self.a_conj))

    def twisted(self, sign: int) -> "FrobeniusTrace":
        return FrobeniusTrace(self.a * sign, self.a_conj * sign)

    def __eq__(self, other):
        return isinstance(other, FrobeniusTrace) and self.pair() == other.pair()

    def __hash__(self):
        return hash(self.pair())

    def __str__(self):
        from .numfield import format_element
        return "{" + format_element(self.a) + ", " + format_element(self.a_conj) + "}"


def rm_trace(L: LPolynomial, q: int | None = None) -> FrobeniusTrace:
    """Solve Tr(a) = -c1, N(a) = c2 - 2q for a in Z[phi]."""
    q = L.q if q is None else q
    s = -L.c1
    n = L.c2 - 2 * q
    D = s * s - 4 * n
    if D < 0:
        raise RMFactorizationError(f"no RM factorization: s^2 - 4n = {D} < 0")
    if D == 0:
        if s % 2:
            raise RMFactorizationError("no RM factorization: odd trace with zero discriminant")
        a = QuadElement(s // 2)
        return FrobeniusTrace(a, a)
    if D % 5 == 0:
        m = math.isqrt(D // 5)
        if m * m == D // 5 and (s - m) % 2 == 0:
            a = QuadElement((s - m) // 2, m)
            return FrobeniusTrace(a, a.conjugate())
    raise RMFactorizationError(
        f"no RM factorization at this prime (s = {s}, n = {n}, s^2 - 4n = {D})")


def trace_from_counts(counts: Sequence[int], q: int) -> FrobeniusTrace:
    return rm_trace(l_polynomial(counts, q, 2), q)


def trace_of_prime_field_curve(f: Sequence[int], q: int, residue_degree: int,
                               h: Sequence[int] = ()) -> FrobeniusTrace:
    """Trace pair for a genus-2 curve with coefficients in F_q, Frobenius of F_{q^f}."""
    counts = []
    for i in (1, 2):
        F = get_field(q, residue_degree * i)
        counts.append(count_curve(F, [F.from_int(c) for c in f],
                                  [F.from_int(c) for c in h], 2))
    return trace_from_counts(counts, q ** residue_degree)


def trace_at_prime(curve, prime: PrimeIdealK, search_budget: int = 2) -> FrobeniusTrace:
    """Frobenius trace pair of the Jacobian of a genus-2 Frey curve at a good prime."""
    model = curve.model
    if model.g != 2:
        raise ValueError("traces are implemented for genus 2 (r = 5)")
    q = prime.residue_char
    if q in (2, 5):
        res = good_reduction_via_odd_model(model, prime, search_budget,
                                           weierstrass_x=curve.weierstrass_x())
        if not res.is_good:
            raise BadReductionError(
                f"no good model at {prime.label} ({res.reason}); "
                "use the multiplicative congruence instead")
        good = res.witness
    else:
        from .localred import reduction_away_from_10
        rep = reduction_away_from_10(curve, prime)
        if rep.type != "good":
            raise BadReductionError(
                f"bad reduction at {prime.label}; use the multiplicative congruence instead")
        good = model
    res = count_points(good, prime, 2)
    if res.singular:
        raise BadReductionError(f"reduction at {prime.label} is singular")
    return trace_from_counts(res.counts, prime.norm)
