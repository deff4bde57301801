"""Frey hyperelliptic curves C_r^-(a,b,c), C_r^+(a,b,c) and companions.

For a prime r, omega_j = zeta^j + zeta^(-j) with zeta a primitive r-th root
of unity, g(X) = prod (X + omega_j) and f(x) = x g(x^2 - 2), which is the
Dickson polynomial x^r - r x^(r-2) + ...  The curves are

    C^-:  y^2 = c^r f(x/c) - 2(a^p - b^p)
    C^+:  y^2 = (x + 2c)(c^r f(x/c) - 2(a^p - b^p)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .hyperelliptic import HyperellipticModel
from .poly import Poly

SUPPORTED_R = (3, 5, 7, 11)
MINUS, PLUS = "minus", "plus"


class UnsupportedExponentError(ValueError):
    pass


def _check_r(r: int) -> None:
    if r not in SUPPORTED_R:
        raise UnsupportedExponentError(f"r = {r} is not one of {SUPPORTED_R}")


def _check_sign(sign: str) -> None:
    if sign not in (MINUS, PLUS):
        raise ValueError(f"sign must be 'minus' or 'plus', not {sign!r}")


def dickson(n: int) -> Poly:
    """D_n(x) with D_n(z + 1/z) = z^n + z^(-n)."""
    d0, d1 = Poly([2]), Poly([0, 1])
    if n == 0:
        return d0
    x = Poly([0, 1])
    for _ in range(n - 1):
        d0, d1 = d1, x * d1 - d0
    return d1


def min_poly_2cos(r: int) -> Poly:
    """Minimal polynomial of 2cos(2 pi/r) for an odd prime r.

    Phi_r(z)/z^m = 1 + sum_{k=1}^m (z^k + z^-k) with m = (r-1)/2.
    """
    m = (r - 1) // 2
    out = Poly([1])
    for k in range(1, m + 1):
        out = out + dickson(k)
    return out


def omega_poly(r: int) -> Poly:
    """g(X) = prod_j (X + omega_j), monic with integer coefficients."""
    _check_r(r)
    m = (r - 1) // 2
    psi = min_poly_2cos(r)
    g = psi.compose(Poly([0, -1]))
    return g if m % 2 == 0 else -g


def f_poly(r: int) -> Poly:
    """f(x) = x g(x^2 - 2)."""
    g = omega_poly(r)
    return Poly([0, 1]) * g.compose(Poly([-2, 0, 1]))


@dataclass(frozen=True)
class FreyTriple:
    a: int
    b: int
    c: int
    p: int
    r: int = 5

    def __post_init__(self):
        _check_r(self.r)
        if not isinstance(self.p, int) or self.p < 2:
            raise ValueError("p must be an integer >= 2")

    @property
    def A(self) -> int:
        return self.a ** self.p

    @property
    def B(self) -> int:
        return self.b ** self.p

    @property
    def is_trivial(self) -> bool:
        return self.a * self.b * self.c == 0

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    @property
    def is_solution(self) -> bool:
        return self.A + self.B == self.c ** self.r

    @property
    def t(self) -> Fraction:
        return Fraction(self.A, self.c ** self.r)


def frey_rhs(r: int, sign: str, c, d) -> Poly:
    """Right-hand side c^r f(x/c) - 2d (times x + 2c for the plus curve).

    Works over any coefficient ring, so c and d = a^p - b^p may be symbols.
    """
    _check_r(r)
    _check_sign(sign)
    f = f_poly(r)
    coeffs = []
    for i in range(r + 1):
        fi = f[i]
        coeffs.append(fi * c ** (r - i) if fi != 0 else 0)
    F = Poly(coeffs) - Poly([2 * d])
    if sign == PLUS:
        F = Poly([2 * c, 1]) * F
    return F


@dataclass(frozen=True)
class FreyCurve:
    sign: str
    model: HyperellipticModel
    triple: FreyTriple

    @property
    def genus(self) -> int:
        return self.model.g

    def weierstrass_x(self):
        """x-coordinate of the rational Weierstrass point of C^+."""
        return -2 * self.triple.c if self.sign == PLUS else None


def frey_model(triple: FreyTriple, sign: str) -> FreyCurve:
    r = triple.r
    P = frey_rhs(r, sign, triple.c, triple.A - triple.B)
    return FreyCurve(sign, HyperellipticModel(P, Poly(), (r - 1) // 2), triple)


# ---------------------------------------------------------------------------
# discriminants

def frey_discriminant(triple: FreyTriple, sign: str) -> int:
    """Delta of the right-hand side polynomial, in closed form.

    With A = a^p, B = b^p and m = (r-1)/2,
        Delta(F)   = (-1)^m 2^(r-1) r^r ((A-B)^2 - c^(2r))^m,
        Delta(P^+) = Delta(F) * 4 (c^r + A - B)^2,
    valid for every triple.  On solutions of A + B = c^r these become
    2^(2(r-1)) r^r (AB)^m and 2^(2(r+1)) r^r A^((r+3)/2) B^m.
    """
    _check_sign(sign)
    r = triple.r
    m = (r - 1) // 2
    A, B, c = triple.A, triple.B, triple.c
    d = (-1) ** m * 2 ** (r - 1) * r ** r * ((A - B) ** 2 - c ** (2 * r)) ** m
    if sign == PLUS:
        d *= 4 * (c ** r + A - B) ** 2
    return d


def frey_curve_discriminant(triple: FreyTriple, sign: str) -> int:
    """Delta_E of the Frey equation, 2^(4g) times frey_discriminant."""
    g = (triple.r - 1) // 2
    return 2 ** (4 * g) * frey_discriminant(triple, sign)


@dataclass(frozen=True)
class DiscriminantShape:
    """sign * 2^two * r^rexp * a^(p*a_mult) * b^(p*b_mult), valid on solutions."""

    r: int
    sign_: int
    two: int
    rexp: int
    a_mult: int
    b_mult: int

    def evaluate(self, a: int, b: int, p: int) -> int:
        return (self.sign_ * 2 ** self.two * self.r ** self.rexp
                * a ** (p * self.a_mult) * b ** (p * self.b_mult))

    def __str__(self):
        s = "" if self.sign_ > 0 else "-"
        return (f"{s}2^{self.two} * {self.r}^{self.rexp} * "
                f"a^({self.a_mult}p) * b^({self.b_mult}p)")


def frey_discriminant_symbolic(r: int, sign: str) -> DiscriminantShape:
    _check_r(r)
    _check_sign(sign)
    m = (r - 1) // 2
    if sign == MINUS:
        return DiscriminantShape(r, 1, 2 * (r - 1), r, m, m)
    return DiscriminantShape(r, 1, 2 * (r + 1), r, (r + 3) // 2, m)


def f_t(r: int, sign: str, t) -> Poly:
    """f(x) + 2 - 4t, times (x + 2) for the plus sign."""
    _check_sign(sign)
    F = f_poly(r) + Poly([2 - 4 * Fraction(t)])
    if sign == PLUS:
        F = Poly([2, 1]) * F
    return F


def darmon_disc_t(r: int, sign: str, t) -> Fraction:
    """Closed forms for Delta(f_t^-) and Delta(f_t^+).

    Delta(f_t^-) = (-1)^m 2^(2(r-1)) r^r t^m (t-1)^m and
    Delta(f_t^+) = 16 t^2 Delta(f_t^-), with m = (r-1)/2.
    """
    _check_r(r)
    _check_sign(sign)
    t = Fraction(t)
    m = (r - 1) // 2
    d = (-1) ** m * 2 ** (2 * (r - 1)) * r ** r * t ** m * (t - 1) ** m
    if sign == PLUS:
        d *= 16 * t * t
    return d


def twist_exponent(r: int, sign: str) -> int:
    """Delta(C^{+-}(a,b,c)) = c^k Delta(f_t^{+-}) with t = (c^r + A - B)/(2c^r)."""
    return r * (r - 1) if sign == MINUS else r * (r + 1)


def twist_parameter(triple: FreyTriple) -> Fraction:
    """t with c^r f(x/c) - 2(A - B) = c^r (f(x/c) + 2 - 4t); equals A/c^r on solutions."""
    cr = triple.c ** triple.r
    return Fraction(cr + triple.A - triple.B, 2 * cr)


# ---------------------------------------------------------------------------
# elliptic curves

@dataclass(frozen=True)
class EllipticData:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    @classmethod
    def from_ainvs(cls, *ainvs) -> "EllipticData":
        return cls(*(Fraction(v) for v in ainvs))

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2 ** 2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self):
        return self.c4 ** 3 / self.discriminant

    def change(self, u, r, s, t) -> "EllipticData":
        """Coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        a1, a2, a3, a4, a6 = self.ainvs
        u = Fraction(u)
        n1 = (a1 + 2 * s) / u
        n2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        n3 = (a3 + r * a1 + 2 * t) / u ** 3
        n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u ** 4
        n6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) / u ** 6
        return EllipticData(n1, n2, n3, n4, n6)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.ainvs)

    def __str__(self):
        return "[" + ", ".join(str(v) for v in self.ainvs) + "]"


def v2(n) -> int | float:
    n = Fraction(n)
    if n == 0:
        return math.inf
    v, num, den = 0, n.numerator, n.denominator
    while num % 2 == 0:
        num //= 2
        v += 1
    while den % 2 == 0:
        den //= 2
        v -= 1
    return v


@dataclass(frozen=True)
class LegendreReport:
    L: Optional[EllipticData]
    E: EllipticData
    minimal_E: Optional[EllipticData]
    congruences_hold: bool
    v2_min_disc: Optional[int]
    predicted_v2: Optional[int]
    multiplicative_at_2: Optional[bool]
    mod5_level_is_q2: Optional[bool]
    notes: tuple = ()


def legendre_curves(triple: FreyTriple) -> LegendreReport:
    """L: y^2 = x(x-1)(x-t) with t = a^p/c^r and E: y^2 = x(x + a^p)(x - b^p)."""
    A, B = triple.A, triple.B
    L = None
    if triple.c != 0:
        t = Fraction(A, triple.c ** triple.r)
        L = EllipticData.from_ainvs(0, -(1 + t), 0, t, 0)
    E = EllipticData.from_ainvs(0, A - B, 0, -A * B, 0)
    a, b, c, p = triple.a, triple.b, triple.c, triple.p
    cong = (a % 2 == 0 and b % 4 == 3 and c % 4 == 3 and p > 3 and a * b * c != 0)
    if not cong:
        return LegendreReport(L, E, None, False, None, None, None, None,
                              ("congruence conditions fail; minimality not asserted",))
    Emin = None
    for r in range(4):
        for s in range(2):
            for t in range(8):
                cand = E.change(2, r, s, t)
                if cand.is_integral():
                    Emin = cand
                    break
            if Emin:
                break
        if Emin:
            break
    if Emin is None:
        return LegendreReport(L, E, None, True, None, None, None, None,
                              ("no integral model with u = 2 found",))
    vd = v2(Emin.discriminant)
    vc4 = v2(Emin.c4)
    predicted = 2 * p * v2(a) - 8
    mult = vc4 == 0 and vd > 0
    return LegendreReport(L, E, Emin, True, vd, predicted, mult, predicted % 5 != 0)


def mod5_level_criterion(v2_disc: int) -> bool:
    """Conductor of the mod-5 representation at q_2 is q_2 iff 5 does not divide v_2(Delta_E)."""
    return v2_disc % 5 != 0


def j_nonsplit_cartan(s) -> Fraction:
    """j-invariant map of the modular curve with non-split Cartan level 5 structure."""
    s = Fraction(s)
    den = s * s + s - 1
    if den == 0:
        raise ZeroDivisionError("pole of j_{5N'}: s^2 + s - 1 = 0")
    return 125 * s * (2 * s + 1) ** 3 * (2 * s * s + 7 * s + 8) ** 3 / den ** 5


# ---------------------------------------------------------------------------
# local solutions: triples solving a^p + b^p = c^r modulo a fixed integer

def _carmichael(m: int) -> int:
    from sympy import factorint
    lam = 1
    for ell, k in factorint(m).items():
        if ell == 2:
            part = 1 if k == 1 else (2 if k == 2 else 2 ** (k - 2))
        else:
            part = ell ** (k - 1) * (ell - 1)
        lam = math.lcm(lam, part)
    return lam


def pth_root_mod(x: int, p: int, modulus: int) -> int:
    """The unique p-th root of a unit x modulo `modulus` when p is prime to lambda(modulus)."""
    if math.gcd(x, modulus) != 1:
        raise ValueError("p-th root only computed for units")
    lam = _carmichael(modulus)
    if math.gcd(p, lam) != 1:
        raise ValueError(f"{p}-th power map is not bijective modulo {modulus}")
    return pow(x % modulus, pow(p, -1, lam), modulus)


def solve_b(a: int, c: int, p: int, r: int, modulus: int) -> int:
    """b with a^p + b^p = c^r (mod modulus), reduced to (-modulus/2, modulus/2]."""
    b = pth_root_mod(c ** r - a ** p, p, modulus)
    return b - modulus if b > modulus // 2 else b


def solve_a(b: int, c: int, p: int, r: int, modulus: int) -> int:
    return solve_b(b, c, p, r, modulus)


def local_triple(a: int, c: int, p: int, r: int = 5, modulus: int = 2 ** 20 * 5 ** 10,
                 swap: bool = False) -> FreyTriple:
    """A triple solving the equation modulo `modulus`; swap puts the free value in b."""
    x = solve_b(a, c, p, r, modulus)
    if swap:
        return FreyTriple(x, a, c, p, r)
    return FreyTriple(a, x, c, p, r)


def sample_local_triple(rng, case: str, primes=(7, 11, 13, 17, 19, 23), bound: int = 400,
                        modulus: int = 2 ** 20 * 5 ** 12) -> FreyTriple:
    """A random triple solving the equation modulo `modulus` in case I or II.

    Case I: a, b odd and 5 | a.  Case II: 2 | a, b = c = -1 (mod 4), 5 not dividing ab.
    """
    while True:
        p = rng.choice(primes)
        if case == "I":
            a = 5 * (2 * rng.randrange(bound // 10) + 1) * rng.choice((1, -1))
            c = 2 * rng.randrange(1, bound // 2)
            if c % 5 == 0:
                continue
        elif case == "II":
            a = 2 * rng.randrange(1, bound // 2) * rng.choice((1, -1))
            c = 4 * rng.randrange(bound // 4) + 3
            if a % 5 == 0 or (c ** 5 - a ** p) % 5 == 0:
                continue
        else:
            raise ValueError("case must be 'I' or 'II'")
        return local_triple(a, c, p, 5, modulus)
