"""Independent reference computations used by the tests.

Nothing here calls into freyhyper's arithmetic.  Finite fields are plain
digit tuples multiplied by schoolbook polynomial products; quadratic field
elements are pairs (x, y) for x + y sqrt5 with Fraction entries.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import sympy


# ---------------------------------------------------------------------------
# finite fields, encoded as integers whose base-p digits are coefficients

class NaiveField:
    def __init__(self, p: int, modulus: list[int]):
        self.p = p
        self.mod = list(modulus)          # monic, low degree first
        self.k = len(modulus) - 1
        self.q = p ** self.k

    def digits(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def encode(self, d) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(d))

    def add(self, a: int, b: int) -> int:
        return self.encode([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        for i in range(2 * k - 1, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k + 1):
                    prod[i - k + j] -= c * self.mod[j]
        return self.encode(prod[:k])

    def from_int(self, n: int) -> int:
        return n % self.p

    def eval(self, coeffs, x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc


def brute_count(F: NaiveField, f, h, g: int) -> int:
    """#{(x, y) : y^2 + h(x) y = f(x)} plus the points at infinity."""
    n = 0
    for x in range(F.q):
        fx, hx = F.eval(f, x), F.eval(h, x) if h else 0
        for y in range(F.q):
            if F.add(F.mul(y, y), F.mul(hx, y)) == fx:
                n += 1
    H = list(h) + [0] * (g + 2 - len(h))
    P = list(f) + [0] * (2 * g + 3 - len(f))
    for v in range(F.q):
        if F.add(F.mul(v, v), F.mul(H[g + 1], v)) == P[2 * g + 2]:
            n += 1
    return n


def rm_traces_from_counts(n1: int, n2: int, q: int):
    """Roots {a, a'} of X^2 - s X + t where L(T) = (1 - aT + qT^2)(1 - a'T + qT^2).

    Returned as pairs (x, y) meaning x + y sqrt5 with Fraction entries, or None
    if the factorization is not defined over Q(sqrt 5).
    """
    c1 = n1 - q - 1
    c2 = (c1 * c1 + n2 - q * q - 1) // 2
    s = -c1                       # a + a'
    t = c2 - 2 * q                # a a'
    disc = s * s - 4 * t
    if disc < 0:
        return None
    if disc % 5 == 0 and math.isqrt(disc // 5) ** 2 == disc // 5:
        r = math.isqrt(disc // 5)
        return ((Fraction(s, 2), Fraction(r, 2)), (Fraction(s, 2), Fraction(-r, 2)))
    if math.isqrt(disc) ** 2 == disc:
        r = math.isqrt(disc)
        return ((Fraction(s + r, 2), Fraction(0)), (Fraction(s - r, 2), Fraction(0)))
    return None


# ---------------------------------------------------------------------------
# Q(sqrt 5) as pairs on the basis {1, sqrt5}

def qs_mul(a, b):
    return (a[0] * b[0] + 5 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def qs_norm(a):
    return a[0] * a[0] - 5 * a[1] * a[1]


def qs_from_phi(x, y):
    """x + y phi on the sqrt5 basis."""
    return (Fraction(x) + Fraction(y, 2), Fraction(y, 2))


def qs_pow(a, n):
    out = (Fraction(1), Fraction(0))
    for _ in range(n):
        out = qs_mul(out, a)
    return out


def residue_mod_4(a):
    """Image of an integral element x + y phi in O/4O as (x mod 4, y mod 4)."""
    y = 2 * a[1]
    x = a[0] - a[1]
    assert x.denominator == 1 and y.denominator == 1
    return (int(x) % 4, int(y) % 4)


def unramified_at_2_unit(d) -> bool:
    """For a 2-adic unit d of O: K(sqrt d)/K is unramified at 2 iff d = x^2 mod 4."""
    target = residue_mod_4(d)
    for x, y in itertools.product(range(4), repeat=2):
        e = qs_from_phi(x, y)
        if residue_mod_4(qs_mul(e, e)) == target and (x * x + x * y - y * y) % 2:
            return True
    return False


# ---------------------------------------------------------------------------
# discriminants by sympy

def sympy_disc(coeffs) -> int:
    x = sympy.Symbol("x")
    P = sum(sympy.Integer(int(c)) * x ** i for i, c in enumerate(coeffs))
    return int(sympy.discriminant(P, x))


def hand_T_rational(a_g: int, q: int, sign: str) -> int:
    """T(g, Q) for a rational eigenvalue at an inert q, from scratch.

    The residue curves y^2 = F(x) with (u, v) in (F_q^x)^2 and c a fifth root
    of u + v; point counts over F_{q^2} and F_{q^4} by enumeration.
    """
    from freyhyper.finitefield import get_field   # only to share the encoding
    N = q * q
    F2 = NaiveField(q, get_field(q, 2).modulus)
    F4 = NaiveField(q, get_field(q, 4).modulus)
    mult = a_g * a_g - (N + 1) ** 2
    prod = 1
    for u in range(1, q):
        for v in range(1, q):
            for w in [w for w in range(q) if pow(w, 5, q) == (u + v) % q]:
                f = _frey_rhs_mod(w, u - v, sign, q)
                if _poly_disc_mod(f, q) == 0:
                    continue
                n1 = brute_count(F2, f, [], 2)
                n2 = brute_count(F4, f, [], 2)
                c1 = n1 - N - 1
                c2 = (c1 * c1 + n2 - N * N - 1) // 2
                s, t = -c1, c2 - 2 * N
                G = a_g * a_g - s * a_g + t         # (a_g - a)(a_g - a')
                prod *= G * G                      # norm from K down to Q
    return N * mult * prod


def _frey_rhs_mod(c: int, d: int, sign: str, q: int) -> list[int]:
    # x^5 - 5 c^2 x^3 + 5 c^4 x - 2d, times (x + 2c) for the plus curve
    f = [-2 * d, 5 * c ** 4, 0, -5 * c ** 2, 0, 1]
    if sign == "plus":
        g = [0] * 7
        for i, a in enumerate(f):
            g[i] += 2 * c * a
            g[i + 1] += a
        f = g
    return [a % q for a in f]


def _poly_disc_mod(f, q) -> int:
    return sympy_disc(f) % q


# ---------------------------------------------------------------------------
# ray class group orders for K, which has narrow class number one

def _conj(a):
    return (a[0], -a[1])


def _is_integral(a) -> bool:
    y = 2 * a[1]
    x = a[0] - a[1]
    return x.denominator == 1 and y.denominator == 1


def congruent_one(a, modulus) -> bool:
    """a = 1 mod prod g^k, for modulus a list of (generator on the phi basis, k)."""
    b = (a[0] - 1, a[1])
    for (gx, gy), k in modulus:
        g = qs_from_phi(gx, gy)
        num = qs_mul(b, qs_pow(_conj(g), k))
        den = qs_norm(g) ** k
        if not _is_integral((num[0] / den, num[1] / den)):
            return False
    return True


def ray_class_order_oracle(modulus, norms, arch) -> int:
    """|Cl_m| = |(O/m)^x| 2^#arch / |image of <-1, phi>|, counted through the kernel."""
    units = 1
    for (q_norm, k) in norms:
        units *= q_norm ** k - q_norm ** (k - 1)
    phi = qs_from_phi(0, 1)
    n = 1
    acc = phi
    while not (congruent_one(acc, modulus) and (2 not in arch or n % 2 == 0)):
        acc = qs_mul(acc, phi)
        n += 1
    image = 2 * n
    # -phi^j lies in the kernel only if it is positive where signs are imposed
    if 1 not in arch:
        acc = (-phi[0], -phi[1])
        for j in range(1, n + 1):
            if congruent_one(acc, modulus) and (2 not in arch or j % 2 == 1):
                image //= 2
                break
            acc = qs_mul(acc, phi)
    return units * 2 ** len(arch) // image
