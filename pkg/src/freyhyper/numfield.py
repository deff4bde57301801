"""Exact arithmetic in K = Q(sqrt 5) on the integral basis {1, phi}.

phi = (1 + sqrt 5)/2 satisfies phi^2 = phi + 1, so O_K = Z[phi] is the
integer lattice in these coordinates.  K has class number one, every prime
ideal is principal and phi is a fundamental unit of norm -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

INF = math.inf

Rational = Union[int, Fraction]


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot coerce {v!r} to a rational")


class QuadElement:
    """The element x + y*phi of K with rational x, y."""

    __slots__ = ("x", "y")

    def __init__(self, x: Rational = 0, y: Rational = 0):
        object.__setattr__(self, "x", _q(x))
        object.__setattr__(self, "y", _q(y))

    def __setattr__(self, name, value):
        raise AttributeError("QuadElement is immutable")

    @classmethod
    def coerce(cls, v) -> "QuadElement":
        if isinstance(v, QuadElement):
            return v
        return cls(v, 0)

    # ring operations
    def __add__(self, other):
        if isinstance(other, QuadElement):
            return QuadElement(self.x + other.x, self.y + other.y)
        if isinstance(other, (int, Fraction)):
            return QuadElement(self.x + other, self.y)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.x, -self.y)

    def __sub__(self, other):
        if isinstance(other, QuadElement):
            return QuadElement(self.x - other.x, self.y - other.y)
        if isinstance(other, (int, Fraction)):
            return QuadElement(self.x - other, self.y)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElement(other - self.x, -self.y)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QuadElement):
            # (x1 + y1 phi)(x2 + y2 phi) with phi^2 = phi + 1
            yy = self.y * other.y
            return QuadElement(self.x * other.x + yy,
                               self.x * other.y + self.y * other.x + yy)
        if isinstance(other, (int, Fraction)):
            return QuadElement(self.x * other, self.y * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in K")
        c = self.conjugate()
        return QuadElement(c.x / n, c.y / n)

    def __truediv__(self, other):
        if isinstance(other, QuadElement):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in K")
            return QuadElement(self.x / other, self.y / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparisons
    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    # field data
    def conjugate(self) -> "QuadElement":
        return QuadElement(self.x + self.y, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x + self.x * self.y - self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x + self.y

    def is_rational(self) -> bool:
        return self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def denominator(self) -> int:
        return math.lcm(self.x.denominator, self.y.denominator)

    def sign(self, place: int) -> int:
        """Exact sign at the real place 0 (phi > 0) or 1 (phi < 0)."""
        # value = (A + B sqrt5)/2 with A = 2x + y and B = +-y
        A = 2 * self.x + self.y
        B = self.y if place == 0 else -self.y
        if A == 0 and B == 0:
            return 0
        if A >= 0 and B >= 0:
            return 1
        if A <= 0 and B <= 0:
            return -1
        if A * A > 5 * B * B:
            return 1 if A > 0 else -1
        return 1 if B > 0 else -1

    def is_totally_positive(self) -> bool:
        return self.sign(0) > 0 and self.sign(1) > 0

    def embeddings(self) -> tuple[float, float]:
        r5 = math.sqrt(5.0)
        return (float(self.x) + float(self.y) * (1 + r5) / 2,
                float(self.x) + float(self.y) * (1 - r5) / 2)

    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def __repr__(self):
        return f"QuadElement({self.x}, {self.y})"

    def __str__(self):
        return format_element(self)


def format_element(a: QuadElement) -> str:
    """Render as 'x + y*phi' with exact rationals."""
    if a.y == 0:
        return str(a.x)
    if a.x == 0:
        return f"{a.y}*phi"
    sign = "+" if a.y > 0 else "-"
    return f"{a.x} {sign} {abs(a.y)}*phi"


def format_sqrt5(a: QuadElement) -> str:
    """Render on the basis {1, sqrt5}, e.g. '(sqrt5 - 1)/2'."""
    u = a.x + a.y / 2          # rational part
    v = a.y / 2                # sqrt5 part
    if v == 0:
        return str(u)
    den = math.lcm(u.denominator, v.denominator)
    U, V = int(u * den), int(v * den)
    parts = []
    if V:
        if V == 1:
            parts.append("sqrt5")
        elif V == -1:
            parts.append("-sqrt5")
        else:
            parts.append(f"{V}*sqrt5")
    if U:
        parts.append(f"+ {U}" if U > 0 else f"- {-U}")
    body = " ".join(parts)
    if den == 1:
        return body
    return f"({body})/{den}"


def parse_element(text: str) -> QuadElement:
    """Inverse of format_element."""
    s = text.replace(" ", "")
    if "phi" not in s:
        return QuadElement(Fraction(s))
    body = s.replace("*phi", "phi")
    # split off the phi term: find last +/- not at position 0 before 'phi' term
    idx = body.rfind("phi")
    head = body[:idx]
    cut = max(head.rfind("+"), head.rfind("-"))
    if cut <= 0:
        x_part, y_part = "0", head
    else:
        x_part, y_part = head[:cut], head[cut:]
    if y_part in ("", "+"):
        y_part = "1"
    elif y_part == "-":
        y_part = "-1"
    return QuadElement(Fraction(x_part), Fraction(y_part))


ZERO = QuadElement(0, 0)
ONE = QuadElement(1, 0)
PHI = QuadElement(0, 1)
SQRT5 = QuadElement(-1, 2)


def conjugate_norm_trace(a) -> tuple[QuadElement, Fraction, Fraction]:
    a = QuadElement.coerce(a)
    return a.conjugate(), a.norm(), a.trace()


def fundamental_unit() -> QuadElement:
    return PHI


def unit_log(u: QuadElement) -> tuple[int, int]:
    """Write a unit as sign * phi^k; returns (sign, k)."""
    if not u.is_integral() or abs(u.norm()) != 1:
        raise ValueError(f"{u} is not a unit")
    e0 = u.embeddings()[0]
    k = round(math.log(abs(e0)) / math.log((1 + math.sqrt(5)) / 2))
    rest = u * PHI ** (-k)
    for kk in (k, k - 1, k + 1):
        rest = u * PHI ** (-kk)
        if rest == 1:
            return 1, kk
        if rest == -1:
            return -1, kk
    raise ValueError(f"{u} is not of the form +-phi^k")


# ---------------------------------------------------------------------------
# prime ideals

@dataclass(frozen=True)
class PrimeIdealK:
    """A prime of O_K, stored by its principal generator."""

    residue_char: int
    splitting: str          # 'ramified' | 'split' | 'inert'
    generator: QuadElement
    residue_degree: int
    ramification_index: int
    index: int = 1          # 1 or 2 among the primes above a split q
    phi_image: int | None = None   # image of phi in F_q when f = 1

    @property
    def norm(self) -> int:
        return self.residue_char ** self.residue_degree

    @property
    def label(self) -> str:
        return f"{self.norm}.{self.index}"

    def __str__(self):
        return (f"({self.residue_char}, {self.residue_degree}, "
                f"{self.ramification_index}) gen {format_element(self.generator)}")

    def __repr__(self):
        return f"PrimeIdealK<{self.label}>"


def _is_prime(n: int) -> bool:
    return bool(isprime(n))


def _canonical_generator(a: QuadElement) -> QuadElement:
    """Positive norm, totally positive, smallest trace in the orbit under phi^2."""
    if a.norm() < 0:
        a = a * PHI
    if not a.is_totally_positive():
        a = -a
    phi2, phim2 = PHI ** 2, PHI ** (-2)
    while True:
        if (a * phi2).trace() < a.trace():
            a = a * phi2
        elif (a * phim2).trace() < a.trace():
            a = a * phim2
        else:
            return a


def _round_quotient(a: QuadElement, b: QuadElement) -> QuadElement:
    t = a / b
    return QuadElement(round(t.x), round(t.y))


def euclid_gcd(a: QuadElement, b: QuadElement) -> QuadElement:
    """gcd in Z[phi]; rounding both coordinates has remainder norm at most 3/4 of |N(b)|."""
    while b:
        a, b = b, a - _round_quotient(a, b) * b
    return a


def _split_generator(q: int, r: int) -> QuadElement:
    """Generator of (q, phi - r) for a root r of x^2 - x - 1 mod q."""
    g = euclid_gcd(QuadElement(q), QuadElement(-r, 1))
    if abs(g.norm()) != q:
        raise ArithmeticError(f"no generator found above {q}")
    return _canonical_generator(g)


@lru_cache(maxsize=None)
def factor_rational_prime(q: int) -> tuple[PrimeIdealK, ...]:
    """The primes of K above q, ordered by the residue of phi."""
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 5:
        return (PrimeIdealK(5, "ramified", SQRT5, 1, 2, 1, 3),)
    if q % 5 in (1, 4):
        s5 = sqrt_mod(5, q)
        roots = sorted({(1 + s5) * pow(2, -1, q) % q, (1 - s5) * pow(2, -1, q) % q})
        return tuple(
            PrimeIdealK(q, "split", _split_generator(q, r), 1, 1, i + 1, r)
            for i, r in enumerate(roots))
    return (PrimeIdealK(q, "inert", QuadElement(q), 2, 1, 1, None),)


def prime_above(q: int, index: int = 1) -> PrimeIdealK:
    return factor_rational_prime(q)[index - 1]


def prime_from_label(label: str) -> PrimeIdealK:
    """Parse 'N.i' where N is the norm of the prime."""
    n, i = label.split(".")
    n, i = int(n), int(i)
    q = min(factorint(n))
    primes = factor_rational_prime(q)
    if primes[0].norm != n or not 1 <= i <= len(primes):
        raise ValueError(f"no prime with label {label}")
    return primes[i - 1]


Q2 = prime_above(2)
Q5 = prime_above(5)


def valuation_at(a, P: PrimeIdealK):
    """v_P(a), normalized so that v_P(generator) = 1; +inf for zero."""
    a = QuadElement.coerce(a)
    if not a:
        return INF
    q = P.residue_char
    v = 0
    # clear the denominator: v(a) = v(a*d) - v(d)
    d = a.denominator()
    vd = 0
    while d % q == 0:
        d //= q
        vd += 1
    b = a * a.denominator()
    vden = vd * P.ramification_index
    pi_inv = P.generator.inverse()
    while True:
        c = b * pi_inv
        if not c.is_integral():
            break
        b = c
        v += 1
    return v - vden


def element_valuation_rational(n: Rational, P: PrimeIdealK):
    """v_P of a rational number, computed without leaving Q."""
    n = _q(n)
    if n == 0:
        return INF
    q = P.residue_char
    v = 0
    num, den = n.numerator, n.denominator
    while num % q == 0:
        num //= q
        v += 1
    while den % q == 0:
        den //= q
        v -= 1
    return v * P.ramification_index


# ---------------------------------------------------------------------------
# residue rings O_K / P^k

class ResidueRing:
    """O_K/P^k with canonical representatives from a Hermite basis."""

    def __init__(self, P: PrimeIdealK, k: int):
        if k < 0:
            raise ValueError("k must be nonnegative")
        self.P = P
        self.k = k
        g = P.generator ** k
        v1 = (int(g.x), int(g.y))
        gphi = g * PHI
        v2 = (int(gphi.x), int(gphi.y))
        # Hermite form: rows (h, 0) and (xo, yg)
        (x1, y1), (x2, y2) = v1, v2
        gcd, s, t = _xgcd(y1, y2)
        if gcd < 0:
            gcd, s, t = -gcd, -s, -t
        xo = s * x1 + t * x2
        det = abs(x1 * y2 - x2 * y1)
        self.h = det // gcd if gcd else det
        self.yg = gcd
        self.xo = xo % self.h if self.h else 0
        self.order = det
        self._unit_count = self.order - self.order // P.norm if k > 0 else 1

    def __repr__(self):
        return f"ResidueRing({self.P.label}, {self.k})"

    def _reduce_coords(self, x: int, y: int) -> tuple[int, int]:
        if self.k == 0:
            return (0, 0)
        m = y // self.yg
        y -= m * self.yg
        x -= m * self.xo
        return (x % self.h, y)

    def __call__(self, a) -> "ResidueClass":
        return self.reduce(a)

    def reduce(self, a) -> "ResidueClass":
        a = QuadElement.coerce(a)
        if a.is_integral():
            return ResidueClass(self, *self._reduce_coords(int(a.x), int(a.y)))
        if valuation_at(a, self.P) < 0:
            raise ValueError(f"{a} is not integral at {self.P.label}")
        d = a.denominator()
        q = self.P.residue_char
        m = 0
        while d % q == 0:
            d //= q
            m += 1
        beta = a * (q ** m * d)
        e = self.P.ramification_index
        num = beta / self.P.generator ** (e * m)
        den = (QuadElement(q) / self.P.generator ** e) ** m * d
        if not (num.is_integral() and den.is_integral()):
            raise ArithmeticError("local integrality bookkeeping failed")
        return self.reduce(num) * self.reduce(den).inverse()

    def elements(self) -> Iterator["ResidueClass"]:
        for y in range(self.yg if self.k else 1):
            for x in range(self.h if self.k else 1):
                yield ResidueClass(self, x, y)

    def units(self) -> Iterator["ResidueClass"]:
        for r in self.elements():
            if r.is_unit():
                yield r

    @property
    def unit_count(self) -> int:
        return self._unit_count

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and self.P == other.P and self.k == other.k

    def __hash__(self):
        return hash((self.P, self.k))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qt = a // b
        a, b = b, a - qt * b
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    return a, x0, y0


class ResidueClass:
    __slots__ = ("ring", "x", "y")

    def __init__(self, ring: ResidueRing, x: int, y: int):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("ResidueClass is immutable")

    def lift(self) -> QuadElement:
        return QuadElement(self.x, self.y)

    def _wrap(self, a: QuadElement) -> "ResidueClass":
        return ResidueClass(self.ring, *self.ring._reduce_coords(int(a.x), int(a.y)))

    def _other(self, o) -> QuadElement:
        if isinstance(o, ResidueClass):
            if o.ring != self.ring:
                raise ValueError("residue classes from different rings")
            return o.lift()
        return QuadElement.coerce(o)

    def __add__(self, o):
        return self._wrap(self.lift() + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.lift() - self._other(o))

    def __rsub__(self, o):
        return self._wrap(self._other(o) - self.lift())

    def __neg__(self):
        return self._wrap(-self.lift())

    def __mul__(self, o):
        return self._wrap(self.lift() * self._other(o))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.reduce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_unit(self) -> bool:
        if self.ring.k == 0:
            return True
        return valuation_at(self.lift(), self.ring.P) == 0

    def inverse(self) -> "ResidueClass":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        return self ** (self.ring.unit_count - 1)

    def __eq__(self, other):
        if isinstance(other, ResidueClass):
            return self.ring == other.ring and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction, QuadElement)):
            try:
                return self == self.ring.reduce(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.P, self.ring.k, self.x, self.y))

    def __repr__(self):
        return f"[{format_element(self.lift())} mod {self.ring.P.label}^{self.ring.k}]"


def reduce_mod_prime_power(a, P: PrimeIdealK, k: int) -> ResidueClass:
    return ResidueRing(P, k).reduce(a)


def multiplicative_order(r: ResidueClass) -> int:
    if not r.is_unit():
        raise ValueError("not a unit")
    one = r.ring.reduce(1)
    n, acc = 1, r
    while acc != one:
        acc = acc * r
        n += 1
    return n


def unit_image_mod(P: PrimeIdealK, k: int) -> frozenset:
    """Image of the global units <-1, phi> in (O_K/P^k)^x."""
    R = ResidueRing(P, k)
    gens = [R.reduce(-1), R.reduce(PHI)]
    seen = {R.reduce(1)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(seen)


def residue_field_coords(a, P: PrimeIdealK) -> tuple[int, ...]:
    """Image of a in the residue field of P.

    Returns (value,) in F_q when f = 1 and (x, y) on the basis {1, phibar}
    when P is inert.
    """
    r = reduce_mod_prime_power(a, P, 1)
    q = P.residue_char
    if P.residue_degree == 1:
        return ((r.x + r.y * P.phi_image) % q,)
    return (r.x % q, r.y % q)


def is_square(a) -> QuadElement | None:
    """Exact square root in K, or None."""
    a = QuadElement.coerce(a)
    if not a:
        return ZERO
    n = a.norm()
    if n < 0:
        return None
    rn = _rational_sqrt(n)
    if rn is None:
        return None
    for s in (rn, -rn):
        t2 = a.trace() + 2 * s
        t = _rational_sqrt(t2)
        if t is None or t == 0:
            continue
        b = (a + s) / t
        if b * b == a:
            return b
    # roots of trace zero: b = y sqrt5 with a = 5 y^2
    if a.is_rational():
        y = _rational_sqrt(_q(a.x) / 5)
        if y is not None:
            return SQRT5 * y
    return None


def _rational_sqrt(r: Fraction) -> Fraction | None:
    r = _q(r)
    if r < 0:
        return None
    n, d = r.numerator, r.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


def small_elements(height: int) -> Iterator[QuadElement]:
    """Nonzero integral elements x + y*phi with |x|, |y| <= height."""
    for x in range(-height, height + 1):
        for y in range(-height, height + 1):
            if x or y:
                yield QuadElement(x, y)
