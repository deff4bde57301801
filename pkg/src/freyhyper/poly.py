"""Dense univariate polynomials over exact coefficient rings.

Coefficients are stored low degree first.  Any ring whose elements support
+, -, * and compare equal to 0 works (int, Fraction, QuadElement, finite
field elements, sympy expressions); division needs a field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if len(self.coeffs) != len(other.coeffs):
                return False
            return all(a == b for a, b in zip(self.coeffs, other.coeffs))
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other):
        return Poly(other * c for c in self.coeffs)

    def __pow__(self, n: int):
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, v):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def map(self, fn) -> "Poly":
        return Poly(fn(c) for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def shift(self, r) -> "Poly":
        """P(x + r)."""
        return self.compose(Poly([r, 1]))

    def scale(self, s) -> "Poly":
        """P(s x)."""
        out, sp = [], 1
        for c in self.coeffs:
            out.append(c * sp)
            sp = sp * s
        return Poly(out)

    def reverse(self, n: int) -> "Poly":
        """x^n P(1/x) for n >= deg P."""
        if n < self.degree:
            raise ValueError("reverse degree below polynomial degree")
        cs = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if len(rem) <= dq:
            return Poly(), self
        quo = [0] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if _is_zero(c):
                continue
            t = _div(c, lc)
            quo[i - dq] = t
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] = rem[i - dq + j] - t * b
        return Poly(quo), Poly(rem[:dq])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        lc = self.lc
        return Poly(_div(c, lc) for c in self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero(c):
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = str(c)
            if " " in cs:
                cs = f"({cs})"
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def resultant(A: Poly, B: Poly):
    """Res(A, B) over a field, by the Euclidean algorithm."""
    if A.is_zero() or B.is_zero():
        return 0
    m, n = A.degree, B.degree
    res = 1
    while True:
        if n == 0:
            return res * B.lc ** m
        if m == 0:
            return res * A.lc ** n
        R = A % B
        if R.is_zero():
            return 0
        k = R.degree
        if (m * n) % 2:
            res = -res
        res = res * B.lc ** (m - k)
        A, B, m, n = B, R, n, k


def poly_discriminant(H: Poly):
    """(-1)^(n(n-1)/2) Res(H, H')/lc(H)."""
    if H.is_zero():
        raise ValueError("discriminant of the zero polynomial")
    n = H.degree
    if n < 1:
        raise ValueError("discriminant needs degree at least 1")
    r = resultant(H, H.derivative())
    d = _div(r, H.lc)
    if (n * (n - 1) // 2) % 2:
        d = -d
    if isinstance(d, Fraction) and d.denominator == 1:
        return d.numerator
    return d


def square_free_decomposition(f: Poly, p: int, pth_root) -> list[tuple[Poly, int]]:
    """Square-free factors with multiplicities over a perfect field of char p.

    pth_root inverts the Frobenius on coefficients (unused in char 0, p = 0).
    """
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.degree <= 0:
        return out
    d = f.derivative()
    if d.is_zero():
        g = Poly(pth_root(f[i]) for i in range(0, f.degree + 1, p))
        return [(h, m * p) for h, m in square_free_decomposition(g, p, pth_root)]
    c = poly_gcd(f, d)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        fac = w // y
        if fac.degree > 0:
            out.append((fac.monic(), i))
        w = y
        c = c // y
        i += 1
    if c.degree > 0:
        g = Poly(pth_root(c[j]) for j in range(0, c.degree + 1, p))
        out.extend((h, m * p) for h, m in square_free_decomposition(g, p, pth_root))
    return out
