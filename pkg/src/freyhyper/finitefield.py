"""Small finite fields GF(p^k) with table-driven, numpy-vectorized arithmetic.

Elements are integers 0..p^k-1 whose base-p digits are the coefficients of
a polynomial in the generator x modulo a fixed irreducible polynomial.  When
x^2 - x - 1 is irreducible over F_p it is used for GF(p^2), so that the
generator is the residue of phi and residue fields of inert primes of
Q(sqrt 5) embed as GF(q^2) directly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from sympy import factorint


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Product of digit lists modulo a monic polynomial (low degree first)."""
    k = len(mod) - 1
    out = [0] * (2 * k - 1 if k else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            for j in range(k + 1):
                out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
    return (out + [0] * k)[:k]


def _poly_powmod_x(e: int, mod: list[int], p: int) -> list[int]:
    k = len(mod) - 1
    result = [1] + [0] * (k - 1)
    base = ([0, 1] + [0] * k)[:k] if k > 1 else [(-mod[0]) % p]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _gcd_modp(a: list[int], b: list[int], p: int) -> list[int]:
    def trim(v):
        v = list(v)
        while v and v[-1] % p == 0:
            v.pop()
        return v
    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            s = len(a) - len(b)
            for j, bj in enumerate(b):
                a[s + j] = (a[s + j] - c * bj) % p
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return a


def is_irreducible_modp(mod: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    k = len(mod) - 1
    if k == 1:
        return True
    xpk = _poly_powmod_x(p ** k, mod, p)
    if xpk != ([0, 1] + [0] * k)[:k]:
        return False
    for r in factorint(k):
        h = _poly_powmod_x(p ** (k // r), mod, p)
        h = list(h)
        h[1] = (h[1] - 1) % p
        g = _gcd_modp(mod, h, p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, k: int) -> list[int]:
    if k == 1:
        return [0, 1]
    if k == 2 and is_irreducible_modp([p - 1, p - 1, 1], p):
        return [(-1) % p, (-1) % p, 1]
    for n in range(p ** k):
        digits = [(n // p ** i) % p for i in range(k)]
        mod = digits + [1]
        if mod[0] == 0:
            continue
        if is_irreducible_modp(mod, p):
            return mod
    raise ArithmeticError(f"no irreducible polynomial of degree {k} mod {p}")


class GF:
    """The field with p^k elements."""

    def __init__(self, p: int, k: int = 1, modulus: list[int] | None = None):
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = list(modulus) if modulus else default_modulus(p, k)
        q = self.q
        pw = np.array([p ** i for i in range(k)], dtype=np.int64)
        self._pw = pw
        ar = np.arange(q, dtype=np.int64)
        self.digits = (ar[:, None] // pw[None, :]) % p
        self._build_tables()
        if p == 2:
            self.abs_trace = self._trace_table()
        else:
            self.abs_trace = None
        lg = self.log
        self.square = np.zeros(q, dtype=bool)
        self.square[0] = True
        if p == 2:
            self.square[:] = True
        else:
            self.square[1:] = (lg[1:] % 2) == 0

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    # table construction
    def _to_digits(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _from_digits(self, d) -> int:
        return int(sum(int(c) * self.p ** i for i, c in enumerate(d)))

    def _build_tables(self):
        q, p, k = self.q, self.p, self.k
        order = q - 1
        primes = list(factorint(order)) if order > 1 else []
        exp = None
        for g in range(1, q):
            gd = self._to_digits(g)
            if k == 1:
                ok = all(pow(g, order // r, p) != 1 for r in primes)
            else:
                ok = True
                for r in primes:
                    e = order // r
                    acc = [1] + [0] * (k - 1)
                    base = gd
                    while e:
                        if e & 1:
                            acc = _poly_mulmod(acc, base, self.modulus, p)
                        base = _poly_mulmod(base, base, self.modulus, p)
                        e >>= 1
                    if acc == [1] + [0] * (k - 1):
                        ok = False
                        break
            if not ok:
                continue
            exp = np.zeros(max(order, 1), dtype=np.int64)
            cur = [1] + [0] * (k - 1)
            for i in range(order):
                exp[i] = self._from_digits(cur)
                cur = _poly_mulmod(cur, gd, self.modulus, p) if k > 1 else [cur[0] * g % p]
            self.primitive = g
            break
        if exp is None:
            raise ArithmeticError("no primitive element")
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        self.exp = exp
        self.log = log

    def _trace_table(self) -> np.ndarray:
        ar = np.arange(self.q, dtype=np.int64)
        acc = ar.copy()
        cur = ar.copy()
        for _ in range(self.k - 1):
            cur = self.mul(cur, cur)
            acc = self.add(acc, cur)
        return acc  # values 0 or 1

    # vectorized arithmetic on integer encodings
    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._pw

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return ((-self.digits[a]) % self.p) @ self._pw

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        z = (a == 0) | (b == 0)
        r = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where(z, 0, r)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        r = self.exp[(self.log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def from_int(self, n: int) -> int:
        """Image of a rational integer."""
        return n % self.p

    def from_prime_field_coeffs(self, coeffs: list[int]) -> int:
        """Element given by its digits (coefficients of the generator)."""
        return self._from_digits([c % self.p for c in coeffs])

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def eval_poly(self, coeffs: list[int], xs):
        """Evaluate a polynomial (low degree first, field encodings) at xs."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, xs), np.full_like(xs, c))
        return acc

    def quadratic_character(self, a):
        """chi(a) in {-1, 0, 1} for odd characteristic."""
        if self.p == 2:
            raise ValueError("quadratic character needs odd characteristic")
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, np.where(self.square[a], 1, -1))

    def roots(self, coeffs: list[int]) -> list[int]:
        vals = self.eval_poly(coeffs, self.elements())
        return [int(i) for i in np.nonzero(vals == 0)[0]]

    def embed_phi(self) -> int:
        """A fixed root of x^2 - x - 1 (the residue of phi)."""
        rs = self.roots([self.from_int(-1), self.from_int(-1), 1])
        if not rs:
            raise ValueError(f"x^2 - x - 1 has no root in {self}")
        return rs[0]

    def element(self, a: int) -> "GFElem":
        return GFElem(self, int(a))


@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> GF:
    return GF(p, k)


class GFElem:
    """Scalar element wrapper, used for polynomial algebra over GF(p^k)."""

    __slots__ = ("F", "v")

    def __init__(self, F: GF, v: int):
        self.F = F
        self.v = int(v)

    def _c(self, o) -> int:
        if isinstance(o, GFElem):
            return o.v
        if isinstance(o, int):
            return o % self.F.p
        return NotImplemented

    def __add__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return GFElem(self.F, int(self.F.add(self.v, c)))

    __radd__ = __add__

    def __neg__(self):
        return GFElem(self.F, int(self.F.neg(self.v)))

    def __sub__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return GFElem(self.F, int(self.F.sub(self.v, c)))

    def __rsub__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return GFElem(self.F, int(self.F.sub(c, self.v)))

    def __mul__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return GFElem(self.F, int(self.F.mul(self.v, c)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return GFElem(self.F, int(self.F.div(self.v, c)))

    def __rtruediv__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return GFElem(self.F, int(self.F.div(c, self.v)))

    def __pow__(self, e: int):
        if e < 0:
            return (GFElem(self.F, 1) / self) ** (-e)
        return GFElem(self.F, int(self.F.power(self.v, e)))

    def pth_root(self) -> "GFElem":
        F = self.F
        return self ** (F.p ** (F.k - 1))

    def __eq__(self, o):
        c = self._c(o)
        if c is NotImplemented:
            return NotImplemented
        return self.v == c

    def __hash__(self):
        return hash((self.F.q, self.v))

    def __repr__(self):
        return f"GF{self.F.q}({self.v})"

    __str__ = __repr__
