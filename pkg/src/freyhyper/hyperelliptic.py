"""Hyperelliptic equations y^2 + Q(x) y = P(x) over Q or K = Q(sqrt 5).

Conventions.  With n = 2g + 2 and R = 4P + Q^2 of leading coefficient c,

    Delta_E = 2^(-4(g+1)) Delta(R)        if deg R = 2g + 2,
    Delta_E = 2^(-4(g+1)) c^2 Delta(R)    if deg R = 2g + 1,

where Delta(H) = (-1)^(m(m-1)/2) Res(H, H')/lc(H) for deg H = m.  For Q = 0
this is Delta_E = 2^(4g) Delta(P).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .finitefield import GF, GFElem, get_field
from .numfield import (INF, PrimeIdealK, QuadElement, ResidueRing,
                       element_valuation_rational, format_element,
                       parse_element, residue_field_coords, valuation_at)
from .poly import Poly, poly_discriminant, square_free_decomposition


class DegreeWindowError(ValueError):
    """The polynomials violate 2g+1 <= max(2 deg Q, deg P) <= 2g+2."""


class SingularModelError(ValueError):
    pass


def coeff_valuation(c, P: PrimeIdealK):
    if isinstance(c, QuadElement):
        if c.y == 0:
            return element_valuation_rational(c.x, P)
        return valuation_at(c, P)
    return element_valuation_rational(c, P)


@dataclass(frozen=True)
class HyperellipticModel:
    P: Poly
    Q: Poly
    g: int

    def __post_init__(self):
        if not isinstance(self.P, Poly):
            object.__setattr__(self, "P", Poly(self.P))
        if not isinstance(self.Q, Poly):
            object.__setattr__(self, "Q", Poly(self.Q))
        g = self.g
        if g < 1:
            raise DegreeWindowError("genus must be at least 1")
        dq, dp = self.Q.degree, self.P.degree
        if dq > g + 1 or dp > 2 * g + 2:
            raise DegreeWindowError(
                f"deg Q = {dq} or deg P = {dp} too large for genus {g}")
        top = max(2 * dq, dp)
        if not 2 * g + 1 <= top <= 2 * g + 2:
            raise DegreeWindowError(
                f"max(2 deg Q, deg P) = {top} outside [{2*g+1}, {2*g+2}]")

    @property
    def n(self) -> int:
        return 2 * self.g + 2

    @property
    def R(self) -> Poly:
        return 4 * self.P + self.Q * self.Q

    def is_odd_degree(self) -> bool:
        return (self.P.degree == 2 * self.g + 1 and self.P.lc == 1
                and self.Q.degree <= self.g)

    def map(self, fn) -> "HyperellipticModel":
        return HyperellipticModel(self.P.map(fn), self.Q.map(fn), self.g)

    def coefficients(self):
        return list(self.P.coeffs) + list(self.Q.coeffs)

    def is_integral_at(self, p: PrimeIdealK) -> bool:
        return all(coeff_valuation(c, p) >= 0 for c in self.coefficients())

    def to_text(self) -> str:
        return model_to_text(self)

    def __str__(self):
        if self.Q.is_zero():
            return f"y^2 = {self.P}"
        return f"y^2 + ({self.Q})*y = {self.P}"


# ---------------------------------------------------------------------------
# serialization "[P-coeffs | Q-coeffs | g]", coefficients low degree first

def _fmt_coeff(c) -> str:
    if isinstance(c, QuadElement):
        return format_element(c).replace(" ", "")
    return str(c)


def _parse_coeff(s: str):
    s = s.strip()
    if "phi" in s:
        return parse_element(s)
    return Fraction(s)


def model_to_text(m: HyperellipticModel) -> str:
    def part(p: Poly):
        return ", ".join(_fmt_coeff(c) for c in p.coeffs) if p.coeffs else "0"
    return f"[{part(m.P)} | {part(m.Q)} | {m.g}]"


def model_from_text(text: str) -> HyperellipticModel:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError("model text must look like [P | Q | g]")
    parts = body[1:-1].split("|")
    if len(parts) != 3:
        raise ValueError("model text must have three '|'-separated parts")
    P = Poly(_parse_coeff(c) for c in parts[0].split(",") if c.strip())
    Q = Poly(_parse_coeff(c) for c in parts[1].split(",") if c.strip())
    return HyperellipticModel(P, Q, int(parts[2]))


# ---------------------------------------------------------------------------
# discriminants

def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return _normalize(Fraction(a, b))
    return _normalize(a / b)


def _normalize(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    if isinstance(v, QuadElement) and v.y == 0:
        return _normalize(v.x)
    return v


def discriminant(model: HyperellipticModel):
    """Delta_E of the equation; zero exactly when it is singular."""
    g = model.g
    R = model.R
    scale = Fraction(1, 2 ** (4 * (g + 1)))
    if R.degree == 2 * g + 2:
        return _normalize(poly_discriminant(R) * scale)
    if R.degree == 2 * g + 1:
        return _normalize(poly_discriminant(R) * R.lc * R.lc * scale)
    # outside the window R has a multiple root at infinity
    return 0


def is_singular(model: HyperellipticModel) -> bool:
    return discriminant(model) == 0


# ---------------------------------------------------------------------------
# transformations

@dataclass(frozen=True)
class ModelTransformation:
    """x = (a u + b)/(c u + d), y = (e z + H(u))/(c u + d)^(g+1)."""

    a: object = 1
    b: object = 0
    c: object = 0
    d: object = 1
    e: object = 1
    H: Poly = field(default_factory=Poly)

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("degenerate transformation: ad - bc = 0")
        if self.e == 0:
            raise ValueError("degenerate transformation: e = 0")
        if not isinstance(self.H, Poly):
            object.__setattr__(self, "H", Poly(self.H))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class OddModelTransformation:
    """x = e^2 u + r, y = e^(2g+1) z + t(u)."""

    e: object
    r: object = 0
    t: Poly = field(default_factory=Poly)

    def general(self, g: int) -> ModelTransformation:
        t = self.t if isinstance(self.t, Poly) else Poly(self.t)
        return ModelTransformation(self.e ** 2, self.r, 0, 1,
                                   self.e ** (2 * g + 1), t)


def _homogenize(p: Poly, deg: int, T: ModelTransformation) -> Poly:
    num = Poly([T.b, T.a])
    den = Poly([T.d, T.c])
    out = Poly()
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        out = out + c * (num ** i) * (den ** (deg - i))
    return out


def apply_transformation(model: HyperellipticModel, T) -> HyperellipticModel:
    if isinstance(T, OddModelTransformation):
        T = T.general(model.g)
    g = model.g
    Pt = _homogenize(model.P, 2 * g + 2, T)
    Qt = _homogenize(model.Q, g + 1, T)
    H = T.H
    e = T.e
    newQ = (2 * H + Qt).map(lambda v: _exact_div(v, e))
    e2 = e * e
    S = Pt - Qt * H - H * H
    newP = S.map(lambda v: _exact_div(v, e2))
    return HyperellipticModel(newP, newQ, g)


def covariance_factor(model: HyperellipticModel, T) -> object:
    """Delta_F / Delta_E = e^(-4(n-1)) (ad - bc)^(n(n-1))."""
    if isinstance(T, OddModelTransformation):
        T = T.general(model.g)
    n = model.n
    return _exact_div(T.det ** (n * (n - 1)), T.e ** (4 * (n - 1)))


def discriminant_modulus(model: HyperellipticModel, odd: bool = False) -> int:
    g, n = model.g, model.n
    if odd:
        return 4 * g * (2 * g + 1)
    return math.gcd(4 * (n - 1), n * (n - 1))


@dataclass(frozen=True)
class DiscriminantClass:
    valuation: int
    modulus: int
    residue: int
    odd_modulus: Optional[int]
    odd_residue: Optional[int]


def discriminant_class(model: HyperellipticModel, p: PrimeIdealK) -> DiscriminantClass:
    D = discriminant(model)
    if D == 0:
        raise SingularModelError("discriminant class of a singular model")
    v = coeff_valuation(D, p)
    m = discriminant_modulus(model)
    if model.is_odd_degree():
        mo = discriminant_modulus(model, odd=True)
        return DiscriminantClass(v, m, v % m, mo, v % mo)
    return DiscriminantClass(v, m, v % m, None, None)


# ---------------------------------------------------------------------------
# valuation vectors

@dataclass(frozen=True)
class ValuationVectors:
    P: tuple
    Q: tuple

    def scaled(self, factor: int) -> "ValuationVectors":
        """Valuations over an extension with ramification index `factor`."""
        return ValuationVectors(tuple(v * factor for v in self.P),
                                tuple(v * factor for v in self.Q))

    def __str__(self):
        def f(vs):
            return "(" + ",".join("inf" if v == INF else str(v) for v in vs) + ")"
        return f"P{f(self.P)} Q{f(self.Q)}"


def valuation_vectors(model: HyperellipticModel, p: PrimeIdealK) -> ValuationVectors:
    n, g = model.n, model.g
    pv = tuple(coeff_valuation(model.P[i], p) for i in range(n + 1))
    qv = tuple(coeff_valuation(model.Q[i], p) for i in range(g + 2))
    return ValuationVectors(pv, qv)


def matches_pattern(vals: Sequence, pattern: Sequence[str]) -> bool:
    """Compare valuations to entries like '8', '>=8', 'inf'."""
    if len(vals) != len(pattern):
        return False
    for v, pat in zip(vals, pattern):
        pat = pat.strip()
        if pat == "inf":
            if v != INF:
                return False
        elif pat.startswith(">="):
            if v < int(pat[2:]):
                return False
        elif v != int(pat):
            return False
    return True


# ---------------------------------------------------------------------------
# reduction helpers

def reduce_coefficient(c, p: PrimeIdealK, F: GF) -> int:
    """Image of a p-integral coefficient in a field F containing k_p."""
    q = p.residue_char
    if isinstance(c, QuadElement) and c.y != 0:
        coords = residue_field_coords(c, p)
        if len(coords) == 1:
            return F.from_int(coords[0])
        x, y = coords
        phi = F.embed_phi()
        return int(F.add(F.from_int(x), F.mul(F.from_int(y), phi)))
    if isinstance(c, QuadElement):
        c = c.x
    c = Fraction(c)
    if c.denominator % q == 0:
        raise ValueError(f"{c} is not integral at {p.label}")
    return F.from_int(c.numerator * pow(c.denominator, -1, q))


def reduce_poly(poly: Poly, p: PrimeIdealK, F: GF) -> list[int]:
    return [reduce_coefficient(c, p, F) for c in poly.coeffs]


def double_root_criterion(model: HyperellipticModel, p: PrimeIdealK) -> str:
    """'bad-semistable' when the reduction has only nodes, else 'fails'."""
    q = p.residue_char
    if q == 2:
        raise ValueError("double root criterion is not implemented in residue characteristic 2")
    if not model.is_integral_at(p):
        raise ValueError(f"model is not integral at {p.label}")
    F = get_field(q, p.residue_degree)
    Rbar = Poly(GFElem(F, v) for v in reduce_poly(model.R, p, F))
    if Rbar.is_zero():
        return "fails"
    if Rbar.degree < 2 * model.g + 1:
        return "fails"
    # plain ints arising in the arithmetic lie in F_q and are their own p-th roots
    parts = square_free_decomposition(
        Rbar, q, lambda c: c.pth_root() if isinstance(c, GFElem) else c)
    mults = [m for _, m in parts]
    if mults and max(mults) == 2:
        return "bad-semistable"
    return "fails"


# ---------------------------------------------------------------------------
# odd models and the good-model search

def rational_roots(poly: Poly) -> list:
    """Roots in the coefficient field (Q, or K when coefficients involve phi)."""
    import sympy
    xs = sympy.Symbol("x")
    has_phi = any(isinstance(c, QuadElement) and c.y != 0 for c in poly.coeffs)
    s5 = sympy.sqrt(5)

    def to_sym(c):
        if isinstance(c, QuadElement):
            return sympy.Rational(c.x.numerator, c.x.denominator) + \
                sympy.Rational(c.y.numerator, c.y.denominator) * (1 + s5) / 2
        c = Fraction(c)
        return sympy.Rational(c.numerator, c.denominator)

    expr = sum(to_sym(c) * xs ** i for i, c in enumerate(poly.coeffs))
    if has_phi:
        _, facs = sympy.factor_list(sympy.expand(expr), xs, extension=s5)
    else:
        _, facs = sympy.factor_list(sympy.expand(expr), xs)
    roots = []
    for fac, _mult in facs:
        fp = sympy.Poly(fac, xs)
        if fp.degree() != 1:
            continue
        a1, a0 = fp.all_coeffs()
        r = sympy.nsimplify(sympy.expand(-a0 / a1))
        u = sympy.expand(r)
        # split u = A + B sqrt5 and convert to the phi basis
        B = sympy.Rational(u.coeff(s5))
        A = sympy.Rational(sympy.expand(u - B * s5))
        val = QuadElement(Fraction(int(A.p), int(A.q)) - Fraction(int(B.p), int(B.q)),
                          2 * Fraction(int(B.p), int(B.q)))
        roots.append(val.x if val.y == 0 else val)
    return roots


def odd_model_through_point(model: HyperellipticModel, x0) -> tuple[HyperellipticModel, list]:
    """Move the Weierstrass point above x = x0 to infinity and make P monic."""
    g = model.g
    R = model.R
    if R(x0) != 0:
        raise ValueError(f"x = {x0} is not a Weierstrass point")
    Qx0 = model.Q(x0)
    H = Poly([0] * (g + 1) + [-Fraction(1, 2) * Qx0]) if Qx0 != 0 else Poly()
    T1 = ModelTransformation(x0, 1, 1, 0, 1, H)
    m1 = apply_transformation(model, T1)
    lam = m1.R[2 * g + 1]
    s = Fraction(4) / lam if not isinstance(lam, QuadElement) else QuadElement(4) / lam
    w = s ** g
    T2 = ModelTransformation(s, 0, 0, 1, w, Poly())
    m2 = apply_transformation(m1, T2)
    if not m2.is_odd_degree():
        raise ArithmeticError("conversion to an odd model failed")
    return m2, [T1, T2]


@dataclass
class GoodReductionResult:
    status: str                     # 'good' | 'unknown'
    witness: Optional[HyperellipticModel] = None
    steps: list = field(default_factory=list)
    reason: str = ""

    @property
    def is_good(self) -> bool:
        return self.status == "good"


def _two_residues(p: PrimeIdealK, rational_only: bool):
    """Representatives of O/2O at p (only 0 when p is odd)."""
    if p.residue_char != 2:
        return [0]
    reps = [QuadElement(x, y) for x in (0, 1) for y in (0, 1)]
    if rational_only:
        reps = [r for r in reps if r.y == 0]
    return [r.x if r.y == 0 else r for r in reps]


def _integral_and_square_mod4(R: Poly, tau: Poly, p: PrimeIdealK) -> bool:
    v4 = coeff_valuation(4, p)
    for i in range(len(R.coeffs)):
        if coeff_valuation(R[i], p) < 0:
            return False
    diff = R - tau * tau
    return all(coeff_valuation(c, p) >= v4 for c in diff.coeffs)


def _find_tau(R: Poly, g: int, p: PrimeIdealK, rational_only: bool):
    reps = _two_residues(p, rational_only)
    for combo in itertools.product(reps, repeat=g + 1):
        tau = Poly(combo)
        if _integral_and_square_mod4(R, tau, p):
            return tau
    return None


def _rescale(R: Poly, e, r, g: int) -> Poly:
    """R(e^2 u + r) / e^(2(2g+1))."""
    e2 = e * e
    shifted = R.shift(r).scale(e2)
    den = e2 ** (2 * g + 1)
    return shifted.map(lambda c: _exact_div(c, den))


def _witness(R: Poly, tau: Poly, g: int) -> HyperellipticModel:
    P = (R - tau * tau).map(lambda c: _exact_div(c, 4))
    return HyperellipticModel(P, tau, g)


def good_reduction_via_odd_model(model: HyperellipticModel, p: PrimeIdealK,
                                 search_budget: int = 1,
                                 weierstrass_x=None) -> GoodReductionResult:
    """Look for an integral odd model with unit discriminant at p."""
    g = model.g
    D = discriminant(model)
    if D == 0:
        return GoodReductionResult("unknown", reason="singular equation")
    steps: list = []
    if model.is_odd_degree():
        odd = model
        if odd.is_integral_at(p) and coeff_valuation(D, p) == 0:
            return GoodReductionResult("good", model, steps, "given model")
    else:
        if weierstrass_x is None:
            roots = rational_roots(model.R)
            if not roots:
                return GoodReductionResult("unknown", reason="no rational Weierstrass point")
            weierstrass_x = roots[0]
        odd, ts = odd_model_through_point(model, weierstrass_x)
        steps.extend(ts)
    R = odd.R
    rational = all(not isinstance(c, QuadElement) or c.y == 0 for c in R.coeffs)
    pi = p.generator
    pi_val = pi.x if pi.y == 0 else pi
    # integralize with e = pi^(-k)
    k = 0
    tau = None
    while k <= 20:
        e = _exact_div(1, pi_val ** k)
        Rk = _rescale(R, e, 0, g) if k else R
        for rational_only in ((True, False) if rational else (False,)):
            tau = _find_tau(Rk, g, p, rational_only)
            if tau is not None:
                break
        if tau is not None:
            break
        k += 1
    if tau is None:
        return GoodReductionResult("unknown", reason="could not integralize", steps=steps)
    if k:
        steps.append(("integralize", k))
    base = _witness(Rk, tau, g)
    vD = coeff_valuation(discriminant(base), p)
    step = 4 * g * (2 * g + 1)
    if vD == 0:
        return GoodReductionResult("good", base, steps, "integral odd model")
    if vD % step:
        return GoodReductionResult("unknown", reason=f"v(Delta) = {vD} not divisible by {step}", steps=steps)
    m = vD // step
    if m > search_budget:
        return GoodReductionResult("unknown", reason=f"needs v(e) = {m} > budget {search_budget}", steps=steps)
    e = pi_val ** m
    ring = ResidueRing(p, 2 * m)
    reps = sorted(ring.elements(), key=lambda c: (c.y != 0, c.y, c.x))
    for rc in reps:
        if rational and rc.y != 0:
            continue
        r = rc.x if rc.y == 0 else rc.lift()
        Re = _rescale(Rk, e, r, g)
        if any(coeff_valuation(c, p) < 0 for c in Re.coeffs):
            continue
        tau2 = None
        for rational_only in ((True, False) if rational else (False,)):
            tau2 = _find_tau(Re, g, p, rational_only)
            if tau2 is not None:
                break
        if tau2 is None:
            continue
        w = _witness(Re, tau2, g)
        if coeff_valuation(discriminant(w), p) == 0 and w.is_integral_at(p):
            steps.append(("odd-substitution", e, r, tau2))
            return GoodReductionResult("good", w, steps, f"search with v(e) = {m}")
    if rational:
        # fall back to all residues of O_K
        for rc in reps:
            if rc.y == 0:
                continue
            Re = _rescale(Rk, e, rc.lift(), g)
            if any(coeff_valuation(c, p) < 0 for c in Re.coeffs):
                continue
            tau2 = _find_tau(Re, g, p, False)
            if tau2 is None:
                continue
            w = _witness(Re, tau2, g)
            if coeff_valuation(discriminant(w), p) == 0:
                steps.append(("odd-substitution", e, rc.lift(), tau2))
                return GoodReductionResult("good", w, steps, f"search with v(e) = {m}")
    return GoodReductionResult("unknown", reason="search exhausted", steps=steps)
