"""Local reduction types, conductor exponents and Serre levels of the r = 5 Frey curves.

Curve-level certificates are turned into conductor exponents of the
2-dimensional representations attached to the Jacobians by fixed rules:
good reduction gives 0, bad semistable reduction gives 1, and at q_5 the
minus curve gets 2 or 3 according to the size of its semistabilizing
extension (degree 4 or 20).  Everything at q_5 is valuation bookkeeping;
no arithmetic in ramified extensions is done.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from sympy import factorint

from .frey import MINUS, PLUS, FreyCurve, FreyTriple, frey_model, frey_rhs, legendre_curves
from .hyperelliptic import (HyperellipticModel, ModelTransformation, ValuationVectors,
                            apply_transformation, coeff_valuation, discriminant,
                            double_root_criterion, matches_pattern, valuation_vectors)
from .numfield import (INF, Q2, Q5, SQRT5, PrimeIdealK, factor_rational_prime)
from .poly import Poly
from .selmer import selmer_group, squarefree_normal_form

GOOD = "good"
SEMISTABLE = "bad-semistable"
POTENTIALLY_GOOD = "potentially-good"
UNDETERMINED = "undetermined"

PLUS_ROW_AT_5 = (">=1", ">=1", "0", "1", "0", "1", "0")
# over M, where v_M(5) = 8
MINUS_ROW_V1 = ("8", "8", ">=8", "8", ">=8", "0", "inf")
MINUS_ROW_V2 = (">=10", "8", ">=8", "8", ">=8", "0", "inf")


class DataIntegrityError(ArithmeticError):
    """An input violates a fact that holds for all genuine solutions."""


@dataclass(frozen=True)
class LocalReductionReport:
    prime: PrimeIdealK
    type: str
    conductor_exponent: Optional[int]
    witness: object = None
    semistabilizing_degree: Optional[int] = None
    notes: tuple = ()

    def __post_init__(self):
        if self.type == GOOD and self.conductor_exponent != 0:
            raise ValueError("good reduction must have exponent 0")
        if self.type == SEMISTABLE and self.conductor_exponent != 1:
            raise ValueError("bad semistable reduction must have exponent 1")
        if self.type == UNDETERMINED and self.conductor_exponent is not None:
            raise ValueError("undetermined reports carry no exponent")

    def summary(self) -> str:
        w = self.witness
        if isinstance(w, HyperellipticModel):
            w = "model " + w.to_text()
        elif w is not None:
            w = str(w)
        if w and len(w) > 100:
            w = w[:60] + " ... " + w[-30:]      # as_dict keeps the full witness
        e = "?" if self.conductor_exponent is None else str(self.conductor_exponent)
        return f"{self.prime.label}\t{self.type}\t{e}\t{w or ''}"

    def as_dict(self) -> dict:
        w = self.witness
        if isinstance(w, HyperellipticModel):
            w = w.to_text()
        elif w is not None:
            w = str(w)
        return {"prime": self.prime.label, "type": self.type,
                "conductor_exponent": self.conductor_exponent, "witness": w,
                "semistabilizing_degree": self.semistabilizing_degree,
                "notes": list(self.notes)}


def _primes_dividing(n: int) -> list[PrimeIdealK]:
    out = []
    for ell in sorted(factorint(abs(n))):
        out.extend(factor_rational_prime(ell))
    return out


def _v5(n: int):
    if n == 0:
        return INF
    k = 0
    while n % 5 == 0:
        n //= 5
        k += 1
    return k


# ---------------------------------------------------------------------------
# primes away from 10

def reduction_away_from_10(curve: FreyCurve, P: PrimeIdealK) -> LocalReductionReport:
    if P.residue_char in (2, 5):
        raise ValueError(f"{P.label} lies above 2 or 5")
    model = curve.model
    D = discriminant(model)
    vD = coeff_valuation(D, P)
    if vD == 0:
        return LocalReductionReport(P, GOOD, 0, "v(Delta) = 0")
    t = curve.triple
    if vD == INF:
        return LocalReductionReport(P, UNDETERMINED, None, None,
                                    notes=("singular model",))
    if coeff_valuation(t.a * t.b, P) == 0:
        # only possible for non-solutions: the closed form puts every odd prime of Delta in ab
        return LocalReductionReport(P, UNDETERMINED, None, f"v(Delta) = {vD}",
                                    notes=("prime divides Delta but not ab",))
    verdict = double_root_criterion(model, P)
    if verdict == "bad-semistable":
        return LocalReductionReport(P, SEMISTABLE, 1,
                                    f"v(Delta) = {vD}; reduction has only double roots")
    return LocalReductionReport(P, UNDETERMINED, None, f"v(Delta) = {vD}",
                                notes=("double root criterion failed",))


# ---------------------------------------------------------------------------
# q_5, plus curve

def plus_model_at_5(triple: FreyTriple) -> HyperellipticModel:
    """C^+ after x -> sqrt5 x - a^p - 2c, y -> 5 sqrt5 y."""
    curve = frey_model(triple, PLUS)
    center = -triple.A - 2 * triple.c
    T = ModelTransformation(SQRT5, center, 0, 1, SQRT5 ** 3, Poly())
    return apply_transformation(curve.model, T)


def plus_reduction_at_5(triple: FreyTriple) -> LocalReductionReport:
    if triple.r != 5:
        raise ValueError("only r = 5")
    if (triple.a * triple.b) % 5:
        raise ValueError("plus_reduction_at_5 needs 5 | ab")
    if triple.a % 5:
        return LocalReductionReport(
            Q5, UNDETERMINED, None,
            notes=("5 | b: no semistable model found over K at q_5; "
                   "swap a and b so that 5 | a",))
    model = plus_model_at_5(triple)
    vv = valuation_vectors(model, Q5)
    if not (matches_pattern(vv.P, PLUS_ROW_AT_5) and all(v == INF for v in vv.Q)):
        return LocalReductionReport(Q5, UNDETERMINED, None, vv,
                                    notes=("valuation vectors do not match",))
    if double_root_criterion(model, Q5) != "bad-semistable":
        return LocalReductionReport(Q5, UNDETERMINED, None, vv,
                                    notes=("double root criterion failed",))
    return LocalReductionReport(Q5, SEMISTABLE, 1, vv)


# ---------------------------------------------------------------------------
# q_5, minus curve

def d_of(triple: FreyTriple) -> int:
    """Constant term of F(x - a^p - 2c), F the minus right-hand side."""
    F = frey_rhs(5, MINUS, triple.c, triple.A - triple.B)
    return int(F(-triple.A - 2 * triple.c))


def shifted_minus_poly(triple: FreyTriple) -> Poly:
    F = frey_rhs(5, MINUS, triple.c, triple.A - triple.B)
    return F.shift(-triple.A - 2 * triple.c)


def residue_triple(triple: FreyTriple, modulus: int = 25) -> FreyTriple:
    """Least nonnegative residues of a, b, c."""
    return FreyTriple(triple.a % modulus, triple.b % modulus, triple.c % modulus,
                      triple.p, triple.r)


def _is_eisenstein_at_5(coeffs) -> bool:
    n = len(coeffs) - 1
    if coeffs[n] % 5 == 0:
        return False
    if any(c % 5 for c in coeffs[1:n]):
        return False
    return _v5(coeffs[0]) == 1


@dataclass(frozen=True)
class MinusVerification:
    vectors_M: ValuationVectors
    row: Optional[str]             # 'v1', 'v2' or None
    degree4_integral: bool
    degree4_unit_disc: bool
    g_eisenstein: bool
    g0_eisenstein: bool
    congruent_mod_25: bool

    @property
    def predicted_exponent(self) -> Optional[int]:
        if self.row == "v2" and self.degree4_integral and self.degree4_unit_disc:
            return 2
        if self.row == "v1" and self.g_eisenstein and self.g0_eisenstein and self.congruent_mod_25:
            return 3
        return None


def verify_minus_at_5(triple: FreyTriple) -> MinusVerification:
    """Exponent at q_5 from coefficient valuations alone, without looking at the rule."""
    g = shifted_minus_poly(triple)
    model = HyperellipticModel(g, Poly(), 2)
    # M/K_q5 has ramification index 4
    vm = valuation_vectors(model, Q5).scaled(4)
    row = None
    if all(v == INF for v in vm.Q):
        if matches_pattern(vm.P, MINUS_ROW_V2):
            row = "v2"
        elif matches_pattern(vm.P, MINUS_ROW_V1):
            row = "v1"
    # x -> pi^2 x, y -> pi^5 y over M: v_M(a_i) + 2i - 10 and v_M(Delta) - 40
    integral = all(vm.P[i] + 2 * i - 10 >= 0 for i in range(6))
    vD = 4 * coeff_valuation(discriminant(model), Q5)
    unit_disc = vD - 40 == 0
    gi = [int(c) for c in g.coeffs]
    g0 = [int(c) for c in shifted_minus_poly(residue_triple(triple)).coeffs]
    congruent = len(gi) == len(g0) and all((x - y) % 25 == 0 for x, y in zip(gi, g0))
    return MinusVerification(vm, row, integral, unit_disc, _is_eisenstein_at_5(gi),
                             _is_eisenstein_at_5(g0), congruent)


def minus_conductor_at_5(triple: FreyTriple) -> LocalReductionReport:
    if triple.r != 5:
        raise ValueError("only r = 5")
    if (triple.a * triple.b) % 5 == 0:
        raise ValueError("minus_conductor_at_5 needs 5 not dividing ab")
    d = d_of(triple)
    vd = _v5(d)
    if vd == 0:
        raise DataIntegrityError(f"v_5(d) = 0 for {triple}; not a solution modulo 25")
    exponent, degree = (2, 4) if vd >= 2 else (3, 20)
    ver = verify_minus_at_5(triple)
    if ver.predicted_exponent != exponent:
        return LocalReductionReport(
            Q5, UNDETERMINED, None, ver.vectors_M,
            notes=(f"rule from v_5(d) = {vd} gives {exponent}, "
                   f"valuation check gives {ver.predicted_exponent}",))
    return LocalReductionReport(Q5, POTENTIALLY_GOOD, exponent, ver.vectors_M, degree,
                                notes=(f"v_5(d) = {vd}",))


# ---------------------------------------------------------------------------
# q_2, minus curve twisted by chi_0

def _check_case_two(triple: FreyTriple) -> None:
    a, b, c = triple.a, triple.b, triple.c
    if a % 2 or b % 4 != 3 or c % 4 != 3:
        raise ValueError("needs 2 | a and b = c = -1 (mod 4)")
    if triple.p <= 3:
        raise ValueError("needs p > 3")


def minus_conductor_at_2(triple: FreyTriple, chi0=1) -> LocalReductionReport:
    """Exponent of rho_{J^-} (x) chi_0 at q_2 through the Legendre curve E."""
    _check_case_two(triple)
    d0 = squarefree_normal_form(chi0)
    if d0 not in selmer_group([Q2]):
        raise ValueError(f"{d0} is not in K({{q_2}}, 2)")
    leg = legendre_curves(triple)
    notes = [
        "E multiplicative at q_2: v(c4) = 0 < v(Delta_E) = %s" % leg.v2_min_disc,
        "a twist chi_0 in K({q_2}, 2) making chi chi_0 unramified exists for every chi",
        "no degeneration: N(q_2) - 1 = 3 < p",
    ]
    if not leg.multiplicative_at_2:
        return LocalReductionReport(Q2, UNDETERMINED, None, leg.minimal_E,
                                    notes=("E is not multiplicative at 2",))
    return LocalReductionReport(Q2, SEMISTABLE, 1, leg.minimal_E, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Serre level and conductor

@dataclass(frozen=True)
class SerreLevel:
    exponents: dict = field(default_factory=dict)     # prime label -> exponent
    case: str = "I"
    notes: tuple = ()

    def divides(self, other: dict) -> bool:
        return all(other.get(k, 0) >= e for k, e in self.exponents.items())

    def __str__(self):
        if not self.exponents:
            return "(1)"
        return " * ".join(f"{k}^{e}" if e > 1 else k
                          for k, e in sorted(self.exponents.items()))


def classify_case(triple: FreyTriple) -> str:
    a, b, c = triple.a, triple.b, triple.c
    if (a * b) % 2 and (a * b) % 5 == 0:
        return "I"
    if a % 2 == 0 and b % 4 == 3 and c % 4 == 3 and (a * b) % 5:
        return "II"
    raise ValueError(f"{triple} is in neither case I nor case II")


def q_ab(triple: FreyTriple) -> list[PrimeIdealK]:
    """Primes dividing ab away from 10."""
    return [P for P in _primes_dividing(triple.a * triple.b) if P.residue_char not in (2, 5)]


def global_conductor(case: str, triple: FreyTriple, chi0=1) -> dict:
    """Conductor of rho_{J^+} (case I) or rho_{J^-} (x) chi_0 (case II) as label -> exponent."""
    if classify_case(triple) != case:
        raise ValueError(f"triple is not in case {case}")
    curve = frey_model(triple, PLUS if case == "I" else MINUS)
    N = {}
    for P in q_ab(triple):
        e = reduction_away_from_10(curve, P).conductor_exponent
        if e is None:
            raise ArithmeticError(f"exponent at {P.label} undetermined")
        if e:
            N[P.label] = e
    if case == "I":
        e = plus_reduction_at_5(triple).conductor_exponent
        if e is None:
            raise ArithmeticError("exponent at q_5 undetermined")
        N[Q5.label] = e
        return N
    t = minus_conductor_at_5(triple).conductor_exponent
    if t is None:
        raise ArithmeticError("exponent at q_5 undetermined")
    s = minus_conductor_at_2(triple, chi0).conductor_exponent
    N[Q2.label] = s
    N[Q5.label] = t
    return N


def serre_level(case: str, triple: FreyTriple, chi0=1) -> SerreLevel:
    N = global_conductor(case, triple, chi0)
    if case == "I":
        return SerreLevel({Q5.label: 1}, "I", ("level divides q5",))
    return SerreLevel({Q2.label: N[Q2.label], Q5.label: N[Q5.label]}, "II",
                      ("the exponent at q2 may drop to 0; reported as 1",))


def local_report_table(triple: FreyTriple, sign: str) -> list[LocalReductionReport]:
    """Reports at q_2, q_5 and every prime dividing ab."""
    curve = frey_model(triple, sign)
    out = []
    for P in q_ab(triple):
        out.append(reduction_away_from_10(curve, P))
    if sign == PLUS:
        if (triple.a * triple.b) % 5 == 0:
            out.append(plus_reduction_at_5(triple))
        else:
            out.append(LocalReductionReport(Q5, UNDETERMINED, None,
                                            notes=("plus curve rule needs 5 | ab",)))
    else:
        try:
            out.append(minus_conductor_at_5(triple))
        except (ValueError, DataIntegrityError) as exc:
            out.append(LocalReductionReport(Q5, UNDETERMINED, None, notes=(str(exc),)))
        try:
            out.append(minus_conductor_at_2(triple))
        except ValueError as exc:
            out.append(LocalReductionReport(Q2, UNDETERMINED, None, notes=(str(exc),)))
    return out
