"""Published identities replayed as assertions.

Each check returns (ok, detail).  `run_all` is what the `paper-check`
subcommand executes.
"""

from __future__ import annotations

import random
from typing import Callable

from .elimination import eliminate, ingest_space
from .frey import (MINUS, PLUS, FreyTriple, frey_discriminant,
                   frey_model, frey_rhs, legendre_curves, sample_local_triple)
from .frobenius import trace_at_prime
from .hyperelliptic import (HyperellipticModel, OddModelTransformation, apply_transformation,
                            discriminant, discriminant_modulus, double_root_criterion,
                            good_reduction_via_odd_model)
from .localred import (d_of, global_conductor, minus_conductor_at_2, minus_conductor_at_5,
                       plus_reduction_at_5, serre_level)
from .numfield import (PHI, Q2, Q5, QuadElement, factor_rational_prime, fundamental_unit,
                       unit_image_mod, valuation_at, ResidueRing)
from .obstructions import (ray_class_order, reducibility_contradictions,
                           smallest_power_congruent_to_one, unit_bound)
from .poly import Poly
from .selmer import selmer_group, squarefree_normal_form, unramifying_twist

CHECKS: list[tuple[str, Callable]] = []


def check(name: str):
    def deco(fn):
        CHECKS.append((name, fn))
        return fn
    return deco


@check("N(phi - 1) = -1")
def _norm_phi_minus_one():
    n = (PHI - 1).norm()
    return n == -1, f"N = {n}"


@check("5 is ramified with generator 2 phi - 1")
def _five_ramified():
    ps = factor_rational_prime(5)
    P = ps[0]
    ok = len(ps) == 1 and P.ramification_index == 2 and P.residue_degree == 1 \
        and P.generator == QuadElement(-1, 2)
    return ok, str(P)


@check("2 is inert and N(q2) - 1 = 3")
def _two_inert():
    ps = factor_rational_prime(2)
    return len(ps) == 1 and ps[0].norm - 1 == 3, str(ps[0])


@check("v_q5(5^5) = 10")
def _v5():
    v = valuation_at(QuadElement(5 ** 5), Q5)
    return v == 10, f"v = {v}"


@check("fundamental unit phi has norm -1")
def _unit():
    u = fundamental_unit()
    return u == PHI and u.norm() == -1, f"N = {u.norm()}"


@check("units surject onto (O/q2^2)^x")
def _surjective():
    img = unit_image_mod(Q2, 2)
    n = ResidueRing(Q2, 2).unit_count
    return len(img) == n, f"{len(img)} of {n}"


@check("smallest n with phi^n = 1 mod q5 is 4")
def _n1():
    n = smallest_power_congruent_to_one(PHI, {Q5: 1})
    return n == 4, f"n = {n}"


@check("Delta(x^5 - 4) = 2^8 5^5")
def _disc_trivial():
    t = FreyTriple(1, -1, 0, 7)
    d = frey_discriminant(t, MINUS)
    dd = discriminant(frey_model(t, MINUS).model)
    return d == 2 ** 8 * 5 ** 5 and dd == 2 ** 16 * 5 ** 5, f"Delta(P) = {d}, Delta_E = {dd}"


@check("Delta(C+(1,-1,0)) = 2^12 5^5")
def _disc_trivial_plus():
    d = frey_discriminant(FreyTriple(1, -1, 0, 7), PLUS)
    return d == 2 ** 12 * 5 ** 5, f"Delta(P) = {d}"


@check("odd model x -> e^2 u, y -> e^5 z scales Delta by e^-40")
def _odd_law():
    m = HyperellipticModel(Poly([-4, 0, 0, 0, 0, 1]), Poly(), 2)
    e = 3
    m2 = apply_transformation(m, OddModelTransformation(e, 0, Poly()).general(2))
    from fractions import Fraction
    ratio = Fraction(discriminant(m2)) / discriminant(m)
    return ratio == Fraction(1, e ** 40), f"ratio = {ratio}"


@check("odd genus-2 discriminants are classed mod 40")
def _mod40():
    m = HyperellipticModel(Poly([-4, 0, 0, 0, 0, 1]), Poly(), 2)
    k = discriminant_modulus(m, odd=True)
    return k == 40, f"modulus {k}"


@check("explicit r = 3, 5, 7, 11 models")
def _explicit():
    import sympy
    c, d, x = sympy.symbols("c d x")
    lists = {
        3: x ** 3 - 3 * c ** 2 * x - 2 * d,
        5: x ** 5 - 5 * c ** 2 * x ** 3 + 5 * c ** 4 * x - 2 * d,
        7: x ** 7 - 7 * c ** 2 * x ** 5 + 14 * c ** 4 * x ** 3 - 7 * c ** 6 * x - 2 * d,
        11: (x ** 11 - 11 * c ** 2 * x ** 9 + 44 * c ** 4 * x ** 7 - 77 * c ** 6 * x ** 5
             + 55 * c ** 8 * x ** 3 - 11 * c ** 10 * x - 2 * d),
    }
    bad = []
    for r, expected in lists.items():
        for sign, exp in ((MINUS, expected), (PLUS, (x + 2 * c) * expected)):
            F = frey_rhs(r, sign, c, d)
            got = sum(co * x ** i for i, co in enumerate(F.coeffs))
            if sympy.expand(got - exp) != 0:
                bad.append((r, sign))
    return not bad, f"mismatches {bad}" if bad else "all 8 models"


@check("C(1,-1,0) is nonsingular")
def _nonsingular():
    t = FreyTriple(1, -1, 0, 7)
    ok = all(discriminant(frey_model(t, s).model) != 0 for s in (MINUS, PLUS))
    return ok, ""


@check("Legendre curve: v2(Delta_E) = 2 p v2(a) - 8 = 6 for a = 2, p = 7")
def _legendre():
    rep = legendre_curves(FreyTriple(2, -1, 3, 7))
    ok = rep.v2_min_disc == 6 and rep.predicted_v2 == 6 and rep.mod5_level_is_q2
    return ok, f"v2 = {rep.v2_min_disc}"


@check("C- good at q not dividing ab; C+ semistable at q | a")
def _cond_q():
    from .localred import reduction_away_from_10
    t = FreyTriple(1, -1, 0, 7)
    cur = frey_model(t, MINUS)
    good = all(reduction_away_from_10(cur, P).conductor_exponent == 0
               for q in (3, 7, 11) for P in factor_rational_prime(q))
    # a triple solving the equation modulo 3^12, with 3 | a
    from .frey import local_triple
    t3 = local_triple(3, 1, 7, 5, 3 ** 12)
    rep = reduction_away_from_10(frey_model(t3, PLUS), factor_rational_prime(3)[0])
    return good and rep.conductor_exponent == 1, rep.summary()


@check("double root criterion on (x + 2c)(x^2 - c x - c^2)^2")
def _double_root():
    c = 1
    P = Poly([2 * c, 1]) * Poly([-c * c, -c, 1]) ** 2
    m = HyperellipticModel(P, Poly(), 2)
    v = double_root_criterion(m, factor_rational_prime(3)[0])
    return v == "bad-semistable", v


@check("C+ with odd a, b: good at q2 and a_q2 = 0")
def _plus_q2():
    rng = random.Random(7)
    ok, det = True, []
    for _ in range(3):
        t = sample_local_triple(rng, "I")
        cur = frey_model(t, PLUS)
        res = good_reduction_via_odd_model(cur.model, Q2, 2, weierstrass_x=cur.weierstrass_x())
        tr = trace_at_prime(cur, Q2)
        ok &= res.is_good and tr.a == 0 and tr.a_conj == 0
        det.append(str(tr))
    return ok, " ".join(det)


@check("C+ at q5 for 5 | a: vectors (>=1,>=1,0,1,0,1,0)")
def _plus_q5():
    rng = random.Random(8)
    reps = [plus_reduction_at_5(sample_local_triple(rng, "I")) for _ in range(3)]
    ok = all(r.conductor_exponent == 1 for r in reps)
    return ok, str(reps[0].witness)


@check("C- at q5: d(1,-1,0) = -5, exponent 3; rule matches vectors")
def _minus_q5():
    t = FreyTriple(1, -1, 0, 7)
    r0 = minus_conductor_at_5(t)
    rng = random.Random(9)
    reps = [minus_conductor_at_5(sample_local_triple(rng, "II")) for _ in range(10)]
    ok = d_of(t) == -5 and r0.conductor_exponent == 3 and \
        all(r.conductor_exponent in (2, 3) for r in reps)
    return ok, f"exponents {[r.conductor_exponent for r in reps]}"


@check("C- (x) chi0 at q2 has exponent 1 for (2, -1, -1), p = 7")
def _minus_q2():
    r = minus_conductor_at_2(FreyTriple(2, -1, -1, 7))
    return r.conductor_exponent == 1, r.notes[-1]


@check("conductor and Serre level in cases I and II")
def _levels():
    rng = random.Random(10)
    t1 = sample_local_triple(rng, "I")
    N1 = global_conductor("I", t1)
    ok1 = N1.get(Q5.label) == 1 and serre_level("I", t1).exponents == {Q5.label: 1}
    while True:
        t2 = sample_local_triple(rng, "II")
        if minus_conductor_at_5(t2).conductor_exponent == 3:
            break
    lev = serre_level("II", t2)
    ok2 = lev.exponents == {Q2.label: 1, Q5.label: 3}
    return ok1 and ok2, f"case II level {lev}"


@check("K({q2}, 2) is the displayed 8-element set")
def _selmer():
    expected = ["1", "-1", "-2", "2", "(1 - sqrt5)/2", "(sqrt5 - 1)/2", "sqrt5 - 1", "1 - sqrt5"]
    exp = {squarefree_normal_form(_parse_sqrt5(s)) for s in expected}
    got = set(selmer_group([Q2]).representatives)
    return got == exp and len(got) == 8, f"{len(got)} classes"


def _parse_sqrt5(s: str) -> QuadElement:
    s5 = QuadElement(-1, 2)
    table = {"1": QuadElement(1), "-1": QuadElement(-1), "-2": QuadElement(-2),
             "2": QuadElement(2), "(1 - sqrt5)/2": (1 - s5) / 2,
             "(sqrt5 - 1)/2": (s5 - 1) / 2, "sqrt5 - 1": s5 - 1, "1 - sqrt5": 1 - s5}
    return table[s]


@check("chi0 for the trivial character is trivial")
def _chi0():
    return unramifying_twist(1) == 1, ""


@check("unit obstructions: N(phi - 1) = -1, N(phi^4 - 1) = -5")
def _units():
    a = unit_bound(PHI)
    b = unit_bound(PHI ** 4, {Q5: 1})
    return a.given_norm == -1 and not a.primes and b.norm == -5 and b.primes == {5}, ""


@check("ray class groups: inf1 inf2 trivial, q5 inf1 inf2 of order 2")
def _ray():
    a = ray_class_order({}, (1, 2))
    b = ray_class_order({Q5: 1}, (1, 2))
    return a.order == 1 and b.order == 2, f"{a.order}, {b.order}"


@check("reducibility: case I value 5, case II inertia orders 4 and 20")
def _reducible():
    r1 = reducibility_contradictions("I")
    r2 = reducibility_contradictions("II")
    v = r1.items[0].value
    return v == 5 and r1.irreducible_for(7) and r2.irreducible_for(7), f"value {v}"


@check("S2(1) and S2(q5) are empty; case I is vacuous")
def _vacuous():
    spaces = [ingest_space("bundled", {}), ingest_space("bundled", {Q5: 1})]
    rep = eliminate("I", [3, 7, 11], [], spaces)
    return rep.vacuous and all(s.asserted_empty for s in spaces), ""


def run_all(verbose: bool = True) -> tuple[bool, list]:
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:          # report, do not abort the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return all(ok for _, ok, _ in results), results
