"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import random
from fractions import Fraction

import sympy

from freyhyper.elimination import eliminate, ingest_space, rational_form, synthetic_form
from freyhyper.finitefield import get_field
from freyhyper.frey import (MINUS, PLUS, SUPPORTED_R, FreyTriple, frey_discriminant,
                            frey_model, frey_rhs, sample_local_triple)
from freyhyper.frobenius import count_curve, count_points, trace_at_prime
from freyhyper.hyperelliptic import (HyperellipticModel, ModelTransformation,
                                     OddModelTransformation, apply_transformation, discriminant,
                                     good_reduction_via_odd_model)
from freyhyper.localred import d_of, minus_conductor_at_5, verify_minus_at_5
from freyhyper.numfield import PHI, Q2, Q5, SQRT5, QuadElement, factor_rational_prime, prime_above
from freyhyper.obstructions import ray_class_order, unit_bound
from freyhyper.poly import Poly
from freyhyper.selmer import QuadraticCharacter, selmer_group, squarefree_normal_form

from oracles import NaiveField, brute_count, hand_T_rational, sympy_disc


def v5(n: int) -> int:
    k = 0
    while n and n % 5 == 0:
        n //= 5
        k += 1
    return k


def test_1_discriminant_identities(report):
    rng = random.Random(1)
    bad = []
    for r in SUPPORTED_R:
        for sign in (MINUS, PLUS):
            for _ in range(50):
                t = FreyTriple(rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(-20, 20),
                               rng.choice([3, 5, 7]), r)
                m = frey_model(t, sign).model
                g = (r - 1) // 2
                if discriminant(m) != 2 ** (4 * g) * frey_discriminant(t, sign):
                    bad.append((r, sign, t))
    assert report(1, not bad, f"closed-form discriminant = model discriminant on 400 triples"
                              f" ({len(bad)} mismatches)")


def test_2_explicit_models(report):
    c, d, x = sympy.symbols("c d x")
    lists = {
        3: [-2 * d, -3 * c ** 2, 0, 1],
        5: [-2 * d, 5 * c ** 4, 0, -5 * c ** 2, 0, 1],
        7: [-2 * d, -7 * c ** 6, 0, 14 * c ** 4, 0, -7 * c ** 2, 0, 1],
        11: [-2 * d, -11 * c ** 10, 0, 55 * c ** 8, 0, -77 * c ** 6, 0, 44 * c ** 4, 0,
             -11 * c ** 2, 0, 1],
    }
    bad = []
    for r, coeffs in lists.items():
        minus = sum(co * x ** i for i, co in enumerate(coeffs))
        for sign, want in ((MINUS, minus), (PLUS, sympy.expand((x + 2 * c) * minus))):
            got = sum(co * x ** i for i, co in enumerate(frey_rhs(r, sign, c, d).coeffs))
            if sympy.expand(got - want) != 0:
                bad.append((r, sign))
    # and on a concrete triple, d = a^p - b^p with a = 2, b = 1, c = 3
    t = FreyTriple(2, 1, 3, 3)
    P = frey_model(t, MINUS).model.P
    if list(P.coeffs) != [-2 * (8 - 1), 5 * 81, 0, -45, 0, 1]:
        bad.append("concrete")
    assert report(2, not bad, f"explicit models for r = 3, 5, 7, 11, both signs ({bad or 'all match'})")


def test_3_transformation_covariance(report):
    rng = random.Random(3)
    n_checked, bad = 0, 0
    while n_checked < 200:
        g = rng.choice([1, 2])
        P = Poly([rng.randint(-5, 5) for _ in range(2 * g + 2)] + [rng.choice([1, 2, -3])])
        Q = Poly([rng.randint(-2, 2) for _ in range(g + 1)])
        m = HyperellipticModel(P, Q, g)
        D = discriminant(m)
        if D == 0:
            continue
        a, b, c, dd = (rng.randint(-3, 3) for _ in range(4))
        if a * dd - b * c == 0:
            continue
        e = Fraction(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2, 3]))
        H = Poly([rng.randint(-2, 2) for _ in range(g + 2)])
        m2 = apply_transformation(m, ModelTransformation(a, b, c, dd, e, H))
        n = 2 * g + 2
        if discriminant(m2) != D * e ** (-4 * (n - 1)) * (a * dd - b * c) ** (n * (n - 1)):
            bad += 1
        # odd model law: exponent 4g(2g + 1)
        mo = HyperellipticModel(Poly([rng.randint(-5, 5) for _ in range(2 * g + 1)] + [1]), Poly(), g)
        Do = discriminant(mo)
        e2 = rng.choice([2, 3, -2])
        mo2 = apply_transformation(mo, OddModelTransformation(e2, rng.randint(-3, 3)))
        if discriminant(mo2) != Do * Fraction(e2) ** (-4 * g * (2 * g + 1)):
            bad += 1
        n_checked += 1
    assert report(3, bad == 0, f"200 transformations and 200 odd-model changes ({bad} failures)")


def test_4_selmer_set(report):
    s5 = SQRT5
    expected = [1, -1, 2, -2, (1 - s5) / 2, (s5 - 1) / 2, s5 - 1, 1 - s5]
    want = {squarefree_normal_form(QuadElement(1) * e) for e in expected}
    sel = selmer_group([Q2])
    ok = set(sel.representatives) == want and len(sel) == 8
    assert report(4, ok, f"K({{q2}}, 2) has {len(sel)} classes and matches the displayed set")


def test_5_unit_norms(report):
    n1, n4 = (PHI - 1).norm(), (PHI ** 4 - 1).norm()
    b = unit_bound(PHI ** 4, {Q5: 1})
    ok = n1 == -1 and n4 == -5 and b.primes == {5}
    assert report(5, ok, f"N(phi - 1) = {n1}, N(phi^4 - 1) = {n4}")


def test_6_ray_class(report):
    o1 = ray_class_order({}, (1, 2)).order
    o2 = ray_class_order({Q5: 1}, (1, 2)).order
    assert report(6, (o1, o2) == (1, 2), f"|Cl_(inf1 inf2)| = {o1}, |Cl_(q5 inf1 inf2)| = {o2}")


def test_7_trace_at_q2(report):
    rng = random.Random(7)
    good = 0
    for _ in range(10):
        t = sample_local_triple(rng, "I")
        assert t.a % 2 and t.b % 2
        cur = frey_model(t, PLUS)
        res = good_reduction_via_odd_model(cur.model, Q2, 2, weierstrass_x=cur.weierstrass_x())
        tr = trace_at_prime(cur, Q2)
        good += res.is_good and tr.a == 0 and tr.a_conj == 0
    assert report(7, good == 10, f"a_q2(J+) = 0 with a good model at q2 for {good}/10 triples")


def test_8_conductor_at_q5(report):
    rng = random.Random(8)
    agree, seen = 0, set()
    for _ in range(25):
        t = sample_local_triple(rng, "II")
        rule = minus_conductor_at_5(t).conductor_exponent
        ver = verify_minus_at_5(t).predicted_exponent
        agree += rule == ver
        seen.add(rule)
    d0 = d_of(FreyTriple(1, -1, 0, 7))
    ok = agree == 25 and v5(d0) == 1 and seen == {2, 3}
    assert report(8, ok, f"rule = valuation-vector path on {agree}/25 case II triples "
                         f"(exponents seen {sorted(seen)}); v5(d(1,-1,0)) = {v5(d0)}")


def test_9_vacuous_case_one(report):
    spaces = [ingest_space("bundled", {}), ingest_space("bundled", {Q5: 1})]
    rep = eliminate("I", [3, 7, 11], [], spaces)
    ok = rep.vacuous and rep.survivors == frozenset()
    assert report(9, ok, "bundled data: S2((1)) and S2(q5) empty, contradiction for every p")


def test_10_case_two_substitute_suite(report):
    # genuine eigenvalue data at levels q2 q5^2 and q2 q5^3 cannot be fetched here,
    # so the substitute property suite is run instead
    cur = frey_model(FreyTriple(1, -1, 0, 7), MINUS)
    traces = {P.label: trace_at_prime(cur, P) for q in (3, 7, 11) for P in factor_rational_prime(q)}
    cm = synthetic_form("cm", {Q2.label: 1, Q5.label: 3}, traces, cm=True)
    rep_a = eliminate("II", [3, 7, 11], [cm], chi0s=[1])
    ok_a = (rep_a.results[0].gcd == 0 and "CM obstruction" in rep_a.results[0].verdict())

    g = rational_form("violator", {Q2.label: 1, Q5.label: 3}, {"9.1": 2})
    rep_b = eliminate("II", [3], [g])
    Q3 = prime_above(3)
    hand = {1: hand_T_rational(2, 3, "minus"), -1: hand_T_rational(-2, 3, "minus")}
    ok_b = rep_b.survivors is not None and rep_b.survivors <= {2, 3, 5}
    for res, chi in zip(rep_b.results, selmer_group([Q2])):
        eps = QuadraticCharacter(chi).value_at(Q3)
        ok_b &= res.T == [("9.1", hand[eps])] and res.gcd != 0
    ok = ok_a and ok_b
    assert report(10, ok, "SUBSTITUTE SUITE (no genuine case II newform data offline): "
                          f"(a) CM form gcd 0 flagged: {ok_a}; (b) survivors "
                          f"{sorted(rep_b.survivors or [])} with T equal to the hand values: {ok_b}")


def test_11_counting_oracle(report):
    rng = random.Random(11)
    fields = [(p, k) for p in sympy.primerange(2, 50) for k in range(1, 7) if p ** k <= 49]
    checked, bad = 0, []
    for p, k in fields:
        F = get_field(p, k)
        N = NaiveField(p, F.modulus)
        for _ in range(8):
            g = rng.choice([1, 2])
            f = [rng.randrange(p) for _ in range(2 * g + 1)] + [1]
            h = [rng.randrange(p) for _ in range(g + 1)] if p == 2 else []
            if _integer_discriminant(f, h, g) % p == 0:
                continue                  # singular over the algebraic closure
            n = count_curve(F, [F.from_int(c) for c in f], [F.from_int(c) for c in h], g)
            checked += 1
            if n != brute_count(N, f, h, g) or (n - F.q - 1) ** 2 > 4 * g * g * F.q:
                bad.append((p, k, f, h))
    # count_points on a model over K at primes of norm at most 49
    m = HyperellipticModel(Poly([1, 3, 0, -2, 0, 1]), Poly(), 2)
    if sympy_disc([1, 3, 0, -2, 0, 1]) == 0:
        bad.append("model")
    for q in (3, 7, 11, 19, 29, 31, 41):
        for P in factor_rational_prime(q):
            if P.norm > 49:
                continue
            res = count_points(m, P, 1)
            if res.singular:
                continue
            N = NaiveField(q, get_field(q, P.residue_degree).modulus)
            n = res.counts[0]
            checked += 1
            if n != brute_count(N, [c % q for c in (1, 3, 0, -2, 0, 1)], [], 2) or \
                    (n - P.norm - 1) ** 2 > 16 * P.norm:
                bad.append(P.label)
    assert report(11, not bad and checked > 60,
                  f"{checked} smooth curves over fields of size <= 49 agree with enumeration "
                  f"and satisfy Hasse-Weil ({len(bad)} failures)")


def _integer_discriminant(f, h, g) -> int:
    """Delta of y^2 + h y = f over Z: 2^(-4(g+1)) disc(4f + h^2), degree-corrected."""
    x = sympy.Symbol("x")
    R = sympy.Poly(4 * sum(c * x ** i for i, c in enumerate(f))
                   + sum(c * x ** i for i, c in enumerate(h)) ** 2, x)
    d = sympy.discriminant(R)
    if R.degree() == 2 * g + 1:
        d *= R.LC() ** 2
    return int(sympy.Rational(d, 2 ** (4 * (g + 1))))
