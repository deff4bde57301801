from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from freyhyper.hyperelliptic import (DegreeWindowError, HyperellipticModel, ModelTransformation,
                                     OddModelTransformation, SingularModelError,
                                     apply_transformation, covariance_factor, discriminant,
                                     discriminant_class, discriminant_modulus,
                                     double_root_criterion, good_reduction_via_odd_model,
                                     matches_pattern, model_from_text, valuation_vectors)
from freyhyper.numfield import INF, Q2, Q5, QuadElement, prime_above
from freyhyper.poly import Poly

from oracles import sympy_disc

small = st.integers(-6, 6)


@st.composite
def models(draw, g=None):
    g = g or draw(st.sampled_from([1, 2]))
    n = 2 * g + 2
    P = [draw(small) for _ in range(n)] + [draw(st.integers(1, 4))]
    Q = [draw(st.integers(-2, 2)) for _ in range(draw(st.integers(0, g + 2)))]
    m = HyperellipticModel(Poly(P), Poly(Q), g)
    assume(discriminant(m) != 0)
    return m


@st.composite
def transformations(draw):
    while True:
        a, b, c, d = (draw(st.integers(-3, 3)) for _ in range(4))
        if a * d - b * c:
            break
    e = draw(st.sampled_from([1, -1, 2, 3, Fraction(1, 2)]))
    H = [draw(st.integers(-2, 2)) for _ in range(draw(st.integers(0, 3)))]
    return a, b, c, d, e, H


@given(models(), transformations())
@settings(max_examples=80, deadline=None)
def test_covariance(m, t):
    a, b, c, d, e, H = t
    H = H[: m.g + 2]
    T = ModelTransformation(a, b, c, d, e, Poly(H))
    m2 = apply_transformation(m, T)
    n = m.n
    assert discriminant(m2) == discriminant(m) * Fraction(e) ** (-4 * (n - 1)) * (a * d - b * c) ** (n * (n - 1))
    assert discriminant(m2) == discriminant(m) * covariance_factor(m, T)


@given(st.lists(small, min_size=5, max_size=5), st.sampled_from([1, 2, 3, -2]),
       st.integers(-3, 3))
@settings(max_examples=60, deadline=None)
def test_odd_model_law(low, e, r):
    m = HyperellipticModel(Poly(low + [1]), Poly(), 2)
    assume(discriminant(m) != 0)
    m2 = apply_transformation(m, OddModelTransformation(e, r))
    assert discriminant(m2) == discriminant(m) * Fraction(e) ** -40
    assert discriminant_modulus(m, odd=True) == 40


def test_modulus_values():
    m1 = HyperellipticModel(Poly([1, 0, 0, 1]), Poly(), 1)
    assert discriminant_modulus(m1, odd=True) == 12
    assert discriminant_modulus(m1) == 12
    m2 = HyperellipticModel(Poly([1, 0, 0, 0, 0, 1]), Poly(), 2)
    assert discriminant_modulus(m2) == 10


@given(st.lists(small, min_size=5, max_size=5))
def test_odd_degree_discriminant_matches_sympy(low):
    # y^2 = P with P monic of degree 2g + 1: Delta = 2^(4g) disc(P)
    m = HyperellipticModel(Poly(low + [1]), Poly(), 2)
    assert discriminant(m) == 2 ** 8 * sympy_disc(low + [1])


@given(st.lists(small, min_size=6, max_size=6), st.integers(1, 5))
def test_even_degree_discriminant_matches_sympy(low, lead):
    # deg R = 2g + 2 with Q = 0: Delta = 2^(-4(g+1)) disc(4P) = 2^(4g) disc(P)
    m = HyperellipticModel(Poly(low + [lead]), Poly(), 2)
    assert discriminant(m) == 2 ** 8 * sympy_disc(low + [lead])


def test_frozen_discriminants():
    assert discriminant(HyperellipticModel(Poly([-4, 0, 0, 0, 0, 1]), Poly(), 2)) == 2 ** 16 * 5 ** 5
    # y^2 + y = x^3 - x^2, the curve 11a3, of discriminant -11
    m = HyperellipticModel(Poly([0, 0, -1, 1]), Poly([1]), 1)
    assert discriminant(m) == -11


def test_singular_is_zero():
    m = HyperellipticModel(Poly([0, 0, 1, 1]), Poly(), 1)       # x^2 (x + 1)
    assert discriminant(m) == 0
    with pytest.raises(SingularModelError):
        discriminant_class(m, Q2)


def test_degree_window():
    with pytest.raises(DegreeWindowError):
        HyperellipticModel(Poly([1, 0, 1]), Poly(), 1)
    with pytest.raises(DegreeWindowError):
        HyperellipticModel(Poly([1] * 8), Poly(), 2)
    with pytest.raises(ValueError):
        ModelTransformation(1, 1, 1, 1)


def test_text_roundtrip():
    m = HyperellipticModel(Poly([QuadElement(1, 2), 0, Fraction(-3, 4), 0, 0, 1]), Poly([0, 1]), 2)
    assert model_from_text(m.to_text()) == m


def test_valuation_vectors_and_patterns():
    m = HyperellipticModel(Poly([5 ** 4, 25, 0, 5, 1, 1]), Poly(), 2)
    vv = valuation_vectors(m, Q5)
    assert vv.P == (8, 4, INF, 2, 0, 0, INF)
    assert vv.Q == (INF, INF, INF, INF)
    assert matches_pattern(vv.P, (">=8", "4", "inf", "2", "0", "0", "inf"))
    assert not matches_pattern(vv.P, ("8", "4", "inf", "2", "0", "0"))
    assert not matches_pattern(vv.P, ("9", "4", "inf", "2", "0", "0", "inf"))
    assert vv.scaled(2).P[0] == 16


def test_discriminant_class():
    m = HyperellipticModel(Poly([-4, 0, 0, 0, 0, 1]), Poly(), 2)
    dc = discriminant_class(m, Q2)
    assert dc.valuation == 16 and dc.odd_residue == 16 and dc.residue == 6


def test_double_root_criterion():
    c = 1
    P = Poly([2 * c, 1]) * Poly([-1, -1, 1]) ** 2
    m = HyperellipticModel(P, Poly(), 2)
    assert double_root_criterion(m, prime_above(3)) == "bad-semistable"
    # a triple root is not a node
    m3 = HyperellipticModel(Poly([0, 0, 0, 1, 0, 1]), Poly(), 2)
    assert double_root_criterion(m3, prime_above(3)) != "bad-semistable"
    with pytest.raises(ValueError):
        double_root_criterion(m, Q2)


def test_good_model_search_at_two():
    # v_2(Delta) = 16 is not 0 mod 40, so no odd model has unit discriminant
    m = HyperellipticModel(Poly([-4, 0, 0, 0, 0, 1]), Poly(), 2)
    res = good_reduction_via_odd_model(m, Q2, 2)
    assert not res.is_good and "40" in res.reason


def test_good_model_search_finds_unit_discriminant():
    from freyhyper.frey import PLUS, FreyTriple, frey_model
    from freyhyper.hyperelliptic import coeff_valuation
    cur = frey_model(FreyTriple(5, 3, 2, 7), PLUS)
    res = good_reduction_via_odd_model(cur.model, Q2, 2, weierstrass_x=cur.weierstrass_x())
    assert res.is_good
    assert res.witness.is_integral_at(Q2)
    assert coeff_valuation(discriminant(res.witness), Q2) == 0
