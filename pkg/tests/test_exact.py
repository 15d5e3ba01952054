"""Tests for exact arithmetic: Q(zeta_s), polynomials and the ring R_L"""
import random
from fractions import Fraction

import pytest
import sympy

from src.exact import (
    AmbientRing,
    CycloElem,
    MPoly,
    MultivariateInputError,
    RationalParseError,
    cyclo_invert,
    cyclotomic_polynomial,
    euler_phi,
    galois_apply,
    is_invariant,
    mpoly_gcd,
    normal_form,
    parse_rat,
    poly_gcd,
    rat_to_str,
    rational_roots,
    root_of_unity_sum,
    squarefree_check,
)


def _times(a, b):
    """Integer polynomial product, constant term first"""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def test_parse_rat_accepts_exact_literals():
    assert parse_rat("3") == 3
    assert parse_rat("-2/7") == Fraction(-2, 7)
    assert parse_rat("4/6") == Fraction(2, 3)
    assert rat_to_str(Fraction(-4, 6)) == "-2/3"
    assert rat_to_str(Fraction(0)) == "0"


@pytest.mark.parametrize("bad", ["1.5", "1e3", "1/0", "", "x", 2.5, True])
def test_parse_rat_rejects_inexact_input(bad):
    with pytest.raises(RationalParseError):
        parse_rat(bad)


def test_cyclotomic_polynomials():
    """Phi_2 = t + 1, Phi_4 = t^2 + 1, Phi_6 = t^2 - t + 1"""
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert euler_phi(12) == 4


@pytest.mark.parametrize("s", [1, 2, 3, 4, 6, 8, 9, 12])
def test_product_of_cyclotomics_is_t_s_minus_one(s):
    product = [1]
    for d in range(1, s + 1):
        if s % d == 0:
            product = _times(product, list(cyclotomic_polynomial(d)))
    assert product == [-1] + [0] * (s - 1) + [1]
    assert sum(euler_phi(d) for d in range(1, s + 1) if s % d == 0) == s


def test_zeta_has_order_s():
    for s in (2, 3, 4, 5, 6):
        zeta = CycloElem.zeta(s)
        assert zeta ** s == 1
        assert all(zeta ** k != 1 for k in range(1, s))


def test_cyclo_invert_examples():
    zeta4 = CycloElem.zeta(4)
    assert cyclo_invert(zeta4) == -zeta4

    zeta3 = CycloElem.zeta(3)
    assert cyclo_invert(1 + zeta3) == -zeta3
    assert (1 + zeta3) * (-zeta3) == 1

    assert cyclo_invert(CycloElem.rational(5, 2)) == Fraction(1, 2)


def test_cyclo_invert_zero_raises():
    with pytest.raises(ZeroDivisionError):
        cyclo_invert(CycloElem.zero(3))


def test_cyclo_invert_is_two_sided_inverse():
    rng = random.Random(7)
    for s in (3, 5, 7, 8, 12):
        for _ in range(10):
            a = CycloElem.from_poly(s, [rng.randint(-5, 5) for _ in range(euler_phi(s))])
            if a.is_zero():
                continue
            inv = cyclo_invert(a)
            assert a * inv == 1
            assert inv * a == 1


def test_root_of_unity_sum_vanishes():
    for s in range(2, 9):
        assert root_of_unity_sum(s).is_zero()


def test_cyclo_rendering():
    zeta3 = CycloElem.zeta(3)
    assert str(zeta3 + 1) == "zeta + 1"
    assert str(zeta3 ** 2) == "-zeta - 1"
    assert str(CycloElem.rational(3, Fraction(-1, 2))) == "-1/2"


def test_mpoly_drops_zero_coefficients_and_renders_grlex():
    f = MPoly.univariate([0, -1, 0, 1], 2)
    assert str(f) == "x^3 - x"
    assert (f - f).is_zero()
    assert (f - f).terms == {}
    assert f.degree() == 3


def test_poly_gcd_examples():
    x2 = MPoly.univariate([0, 0, 1], 2)
    two_x = MPoly.univariate([0, 2], 2)
    assert poly_gcd(x2, two_x) == MPoly.univariate([0, 1], 2)


def test_squarefree_check_examples():
    assert squarefree_check(MPoly.univariate([0, -1, 0, 1], 2))
    # x^2 (x - 1)
    assert not squarefree_check(MPoly.univariate([0, 0, -1, 1], 2))


def test_poly_gcd_rejects_multivariate_input():
    variables = ("x_1", "x_2")
    a = MPoly(variables, 2, {(1, 1): 1})
    b = MPoly(variables, 2, {(1, 0): 1})
    with pytest.raises(MultivariateInputError):
        poly_gcd(a, b)


def test_mpoly_gcd_multivariate():
    variables = ("a", "b")
    a = MPoly.var(variables, 2, "a")
    b = MPoly.var(variables, 2, "b")
    g = a + b
    left = g * (a - b)
    right = g * (a * a + b)
    assert mpoly_gcd(left, right) == g


def _to_sympy(poly, gens):
    expr = sympy.Integer(0)
    for exponent, coeff in poly.items():
        value = coeff.to_rational()
        term = sympy.Rational(value.numerator, value.denominator)
        for gen, power in zip(gens, exponent):
            term *= gen ** power
        expr += term
    return sympy.Poly(expr, *gens)


def _random_bivariate(variables, rng, degree=2):
    terms = {}
    while not terms:
        terms = {
            (i, j): rng.randint(-3, 3)
            for i in range(degree + 1)
            for j in range(degree + 1 - i)
            if rng.random() < 0.6
        }
        terms = {e: c for e, c in terms.items() if c}
    return MPoly(variables, 2, terms)


def test_mpoly_gcd_agrees_with_sympy():
    variables = ("x_1", "x_2")
    gens = sympy.symbols("x_1 x_2")
    rng = random.Random(11)
    for _ in range(25):
        common, left, right = (_random_bivariate(variables, rng) for _ in range(3))
        a, b = common * left, common * right
        ours = _to_sympy(mpoly_gcd(a, b), gens).monic()
        theirs = sympy.gcd(_to_sympy(a, gens), _to_sympy(b, gens)).monic()
        assert sympy.expand(ours.as_expr() - theirs.as_expr()) == 0


def test_poly_gcd_agrees_with_sympy():
    gens = (sympy.Symbol("x"),)
    rng = random.Random(5)
    for _ in range(25):
        common, left, right = (
            MPoly.univariate([rng.randint(-4, 4) for _ in range(rng.randint(1, 4))] + [1], 2) for _ in range(3)
        )
        a, b = common * left, common * right
        ours = _to_sympy(poly_gcd(a, b), gens).as_expr()
        theirs = sympy.gcd(_to_sympy(a, gens), _to_sympy(b, gens)).monic().as_expr()
        assert sympy.expand(ours - theirs) == 0


def test_rational_roots():
    assert rational_roots(MPoly.univariate([0, -1, 0, 1], 2)) == [-1, 0, 1]
    assert rational_roots(MPoly.univariate([-2, 0, 0, 1], 2)) == []
    # 2x^2 - 3x + 1 = (2x - 1)(x - 1)
    assert rational_roots(MPoly.univariate([1, -3, 2], 2)) == [Fraction(1, 2), 1]


@pytest.fixture
def ring_s2():
    return AmbientRing(2, 2, MPoly.univariate([0, -1, 0, 1], 2))


def test_normal_form_examples(ring_s2):
    ring = ring_s2
    assert str(normal_form(ring.element(ring.y(1) ** 2), ring)) == "x_1^3 - x_1"
    reduced = normal_form(ring.element(ring.y(1) ** 3 * ring.y(2)), ring)
    assert reduced == ring.element(ring.f_at("x_1") * ring.y(1) * ring.y(2))
    assert str(reduced) == "x_1^3*y_1*y_2 - x_1*y_1*y_2"
    already = ring.element(ring.x(1) + 3)
    assert str(normal_form(already, ring)) == "x_1 + 3"


def test_normal_form_is_idempotent(ring_s2):
    ring = ring_s2
    e = ring.element(ring.y(1) ** 5 * ring.y(2) ** 3 + ring.x(2) * ring.y(1) ** 2)
    once = normal_form(e, ring)
    assert normal_form(once, ring) == once
    for exponent, _ in once.numerator.items():
        assert exponent[2] < 2 and exponent[3] < 2


def _random_element(ring, rng):
    poly = ring.constant(rng.randint(-3, 3))
    for _ in range(3):
        term = ring.constant(rng.randint(-3, 3))
        for name in ("x_1", "x_2", "y_1", "y_2"):
            k = rng.randint(0, 3)
            if k:
                term = term * ring.gen(name, k)
        poly = poly + term
    den = ring.one() if rng.random() < 0.5 else ring.x(1) + rng.randint(1, 3)
    return ring.element(poly, den)


def test_ring_axioms_on_random_triples():
    ring = AmbientRing(3, 2, MPoly.univariate([1, 0, 0, 1], 3))
    rng = random.Random(11)
    for _ in range(15):
        a, b, c = (_random_element(ring, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert normal_form(a * b, ring) == normal_form(normal_form(a, ring) * normal_form(b, ring), ring)


def test_denominator_must_be_scalar(ring_s2):
    ring = ring_s2
    with pytest.raises(ValueError):
        ring.element(ring.x(1), ring.y(1))


def test_division_cancels_common_factor(ring_s2):
    ring = ring_s2
    fx1 = ring.element(ring.f_at("x_1"))
    e = ring.element(ring.y(1) ** 2) / fx1
    assert e == 1


def test_galois_generator_order_and_invariance():
    ring = AmbientRing(3, 2, MPoly.univariate([1, 0, 0, 1], 3))
    y1 = ring.element(ring.y(1))
    assert galois_apply(y1, 3) == y1
    assert not is_invariant(y1)
    assert galois_apply(y1) == y1 * CycloElem.zeta(3)
    z1 = ring.element(ring.z_monomial(1))
    assert is_invariant(z1)
    assert is_invariant(ring.element(ring.x(2)))


def test_evaluate_mod(ring_s2):
    ring = ring_s2
    e = ring.element(ring.y(1) * ring.x(2), ring.x(1))
    values = {"x_1": 2, "x_2": 3, "y_1": 5, "y_2": 0}
    # 5*3/2 mod 7
    assert e.evaluate_mod(values, 7) == 5 * 3 * pow(2, -1, 7) % 7
    with pytest.raises(ZeroDivisionError):
        e.evaluate_mod({**values, "x_1": 0}, 7)
