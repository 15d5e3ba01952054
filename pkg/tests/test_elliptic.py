"""Tests for the group law, reduction mod p, Weierstrass models, torsion and point search"""
import random
from fractions import Fraction

import pytest

from src.cover.construction import polynomial_from_coefficients
from src.elliptic.curve import (
    INFINITY,
    BadPrimeError,
    ECPoint,
    FpCurve,
    SingularCurveError,
    WeierstrassCurve,
    ec_points_mod_p,
    reduce_curve,
)
from src.elliptic.search import search_twist_points
from src.elliptic.torsion import torsion_test, two_torsion
from src.elliptic.weierstrass import SingularSpecializationError, to_weierstrass


def test_doubling_over_Q(congruent_curve, point_12_36):
    """2*(12, 36) = (25/4, -35/8) on Y^2 = X^3 - 36X"""
    doubled = congruent_curve.double(point_12_36)
    assert doubled == ECPoint(Fraction(25, 4), Fraction(-35, 8))
    assert congruent_curve.contains(doubled)
    assert congruent_curve.add(point_12_36, point_12_36) == doubled
    assert congruent_curve.mul(point_12_36, 2) == doubled


def test_inverse_and_identity(congruent_curve, point_12_36):
    E = congruent_curve
    assert E.add(point_12_36, E.neg(point_12_36)) == INFINITY
    assert E.add(INFINITY, point_12_36) == point_12_36
    assert E.mul(point_12_36, 0) == INFINITY
    assert E.mul(point_12_36, -1) == E.neg(point_12_36)
    assert E.double(ECPoint(0, 0)) == INFINITY


def test_singular_curve_is_rejected():
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(0, 0)
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(-3, 2)


def test_point_off_curve_is_rejected(congruent_curve):
    with pytest.raises(ValueError):
        congruent_curve.point(1, 1)


@pytest.mark.parametrize("p", [5, 11, 13, 101])
def test_group_law_is_associative_and_commutative_mod_p(p):
    E = FpCurve(-1, 0, p)
    points = ec_points_mod_p(E)
    rng = random.Random(p)
    for _ in range(100):
        P, Q, R = (rng.choice(points) for _ in range(3))
        assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
        assert E.add(P, Q) == E.add(Q, P)
        assert E.contains(E.add(P, Q))


def test_point_counts(cache):
    """#E(F_p) for y^2 = x^3 - x"""
    assert len(ec_points_mod_p(FpCurve(-1, 0, 5), cache)) == 8
    assert len(ec_points_mod_p(FpCurve(-1, 0, 11), cache)) == 12
    # p = 3 mod 4 gives p + 1 points
    assert len(ec_points_mod_p(FpCurve(-1, 0, 19))) == 20
    assert ec_points_mod_p(FpCurve(-1, 0, 5))[0] == INFINITY


def test_every_point_times_order_is_infinity():
    E = FpCurve(-1, 0, 13)
    order = len(ec_points_mod_p(E))
    for P in ec_points_mod_p(E):
        assert E.mul(P, order) == INFINITY


def test_bad_primes_are_rejected():
    with pytest.raises(BadPrimeError):
        FpCurve(-1, 0, 2)
    with pytest.raises(BadPrimeError):
        FpCurve(-1, 0, 15)
    with pytest.raises(BadPrimeError):
        reduce_curve(WeierstrassCurve(Fraction(1, 7), 1), 7)


def test_reduce_curve(congruent_curve):
    reduced = reduce_curve(congruent_curve, 11)
    assert (reduced.A, reduced.B, reduced.p) == ((-36) % 11, 0, 11)
    assert reduced.contains(ECPoint(12 % 11, 36 % 11))


def test_cubic_model_maps_base_point(cubic_coeffs):
    """d = f(2) = 6 sends (2, 1) to (12, 36) on E_6"""
    f = polynomial_from_coefficients(cubic_coeffs, 2)
    model = to_weierstrass(f, 6)
    assert model.kind == "cubic"
    assert model.curve == WeierstrassCurve(-36, 0)
    assert model.forward(2, 1) == ECPoint(12, 36)
    assert model.backward(ECPoint(12, 36)) == (2, 1)


def _random_twist_points(f, rng, count):
    """Seeded points on d*z^2 = f(x) and their images on E_d, as multiples of (t, 1)"""
    found = []
    while len(found) < count:
        t = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        d = f.evaluate({"x": t}).to_rational()
        if d == 0:
            continue
        model = to_weierstrass(f, d)
        Q = model.curve.mul(model.forward(t, 1), rng.choice([-3, -2, -1, 1, 2, 3]))
        if Q.is_infinity:
            continue
        found.append((model, Q))
    return found


@pytest.mark.parametrize("coeffs", [["0", "-1", "0", "1"], ["3", "-2", "1/2", "2"], ["1", "0", "-4", "5"]])
def test_model_maps_are_mutually_inverse(coeffs):
    f = polynomial_from_coefficients(coeffs, 2)
    for model, Q in _random_twist_points(f, random.Random(3), 50):
        assert model.curve.contains(Q)
        x, z = model.backward(Q)
        assert model.d * z * z == f.evaluate({"x": x}).to_rational()
        assert model.forward(x, z) == Q
        assert model.backward(model.forward(x, z)) == (x, z)


def test_quartic_with_rational_root():
    """x^4 - x has the root 0"""
    f = polynomial_from_coefficients(["0", "-1", "0", "0", "1"], 2)
    model = to_weierstrass(f, 14)
    assert model.kind == "quartic"
    P = model.forward(2, 1)
    assert model.curve.contains(P)
    assert model.backward(P) == (2, 1)
    assert model.forward(model.alpha, 0) == INFINITY


def test_quartic_without_rational_root_is_rejected():
    f = polynomial_from_coefficients(["2", "0", "0", "0", "1"], 2)
    with pytest.raises(ValueError, match="rational root"):
        to_weierstrass(f, 3)


def test_zero_specialization_is_rejected(cubic_coeffs):
    f = polynomial_from_coefficients(cubic_coeffs, 2)
    with pytest.raises(SingularSpecializationError):
        to_weierstrass(f, 0)


def test_forward_mod_lands_on_reduced_model():
    f = polynomial_from_coefficients(["1", "0", "3", "1"], 2)
    model = to_weierstrass(f, 1)
    p = 13
    reduced = model.reduce_mod(p)
    for x in range(p):
        for y in range(p):
            if (y * y - (x ** 3 + 3 * x * x + 1)) % p == 0:
                assert reduced.contains(model.forward_mod(x, y, p))


def test_torsion_detection(congruent_curve, point_12_36):
    assert torsion_test(congruent_curve, ECPoint(0, 0)).order == 2
    result = torsion_test(congruent_curve, point_12_36)
    assert not result.torsion
    assert str(result) == "non-torsion"
    with pytest.raises(ValueError):
        torsion_test(congruent_curve, ECPoint(1, 1))


def test_two_torsion_descriptor():
    assert two_torsion(polynomial_from_coefficients(["0", "-1", "0", "1"], 2)) == "(Z/2)^2"
    assert two_torsion(polynomial_from_coefficients(["0", "1", "0", "1"], 2)) == "Z/2"
    assert two_torsion(polynomial_from_coefficients(["-2", "0", "0", "1"], 2)) == "trivial"


def test_point_search_finds_small_points(congruent_curve, cache):
    found = search_twist_points(congruent_curve, 50, cache)
    assert ECPoint(12, 36) in found
    assert ECPoint(Fraction(25, 4), Fraction(35, 8)) in found
    assert all(P.y >= 0 and congruent_curve.contains(P) for P in found)
    assert search_twist_points(congruent_curve, 50, cache) == found
    assert cache.get_stats()["hits"] >= 1
