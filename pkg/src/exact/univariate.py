"""Univariate helpers: gcd, squarefreeness, rational roots"""
from fractions import Fraction
from math import lcm
from typing import List, Optional

from src.exact.cyclotomic import CycloElem
from src.exact.factorization import divisors
from src.exact.mpoly import MPoly


class MultivariateInputError(ValueError):
    """A univariate routine received a polynomial in several variables"""
    pass


def _main_variable(*polys: MPoly) -> Optional[int]:
    seen = set()
    for poly in polys:
        active = poly.active_variables()
        if len(active) > 1:
            raise MultivariateInputError(f"{poly} is not univariate")
        seen.update(active)
    if len(seen) > 1:
        names = sorted(polys[0].variables[i] for i in seen)
        raise MultivariateInputError(f"polynomials use different variables: {names}")
    return seen.pop() if seen else None


def univariate_coefficients(f: MPoly) -> List:
    """Coefficients of a univariate polynomial, constant term first"""
    index = _main_variable(f)
    if index is None:
        return [f.constant_value()] if f else []
    coeffs = [None] * (f.degree(index) + 1)
    for exponent, coeff in f.items():
        coeffs[exponent[index]] = coeff
    return [c if c is not None else CycloElem.zero(f.order) for c in coeffs]


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Monic gcd of two univariate polynomials by Euclid's algorithm"""
    if a.variables != b.variables:
        raise MultivariateInputError("operands live in different rings")
    index = _main_variable(a, b)
    if index is None:
        if a or b:
            return MPoly.one(a.variables, a.order)
        return a
    r0, r1 = a, b
    while r1:
        r0, r1 = r1, _remainder(r0, r1, index)
    return r0.monic()


def _remainder(a: MPoly, b: MPoly, index: int) -> MPoly:
    db = b.degree(index)
    lead_inv = b.coefficients_in(index)[db].constant_value().inverse()
    remainder = a
    while remainder and remainder.degree(index) >= db:
        dr = remainder.degree(index)
        factor = remainder.coefficients_in(index)[dr].constant_value() * lead_inv
        shift = [0] * len(a.variables)
        shift[index] = dr - db
        remainder = remainder - b.mul_monomial(tuple(shift), factor)
    return remainder


def squarefree_check(f: MPoly) -> bool:
    """True when gcd(f, f') is constant"""
    index = _main_variable(f)
    if index is None:
        return bool(f)
    return poly_gcd(f, f.derivative(index)).is_constant()


def rational_roots(f: MPoly) -> List[Fraction]:
    """Distinct rational roots of a univariate polynomial with rational coefficients"""
    if not f.is_rational():
        raise ValueError("rational roots need rational coefficients")
    coeffs = [c.to_rational() for c in univariate_coefficients(f)]
    if not any(coeffs):
        raise ValueError("the zero polynomial has every root")
    scale = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * scale) for c in coeffs]
    roots = set()
    while ints and ints[0] == 0:
        roots.add(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(roots)

    def value(t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(ints):
            acc = acc * t + c
        return acc

    for p in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for candidate in (Fraction(p, q), Fraction(-p, q)):
                if candidate not in roots and value(candidate) == 0:
                    roots.add(candidate)
    return sorted(roots)
