"""Multivariate gcd by recursive primitive remainder sequences"""
from typing import Iterable

from src.exact.mpoly import MPoly


def _monomial_gcd(mono: MPoly, other: MPoly) -> MPoly:
    (exponent, _), = mono.items()
    low = list(exponent)
    for e, _ in other.items():
        low = [min(a, b) for a, b in zip(low, e)]
    return MPoly(mono.variables, mono.order, {tuple(low): 1})


def content(poly: MPoly, index: int) -> MPoly:
    """gcd of the coefficients of poly viewed as a polynomial in one variable"""
    coeffs = [c for _, c in sorted(poly.coefficients_in(index).items())]
    if not coeffs:
        return poly
    return mpoly_gcd_many(coeffs[1:], coeffs[0])


def primitive_part(poly: MPoly, index: int) -> MPoly:
    if poly.is_zero():
        return poly
    return poly.exact_div(content(poly, index))


def pseudo_remainder(a: MPoly, b: MPoly, index: int) -> MPoly:
    """Remainder of lc(b)^k * a by b in the variable at index"""
    db = b.degree(index)
    lead = b.coefficients_in(index)[db]
    remainder = a
    while remainder and remainder.degree(index) >= db:
        dr = remainder.degree(index)
        lead_r = remainder.coefficients_in(index)[dr]
        shift = [0] * len(a.variables)
        shift[index] = dr - db
        remainder = remainder * lead - (b * lead_r).mul_monomial(tuple(shift))
    return remainder


def mpoly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Monic greatest common divisor; gcd(0, 0) is 0"""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MPoly.one(a.variables, a.order)
    if a.is_monomial():
        return _monomial_gcd(a, b)
    if b.is_monomial():
        return _monomial_gcd(b, a)

    active = sorted(set(a.active_variables()) | set(b.active_variables()))
    index = active[-1]
    if a.degree(index) == 0 or b.degree(index) == 0:
        # variable missing on one side: the gcd divides every coefficient
        full = a if a.degree(index) else b
        free = b if full is a else a
        return mpoly_gcd_many(full.coefficients_in(index).values(), free)

    content_a = content(a, index)
    content_b = content(b, index)
    common = mpoly_gcd(content_a, content_b)
    pa = a.exact_div(content_a)
    pb = b.exact_div(content_b)
    if pa.degree(index) < pb.degree(index):
        pa, pb = pb, pa
    while pb and pb.degree(index) > 0:
        remainder = pseudo_remainder(pa, pb, index)
        pa, pb = pb, primitive_part(remainder, index)
    core = primitive_part(pa, index) if not pb else MPoly.one(a.variables, a.order)
    return (common * core).monic()


def mpoly_gcd_many(polys: Iterable[MPoly], start: MPoly) -> MPoly:
    result = start
    for poly in polys:
        result = mpoly_gcd(result, poly)
        if result.is_constant() and result:
            return MPoly.one(result.variables, result.order)
    return result.monic()
