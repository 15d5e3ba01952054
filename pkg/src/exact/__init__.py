"""Exact arithmetic: rationals, Q(zeta_s), polynomials and the ring R_L"""
from src.exact.cyclotomic import CycloElem, cyclo_invert, cyclotomic_polynomial, euler_phi, root_of_unity_sum
from src.exact.factorization import FactorizationError, factor_integer
from src.exact.gcd import mpoly_gcd
from src.exact.mpoly import MPoly, NotDivisibleError
from src.exact.rational import Rat, RationalParseError, parse_rat, rat_to_str
from src.exact.ring import AmbientRing, RLElem, galois_apply, is_invariant, normal_form
from src.exact.univariate import MultivariateInputError, poly_gcd, rational_roots, squarefree_check

__all__ = [
    "AmbientRing",
    "CycloElem",
    "FactorizationError",
    "MPoly",
    "MultivariateInputError",
    "NotDivisibleError",
    "RLElem",
    "Rat",
    "RationalParseError",
    "cyclo_invert",
    "cyclotomic_polynomial",
    "euler_phi",
    "factor_integer",
    "galois_apply",
    "is_invariant",
    "mpoly_gcd",
    "normal_form",
    "parse_rat",
    "poly_gcd",
    "rat_to_str",
    "rational_roots",
    "root_of_unity_sum",
    "squarefree_check",
]
