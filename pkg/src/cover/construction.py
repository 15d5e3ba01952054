"""Curve C_{s,f}, product C_n, quotient V_n and the twist f(x_1)*z^s = f(x)"""
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple

import gmpy2

from src.exact.cyclotomic import CycloElem
from src.exact.mpoly import MPoly, render_factor
from src.exact.rational import RatLike, parse_rat, rat_to_str
from src.exact.ring import AmbientRing
from src.exact.univariate import squarefree_check, univariate_coefficients
from src.observability import StructuredLogger

logger = StructuredLogger(__name__)

BASE_POINT_HEIGHT = 50


class ConstructionError(ValueError):
    """The requested (s, f, n) does not define the construction"""
    pass


class NonSquarefreeError(ConstructionError):
    pass


class ParameterError(ConstructionError):
    pass


@dataclass(frozen=True, eq=False)
class ConstructionSpec:
    s: int
    f: MPoly
    n: int
    strict: bool
    ring: AmbientRing
    product_relations: Tuple[MPoly, ...]
    quotient_relations: Tuple[MPoly, ...]
    twist_lhs: MPoly
    twist_rhs: MPoly
    base_point: Optional[Tuple[CycloElem, CycloElem]]
    base_point_status: str

    @property
    def r(self) -> int:
        return self.f.degree()

    @property
    def twist(self) -> MPoly:
        """f(x_1)*z^s - f(x)"""
        return self.twist_lhs - self.twist_rhs

    def f_coefficients(self) -> List[CycloElem]:
        return univariate_coefficients(self.f)

    # --- rendering ----------------------------------------------------------

    def curve_text(self) -> str:
        return f"y^{self.s} = {self.f}"

    def product_relation_texts(self) -> List[str]:
        return [
            f"y_{i}^{self.s} = {self.ring.f_at(f'x_{i}')}"
            for i in range(1, self.n + 1)
        ]

    def quotient_relation_texts(self) -> List[str]:
        lead = render_factor(self.ring.f_at("x_1"))
        if self.s > 2:
            lead = f"{lead}^{self.s - 1}"
        return [
            f"z_{i}^{self.s} = {lead}*{render_factor(self.ring.f_at(f'x_{i + 1}'))}"
            for i in range(1, self.n)
        ]

    def twist_text(self) -> str:
        return f"{render_factor(self.ring.f_at('x_1'))}*z^{self.s} = {self.ring.f_at('x')}"


def polynomial_from_coefficients(coeffs: Sequence[RatLike], s: int) -> MPoly:
    """f in Q[x] from exact coefficient literals, constant term first"""
    return MPoly.univariate([parse_rat(c) for c in coeffs], s)


def _height_ordered_rationals(bound: int) -> Iterator[Fraction]:
    yield Fraction(0)
    for h in range(1, bound + 1):
        layer = set()
        for q in range(1, h + 1):
            for p in range(-h, h + 1):
                if max(abs(p), q) == h and gcd(p, q) == 1:
                    layer.add(Fraction(p, q))
        yield from sorted(layer, key=lambda a: (abs(a.numerator), a.denominator, a < 0))


def _rational_root(value: Fraction, s: int) -> Optional[Fraction]:
    if value == 0:
        return Fraction(0)
    if value < 0 and s % 2 == 0:
        return None
    num_root, num_exact = gmpy2.iroot(abs(value.numerator), s)
    den_root, den_exact = gmpy2.iroot(value.denominator, s)
    if not (num_exact and den_exact):
        return None
    root = Fraction(int(num_root), int(den_root))
    return -root if value < 0 else root


def find_base_point(f: MPoly, s: int, bound: int = BASE_POINT_HEIGHT) -> Tuple[Optional[Tuple[CycloElem, CycloElem]], str]:
    """Smallest-height rational a with f(a) an s-th power, as (a, b) with b^s = f(a)"""
    if not f.is_rational():
        return None, "skipped: non-rational f"
    coeffs = [c.to_rational() for c in univariate_coefficients(f)]
    for a in _height_ordered_rationals(bound):
        value = Fraction(0)
        for c in reversed(coeffs):
            value = value * a + c
        b = _rational_root(value, s)
        if b is not None:
            point = (CycloElem.rational(s, a), CycloElem.rational(s, b))
            return point, "found"
    return None, "not found"


def build_construction(s: int, f: MPoly, n: int, strict: bool = True) -> ConstructionSpec:
    """Validate (s, f, n) and assemble every relation of the construction"""
    if s < 2:
        raise ParameterError(f"s must be at least 2, got {s}")
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if f.order != s:
        f = MPoly(f.variables, s, {e: c.to_rational() for e, c in f.items()})
    r = f.degree()
    if r < 1:
        raise ParameterError("f must be a nonconstant polynomial")
    if s > r:
        raise ParameterError(f"s exceeds deg f ({s} > {r})")
    if not squarefree_check(f):
        raise NonSquarefreeError(f"f = {f} is not squarefree")
    if strict and n < r:
        raise ParameterError(f"strict mode needs n >= deg f ({n} < {r}); use --no-strict")

    ring = AmbientRing(s, n, f)
    fx1 = ring.f_at("x_1")
    product_relations = tuple(
        ring.y(i) ** s - ring.f_at(f"x_{i}") for i in range(1, n + 1)
    )
    quotient_relations = tuple(
        ring.z_monomial(i) ** s - fx1 ** (s - 1) * ring.f_at(f"x_{i + 1}")
        for i in range(1, n)
    )
    twist_lhs = fx1 * ring.gen("z", s)
    twist_rhs = ring.f_at("x")
    base_point, status = find_base_point(f, s)

    spec = ConstructionSpec(
        s=s,
        f=f,
        n=n,
        strict=strict,
        ring=ring,
        product_relations=product_relations,
        quotient_relations=quotient_relations,
        twist_lhs=twist_lhs,
        twist_rhs=twist_rhs,
        base_point=base_point,
        base_point_status=status,
    )
    logger.info(
        "construction_built",
        s=s, r=r, n=n, strict=strict,
        twist=spec.twist_text(),
        base_point_status=status,
    )
    return spec


def relations_hold(spec: ConstructionSpec) -> bool:
    """Every product and quotient relation reduces to zero in R_L"""
    relations = spec.product_relations + spec.quotient_relations
    return all(spec.ring.reduce(rel).is_zero() for rel in relations)


def mutate_relation_sign(spec: ConstructionSpec, relation: str) -> ConstructionSpec:
    """Copy of spec with one relation's sign flipped

    ``relation`` is ``"twist"`` or ``"product:<i>"``.
    """
    if relation == "twist":
        return replace(spec, twist_rhs=-spec.twist_rhs)
    kind, _, index = relation.partition(":")
    if kind != "product" or not index.isdigit() or not 1 <= int(index) <= spec.n:
        raise ValueError(f"unknown relation {relation!r}")
    signs = list(spec.ring.signs)
    signs[int(index) - 1] = -signs[int(index) - 1]
    ring = AmbientRing(spec.s, spec.n, spec.f, signs)
    return replace(
        spec,
        ring=ring,
        product_relations=tuple(p.embed(ring.variables) for p in spec.product_relations),
        quotient_relations=tuple(p.embed(ring.variables) for p in spec.quotient_relations),
        twist_lhs=spec.twist_lhs.embed(ring.variables),
        twist_rhs=spec.twist_rhs.embed(ring.variables),
    )


def base_point_text(spec: ConstructionSpec) -> Optional[List[str]]:
    if spec.base_point is None:
        return None
    return [rat_to_str(c.to_rational()) for c in spec.base_point]
