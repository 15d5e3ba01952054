"""Sparse multivariate polynomials over Q(zeta_s)"""
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.exact.cyclotomic import CycloElem
from src.exact.rational import rat_to_str

Exponent = Tuple[int, ...]
Coefficient = Union[int, Fraction, CycloElem]


class NotDivisibleError(ArithmeticError):
    """Exact polynomial division left a remainder"""
    pass


def _grlex_key(exponent: Exponent) -> Tuple[int, Exponent]:
    # the last variable is the most significant one
    return (sum(exponent), exponent[::-1])


class MPoly:
    """Immutable sparse polynomial; zero coefficients are never stored"""

    __slots__ = ("variables", "order", "_terms", "_hash")

    def __init__(
        self,
        variables: Sequence[str],
        order: int,
        terms: Optional[Mapping[Exponent, Coefficient]] = None,
    ):
        self.variables: Tuple[str, ...] = tuple(variables)
        self.order = order
        arity = len(self.variables)
        clean: Dict[Exponent, CycloElem] = {}
        for exponent, coeff in (terms or {}).items():
            if len(exponent) != arity:
                raise ValueError(f"exponent {exponent} does not match variables {self.variables}")
            value = _as_cyclo(order, coeff)
            if value:
                clean[tuple(exponent)] = value
        self._terms = clean
        self._hash: Optional[int] = None

    # --- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str], order: int) -> "MPoly":
        return cls(variables, order)

    @classmethod
    def constant(cls, variables: Sequence[str], order: int, value: Coefficient) -> "MPoly":
        return cls(variables, order, {(0,) * len(variables): value})

    @classmethod
    def one(cls, variables: Sequence[str], order: int) -> "MPoly":
        return cls.constant(variables, order, 1)

    @classmethod
    def var(cls, variables: Sequence[str], order: int, name: str, power: int = 1) -> "MPoly":
        index = list(variables).index(name)
        exponent = [0] * len(variables)
        exponent[index] = power
        return cls(variables, order, {tuple(exponent): 1})

    @classmethod
    def univariate(
        cls, coeffs: Sequence[Coefficient], order: int, name: str = "x"
    ) -> "MPoly":
        """Polynomial in one variable from coefficients listed constant term first"""
        return cls((name,), order, {(k,): c for k, c in enumerate(coeffs)})

    def _like(self, terms: Mapping[Exponent, Coefficient]) -> "MPoly":
        return MPoly(self.variables, self.order, terms)

    # --- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, CycloElem]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, CycloElem]]:
        return iter(self._terms.items())

    def sorted_terms(self) -> List[Tuple[Exponent, CycloElem]]:
        """Terms in descending graded lexicographic order"""
        return sorted(self._terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> CycloElem:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * len(self.variables), CycloElem.zero(self.order))

    def active_variables(self) -> List[int]:
        """Indices of variables that occur with positive exponent"""
        return [
            i for i in range(len(self.variables))
            if any(e[i] for e in self._terms)
        ]

    def degree(self, index: Optional[int] = None) -> int:
        """Total degree, or degree in the variable at index; -1 for zero"""
        if not self._terms:
            return -1
        if index is None:
            return max(sum(e) for e in self._terms)
        return max(e[index] for e in self._terms)

    def leading_term(self) -> Tuple[Exponent, CycloElem]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exponent = max(self._terms, key=_grlex_key)
        return exponent, self._terms[exponent]

    def leading_coefficient(self) -> CycloElem:
        return self.leading_term()[1]

    def coefficients_in(self, index: int) -> Dict[int, "MPoly"]:
        """Split as sum of c_k * v^k for the variable at index; c_k free of v"""
        buckets: Dict[int, Dict[Exponent, CycloElem]] = {}
        for exponent, coeff in self._terms.items():
            k = exponent[index]
            stripped = exponent[:index] + (0,) + exponent[index + 1:]
            buckets.setdefault(k, {})[stripped] = coeff
        return {k: self._like(t) for k, t in buckets.items()}

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    # --- arithmetic ---------------------------------------------------------

    def _check(self, other: "MPoly") -> None:
        if other.variables != self.variables or other.order != self.order:
            raise ValueError("polynomials live in different rings")

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, CycloElem)):
            return MPoly.constant(self.variables, self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            terms[exponent] = terms[exponent] + coeff if exponent in terms else coeff
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return self._like({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value: Coefficient) -> "MPoly":
        value = _as_cyclo(self.order, value)
        if not value:
            return self._like({})
        return self._like({e: c * value for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloElem)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponent, CycloElem] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                product = c1 * c2
                terms[exponent] = terms[exponent] + product if exponent in terms else product
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MPoly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = MPoly.one(self.variables, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def mul_monomial(self, exponent: Exponent, coeff: Coefficient = 1) -> "MPoly":
        coeff = _as_cyclo(self.order, coeff)
        return self._like({
            tuple(a + b for a, b in zip(e, exponent)): c * coeff
            for e, c in self._terms.items()
        })

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Quotient when divisor divides self exactly, else NotDivisibleError"""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if divisor.is_constant():
            return self.scale(divisor.constant_value().inverse())
        lead_exp, lead_coeff = divisor.leading_term()
        lead_inv = lead_coeff.inverse()
        remainder = self
        quotient: Dict[Exponent, CycloElem] = {}
        while remainder:
            exp, coeff = remainder.leading_term()
            shift = tuple(a - b for a, b in zip(exp, lead_exp))
            if any(k < 0 for k in shift):
                raise NotDivisibleError(f"{divisor} does not divide {self}")
            factor = coeff * lead_inv
            quotient[shift] = factor
            remainder = remainder - divisor.mul_monomial(shift, factor)
        return self._like(quotient)

    def monic(self) -> "MPoly":
        if self.is_zero():
            return self
        return self.scale(self.leading_coefficient().inverse())

    def derivative(self, index: int) -> "MPoly":
        terms: Dict[Exponent, CycloElem] = {}
        for exponent, coeff in self._terms.items():
            k = exponent[index]
            if k:
                lowered = exponent[:index] + (k - 1,) + exponent[index + 1:]
                terms[lowered] = coeff * k
        return self._like(terms)

    # --- change of ring and evaluation --------------------------------------

    def embed(self, variables: Sequence[str]) -> "MPoly":
        """Same polynomial viewed in a ring whose variables contain ours"""
        variables = tuple(variables)
        position = [variables.index(v) for v in self.variables]
        terms = {}
        for exponent, coeff in self._terms.items():
            target = [0] * len(variables)
            for i, k in zip(position, exponent):
                target[i] = k
            terms[tuple(target)] = coeff
        return MPoly(variables, self.order, terms)

    def substitute(self, images: Mapping[str, "MPoly"], variables: Sequence[str]) -> "MPoly":
        """Replace each of our variables by a polynomial over `variables`"""
        variables = tuple(variables)
        powers: Dict[Tuple[int, int], MPoly] = {}

        def power(i: int, k: int) -> MPoly:
            if (i, k) not in powers:
                powers[(i, k)] = images[self.variables[i]] ** k
            return powers[(i, k)]

        result = MPoly.zero(variables, self.order)
        for exponent, coeff in self._terms.items():
            term = MPoly.constant(variables, self.order, coeff)
            for i, k in enumerate(exponent):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Coefficient]) -> CycloElem:
        total = CycloElem.zero(self.order)
        for exponent, coeff in self._terms.items():
            term = coeff
            for name, k in zip(self.variables, exponent):
                if k:
                    term = term * _as_cyclo(self.order, values[name]) ** k
            total = total + term
        return total

    def evaluate_mod(self, values: Mapping[str, int], p: int) -> int:
        """Value mod p of a polynomial with rational coefficients"""
        total = 0
        for exponent, coeff in self._terms.items():
            if not coeff.is_rational():
                raise ValueError("reduction mod p needs rational coefficients")
            q = coeff.to_rational()
            if q.denominator % p == 0:
                raise ZeroDivisionError(f"coefficient {q} is not p-integral for p={p}")
            term = q.numerator * pow(q.denominator, -1, p)
            for name, k in zip(self.variables, exponent):
                if k:
                    term = term * pow(values[name], k, p)
            total = (total + term) % p
        return total

    # --- comparison and rendering -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return (
                self.variables == other.variables
                and self.order == other.order
                and self._terms == other._terms
            )
        if isinstance(other, (int, Fraction, CycloElem)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, self.order, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exponent, coeff in self.sorted_terms():
            monomial = _render_monomial(self.variables, exponent)
            sign, body = _render_term(coeff, monomial)
            if not pieces:
                pieces.append(body if sign > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if sign > 0 else f" - {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"MPoly({self})"


def _as_cyclo(order: int, value: Coefficient) -> CycloElem:
    if isinstance(value, CycloElem):
        if value.order != order:
            raise ValueError(f"coefficient of order {value.order} in a ring of order {order}")
        return value
    return CycloElem.rational(order, value)


def _render_monomial(variables: Sequence[str], exponent: Exponent) -> str:
    factors = []
    for name, k in zip(variables, exponent):
        if k == 1:
            factors.append(name)
        elif k > 1:
            factors.append(f"{name}^{k}")
    return "*".join(factors)


def _render_term(coeff: CycloElem, monomial: str) -> Tuple[int, str]:
    if coeff.is_rational():
        value = coeff.to_rational()
        sign = 1 if value > 0 else -1
        magnitude = abs(value)
        if not monomial:
            return sign, rat_to_str(magnitude)
        if magnitude == 1:
            return sign, monomial
        return sign, f"{rat_to_str(magnitude)}*{monomial}"
    text = f"({coeff})"
    return 1, f"{text}*{monomial}" if monomial else text


def render_factor(poly: MPoly) -> str:
    """Rendering suitable as a factor inside a product"""
    text = str(poly)
    if poly.is_monomial() or poly.is_zero():
        return text
    return f"({text})"

