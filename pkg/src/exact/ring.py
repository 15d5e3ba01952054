"""The function ring R_L = Q(zeta_s)(x_1..x_n)[y_1..y_n] / (y_i^s - f(x_i))

Elements are fractions whose denominators involve only the x variables.
Three formal variables ride along: ``x`` and ``z`` are the coordinates of
the twisted curve, ``u`` is the coordinate after trivialization over L.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.exact.cyclotomic import CycloElem
from src.exact.gcd import mpoly_gcd
from src.exact.mpoly import Coefficient, MPoly, render_factor

FORMAL_SCALARS = ("x",)
FORMAL_BASIS = ("z", "u")


class AmbientRing:
    """Polynomial variables, defining relations and reduction for one (s, f, n)"""

    def __init__(self, s: int, n: int, f: MPoly, signs: Optional[Sequence[int]] = None):
        if s < 2:
            raise ValueError(f"s must be >= 2, got {s}")
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if f.variables != ("x",):
            raise ValueError("f must be a polynomial in the single variable x")
        self.s = s
        self.n = n
        self.f = f
        # y_i^s = signs[i] * f(x_i); anything but +1 is a deliberately broken relation
        self.signs: Tuple[int, ...] = tuple(signs) if signs is not None else (1,) * n
        if len(self.signs) != n or any(sign not in (1, -1) for sign in self.signs):
            raise ValueError(f"signs must be n values in {{1, -1}}, got {signs}")
        self.variables: Tuple[str, ...] = (
            tuple(f"x_{i}" for i in range(1, n + 1))
            + tuple(f"y_{i}" for i in range(1, n + 1))
            + FORMAL_SCALARS
            + FORMAL_BASIS
        )
        self._y_indices = list(range(n, 2 * n))
        self._basis_indices = set(self._y_indices) | {
            self.variables.index(v) for v in FORMAL_BASIS
        }
        self._f_powers: Dict[Tuple[int, int], MPoly] = {}

    def __repr__(self) -> str:
        return f"AmbientRing(s={self.s}, n={self.n}, f={self.f})"

    # --- generators ---------------------------------------------------------

    def gen(self, name: str, power: int = 1) -> MPoly:
        return MPoly.var(self.variables, self.s, name, power)

    def x(self, i: int) -> MPoly:
        return self.gen(f"x_{i}")

    def y(self, i: int) -> MPoly:
        return self.gen(f"y_{i}")

    def constant(self, value: Coefficient) -> MPoly:
        return MPoly.constant(self.variables, self.s, value)

    def one(self) -> MPoly:
        return MPoly.one(self.variables, self.s)

    def f_at(self, name: str) -> MPoly:
        """f evaluated at the named scalar variable"""
        return self.f_power(self.variables.index(name), 1)

    def f_power(self, index: int, k: int) -> MPoly:
        key = (index, k)
        if key not in self._f_powers:
            if k == 1:
                image = {"x": self.gen(self.variables[index])}
                self._f_powers[key] = self.f.substitute(image, self.variables)
            else:
                self._f_powers[key] = self.f_power(index, 1) ** k
        return self._f_powers[key]

    def z_monomial(self, i: int) -> MPoly:
        """z_i = y_1^(s-1) * y_(i+1)"""
        if not 1 <= i < self.n:
            raise ValueError(f"z_{i} is defined for 1 <= i <= {self.n - 1}")
        return self.gen("y_1", self.s - 1) * self.y(i + 1)

    def is_scalar(self, poly: MPoly) -> bool:
        """True when poly involves no y_i, z or u"""
        return not (set(poly.active_variables()) & self._basis_indices)

    # --- reduction ----------------------------------------------------------

    def reduce(self, poly: MPoly) -> MPoly:
        """Rewrite every y_i^e with e >= s using y_i^s = f(x_i)"""
        if poly.variables != self.variables:
            raise ValueError("polynomial is not over this ring's variables")
        s = self.s
        if all(e[j] < s for e, _ in poly.items() for j in self._y_indices):
            return poly
        result: Dict[Tuple[int, ...], CycloElem] = {}
        carried: List[MPoly] = []
        for exponent, coeff in poly.items():
            quotients = {j: exponent[j] // s for j in self._y_indices if exponent[j] >= s}
            if not quotients:
                result[exponent] = result[exponent] + coeff if exponent in result else coeff
                continue
            reduced = list(exponent)
            factor = MPoly.constant(self.variables, s, coeff)
            for j, q in quotients.items():
                reduced[j] = exponent[j] % s
                factor = factor * self.f_power(j - self.n, q)
                if self.signs[j - self.n] < 0 and q % 2:
                    factor = -factor
            carried.append(factor.mul_monomial(tuple(reduced)))
        total = MPoly(self.variables, s, result)
        for piece in carried:
            total = total + piece
        return total

    # --- elements -----------------------------------------------------------

    def element(self, numerator: Union[MPoly, Coefficient], denominator: Optional[Union[MPoly, Coefficient]] = None) -> "RLElem":
        return RLElem(self, numerator, 1 if denominator is None else denominator)


class RLElem:
    """Canonical fraction numerator/denominator in R_L

    The numerator is reduced, the denominator is y-free and monic, and the
    two share no common factor.
    """

    __slots__ = ("ring", "numerator", "denominator")

    def __init__(self, ring: AmbientRing, numerator, denominator=1):
        self.ring = ring
        num = numerator if isinstance(numerator, MPoly) else ring.constant(numerator)
        den = denominator if isinstance(denominator, MPoly) else ring.constant(denominator)
        if den.is_zero():
            raise ZeroDivisionError("RLElem with zero denominator")
        if not ring.is_scalar(den):
            raise ValueError(f"denominator {den} must be free of y_i, z and u")
        num = ring.reduce(num)
        if num.is_zero():
            den = ring.one()
        elif not den.is_constant():
            common = mpoly_gcd(num, den)
            if not common.is_constant():
                num = num.exact_div(common)
                den = den.exact_div(common)
        unit = den.leading_coefficient()
        if unit != 1:
            inverse = unit.inverse()
            num, den = num.scale(inverse), den.scale(inverse)
        self.numerator = num
        self.denominator = den

    def _wrap(self, other) -> "RLElem":
        if isinstance(other, RLElem):
            if other.ring is not self.ring:
                raise ValueError("elements of different ambient rings")
            return other
        if isinstance(other, MPoly):
            return RLElem(self.ring, other)
        return RLElem(self.ring, self.ring.constant(other))

    def __add__(self, other) -> "RLElem":
        other = self._wrap(other)
        if self.denominator == other.denominator:
            return RLElem(self.ring, self.numerator + other.numerator, self.denominator)
        return RLElem(
            self.ring,
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RLElem":
        return RLElem(self.ring, -self.numerator, self.denominator)

    def __sub__(self, other) -> "RLElem":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "RLElem":
        return self._wrap(other) - self

    def __mul__(self, other) -> "RLElem":
        other = self._wrap(other)
        return RLElem(
            self.ring,
            self.numerator * other.numerator,
            self.denominator * other.denominator,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RLElem":
        other = self._wrap(other)
        if not self.ring.is_scalar(other.numerator):
            raise ValueError(f"division by {other} needs a y-free numerator")
        return RLElem(
            self.ring,
            self.numerator * other.denominator,
            self.denominator * other.numerator,
        )

    def __pow__(self, exponent: int) -> "RLElem":
        if exponent < 0:
            return RLElem(self.ring, 1) / (self ** (-exponent))
        result = RLElem(self.ring, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RLElem, MPoly, int, Fraction, CycloElem)):
            return NotImplemented
        other = self._wrap(other)
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{render_factor(self.numerator)}/{render_factor(self.denominator)}"

    def __repr__(self) -> str:
        return f"RLElem({self})"

    def evaluate_mod(self, values: Mapping[str, int], p: int) -> int:
        """Specialize every variable to an integer residue mod p"""
        den = self.denominator.evaluate_mod(values, p)
        if den == 0:
            raise ZeroDivisionError(f"denominator {self.denominator} vanishes mod {p}")
        return self.numerator.evaluate_mod(values, p) * pow(den, -1, p) % p


def normal_form(e, context) -> RLElem:
    """Canonical representative of e in R_L; idempotent"""
    ring = context if isinstance(context, AmbientRing) else context.ring
    if isinstance(e, RLElem):
        return RLElem(ring, e.numerator, e.denominator)
    return RLElem(ring, e)


@lru_cache(maxsize=64)
def _zeta_power(order: int, k: int) -> CycloElem:
    return CycloElem.zeta(order) ** (k % order)


def galois_apply(e: RLElem, power: int = 1) -> RLElem:
    """gamma^power: fixes every x_j, sends each y_j to zeta * y_j"""
    ring = e.ring
    terms = {}
    for exponent, coeff in e.numerator.items():
        weight = sum(exponent[j] for j in ring._y_indices)
        terms[exponent] = coeff * _zeta_power(ring.s, power * weight)
    return RLElem(ring, MPoly(ring.variables, ring.s, terms), e.denominator)


def is_invariant(e: RLElem) -> bool:
    return galois_apply(e) == e


def substitute(poly: MPoly, ring: AmbientRing, assignment: Mapping[str, RLElem]) -> RLElem:
    """Evaluate a ring polynomial with some variables replaced by elements of R_L"""
    powers: Dict[Tuple[str, int], RLElem] = {}

    def power(name: str, k: int) -> RLElem:
        if (name, k) not in powers:
            powers[(name, k)] = assignment[name] ** k
        return powers[(name, k)]

    numerator = MPoly.zero(ring.variables, ring.s)
    fractional: List[RLElem] = []
    for exponent, coeff in poly.items():
        kept = list(exponent)
        factors: List[RLElem] = []
        for i, name in enumerate(ring.variables):
            if exponent[i] and name in assignment:
                factors.append(power(name, exponent[i]))
                kept[i] = 0
        term = MPoly(ring.variables, ring.s, {tuple(kept): coeff})
        if not factors:
            numerator = numerator + term
            continue
        value = RLElem(ring, term)
        for factor in factors:
            value = value * factor
        fractional.append(value)
    result = RLElem(ring, numerator)
    for value in fractional:
        result = result + value
    return result
