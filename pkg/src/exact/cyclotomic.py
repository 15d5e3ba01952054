"""Cyclotomic field Q(zeta_s) as residues modulo the s-th cyclotomic polynomial"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from src.exact.rational import rat_to_str

Scalar = Union[int, Fraction]


def _divisors(s: int) -> List[int]:
    return [d for d in range(1, s + 1) if s % d == 0]


def _divide_monic(numerator: List[int], divisor: Sequence[int]) -> List[int]:
    """Exact long division of integer polynomials (constant term first) by a monic divisor"""
    remainder = list(numerator)
    shift = len(remainder) - len(divisor)
    quotient = [0] * (shift + 1)
    for i in range(shift, -1, -1):
        lead = remainder[i + len(divisor) - 1]
        quotient[i] = lead
        if lead:
            for j, c in enumerate(divisor):
                remainder[i + j] -= lead * c
    if any(remainder):
        raise ArithmeticError("cyclotomic division left a remainder")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(s: int) -> Tuple[int, ...]:
    """Phi_s(t) as integer coefficients, constant term first"""
    if s < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {s}")
    poly = [-1] + [0] * (s - 1) + [1]
    for d in _divisors(s):
        if d < s:
            poly = _divide_monic(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def euler_phi(s: int) -> int:
    return len(cyclotomic_polynomial(s)) - 1


# --- Q[t] helpers, coefficient lists with constant term first ---------------

def _trim(poly: List[Fraction]) -> List[Fraction]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    a, b = _trim(list(a)), _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    quotient = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        quotient[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _trim(quotient), _trim(a[: len(b) - 1])


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim(out)


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    width = max(len(a), len(b))
    out = [Fraction(0)] * width
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _reduce(order: int, poly: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Residue of poly modulo Phi_order, padded to length phi(order)"""
    phi = cyclotomic_polynomial(order)
    width = len(phi) - 1
    work = [Fraction(c) for c in poly]
    for i in range(len(work) - 1, width - 1, -1):
        c = work[i]
        if c:
            base = i - width
            for j in range(width):
                if phi[j]:
                    work[base + j] -= c * phi[j]
            work[i] = Fraction(0)
    work = work[:width] + [Fraction(0)] * (width - len(work))
    return tuple(work)


@dataclass(frozen=True, eq=False)
class CycloElem:
    """Element of Q(zeta_s): coeffs[k] multiplies zeta^k, k < phi(s)"""
    order: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        if len(self.coeffs) != euler_phi(self.order):
            raise ValueError(
                f"expected {euler_phi(self.order)} coefficients for order {self.order}, "
                f"got {len(self.coeffs)}"
            )

    # --- constructors -------------------------------------------------------

    @classmethod
    def from_poly(cls, order: int, poly: Sequence[Scalar]) -> "CycloElem":
        return cls(order, _reduce(order, poly))

    @classmethod
    def rational(cls, order: int, value: Scalar) -> "CycloElem":
        width = euler_phi(order)
        return cls(order, (Fraction(value),) + (Fraction(0),) * (width - 1))

    @classmethod
    def zero(cls, order: int) -> "CycloElem":
        return cls.rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "CycloElem":
        return cls.rational(order, 1)

    @classmethod
    def zeta(cls, order: int) -> "CycloElem":
        return cls.from_poly(order, [0, 1])

    # --- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    # --- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "CycloElem":
        if isinstance(other, CycloElem):
            if other.order != self.order:
                raise ValueError(f"mixing Q(zeta_{self.order}) and Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycloElem":
        return CycloElem(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value: Scalar) -> "CycloElem":
        value = Fraction(value)
        return CycloElem(self.order, tuple(c * value for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self.scale(other.coeffs[0])
        if self.is_rational():
            return other.scale(self.coeffs[0])
        return CycloElem.from_poly(self.order, _poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CycloElem":
        if exponent < 0:
            return cyclo_invert(self) ** (-exponent)
        result = CycloElem.one(self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "CycloElem":
        return cyclo_invert(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * cyclo_invert(other)

    def __rtruediv__(self, other):
        return CycloElem.rational(self.order, Fraction(other)) * cyclo_invert(self)

    # --- comparison and rendering -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycloElem):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __str__(self) -> str:
        if self.is_rational():
            return rat_to_str(self.coeffs[0])
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            basis = "" if k == 0 else ("zeta" if k == 1 else f"zeta^{k}")
            if not basis:
                body = rat_to_str(abs(c))
            elif abs(c) == 1:
                body = basis
            else:
                body = f"{rat_to_str(abs(c))}*{basis}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"CycloElem({self.order}, {self})"


def cyclo_invert(a: CycloElem) -> CycloElem:
    """Inverse in Q(zeta_s) by the extended Euclidean algorithm against Phi_s"""
    if a.is_zero():
        raise ZeroDivisionError("cannot invert zero in a cyclotomic field")
    if a.is_rational():
        return CycloElem.rational(a.order, 1 / a.coeffs[0])

    r0 = [Fraction(c) for c in cyclotomic_polynomial(a.order)]
    r1 = _trim(list(a.coeffs))
    s0: List[Fraction] = []
    s1: List[Fraction] = [Fraction(1)]
    # invariant: s_i * a == r_i (mod Phi)
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ArithmeticError(f"{a} shares a factor with Phi_{a.order}")
    unit = 1 / r1[0]
    return CycloElem.from_poly(a.order, [c * unit for c in s1])


def root_of_unity_sum(order: int) -> CycloElem:
    """1 + zeta + ... + zeta^(s-1) in Q(zeta_s)"""
    total = CycloElem.zero(order)
    power = CycloElem.one(order)
    zeta = CycloElem.zeta(order)
    for _ in range(order):
        total = total + power
        power = power * zeta
    return total
