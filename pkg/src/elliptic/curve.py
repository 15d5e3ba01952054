"""Short Weierstrass curves Y^2 = X^3 + AX + B over Q and F_p"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import gmpy2

from src.cache import CacheBackend, cache_key, cached
from src.exact.rational import rat_to_str


class SingularCurveError(ValueError):
    """4A^3 + 27B^2 = 0"""
    pass


class BadPrimeError(ValueError):
    """p is not an odd prime of good reduction"""
    pass


@dataclass(frozen=True)
class ECPoint:
    """Affine point, or the point at infinity when x is None"""
    x: Any = None
    y: Any = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        if self.is_infinity:
            return "infinity"
        if isinstance(self.x, Fraction):
            return f"({rat_to_str(self.x)}, {rat_to_str(self.y)})"
        return f"({self.x}, {self.y})"

    def as_list(self) -> Optional[List]:
        return None if self.is_infinity else [self.x, self.y]


INFINITY = ECPoint()


class _GroupLaw:
    """Chord and tangent formulas over a field given by _reduce and _inverse"""

    A: Any
    B: Any

    def _reduce(self, value):
        return value

    def _inverse(self, value):
        raise NotImplementedError

    def contains(self, P: ECPoint) -> bool:
        if P.is_infinity:
            return True
        lhs = self._reduce(P.y * P.y)
        rhs = self._reduce(P.x ** 3 + self.A * P.x + self.B)
        return lhs == rhs

    def neg(self, P: ECPoint) -> ECPoint:
        if P.is_infinity:
            return P
        return ECPoint(P.x, self._reduce(-P.y))

    def double(self, P: ECPoint) -> ECPoint:
        if P.is_infinity or self._reduce(P.y) == 0:
            return INFINITY
        lam = self._reduce((3 * P.x * P.x + self.A) * self._inverse(2 * P.y))
        x3 = self._reduce(lam * lam - 2 * P.x)
        y3 = self._reduce(lam * (P.x - x3) - P.y)
        return ECPoint(x3, y3)

    def add(self, P: ECPoint, Q: ECPoint) -> ECPoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if self._reduce(P.x - Q.x) == 0:
            if self._reduce(P.y + Q.y) == 0:
                return INFINITY
            return self.double(P)
        lam = self._reduce((Q.y - P.y) * self._inverse(Q.x - P.x))
        x3 = self._reduce(lam * lam - P.x - Q.x)
        y3 = self._reduce(lam * (P.x - x3) - P.y)
        return ECPoint(x3, y3)

    def mul(self, P: ECPoint, k: int) -> ECPoint:
        if k < 0:
            return self.mul(self.neg(P), -k)
        result = INFINITY
        addend = P
        while k:
            if k & 1:
                result = self.add(result, addend)
            addend = self.double(addend)
            k >>= 1
        return result


@dataclass(frozen=True)
class WeierstrassCurve(_GroupLaw):
    """Y^2 = X^3 + AX + B over Q"""
    A: Fraction
    B: Fraction

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))
        if self.discriminant == 0:
            raise SingularCurveError(f"Y^2 = X^3 + {self.A}X + {self.B} is singular")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    def _inverse(self, value):
        return 1 / Fraction(value)

    def point(self, x, y) -> ECPoint:
        P = ECPoint(Fraction(x), Fraction(y))
        if not self.contains(P):
            raise ValueError(f"{P} is not on {self}")
        return P

    def __str__(self) -> str:
        return _render_curve(self.A, self.B)


@dataclass(frozen=True)
class FpCurve(_GroupLaw):
    """Y^2 = X^3 + AX + B over F_p for an odd prime p of good reduction"""
    A: int
    B: int
    p: int

    def __post_init__(self):
        p = self.p
        if p < 3 or not gmpy2.is_prime(p):
            raise BadPrimeError(f"{p} is not an odd prime")
        object.__setattr__(self, "A", self.A % p)
        object.__setattr__(self, "B", self.B % p)
        if (4 * self.A ** 3 + 27 * self.B ** 2) % p == 0:
            raise BadPrimeError(f"{p} divides the discriminant of {self}")

    def _reduce(self, value):
        return value % self.p

    def _inverse(self, value):
        return pow(value % self.p, -1, self.p)

    def point(self, x: int, y: int) -> ECPoint:
        P = ECPoint(x % self.p, y % self.p)
        if not self.contains(P):
            raise ValueError(f"{P} is not on {self}")
        return P

    def __str__(self) -> str:
        return f"{_render_curve(self.A, self.B)} over F_{self.p}"


def reduce_curve(E: WeierstrassCurve, p: int) -> FpCurve:
    """E mod p; the coefficients must be p-integral"""
    residues = []
    for c in (E.A, E.B):
        if c.denominator % p == 0:
            raise BadPrimeError(f"{p} divides a denominator of {E}")
        residues.append(c.numerator * pow(c.denominator, -1, p) % p)
    return FpCurve(residues[0], residues[1], p)


def _render_curve(A, B) -> str:
    text = "Y^2 = X^3"
    for value, monomial in ((A, "X"), (B, "")):
        if value == 0:
            continue
        sign = "-" if value < 0 else "+"
        magnitude = abs(value)
        body = rat_to_str(magnitude) if not isinstance(magnitude, int) else str(magnitude)
        if monomial:
            body = monomial if magnitude == 1 else f"{body}{monomial}"
        text += f" {sign} {body}"
    return text


def _square_roots(p: int) -> Dict[int, Tuple[int, ...]]:
    roots: Dict[int, List[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    return {k: tuple(v) for k, v in roots.items()}


def ec_points_mod_p(E: FpCurve, cache: Optional[CacheBackend] = None) -> List[ECPoint]:
    """Every point of E(F_p), infinity first, then by (X, Y)"""

    def enumerate_points() -> List[ECPoint]:
        roots = _square_roots(E.p)
        points = [INFINITY]
        for x in range(E.p):
            rhs = (x ** 3 + E.A * x + E.B) % E.p
            for y in roots.get(rhs, ()):
                points.append(ECPoint(x, y))
        return points

    return cached(cache, cache_key("ec_points", E.A, E.B, E.p), enumerate_points)
