"""Short Weierstrass model of the specialized twist d*z^2 = f(x)

For a cubic f = c3*x^3 + c2*x^2 + c1*x + c0 put x~ = c3*x + c2/3 and
z~ = c3*z, which gives d*z~^2 = x~^3 + A*x~ + B.  Scaling X = d*x~ and
Y = d^2*z~ lands on E_d: Y^2 = X^3 + A*d^2*X + B*d^3.

A quartic with a rational root alpha is first turned into a cubic in
w = 1/(x - alpha) with z' = z*w^2.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from src.elliptic.curve import INFINITY, BadPrimeError, ECPoint, FpCurve, WeierstrassCurve, reduce_curve
from src.exact.mpoly import MPoly
from src.exact.univariate import rational_roots, univariate_coefficients


class SingularSpecializationError(ValueError):
    """d = 0, so the twist degenerates"""
    pass


def _rational_coefficients(f: MPoly) -> List[Fraction]:
    if not f.is_rational():
        raise ValueError(f"{f} must have rational coefficients")
    return [c.to_rational() for c in univariate_coefficients(f)]


def _taylor(coeffs: List[Fraction], alpha: Fraction) -> List[Fraction]:
    """Coefficients of f(alpha + t) in t, constant term first"""
    work = list(coeffs)
    out = []
    while work:
        # synthetic division by (x - alpha)
        acc = Fraction(0)
        quotient = []
        for c in reversed(work):
            acc = acc * alpha + c
            quotient.append(acc)
        out.append(quotient.pop())
        work = list(reversed(quotient))
    return out


@dataclass(frozen=True)
class WeierstrassModel:
    """E_d together with the coordinate maps to and from d*z^2 = f(x)"""
    d: Fraction
    cubic: Tuple[Fraction, Fraction, Fraction, Fraction]
    alpha: Optional[Fraction]
    curve: WeierstrassCurve
    depressed: Tuple[Fraction, Fraction]

    @property
    def kind(self) -> str:
        return "cubic" if self.alpha is None else "quartic"

    def forward(self, x, z) -> ECPoint:
        """(x, z) on d*z^2 = f(x) to (X, Y) on E_d"""
        x, z = Fraction(x), Fraction(z)
        c0, c1, c2, c3 = self.cubic
        if self.alpha is not None:
            if x == self.alpha:
                return INFINITY
            w = 1 / (x - self.alpha)
            x, z = w, z * w * w
        xt = c3 * x + c2 / 3
        zt = c3 * z
        return ECPoint(self.d * xt, self.d * self.d * zt)

    def backward(self, P: ECPoint) -> Tuple[Fraction, Fraction]:
        """(X, Y) on E_d to (x, z) on d*z^2 = f(x)"""
        c0, c1, c2, c3 = self.cubic
        if P.is_infinity:
            if self.alpha is not None:
                return self.alpha, Fraction(0)
            raise ValueError("infinity has no affine preimage on a cubic model")
        xt = P.x / self.d
        zt = P.y / (self.d * self.d)
        x = (xt - c2 / 3) / c3
        z = zt / c3
        if self.alpha is not None:
            if x == 0:
                raise ValueError(f"{P} comes from a point at infinity of the quartic model")
            w = x
            x, z = self.alpha + 1 / w, z / (w * w)
        return x, z

    def reduce_mod(self, p: int) -> FpCurve:
        """Reduction of the untwisted model (d = 1) mod p"""
        A, B = self.depressed
        return reduce_curve(WeierstrassCurve(A, B), p)

    def forward_mod(self, x: int, y: int, p: int) -> ECPoint:
        """(x, y) on y^2 = f(x) over F_p to the reduced untwisted model"""
        if self.alpha is not None:
            raise ValueError("reduction mod p is only wired for cubic models")
        c0, c1, c2, c3 = self.cubic
        residues = []
        for c in (c2 / 3, c3):
            if c.denominator % p == 0:
                raise BadPrimeError(f"{p} divides a denominator of the coordinate change")
            residues.append(c.numerator * pow(c.denominator, -1, p) % p)
        shift, lead = residues
        return ECPoint((lead * x + shift) % p, lead * y % p)


def to_weierstrass(f: MPoly, d) -> WeierstrassModel:
    d = Fraction(d)
    if d == 0:
        raise SingularSpecializationError("d = 0: the specialized twist is singular")
    coeffs = _rational_coefficients(f)
    degree = len(coeffs) - 1
    alpha = None
    if degree == 4:
        roots = rational_roots(f)
        if not roots:
            raise ValueError("quartic f needs a rational root to reach a cubic model")
        alpha = roots[0]
        shifted = _taylor(coeffs, alpha)
        # f(alpha + 1/w) * w^4 = shifted[1]*w^3 + shifted[2]*w^2 + shifted[3]*w + shifted[4]
        coeffs = [shifted[4], shifted[3], shifted[2], shifted[1]]
    elif degree != 3:
        raise ValueError(f"f must be a cubic (or a quartic with a rational root), got degree {degree}")

    c0, c1, c2, c3 = coeffs
    A = c1 * c3 - c2 * c2 / 3
    B = 2 * c2 ** 3 / 27 - c1 * c2 * c3 / 3 + c0 * c3 * c3
    curve = WeierstrassCurve(A * d * d, B * d ** 3)
    return WeierstrassModel(
        d=d,
        cubic=(c0, c1, c2, c3),
        alpha=alpha,
        curve=curve,
        depressed=(A, B),
    )
