"""Torsion detection on E(Q) and the rational 2-torsion of y^2 = f(x)"""
from dataclasses import dataclass
from typing import Optional

from src.elliptic.curve import ECPoint, WeierstrassCurve
from src.exact.mpoly import MPoly
from src.exact.univariate import rational_roots

# Mazur: a rational torsion point has order 1..10 or 12
TORSION_ORDERS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)


@dataclass(frozen=True)
class TorsionResult:
    torsion: bool
    order: Optional[int] = None

    def __str__(self) -> str:
        return f"torsion of order {self.order}" if self.torsion else "non-torsion"


def torsion_test(E: WeierstrassCurve, P: ECPoint) -> TorsionResult:
    if not E.contains(P):
        raise ValueError(f"{P} is not on {E}")
    multiple = P
    for k in range(1, max(TORSION_ORDERS) + 1):
        if multiple.is_infinity:
            if k in TORSION_ORDERS:
                return TorsionResult(True, k)
            break
        multiple = E.add(multiple, P)
    return TorsionResult(False)


def two_torsion(f: MPoly) -> str:
    """Rational 2-torsion of y^2 = f(x) for a squarefree cubic f"""
    if f.degree() != 3:
        raise ValueError(f"two_torsion expects a cubic, got degree {f.degree()}")
    count = len(rational_roots(f))
    return {0: "trivial", 1: "Z/2", 3: "(Z/2)^2"}[count]
