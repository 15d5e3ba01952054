"""Brute-force search for rational points of small height on E(Q)"""
from fractions import Fraction
from math import gcd
from typing import List, Optional

import gmpy2

from src.cache import CacheBackend, cache_key, cached
from src.elliptic.curve import ECPoint, WeierstrassCurve
from src.elliptic.height import integral_model, naive_height
from src.observability import StructuredLogger

logger = StructuredLogger(__name__)


def search_twist_points(
    E: WeierstrassCurve, bound: int, cache: Optional[CacheBackend] = None
) -> List[ECPoint]:
    """Points with Y >= 0 and X = m/e^2 on the integral model, |m| and e^2 at most bound

    Sorted by naive height, then X.
    """

    def search() -> List[ECPoint]:
        A, B, u = integral_model(E)
        found = []
        for e in range(1, int(gmpy2.isqrt(bound)) + 1):
            e2, e4, e6 = e * e, e ** 4, e ** 6
            for m in range(-bound, bound + 1):
                if gcd(m, e) != 1:
                    continue
                # e^6 * Y^2 = m^3 + A m e^4 + B e^6
                rhs = m ** 3 + A * m * e4 + B * e6
                if rhs < 0 or not gmpy2.is_square(rhs):
                    continue
                X = Fraction(m, e2) / (u * u)
                Y = Fraction(int(gmpy2.isqrt(rhs)), e ** 3) / (u ** 3)
                found.append(ECPoint(X, Y))
        found.sort(key=lambda P: (naive_height(P), P.x))
        logger.info("point_search_finished", curve=str(E), bound=bound, found=len(found))
        return found

    return cached(cache, cache_key("point_search", E.A, E.B, bound), search)
