"""Canonical heights by local decomposition, and the height pairing matrix

The normalization is h^(P) = lim h(x(2^k P)) / 4^k with the naive height
h(x) = log max(|num x|, den x).  Writing x(2Q) = phi(x, 1) / psi(x, 1),

    h^(P) = h(P) + sum_k 4^-(k+1) * log max(|phi|, |psi|)(t_k)
                 - sum_p sum_k 4^-(k+1) * e_k(p) * log p

where t_k are normalized real coordinates of x(2^k P) and e_k(p) is the
p-adic valuation of gcd(phi, psi) at the k-th integral coordinates.  Only
primes dividing the resultant of phi and psi contribute.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath as mp
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.cache import CacheBackend, cache_key, cached
from src.elliptic.curve import ECPoint, WeierstrassCurve
from src.exact.factorization import FactorizationError, factor_integer
from src.models import DecimalValue
from src.observability import StructuredLogger

logger = StructuredLogger(__name__)

MAX_TERMS = 200
GUARD_DIGITS = 10
ESCALATION_STEP = 20
ESCALATION_ATTEMPTS = 4


class HeightPrecisionError(ArithmeticError):
    """Requested tolerance not reached within the iteration budget"""
    pass


class UnfactorableDiscriminantError(ArithmeticError):
    """Bad primes unknown; try a different specialization"""
    pass


class _PrecisionShortfall(Exception):
    pass


def digits_for(tol) -> int:
    """Decimal digits worth printing for values known to within tol"""
    with mp.workdps(30):
        return int(mp.ceil(-mp.log10(mp.mpf(tol)))) + 5


@dataclass(frozen=True)
class HeightValue:
    value: mp.mpf
    tolerance: mp.mpf
    digits: int

    def to_record(self) -> DecimalValue:
        return DecimalValue(
            value=mp.nstr(self.value, self.digits, min_fixed=-mp.inf, max_fixed=mp.inf),
            tolerance=mp.nstr(self.tolerance, 3),
            digits=self.digits,
        )


def naive_height(P: ECPoint) -> mp.mpf:
    if P.is_infinity:
        return mp.mpf(0)
    x = Fraction(P.x)
    return mp.log(max(abs(x.numerator), x.denominator))


# --- model data --------------------------------------------------------------

def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def integral_model(E: WeierstrassCurve) -> Tuple[int, int, int]:
    """(A', B', u) with A' = u^4 A and B' = u^6 B integers, u minimal"""
    u = 1
    den_a, den_b = E.A.denominator, E.B.denominator
    for p in factor_integer(den_a * den_b):
        k = max(ceil(_valuation(den_a, p) / 4), ceil(_valuation(den_b, p) / 6))
        u *= p ** k
    A = E.A * u ** 4
    B = E.B * u ** 6
    return int(A), int(B), u


def _determinant(rows: List[List[Fraction]]) -> Fraction:
    rows = [list(r) for r in rows]
    size = len(rows)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] / rows[col][col]
            if factor:
                for c in range(col, size):
                    rows[r][c] -= factor * rows[col][c]
    return det


def doubling_resultant(A: int, B: int) -> int:
    """Resultant of phi = x^4 - 2Ax^2 - 8Bx + A^2 and psi = 4(x^3 + Ax + B)"""
    phi = [1, 0, -2 * A, -8 * B, A * A]
    psi = [4, 0, 4 * A, 4 * B]
    size = len(phi) + len(psi) - 2
    rows = []
    for shift in range(len(psi) - 1):
        rows.append([Fraction(0)] * shift + [Fraction(c) for c in phi] + [Fraction(0)] * (size - shift - len(phi)))
    for shift in range(len(phi) - 1):
        rows.append([Fraction(0)] * shift + [Fraction(c) for c in psi] + [Fraction(0)] * (size - shift - len(psi)))
    return int(_determinant(rows))


def bad_primes(A: int, B: int) -> Dict[int, int]:
    """{p: v_p(resultant)} for primes dividing 2(4A^3 + 27B^2)"""
    resultant = abs(doubling_resultant(A, B))
    try:
        primes = factor_integer(2 * (4 * A ** 3 + 27 * B ** 2))
    except FactorizationError as e:
        raise UnfactorableDiscriminantError(
            f"cannot factor the discriminant of Y^2 = X^3 + {A}X + {B}; "
            "try a different specialization"
        ) from e
    logger.info("discriminant_factored", A=str(A), B=str(B), primes=list(primes))
    return {p: _valuation(resultant, p) for p in primes}


# --- local contributions -----------------------------------------------------

def _phi(A, B, X, Z):
    X2, Z2 = X * X, Z * Z
    return X2 * X2 - 2 * A * X2 * Z2 - 8 * B * X * Z2 * Z + A * A * Z2 * Z2


def _psi(A, B, X, Z):
    return 4 * Z * (X * X * X + A * X * Z * Z + B * Z * Z * Z)


def _archimedean(A: int, B: int, a: int, b: int, tol_share, dps: int) -> mp.mpf:
    with mp.workdps(dps):
        Af, Bf = mp.mpf(A), mp.mpf(B)
        X, Z = mp.mpf(a), mp.mpf(b)
        scale = max(abs(X), abs(Z))
        X, Z = X / scale, Z / scale
        bound = mp.log(1 + 2 * abs(Af) + 8 * abs(Bf) + Af * Af + 4 * (1 + abs(Af) + abs(Bf)))
        total = mp.mpf(0)
        weight = mp.mpf(1) / 4
        for _ in range(MAX_TERMS):
            phi, psi = _phi(Af, Bf, X, Z), _psi(Af, Bf, X, Z)
            m = max(abs(phi), abs(psi))
            term = mp.log(m)
            total += weight * term
            bound = max(bound, abs(term) + 1)
            X, Z = phi / m, psi / m
            weight /= 4
            if weight * bound * 4 / 3 < tol_share:
                return +total
    raise HeightPrecisionError(f"archimedean series did not settle in {MAX_TERMS} terms")


def _stable_archimedean(A: int, B: int, a: int, b: int, tol_share, base_dps: int) -> mp.mpf:
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(ESCALATION_ATTEMPTS),
            retry=retry_if_exception_type(_PrecisionShortfall),
            reraise=True,
        ):
            with attempt:
                dps = base_dps + ESCALATION_STEP * (attempt.retry_state.attempt_number - 1)
                low = _archimedean(A, B, a, b, tol_share, dps)
                high = _archimedean(A, B, a, b, tol_share, dps + ESCALATION_STEP)
                with mp.workdps(dps + ESCALATION_STEP):
                    if abs(high - low) > tol_share / 4:
                        logger.info("height_precision_escalated", dps=dps)
                        raise _PrecisionShortfall(f"dps {dps} disagrees with dps {dps + ESCALATION_STEP}")
                return high
    except _PrecisionShortfall as e:
        raise HeightPrecisionError(str(e)) from e


def _p_adic_valuation(residue: int, p: int, precision: int) -> int:
    if residue == 0:
        return precision
    return min(_valuation(residue, p), precision)


def _nonarchimedean(A: int, B: int, a: int, b: int, p: int, v_res: int, tol_share) -> Fraction:
    """sum_k e_k / 4^(k+1); the caller multiplies by -log p"""
    if v_res == 0:
        return Fraction(0)
    log_p = mp.log(p)
    terms = 1
    while v_res * log_p / (3 * mp.mpf(4) ** terms) >= tol_share:
        terms += 1
        if terms > MAX_TERMS:
            raise HeightPrecisionError(f"p-adic series at p={p} needs more than {MAX_TERMS} terms")
    precision = (terms + 1) * v_res + 1
    modulus = p ** precision
    X, Z = a % modulus, b % modulus
    total = Fraction(0)
    for k in range(terms):
        phi = _phi(A, B, X, Z) % modulus
        psi = _psi(A, B, X, Z) % modulus
        e = min(_p_adic_valuation(phi, p, precision), _p_adic_valuation(psi, p, precision))
        if e >= precision:
            raise HeightPrecisionError(f"lost all {p}-adic precision at step {k}")
        total += Fraction(e, 4 ** (k + 1))
        precision -= e
        modulus = p ** precision
        X, Z = (phi // p ** e) % modulus, (psi // p ** e) % modulus
    return total


def canonical_height(
    E: WeierstrassCurve,
    P: ECPoint,
    tol="1e-8",
    cache: Optional[CacheBackend] = None,
) -> HeightValue:
    digits = digits_for(tol)
    if P.is_infinity:
        return HeightValue(mp.mpf(0), mp.mpf(tol), digits)

    def compute() -> HeightValue:
        A, B, u = integral_model(E)
        x = Fraction(P.x) * u * u
        a, b = x.numerator, x.denominator
        primes = cached(cache, cache_key("bad_primes", A, B), lambda: bad_primes(A, B))
        dps = digits + GUARD_DIGITS
        with mp.workdps(dps + ESCALATION_STEP * ESCALATION_ATTEMPTS):
            tolerance = mp.mpf(tol)
            tol_share = tolerance / (len(primes) + 2)
            value = mp.log(max(abs(a), b))
            value += _stable_archimedean(A, B, a, b, tol_share, dps)
            for p, v_res in primes.items():
                share = _nonarchimedean(A, B, a, b, p, v_res, tol_share)
                value -= mp.mpf(share.numerator) / share.denominator * mp.log(p)
            if value < -tolerance:
                raise HeightPrecisionError(f"height {value} below -tol for {P}")
            return HeightValue(+value, tolerance, digits)

    return cached(cache, cache_key("height", E.A, E.B, P.x, P.y, tol), compute)


@dataclass(frozen=True)
class GramMatrix:
    entries: List[List[mp.mpf]]
    determinant: mp.mpf
    error: mp.mpf
    heights: List[HeightValue]
    digits: int

    def entry_strings(self) -> List[List[str]]:
        return [[mp.nstr(v, self.digits, min_fixed=-mp.inf, max_fixed=mp.inf) for v in row] for row in self.entries]

    def determinant_record(self) -> DecimalValue:
        return DecimalValue(
            value=mp.nstr(self.determinant, self.digits, min_fixed=-mp.inf, max_fixed=mp.inf),
            tolerance=mp.nstr(self.error, 3),
            digits=self.digits,
        )

    def leading_minor(self, k: int) -> mp.mpf:
        if k == 0:
            return mp.mpf(1)
        with mp.workdps(self.digits + GUARD_DIGITS):
            return +mp.det(mp.matrix([row[:k] for row in self.entries[:k]]))


def height_pairing_matrix(
    E: WeierstrassCurve,
    points: Sequence[ECPoint],
    tol="1e-8",
    cache: Optional[CacheBackend] = None,
) -> GramMatrix:
    """Gram matrix <P_i, P_j> = (h^(P_i + P_j) - h^(P_i) - h^(P_j)) / 2"""
    digits = digits_for(tol)
    heights = [canonical_height(E, P, tol, cache) for P in points]
    size = len(points)
    with mp.workdps(digits + GUARD_DIGITS):
        entries = [[mp.mpf(0)] * size for _ in range(size)]
        for i in range(size):
            entries[i][i] = heights[i].value
            for j in range(i + 1, size):
                joint = canonical_height(E, E.add(points[i], points[j]), tol, cache)
                value = (joint.value - heights[i].value - heights[j].value) / 2
                entries[i][j] = entries[j][i] = value
        determinant = mp.det(mp.matrix(entries)) if size else mp.mpf(1)
        # each entry is off by at most 3/2 tol
        eps = mp.mpf(tol) * 3 / 2
        norms = [mp.sqrt(mp.fsum(v * v for v in row)) for row in entries]
        exact = mp.fprod(norms)
        perturbed = mp.fprod(r + mp.sqrt(size) * eps for r in norms)
        error = perturbed - exact
    return GramMatrix(entries, +determinant, +error, heights, digits)
