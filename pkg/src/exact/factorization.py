"""Integer factorization: trial division, then Brent's variant of Pollard rho"""
from typing import Dict, List

import gmpy2
from tenacity import Retrying, RetryError, retry_if_exception_type, stop_after_attempt

from src.observability import StructuredLogger

logger = StructuredLogger(__name__)

TRIAL_DIVISION_LIMIT = 10 ** 6
RHO_ITERATION_CAP = 2_000_000
RHO_RESTARTS = 8


class FactorizationError(ArithmeticError):
    """Integer could not be split within the iteration budget"""
    pass


class _RhoStalled(Exception):
    pass


def _brent(n: int, c: int, max_iterations: int) -> int:
    y, r, q, g = 2, 1, 1, 1
    x = ys = 2
    m = 128
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = int(gmpy2.gcd(q, n))
            k += m
        spent += r
        r *= 2
        if spent > max_iterations:
            raise _RhoStalled(f"no factor of {n} after {spent} steps")
    if g == n:
        # backtrack one step at a time from the last saved ys
        while True:
            ys = (ys * ys + c) % n
            g = int(gmpy2.gcd(abs(x - ys), n))
            if g > 1:
                break
    if g == n:
        raise _RhoStalled(f"cycle without a proper factor of {n} for c={c}")
    return g


def pollard_rho(n: int, max_iterations: int = RHO_ITERATION_CAP, restarts: int = RHO_RESTARTS) -> int:
    """A nontrivial factor of the composite n"""
    if n % 2 == 0:
        return 2
    if gmpy2.is_square(n):
        return int(gmpy2.isqrt(n))
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(restarts),
            retry=retry_if_exception_type(_RhoStalled),
            reraise=True,
        ):
            with attempt:
                c = attempt.retry_state.attempt_number
                if c > 1:
                    logger.info("rho_restart", n=str(n), c=c)
                return _brent(n, c, max_iterations)
    except (_RhoStalled, RetryError) as e:
        raise FactorizationError(f"could not split {n}: {e}") from e
    raise FactorizationError(f"could not split {n}")


def _split(n: int, out: Dict[int, int], max_iterations: int) -> None:
    if n == 1:
        return
    if gmpy2.is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = pollard_rho(n, max_iterations)
    _split(d, out, max_iterations)
    _split(n // d, out, max_iterations)


def factor_integer(n: int, max_iterations: int = RHO_ITERATION_CAP) -> Dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}, sorted by prime"""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    factors: Dict[int, int] = {}
    d = 2
    while d <= TRIAL_DIVISION_LIMIT and d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n <= TRIAL_DIVISION_LIMIT ** 2 or gmpy2.is_prime(n):
            # below the square of the trial bound a survivor is prime
            factors[n] = factors.get(n, 0) + 1
        else:
            logger.info("rho_started", cofactor=str(n))
            _split(n, factors, max_iterations)
    return dict(sorted(factors.items()))


def divisors(n: int) -> List[int]:
    """Positive divisors of |n| in increasing order"""
    result = [1]
    for prime, exponent in factor_integer(n).items():
        result = [d * prime ** k for d in result for k in range(exponent + 1)]
    return sorted(result)
