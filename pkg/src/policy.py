"""Policy layer: documented parameter ranges and certifier allowlist"""
from typing import TYPE_CHECKING, Iterable, Optional

import gmpy2
import mpmath as mp

if TYPE_CHECKING:
    from src.config import RunConfig


class ConfigViolation(Exception):
    """Configuration outside the documented ranges"""
    pass


class ConfigPolicy:
    """Enforce the parameter ranges every run must respect"""

    # (2M+1)^n coefficient vectors are enumerated
    MAX_VECTORS = 10 ** 6

    def __init__(self):
        self.allowed_certifiers = {"fp", "heights"}
        self.s_range = (2, 12)
        self.n_range = (1, 8)
        self.M_range = (1, 10)
        self.trials_range = (1, 10000)
        self.search_bound_range = (1, 10 ** 5)
        self.max_tol = mp.mpf("1e-2")

    def _check_range(self, name: str, value: int, bounds) -> None:
        low, high = bounds
        if not low <= value <= high:
            raise ConfigViolation(f"{name} = {value} outside [{low}, {high}]")

    def check_construction(self, s: int, n: int, end_rank: int = 1) -> bool:
        self._check_range("s", s, self.s_range)
        self._check_range("n", n, self.n_range)
        if end_rank < 1:
            raise ConfigViolation(f"end_rank must be at least 1, got {end_rank}")
        return True

    def check_certifier_allowed(self, name: str) -> bool:
        if name not in self.allowed_certifiers:
            raise ConfigViolation(f"Certifier '{name}' is not in allowlist")
        return True

    def check_primes(self, primes: Iterable[int]) -> bool:
        primes = list(primes)
        if not primes:
            raise ConfigViolation("at least one prime is required")
        for p in primes:
            if p < 5 or not gmpy2.is_prime(p):
                raise ConfigViolation(f"{p} is not an odd prime >= 5")
        return True

    def check_tolerance(self, tol: str) -> bool:
        try:
            value = mp.mpf(tol)
        except (TypeError, ValueError) as e:
            raise ConfigViolation(f"tol must be a decimal string, got {tol!r}") from e
        if not 0 < value <= self.max_tol:
            raise ConfigViolation(f"tol = {tol} outside (0, 1e-2]")
        return True

    def check_elliptic(self, s: int, r: int) -> bool:
        if s != 2 or r != 3:
            raise ConfigViolation(
                f"certification covers s = 2 with deg f = 3 only, got s = {s}, deg f = {r}"
            )
        return True

    def grid_cell_note(self, s: int, r: int, n: int) -> Optional[str]:
        """Reason a grid cell is skipped, or None when it is admissible"""
        if s > r:
            return f"s = {s} exceeds r = {r}"
        if r > n:
            return f"r = {r} exceeds n = {n}"
        return None

    def validate_run(self, config: "RunConfig", certifiers: Iterable[str] = ()) -> bool:
        """Comprehensive validation of a run configuration"""
        self.check_construction(config.s, config.n, config.end_rank)
        for name in certifiers:
            self.check_certifier_allowed(name)
        if "fp" in certifiers:
            self._check_range("M", config.M, self.M_range)
            self._check_range("trials", config.trials, self.trials_range)
            self.check_primes(config.primes)
            if (2 * config.M + 1) ** config.n > self.MAX_VECTORS:
                raise ConfigViolation(
                    f"(2M+1)^n = {(2 * config.M + 1) ** config.n} coefficient vectors exceed {self.MAX_VECTORS}"
                )
        if "heights" in certifiers:
            self._check_range("search_bound", config.search_bound, self.search_bound_range)
            self.check_tolerance(config.tol)
        return True
