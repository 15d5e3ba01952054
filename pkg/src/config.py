"""Run configuration: defaults, TOML file, environment and flags"""
import os
import tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.exact.rational import parse_rat
from src.policy import ConfigViolation

THREADS_ENV = "TWISTRANK_THREADS"
DEFAULT_THREADS = 4

# TOML section -> {key in section: RunConfig field}
SECTIONS: Dict[str, Dict[str, str]] = {
    "construction": {"s": "s", "n": "n", "f": "f", "strict": "strict", "end_rank": "end_rank"},
    "certify": {
        "certifier": "certifier",
        "M": "M",
        "primes": "primes",
        "trials": "trials",
        "seed": "seed",
        "t1": "t1",
        "search_bound": "search_bound",
        "tol": "tol",
        "dependent_pair": "dependent_pair",
        "points": "points",
    },
    "grid": {"s": "grid_s", "r": "grid_r", "n": "grid_n", "f": "grid_f"},
    "output": {"out": "out", "format": "format", "include_timing": "include_timing"},
}


def _exact_string(value: Any) -> str:
    """int or exact string in, canonical "p/q" string out; floats are refused"""
    if isinstance(value, (float, bool)):
        raise ValueError(f"{value!r} is not exact; write rationals as strings like \"-2/7\"")
    return str(parse_rat(value if isinstance(value, int) else str(value)))


class RunConfig(BaseModel):
    """Every parameter of a run"""
    model_config = ConfigDict(extra="forbid")

    # construction
    s: int = 2
    n: int = 3
    f: List[str] = Field(default_factory=lambda: ["0", "-1", "0", "1"], description="Coefficients, constant term first")
    strict: Optional[bool] = Field(None, description="n >= deg f; defaults on for construct and grid, off for certify")
    end_rank: int = 1

    # certification
    certifier: Literal["fp", "heights", "both"] = "fp"
    M: int = 5
    primes: List[int] = Field(default_factory=lambda: [11, 13, 17])
    trials: int = 50
    seed: int = 0
    t1: str = "2"
    search_bound: int = 500
    tol: str = "1e-8"
    dependent_pair: Optional[List[int]] = None
    points: Optional[List[List[str]]] = None

    # grid
    grid_s: List[int] = Field(default_factory=lambda: [2, 3])
    grid_r: List[int] = Field(default_factory=lambda: [3, 4])
    grid_n: List[int] = Field(default_factory=lambda: [3, 4, 5])
    grid_f: Dict[str, List[str]] = Field(default_factory=dict, description="Degree -> coefficients; default x^r - x")

    # output
    out: Optional[str] = None
    format: Literal["json", "text"] = "json"
    include_timing: bool = False
    threads: int = Field(DEFAULT_THREADS, ge=1)

    @field_validator("f", mode="before")
    @classmethod
    def _exact_coefficients(cls, value):
        if isinstance(value, str):
            value = value.split(",")
        return [_exact_string(c.strip() if isinstance(c, str) else c) for c in value]

    @field_validator("t1", mode="before")
    @classmethod
    def _exact_t1(cls, value):
        return _exact_string(value)

    @field_validator("grid_f", mode="before")
    @classmethod
    def _exact_grid_f(cls, value):
        return {str(r): [_exact_string(c) for c in coeffs] for r, coeffs in value.items()}

    @field_validator("points", mode="before")
    @classmethod
    def _exact_points(cls, value):
        if value is None:
            return None
        return [[_exact_string(c) for c in point] for point in value]

    @field_validator("dependent_pair")
    @classmethod
    def _pair(cls, value):
        if value is not None and len(value) != 2:
            raise ValueError("dependent_pair takes two indices i, j")
        return value

    def strict_for(self, command: str) -> bool:
        if self.strict is not None:
            return self.strict
        return command != "certify"

    def certifier_names(self) -> List[str]:
        return ["fp", "heights"] if self.certifier == "both" else [self.certifier]

    def grid_polynomial(self, r: int) -> List[str]:
        """Coefficients of the grid polynomial of degree r"""
        if str(r) in self.grid_f:
            return self.grid_f[str(r)]
        return ["0", "-1"] + ["0"] * (r - 2) + ["1"]

    def fp_params(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "primes": self.primes,
            "trials": self.trials,
            "seed": self.seed,
            "dependent_pair": self.dependent_pair,
        }

    def heights_params(self) -> Dict[str, Any]:
        return {
            "t1": self.t1,
            "search_bound": self.search_bound,
            "tol": self.tol,
            "points": self.points,
        }

    def report_dict(self) -> Dict[str, Any]:
        """Configuration as embedded in a report; output plumbing is left out"""
        return self.model_dump(exclude={"out", "threads"})


def load_config_file(path: str) -> Dict[str, Any]:
    """Flatten a sectioned TOML file into RunConfig field names"""
    try:
        with Path(path).open("rb") as handle:
            raw = tomllib.load(handle)
    except OSError as e:
        raise ConfigViolation(f"cannot read config file {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigViolation(f"{path}: {e}") from e

    values: Dict[str, Any] = {}
    for section, table in raw.items():
        if section not in SECTIONS or not isinstance(table, dict):
            raise ConfigViolation(f"{path}: unknown section [{section}]")
        for key, value in table.items():
            if key not in SECTIONS[section]:
                raise ConfigViolation(f"{path}: unknown key '{key}' in [{section}]")
            values[SECTIONS[section][key]] = value
    return values


def threads_from_env(environ: Mapping[str, str] = os.environ) -> int:
    raw = environ.get(THREADS_ENV)
    if raw is None:
        return DEFAULT_THREADS
    try:
        threads = int(raw)
    except ValueError as e:
        raise ConfigViolation(f"{THREADS_ENV} must be an integer, got {raw!r}") from e
    if threads < 1:
        raise ConfigViolation(f"{THREADS_ENV} must be at least 1, got {threads}")
    return threads


def build_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Mapping[str, str] = os.environ,
) -> RunConfig:
    """Defaults < config file < flags; None-valued overrides are ignored"""
    values: Dict[str, Any] = {"threads": threads_from_env(environ)}
    if path:
        values.update(load_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return RunConfig(**values)
