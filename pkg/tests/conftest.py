"""Pytest fixtures and configuration"""
import asyncio

import pytest

from src.cache import InMemoryCache
from src.certifier_registry import default_registry
from src.config import RunConfig
from src.cover.construction import build_construction, polynomial_from_coefficients
from src.elliptic.curve import ECPoint, WeierstrassCurve
from src.policy import ConfigPolicy


@pytest.fixture(scope="session")
def event_loop():
    """Create event loop for async tests"""
    loop = asyncio.get_event_loop_policy().new_event_loop()
    yield loop
    loop.close()


@pytest.fixture
def cache():
    cache = InMemoryCache()
    yield cache
    cache.clear()


@pytest.fixture
def registry(cache):
    return default_registry(cache)


@pytest.fixture
def policy():
    return ConfigPolicy()


@pytest.fixture
def cubic_coeffs():
    """x^3 - x"""
    return ["0", "-1", "0", "1"]


@pytest.fixture
def spec_s2_n3(cubic_coeffs):
    return build_construction(2, polynomial_from_coefficients(cubic_coeffs, 2), 3)


@pytest.fixture
def spec_s2_n2(cubic_coeffs):
    return build_construction(2, polynomial_from_coefficients(cubic_coeffs, 2), 2, strict=False)


@pytest.fixture
def spec_s2_n1(cubic_coeffs):
    return build_construction(2, polynomial_from_coefficients(cubic_coeffs, 2), 1, strict=False)


@pytest.fixture
def congruent_curve():
    """Y^2 = X^3 - 36X, the specialization of x^3 - x at x_1 = 2"""
    return WeierstrassCurve(-36, 0)


@pytest.fixture
def point_12_36():
    return ECPoint(12, 36)


@pytest.fixture
def base_config():
    return RunConfig(threads=2)
