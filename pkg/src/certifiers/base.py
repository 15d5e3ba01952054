"""Base certifier interface with parameter validation"""
import asyncio
import json
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from jsonschema import ValidationError, validate

from src.cache import CacheBackend, cache_key
from src.cover.construction import ConstructionSpec
from src.models import CertifierResult, CertifierSchema, RankCertificate
from src.observability import StructuredLogger
from src.policy import ConfigViolation

logger = StructuredLogger(__name__)


def _latency_ms(start_time: float) -> int:
    return max(1, int((time.perf_counter() - start_time) * 1000))


class CertifierParameterError(ConfigViolation):
    """Parameters do not match the certifier's JSON Schema"""
    pass


class BaseCertifier(ABC):
    """Base class for rank certifiers; the search itself runs in a worker thread"""

    def __init__(self, cache: Optional[CacheBackend] = None):
        self.cache = cache

    @abstractmethod
    def get_schema(self) -> CertifierSchema:
        pass

    @abstractmethod
    def _certify(self, spec: ConstructionSpec, **params) -> RankCertificate:
        """Blocking certification run"""
        pass

    @property
    def name(self) -> str:
        return self.get_schema().name

    def validate_params(self, params: Dict[str, Any]) -> None:
        try:
            validate(instance=params, schema=self.get_schema().parameters)
        except ValidationError as e:
            logger.error("parameter_validation_failed", certifier=self.name, error=e.message)
            raise CertifierParameterError(f"{self.name}: {e.message}") from e

    async def execute(self, spec: ConstructionSpec, **params) -> CertifierResult:
        """Validate, run and wrap a certification; failures come back as results"""
        self.validate_params(params)
        log = logger.bind(certifier=self.name, s=spec.s, n=spec.n)
        start_time = time.perf_counter()
        key = cache_key("certificate", self.name, spec.s, spec.f, spec.n, json.dumps(params, sort_keys=True))

        if self.cache:
            hit = self.cache.get(key)
            if hit is not None:
                log.info("cache_hit")
                return CertifierResult(
                    certifier=self.name,
                    certificate=hit,
                    latency_ms=_latency_ms(start_time),
                    cached=True,
                )

        log.info("certifier_started")
        try:
            certificate = await asyncio.to_thread(self._certify, spec, **params)
        except ValueError as e:
            return self._failure(log, e, "input", start_time)
        except ArithmeticError as e:
            return self._failure(log, e, "computation", start_time)

        if self.cache:
            self.cache.set(key, certificate)
        latency = _latency_ms(start_time)
        log.info(
            "certifier_finished",
            kind=certificate.kind,
            certified_bound=certificate.certified_bound,
            latency_ms=latency,
        )
        return CertifierResult(certifier=self.name, certificate=certificate, latency_ms=latency)

    def _failure(self, log: StructuredLogger, error: Exception, kind: str, start_time: float) -> CertifierResult:
        latency = _latency_ms(start_time)
        log.error(
            "certifier_failed",
            error=str(error),
            error_kind=kind,
            latency_ms=latency,
        )
        return CertifierResult(
            certifier=self.name,
            error=str(error),
            error_kind=kind,
            latency_ms=latency,
        )
