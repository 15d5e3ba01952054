"""Certifier registry"""
from typing import Dict, List, Optional

from src.cache import CacheBackend
from src.certifiers.base import BaseCertifier
from src.certifiers.fp_refutation import FpRefutationCertifier
from src.certifiers.q_specialization import QSpecializationCertifier
from src.models import CertifierSchema
from src.observability import StructuredLogger

logger = StructuredLogger(__name__)


class CertifierRegistry:
    """Certifiers by name, in registration order"""

    def __init__(self):
        self._certifiers: Dict[str, BaseCertifier] = {}

    def register(self, certifier: BaseCertifier):
        schema = certifier.get_schema()
        self._certifiers[schema.name] = certifier
        logger.info("certifier_registered", certifier=schema.name)

    def get_certifier(self, name: str) -> Optional[BaseCertifier]:
        return self._certifiers.get(name)

    def get_all_schemas(self) -> List[CertifierSchema]:
        return [c.get_schema() for c in self._certifiers.values()]

    def list_certifiers(self) -> List[Dict[str, str]]:
        """Names and descriptions, for --help output"""
        return [
            {"name": schema.name, "description": schema.description}
            for schema in self.get_all_schemas()
        ]


def default_registry(cache: Optional[CacheBackend] = None) -> CertifierRegistry:
    registry = CertifierRegistry()
    registry.register(FpRefutationCertifier(cache=cache))
    registry.register(QSpecializationCertifier(cache=cache))
    return registry
