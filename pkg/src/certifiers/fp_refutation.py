"""F_p refutation certifier"""
from typing import List, Optional

from src.certifiers.base import BaseCertifier
from src.cover.construction import ConstructionSpec
from src.elliptic.certify import certify_no_small_relation
from src.models import CertifierSchema, RankCertificate


class FpRefutationCertifier(BaseCertifier):
    """Rule out every small relation among the points by reducing mod p"""

    def get_schema(self) -> CertifierSchema:
        return CertifierSchema(
            name="fp",
            description=(
                "Refute every nonzero relation sum m_i P_i with |m_i| <= M by "
                "specializing the points into E(F_p) and checking 2*sum m_i R_i != 0."
            ),
            parameters={
                "type": "object",
                "properties": {
                    "M": {"type": "integer", "minimum": 1, "maximum": 10},
                    "primes": {
                        "type": "array",
                        "items": {"type": "integer", "minimum": 5},
                        "minItems": 1,
                    },
                    "trials": {"type": "integer", "minimum": 1, "maximum": 10000},
                    "seed": {"type": "integer"},
                    "dependent_pair": {
                        "type": ["array", "null"],
                        "items": {"type": "integer", "minimum": 1},
                        "minItems": 2,
                        "maxItems": 2,
                        "description": "Copy the specialization of P_i onto P_j (negative control)",
                    },
                },
                "required": ["M", "primes", "trials", "seed"],
                "additionalProperties": False,
            },
        )

    def _certify(
        self,
        spec: ConstructionSpec,
        M: int,
        primes: List[int],
        trials: int,
        seed: int,
        dependent_pair: Optional[List[int]] = None,
    ) -> RankCertificate:
        pair = tuple(dependent_pair) if dependent_pair else None
        return certify_no_small_relation(spec, M, primes, trials, seed, pair, self.cache)
