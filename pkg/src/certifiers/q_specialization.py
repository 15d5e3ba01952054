"""Canonical-height certifier on a rational specialization"""
from typing import List, Optional

from src.certifiers.base import BaseCertifier
from src.cover.construction import ConstructionSpec
from src.elliptic.certify import certify_via_Q_specialization
from src.elliptic.curve import ECPoint
from src.exact.rational import parse_rat
from src.models import CertifierSchema, RankCertificate

RATIONAL_PATTERN = r"^-?[0-9]+(/[0-9]+)?$"


class QSpecializationCertifier(BaseCertifier):
    """Specialize x_1 -> t1 and prove the images independent with a Gram determinant"""

    def get_schema(self) -> CertifierSchema:
        return CertifierSchema(
            name="heights",
            description=(
                "Specialize x_1 to the rational t1, find n points on E_d with d = f(t1) "
                "and certify independence by a nonzero canonical-height Gram determinant."
            ),
            parameters={
                "type": "object",
                "properties": {
                    "t1": {"type": "string", "pattern": RATIONAL_PATTERN},
                    "search_bound": {"type": "integer", "minimum": 1, "maximum": 100000},
                    "tol": {"type": "string"},
                    "points": {
                        "type": ["array", "null"],
                        "description": "Points 2..n on E_d as [X, Y] strings instead of a search",
                        "items": {
                            "type": "array",
                            "items": {"type": "string", "pattern": RATIONAL_PATTERN},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
                "required": ["t1", "search_bound", "tol"],
                "additionalProperties": False,
            },
        )

    def _certify(
        self,
        spec: ConstructionSpec,
        t1: str,
        search_bound: int,
        tol: str,
        points: Optional[List[List[str]]] = None,
    ) -> RankCertificate:
        extra = None
        if points is not None:
            extra = [ECPoint(parse_rat(X), parse_rat(Y)) for X, Y in points]
        return certify_via_Q_specialization(spec, parse_rat(t1), search_bound, tol, extra, self.cache)
