"""Pydantic models for construction records, certificates and run reports"""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "twistrank.report/1"

CertificateKind = Literal["Q-specialization", "Fp-refutation", "indeterminate"]


class PointRecord(BaseModel):
    """One explicit K-point of the twist"""
    label: str
    x: str
    z: str


class ConstructionRecord(BaseModel):
    """Equations and explicit points of one (s, f, n) construction"""
    s: int = Field(..., ge=2)
    r: int
    n: int = Field(..., ge=1)
    strict: bool
    f: str
    f_coeffs: List[str] = Field(..., description="Coefficients of f, constant term first")
    curve: str
    product_relations: List[str]
    quotient_relations: List[str]
    twist_equation: str
    base_point: Optional[List[str]] = None
    base_point_status: str
    points: List[PointRecord]


class VerificationResult(BaseModel):
    """Reduced witness of f(x_1)*z^s - f(x) at one point"""
    label: str
    point: str
    witness: str
    zero: bool


class GaloisCheck(BaseModel):
    name: str
    subject: str
    passed: bool
    detail: str = ""


class GaloisReport(BaseModel):
    order: int
    checks: List[GaloisCheck]
    y1_orbit: List[str]
    passed: bool


class TrivializedPoint(BaseModel):
    label: str
    u: str
    expected: str
    on_curve: bool
    passed: bool


class TrivializationReport(BaseModel):
    reduced_twist: str
    twist_reduces: bool
    images: List[TrivializedPoint]
    passed: bool


class EndIdentityReport(BaseModel):
    s: int
    root_of_unity_sum: str
    vanishes: bool


class RankBoundRecord(BaseModel):
    """Lower bound n * end_rank with torsion and dimension bookkeeping"""
    n: int
    end_rank: int = Field(..., ge=1)
    claimed_bound: int
    genus: int
    prym_dimension: int
    torsion: str


class DecimalValue(BaseModel):
    """High-precision decimal rendered as a string with its precision"""
    value: str
    tolerance: str
    digits: int


class FpSample(BaseModel):
    """One specialization of x_i, y_i to F_p and the reduced twist points"""
    prime: int
    curve: List[int] = Field(..., description="[A, B] of the reduced Weierstrass model")
    base_values: List[List[int]] = Field(..., description="[a_i, b_i] with b_i^2 = f(a_i) mod p")
    points: List[Optional[List[int]]] = Field(..., description="Images R_i; null is infinity")


class FpRefutationEvidence(BaseModel):
    M: int
    samples: List[FpSample]
    refutations: Dict[str, int] = Field(
        ..., description="Coefficient vector (comma joined) -> index of a refuting sample"
    )
    unrefuted: List[List[int]] = Field(default_factory=list)
    vectors_total: int


class QPoint(BaseModel):
    """Rational point of E_d and the V_n coordinate it came from"""
    X: str
    Y: str
    t: str
    w: str
    torsion_order: Optional[int] = None


class QSpecializationEvidence(BaseModel):
    t1: str
    d: str
    curve: List[str] = Field(..., description="[A, B] of E_d")
    points: List[QPoint]
    heights: List[DecimalValue]
    gram: List[List[str]]
    determinant: DecimalValue
    determinant_error: str
    threshold: str


class RankCertificate(BaseModel):
    """Machine-checkable evidence for a rank lower bound"""
    kind: CertificateKind
    method: Literal["fp", "heights"]
    n: int
    certified_bound: int = Field(..., ge=0)
    parameters: Dict[str, Any]
    fp_evidence: Optional[FpRefutationEvidence] = None
    q_evidence: Optional[QSpecializationEvidence] = None
    message: str = ""


class CertifierSchema(BaseModel):
    """Certifier definition with JSON Schema parameters"""
    name: str
    description: str
    parameters: Dict[str, Any]


class CertifierResult(BaseModel):
    """Certifier execution result"""
    certifier: str
    certificate: Optional[RankCertificate] = None
    error: Optional[str] = None
    error_kind: Optional[Literal["input", "computation"]] = None
    latency_ms: Optional[int] = None
    cached: bool = False


class GridCell(BaseModel):
    s: int
    r: int
    n: int
    f: str
    status: Literal["passed", "failed", "skipped"]
    note: str = ""
    points_verified: int = 0


class ReplayResult(BaseModel):
    certifier: str
    kind: CertificateKind
    passed: bool
    detail: str


class Span(BaseModel):
    span_id: str
    phase: Literal["construct", "certify", "grid_cell"]
    status: str = "ok"
    duration_ms: int
    attributes: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    """Complete, deterministic record of one CLI run"""
    model_config = ConfigDict(extra="forbid")

    schema_version: str = SCHEMA_VERSION
    command: Literal["construct", "certify", "grid"]
    config: Dict[str, Any]
    construction: Optional[ConstructionRecord] = None
    verification: List[VerificationResult] = Field(default_factory=list)
    relations_hold: Optional[bool] = None
    galois: Optional[GaloisReport] = None
    trivialization: Optional[TrivializationReport] = None
    end_identity: Optional[EndIdentityReport] = None
    rank_bound: Optional[RankBoundRecord] = None
    certificates: List[CertifierResult] = Field(default_factory=list)
    grid: Optional[List[GridCell]] = None
    steps: List[str] = Field(default_factory=list)
    outcome: Literal["verified", "indeterminate", "failed"]
    exit_code: int
    timing: Optional[List[Span]] = None
