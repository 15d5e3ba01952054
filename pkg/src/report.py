"""Report serialization, schema validation and replay"""
import json
import sys
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from jsonschema import ValidationError, validate

from src.cover.construction import build_construction, polynomial_from_coefficients
from src.cover.points import twist_points, verify_point_on_twist
from src.elliptic.certify import replay_certificate
from src.models import SCHEMA_VERSION, ReplayResult, RunReport
from src.observability import StructuredLogger
from src.policy import ConfigViolation

logger = StructuredLogger(__name__)


class ReportFormatError(ConfigViolation):
    """A report file that is not a valid twistrank report"""
    pass


@lru_cache(maxsize=1)
def report_schema() -> Dict[str, Any]:
    return RunReport.model_json_schema()


def validate_payload(payload: Dict[str, Any]) -> None:
    try:
        validate(instance=payload, schema=report_schema())
    except ValidationError as e:
        logger.error("report_validation_failed", error=e.message, path=list(e.path))
        raise ReportFormatError(f"report does not match {SCHEMA_VERSION}: {e.message}") from e


def render_json(report: RunReport) -> str:
    payload = report.model_dump(mode="json")
    validate_payload(payload)
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _yes(flag: Optional[bool]) -> str:
    return "yes" if flag else "no"


def render_text(report: RunReport) -> str:
    lines = [f"twistrank {report.command} ({report.schema_version})"]
    c = report.construction
    if c is not None:
        lines += [
            "",
            f"curve          {c.curve}   (s = {c.s}, r = {c.r}, n = {c.n})",
            f"twist          {c.twist_equation}",
            f"base point     {', '.join(c.base_point) if c.base_point else '-'} [{c.base_point_status}]",
        ]
        for rel in c.quotient_relations:
            lines.append(f"quotient       {rel}")
        for point in c.points:
            lines.append(f"{point.label:<14} ({point.x}, {point.z})")
    if report.verification:
        lines.append("")
        for v in report.verification:
            lines.append(f"verify {v.label:<7} witness {v.witness}")
        lines.append(f"relations hold {_yes(report.relations_hold)}")
    if report.galois is not None:
        lines.append(f"galois         {_yes(report.galois.passed)}; orbit of y_1: {', '.join(report.galois.y1_orbit)}")
    if report.trivialization is not None:
        lines.append(f"trivialized    {_yes(report.trivialization.passed)}; {report.trivialization.reduced_twist}")
    if report.end_identity is not None:
        e = report.end_identity
        lines.append(f"end identity   1 + zeta + ... + zeta^{e.s - 1} = {e.root_of_unity_sum}")
    if report.rank_bound is not None:
        b = report.rank_bound
        lines.append(
            f"rank bound     >= {b.claimed_bound} (n = {b.n}, end rank {b.end_rank}); "
            f"genus {b.genus}, Prym dimension {b.prym_dimension}, torsion {b.torsion}"
        )
    for result in report.certificates:
        lines.append("")
        if result.error:
            lines.append(f"certifier {result.certifier}: {result.error_kind} error: {result.error}")
            continue
        cert = result.certificate
        lines.append(f"certifier {result.certifier}: {cert.kind}, bound {cert.certified_bound} of {cert.n}")
        lines.append(f"  {cert.message}")
        if cert.q_evidence is not None:
            q = cert.q_evidence
            lines.append(f"  E_d with d = {q.d}: Y^2 = X^3 + ({q.curve[0]})X + ({q.curve[1]})")
            for point, height in zip(q.points, q.heights):
                lines.append(f"  ({point.X}, {point.Y})  h = {height.value}")
            lines.append(f"  det = {q.determinant.value} (error {q.determinant_error}, threshold {q.threshold})")
        if cert.fp_evidence is not None:
            fp = cert.fp_evidence
            lines.append(
                f"  {len(fp.refutations)} of {fp.vectors_total} vectors refuted "
                f"using {len(fp.samples)} samples, M = {fp.M}"
            )
    if report.grid is not None:
        lines.append("")
        for cell in report.grid:
            note = f"  {cell.note}" if cell.note else ""
            lines.append(f"s={cell.s} r={cell.r} n={cell.n}  {cell.status:<8}{note}")
    lines += ["", f"outcome        {report.outcome} (exit {report.exit_code})"]
    return "\n".join(lines) + "\n"


def render(report: RunReport, fmt: str = "json") -> str:
    return render_json(report) if fmt == "json" else render_text(report)


def write_report(report: RunReport, fmt: str = "json", out: Optional[str] = None) -> None:
    text = render(report, fmt)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("report_written", path=out, format=fmt)
    else:
        sys.stdout.write(text)


def load_report(path: str) -> RunReport:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ReportFormatError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ReportFormatError(f"{path} is not JSON: {e}") from e
    if not isinstance(payload, dict) or payload.get("schema_version") != SCHEMA_VERSION:
        raise ReportFormatError(f"{path}: expected schema_version {SCHEMA_VERSION}")
    validate_payload(payload)
    return RunReport.model_validate(payload)


def replay_report(report: RunReport) -> Tuple[List[ReplayResult], bool]:
    """Re-derive the witnesses and re-check every certificate from its evidence

    Returns the replay results and whether the report's own claims hold.
    """
    if report.construction is None:
        # grid reports carry no certificates and no single construction
        return [], report.outcome == "verified"
    c = report.construction
    spec = build_construction(c.s, polynomial_from_coefficients(report.config["f"], c.s), c.n, c.strict)
    witnesses = [verify_point_on_twist(spec, p) for p in twist_points(spec)]
    claims_hold = [w.witness for w in witnesses] == [v.witness for v in report.verification]
    if not claims_hold:
        logger.warning("witness_mismatch", recorded=[v.witness for v in report.verification])

    replays = []
    for result in report.certificates:
        if result.certificate is None:
            continue
        replays.append(replay_certificate(spec, result.certificate, result.certifier))
    claims_hold = claims_hold and all(w.zero for w in witnesses)
    if report.outcome == "verified":
        claims_hold = claims_hold and all(
            r.certificate is not None and r.certificate.kind != "indeterminate"
            for r in report.certificates
        )
    logger.info(
        "report_replayed",
        certificates=len(replays),
        passed=sum(1 for r in replays if r.passed),
        claims_hold=claims_hold,
    )
    return replays, claims_hold
