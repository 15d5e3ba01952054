"""Run orchestration: construct, verify, specialize, certify"""
import asyncio
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.cache import CacheBackend, InMemoryCache
from src.certifier_registry import CertifierRegistry, default_registry
from src.config import RunConfig
from src.cover.construction import (
    ConstructionError,
    ConstructionSpec,
    base_point_text,
    build_construction,
    polynomial_from_coefficients,
    relations_hold,
)
from src.cover.galois import check_galois
from src.cover.invariants import end_identity_check, rank_bound_report
from src.cover.points import trivialize_over_L, twist_points, verify_point_on_twist
from src.models import (
    CertifierResult,
    ConstructionRecord,
    EndIdentityReport,
    GaloisReport,
    GridCell,
    RankBoundRecord,
    RunReport,
    Span,
    TrivializationReport,
    VerificationResult,
)
from src.observability import StructuredLogger, Tracer
from src.policy import ConfigPolicy, ConfigViolation

logger = StructuredLogger(__name__)

EXIT_VERIFIED = 0
EXIT_INDETERMINATE = 1
EXIT_USAGE = 2


@dataclass
class ConstructionOutcome:
    """A built construction together with every symbolic check run on it"""
    spec: ConstructionSpec
    record: ConstructionRecord
    verification: List[VerificationResult]
    relations_hold: bool
    galois: GaloisReport
    trivialization: TrivializationReport
    end_identity: EndIdentityReport
    rank_bound: RankBoundRecord

    @property
    def passed(self) -> bool:
        return (
            all(v.zero for v in self.verification)
            and self.relations_hold
            and self.galois.passed
            and self.trivialization.passed
            and self.end_identity.vanishes
        )


def construction_record(spec: ConstructionSpec, points) -> ConstructionRecord:
    return ConstructionRecord(
        s=spec.s,
        r=spec.r,
        n=spec.n,
        strict=spec.strict,
        f=str(spec.f),
        f_coeffs=[str(c) for c in spec.f_coefficients()],
        curve=spec.curve_text(),
        product_relations=spec.product_relation_texts(),
        quotient_relations=spec.quotient_relation_texts(),
        twist_equation=spec.twist_text(),
        base_point=base_point_text(spec),
        base_point_status=spec.base_point_status,
        points=[p.to_record() for p in points],
    )


def construct_and_verify(
    s: int, coeffs: Sequence[str], n: int, strict: bool, end_rank: int = 1
) -> ConstructionOutcome:
    """Build the construction and run every symbolic check; blocking"""
    spec = build_construction(s, polynomial_from_coefficients(coeffs, s), n, strict)
    points = twist_points(spec)
    return ConstructionOutcome(
        spec=spec,
        record=construction_record(spec, points),
        verification=[verify_point_on_twist(spec, p) for p in points],
        relations_hold=relations_hold(spec),
        galois=check_galois(spec, points),
        trivialization=trivialize_over_L(spec, points),
        end_identity=end_identity_check(s),
        rank_bound=rank_bound_report(spec, end_rank),
    )


class TwistRankPipeline:
    """Runs one subcommand; CPU-bound steps go to worker threads"""

    def __init__(
        self,
        config: RunConfig,
        registry: Optional[CertifierRegistry] = None,
        cache: Optional[CacheBackend] = None,
        policy: Optional[ConfigPolicy] = None,
    ):
        self.config = config
        self.cache = cache if cache is not None else InMemoryCache()
        self.registry = registry or default_registry(self.cache)
        self.policy = policy or ConfigPolicy()
        self.semaphore = asyncio.Semaphore(config.threads)
        self.log = logger
        self.tracer = Tracer(logger)
        self.steps: List[str] = []

    def _begin(self, command: str) -> None:
        self.log = logger.bind(command=command)
        self.tracer.logger = self.log
        self.log.info("run_started", threads=self.config.threads)

    async def _in_thread(self, fn, *args):
        async with self.semaphore:
            return await asyncio.to_thread(fn, *args)

    def _timing(self) -> Optional[List[Span]]:
        if not self.config.include_timing:
            return None
        return [Span(**span) for span in self.tracer.get_trace()]

    def _finish(self, verdict: str) -> None:
        stats = self.cache.get_stats() if isinstance(self.cache, InMemoryCache) else {}
        self.log.info("run_finished", outcome=verdict, cache=stats)

    def _construction_steps(self, outcome: ConstructionOutcome) -> None:
        spec = outcome.spec
        self.steps.append(f"Built construction s={spec.s} r={spec.r} n={spec.n}: {spec.twist_text()}")
        for result in outcome.verification:
            state = "zero witness" if result.zero else f"nonzero witness {result.witness}"
            self.steps.append(f"Verified {result.label} on the twist: {state}")
        self.steps.append(f"Product and quotient relations reduce to zero: {outcome.relations_hold}")
        self.steps.append(f"Galois checks passed: {outcome.galois.passed}")
        self.steps.append(f"Trivialization over L passed: {outcome.trivialization.passed}")
        self.steps.append(
            f"Claimed rank bound {outcome.rank_bound.claimed_bound} "
            f"(genus {outcome.rank_bound.genus}, Prym dimension {outcome.rank_bound.prym_dimension})"
        )

    async def _construct(self, command: str) -> ConstructionOutcome:
        config = self.config
        self.policy.check_construction(config.s, config.n, config.end_rank)
        with self.tracer.phase("construct", s=config.s, n=config.n):
            outcome = await self._in_thread(
                construct_and_verify,
                config.s, config.f, config.n, config.strict_for(command), config.end_rank,
            )
        self._construction_steps(outcome)
        return outcome

    def _report(self, command: str, built: Optional[ConstructionOutcome], **fields) -> RunReport:
        if built is not None:
            fields.update(
                construction=built.record,
                verification=built.verification,
                relations_hold=built.relations_hold,
                galois=built.galois,
                trivialization=built.trivialization,
                end_identity=built.end_identity,
                rank_bound=built.rank_bound,
            )
        self._finish(fields["outcome"])
        return RunReport(
            command=command,
            config=self.config.report_dict(),
            steps=self.steps,
            timing=self._timing(),
            **fields,
        )

    async def construct(self) -> RunReport:
        self._begin("construct")
        built = await self._construct("construct")
        passed = built.passed
        return self._report(
            "construct",
            built,
            outcome="verified" if passed else "failed",
            exit_code=EXIT_VERIFIED if passed else EXIT_INDETERMINATE,
        )

    async def _run_certifier(self, name: str, spec: ConstructionSpec) -> CertifierResult:
        certifier = self.registry.get_certifier(name)
        if certifier is None:
            raise ConfigViolation(f"Certifier '{name}' not registered")
        params = self.config.fp_params() if name == "fp" else self.config.heights_params()
        async with self.semaphore:
            with self.tracer.phase("certify", certifier=name):
                return await certifier.execute(spec, **params)

    async def certify(self) -> RunReport:
        self._begin("certify")
        names = self.config.certifier_names()
        self.policy.validate_run(self.config, names)
        built = await self._construct("certify")
        spec = built.spec
        self.policy.check_elliptic(spec.s, spec.r)

        # gather keeps the canonical certifier order
        results = list(await asyncio.gather(*(self._run_certifier(name, spec) for name in names)))
        if not self.config.include_timing:
            # latencies would make reports differ between identical runs
            results = [r.model_copy(update={"latency_ms": None}) for r in results]
        for result in results:
            if result.error:
                self.steps.append(f"Certifier {result.certifier} failed ({result.error_kind}): {result.error}")
            else:
                cert = result.certificate
                self.steps.append(
                    f"Certifier {result.certifier}: {cert.kind}, certified bound "
                    f"{cert.certified_bound} of {spec.n}; {cert.message}"
                )

        certified = all(
            r.certificate is not None
            and r.certificate.kind != "indeterminate"
            and r.certificate.certified_bound == spec.n
            for r in results
        )
        if any(r.error_kind == "input" for r in results):
            verdict, code = "failed", EXIT_USAGE
        elif certified and built.passed:
            verdict, code = "verified", EXIT_VERIFIED
        else:
            verdict, code = "indeterminate", EXIT_INDETERMINATE
        return self._report("certify", built, certificates=results, outcome=verdict, exit_code=code)

    def _grid_cells(self) -> List[Tuple[int, int, int]]:
        config = self.config
        return sorted({(s, r, n) for s in config.grid_s for r in config.grid_r for n in config.grid_n})

    def _run_cell(self, s: int, r: int, n: int) -> GridCell:
        coeffs = self.config.grid_polynomial(r)
        f_text = ",".join(coeffs)
        try:
            outcome = construct_and_verify(s, coeffs, n, self.config.strict_for("grid"), self.config.end_rank)
        except ConstructionError as e:
            return GridCell(s=s, r=r, n=n, f=f_text, status="failed", note=str(e))
        if outcome.spec.r != r:
            return GridCell(
                s=s, r=r, n=n, f=f_text, status="failed",
                note=f"grid polynomial has degree {outcome.spec.r}, expected {r}",
            )
        verified = sum(1 for v in outcome.verification if v.zero)
        return GridCell(
            s=s, r=r, n=n, f=f_text,
            status="passed" if outcome.passed else "failed",
            note="" if outcome.passed else "symbolic checks failed",
            points_verified=verified,
        )

    async def _grid_cell(self, s: int, r: int, n: int) -> GridCell:
        note = self.policy.grid_cell_note(s, r, n)
        if note is not None:
            return GridCell(s=s, r=r, n=n, f=",".join(self.config.grid_polynomial(r)), status="skipped", note=note)
        self.policy.check_construction(s, n, self.config.end_rank)
        with self.tracer.phase("grid_cell", s=s, r=r, n=n):
            return await self._in_thread(self._run_cell, s, r, n)

    async def grid(self) -> RunReport:
        self._begin("grid")
        cells = self._grid_cells()
        admissible = [c for c in cells if self.policy.grid_cell_note(*c) is None]
        if not admissible:
            raise ConfigViolation("grid has no admissible (s, r, n) cells with 2 <= s <= r <= n")

        results = list(await asyncio.gather(*(self._grid_cell(*cell) for cell in cells)))
        for cell in results:
            detail = f": {cell.note}" if cell.note else ""
            self.steps.append(f"Cell s={cell.s} r={cell.r} n={cell.n} {cell.status}{detail}")
        failed = [c for c in results if c.status == "failed"]
        self.log.info(
            "grid_finished",
            cells=len(results),
            passed=sum(1 for c in results if c.status == "passed"),
            failed=len(failed),
        )
        return self._report(
            "grid",
            None,
            grid=results,
            outcome="failed" if failed else "verified",
            exit_code=EXIT_INDETERMINATE if failed else EXIT_VERIFIED,
        )
