"""Genus, Prym dimension, the End-ring identity and the claimed rank bound"""
from math import gcd

from src.cover.construction import ConstructionSpec, ParameterError
from src.elliptic.torsion import two_torsion
from src.exact.cyclotomic import root_of_unity_sum
from src.models import EndIdentityReport, RankBoundRecord


def genus(s: int, r: int) -> int:
    """Riemann-Hurwitz for y^s = f(x) with f squarefree of degree r"""
    if not 2 <= s <= r:
        raise ParameterError(f"genus needs 2 <= s <= r, got s={s}, r={r}")
    return ((r - 1) * (s - 1) + 1 - gcd(s, r)) // 2


def prym_dimension(spec: ConstructionSpec) -> int:
    return spec.n * genus(spec.s, spec.r)


def end_identity_check(s: int) -> EndIdentityReport:
    total = root_of_unity_sum(s)
    return EndIdentityReport(
        s=s,
        root_of_unity_sum=str(total),
        vanishes=total.is_zero(),
    )


def torsion_descriptor(spec: ConstructionSpec) -> str:
    if spec.s == 2 and spec.r == 3 and spec.f.is_rational():
        return two_torsion(spec.f)
    return "not computed"


def rank_bound_report(spec: ConstructionSpec, end_rank: int = 1) -> RankBoundRecord:
    if end_rank < 1:
        raise ParameterError(f"end_rank must be at least 1, got {end_rank}")
    return RankBoundRecord(
        n=spec.n,
        end_rank=end_rank,
        claimed_bound=spec.n * end_rank,
        genus=genus(spec.s, spec.r),
        prym_dimension=prym_dimension(spec),
        torsion=torsion_descriptor(spec),
    )
