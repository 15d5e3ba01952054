"""Rank certificates for the n explicit points when s = 2 and deg f = 3

Two independent certifiers:

* F_p refutation: a relation sum m_i Q_i = T over K forces T in J[2], so
  2 * sum m_i R_i = 0 for every specialization R_i.  Exhibiting one
  specialization with 2 * sum m_i R_i != 0 rules the vector m out.
* Q specialization: x_1 -> t1 turns the points into rational points of
  E_d, d = f(t1); a nonzero Gram determinant of canonical heights proves
  the images, hence the sources, independent.

Anything short of a full proof is reported as ``indeterminate``.
"""
import itertools
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath as mp

from src.cache import CacheBackend, cache_key, cached
from src.cover.construction import ConstructionSpec
from src.cover.points import specialize_point, twist_points
from src.elliptic.curve import INFINITY, BadPrimeError, ECPoint, FpCurve
from src.elliptic.height import GUARD_DIGITS, height_pairing_matrix
from src.elliptic.search import search_twist_points
from src.elliptic.torsion import torsion_test
from src.elliptic.weierstrass import SingularSpecializationError, to_weierstrass
from src.exact.rational import parse_rat, rat_to_str
from src.models import (
    FpRefutationEvidence,
    FpSample,
    QPoint,
    QSpecializationEvidence,
    RankCertificate,
    ReplayResult,
)
from src.observability import StructuredLogger

logger = StructuredLogger(__name__)


class CertificationInputError(ValueError):
    """The construction or parameters fall outside what a certifier handles"""
    pass


def _require_elliptic(spec: ConstructionSpec) -> None:
    if spec.s != 2 or spec.r != 3:
        raise CertificationInputError(
            f"certification needs s = 2 and deg f = 3, got s = {spec.s}, deg f = {spec.r}"
        )
    if not spec.f.is_rational():
        raise CertificationInputError("certification needs f with rational coefficients")


def _vector_key(vector: Sequence[int]) -> str:
    return ",".join(str(m) for m in vector)


def coefficient_vectors(n: int, M: int) -> List[Tuple[int, ...]]:
    """Nonzero integer vectors with entries in [-M, M], in lexicographic order"""
    return [v for v in itertools.product(range(-M, M + 1), repeat=n) if any(v)]


def _curve_points_mod_p(spec: ConstructionSpec, p: int, cache: Optional[CacheBackend]) -> List[Tuple[int, int]]:
    """Affine points of y^2 = f(x) over F_p"""

    def enumerate_points() -> List[Tuple[int, int]]:
        squares: Dict[int, List[int]] = {}
        for y in range(p):
            squares.setdefault(y * y % p, []).append(y)
        f_values = [spec.f.evaluate_mod({"x": a}, p) for a in range(p)]
        return [(a, b) for a in range(p) for b in squares.get(f_values[a], ())]

    return cached(cache, cache_key("curve_points", spec.f, p), enumerate_points)


def _valid_primes(spec: ConstructionSpec, primes: Sequence[int]) -> Dict[int, FpCurve]:
    model = to_weierstrass(spec.f, 1)
    curves: Dict[int, FpCurve] = {}
    for p in sorted(set(primes)):
        if p < 5:
            logger.warning("prime_rejected", prime=p, reason="primes must be at least 5")
            continue
        try:
            curve = model.reduce_mod(p)
            model.forward_mod(0, 0, p)
            spec.f.evaluate_mod({"x": 0}, p)
            lead = spec.f.leading_coefficient().to_rational()
            if lead.numerator % p == 0:
                raise BadPrimeError(f"{p} divides the leading coefficient of f")
        except (BadPrimeError, ZeroDivisionError) as e:
            logger.warning("prime_rejected", prime=p, reason=str(e))
            continue
        curves[p] = curve
    return curves


def _sample_images(spec, points, model, values, p) -> List[ECPoint]:
    images = []
    for point in points:
        x, u = specialize_point(spec, point, values, p)
        images.append(model.forward_mod(x, u, p))
    return images


def _doubled_multiples(curve: FpCurve, R: ECPoint, M: int) -> Dict[int, ECPoint]:
    """{k: 2k * R} for -M <= k <= M"""
    twice = curve.double(R)
    table = {0: INFINITY}
    current = INFINITY
    for k in range(1, M + 1):
        current = curve.add(current, twice)
        table[k] = current
        table[-k] = curve.neg(current)
    return table


def _refutes(curve: FpCurve, tables: Sequence[Dict[int, ECPoint]], vector: Sequence[int]) -> bool:
    total = INFINITY
    for table, m in zip(tables, vector):
        if m:
            total = curve.add(total, table[m])
    return not total.is_infinity


def _largest_refuted_subset(n: int, M: int, unrefuted: Sequence[Sequence[int]]) -> int:
    """Size of the largest index set all of whose supported vectors were refuted"""
    for size in range(n, 0, -1):
        for subset in itertools.combinations(range(n), size):
            inside = set(subset)
            if not any(
                all(i in inside for i, m in enumerate(v) if m) for v in unrefuted
            ):
                return size
    return 0


def certify_no_small_relation(
    spec: ConstructionSpec,
    M: int,
    primes: Sequence[int],
    trials: int,
    seed: int,
    dependent_pair: Optional[Tuple[int, int]] = None,
    cache: Optional[CacheBackend] = None,
) -> RankCertificate:
    """Refute every relation with coefficients bounded by M via F_p specializations

    ``dependent_pair = (i, j)`` copies the specialization of P_i onto P_j
    and serves as a negative control.
    """
    _require_elliptic(spec)
    if M < 1:
        raise CertificationInputError(f"M must be at least 1, got {M}")
    curves = _valid_primes(spec, primes)
    if not curves:
        raise CertificationInputError(f"no valid primes of good reduction among {list(primes)}")
    n = spec.n
    if dependent_pair is not None:
        i, j = dependent_pair
        if not (1 <= i <= n and 1 <= j <= n and i != j):
            raise CertificationInputError(f"dependent pair {dependent_pair} out of range for n = {n}")

    model = to_weierstrass(spec.f, 1)
    points = twist_points(spec)
    vectors = coefficient_vectors(n, M)
    pending = list(vectors)
    refutations: Dict[str, int] = {}
    samples: List[FpSample] = []
    rng = random.Random(seed)
    prime_cycle = sorted(curves)

    for trial in range(trials):
        if not pending:
            break
        p = prime_cycle[trial % len(prime_cycle)]
        curve = curves[p]
        affine = _curve_points_mod_p(spec, p, cache)
        nonvertical = [pt for pt in affine if pt[1] != 0]
        if not nonvertical:
            continue
        values = [rng.choice(nonvertical)] + [rng.choice(affine) for _ in range(n - 1)]
        if dependent_pair is not None:
            i, j = dependent_pair
            values[j - 1] = values[i - 1]
        images = _sample_images(spec, points, model, values, p)
        tables = [_doubled_multiples(curve, R, M) for R in images]
        still_pending = []
        index = len(samples)
        for vector in pending:
            if _refutes(curve, tables, vector):
                refutations[_vector_key(vector)] = index
            else:
                still_pending.append(vector)
        if len(still_pending) < len(pending):
            samples.append(FpSample(
                prime=p,
                curve=[curve.A, curve.B],
                base_values=[list(v) for v in values],
                points=[R.as_list() for R in images],
            ))
        pending = still_pending

    # refutation indices refer to samples actually recorded
    certified = not pending
    bound = n if certified else _largest_refuted_subset(n, M, pending)
    evidence = FpRefutationEvidence(
        M=M,
        samples=samples,
        refutations={key: refutations[key] for key in sorted(refutations, key=lambda k: tuple(int(c) for c in k.split(",")))},
        unrefuted=[list(v) for v in pending],
        vectors_total=len(vectors),
    )
    if certified:
        message = f"all {len(vectors)} nonzero vectors with |m_i| <= {M} refuted"
    else:
        message = f"{len(pending)} of {len(vectors)} vectors never refuted in {trials} trials"
    logger.info(
        "fp_certification_finished",
        n=n, M=M, certified=certified, bound=bound,
        samples=len(samples), unrefuted=len(pending),
    )
    return RankCertificate(
        kind="Fp-refutation" if certified else "indeterminate",
        method="fp",
        n=n,
        certified_bound=bound,
        parameters={
            "M": M,
            "primes": prime_cycle,
            "trials": trials,
            "seed": seed,
            "dependent_pair": list(dependent_pair) if dependent_pair else None,
        },
        fp_evidence=evidence,
        message=message,
    )


def _threshold(k: int, tol, error) -> mp.mpf:
    return max(k * 10 * mp.mpf(tol), error)


def certify_via_Q_specialization(
    spec: ConstructionSpec,
    t1,
    search_bound: int,
    tol="1e-8",
    extra_points: Optional[Sequence[ECPoint]] = None,
    cache: Optional[CacheBackend] = None,
) -> RankCertificate:
    """Specialize x_1 -> t1 and certify independence with canonical heights

    The first point is always the image of P_1, i.e. (t1, 1) on d*z^2 = f(x).
    With ``extra_points`` the remaining points are taken as given; otherwise
    they are chosen greedily from a point search on E_d.
    """
    _require_elliptic(spec)
    t1 = parse_rat(t1) if not isinstance(t1, Fraction) else t1
    d = spec.f.evaluate({"x": t1}).to_rational()
    if d == 0:
        raise CertificationInputError(f"singular specialization: f({rat_to_str(t1)}) = 0")
    try:
        model = to_weierstrass(spec.f, d)
    except SingularSpecializationError as e:
        raise CertificationInputError(str(e)) from e
    E = model.curve
    n = spec.n

    selected = [model.forward(t1, 1)]
    if extra_points is not None:
        for P in extra_points:
            if not E.contains(P):
                raise CertificationInputError(f"{P} is not on {E}")
        selected.extend(extra_points)
        selected = selected[:n]
    else:
        candidates = search_twist_points(E, search_bound, cache)
        for candidate in candidates:
            if len(selected) == n:
                break
            if candidate.is_infinity or torsion_test(E, candidate).torsion:
                continue
            trial = selected + [candidate]
            gram = height_pairing_matrix(E, trial, tol, cache)
            if gram.determinant > _threshold(len(trial), tol, gram.error):
                selected = trial

    gram = height_pairing_matrix(E, selected, tol, cache)
    bound = 0
    for k in range(1, len(selected) + 1):
        with mp.workdps(gram.digits + GUARD_DIGITS):
            if gram.leading_minor(k) > _threshold(k, tol, gram.error):
                bound = k
            else:
                break
    certified = bound == n and len(selected) == n

    qpoints = []
    for P in selected:
        x, z = model.backward(P)
        qpoints.append(QPoint(
            X=rat_to_str(P.x), Y=rat_to_str(P.y),
            t=rat_to_str(x), w=rat_to_str(z),
            torsion_order=torsion_test(E, P).order,
        ))
    threshold = _threshold(len(selected), tol, gram.error)
    evidence = QSpecializationEvidence(
        t1=rat_to_str(t1),
        d=rat_to_str(d),
        curve=[rat_to_str(E.A), rat_to_str(E.B)],
        points=qpoints,
        heights=[h.to_record() for h in gram.heights],
        gram=gram.entry_strings(),
        determinant=gram.determinant_record(),
        determinant_error=mp.nstr(gram.error, 3),
        threshold=mp.nstr(threshold, 3),
    )
    if certified:
        message = f"Gram determinant of {n} points on {E} exceeds {mp.nstr(threshold, 3)}"
    elif len(selected) < n:
        message = f"only {len(selected)} independent points found on {E} up to height {search_bound}"
    else:
        message = f"Gram determinant {mp.nstr(gram.determinant, 5)} within tolerance of 0"
    logger.info(
        "q_certification_finished",
        n=n, t1=rat_to_str(t1), d=rat_to_str(d), certified=certified, bound=bound,
    )
    return RankCertificate(
        kind="Q-specialization" if certified else "indeterminate",
        method="heights",
        n=n,
        certified_bound=bound,
        parameters={
            "t1": rat_to_str(t1),
            "search_bound": search_bound,
            "tol": str(tol),
            "explicit_points": extra_points is not None,
        },
        q_evidence=evidence,
        message=message,
    )


# --- replay --------------------------------------------------------------------

def _replay_fp(spec: ConstructionSpec, certificate: RankCertificate) -> Tuple[bool, str]:
    evidence = certificate.fp_evidence
    if evidence is None:
        return False, "missing F_p evidence"
    model = to_weierstrass(spec.f, 1)
    points = twist_points(spec)
    tables_by_sample = []
    for index, sample in enumerate(evidence.samples):
        p = sample.prime
        try:
            curve = model.reduce_mod(p)
        except BadPrimeError as e:
            return False, f"sample {index}: {e}"
        if [curve.A, curve.B] != sample.curve:
            return False, f"sample {index}: curve mismatch mod {p}"
        values = [tuple(v) for v in sample.base_values]
        if len(values) != spec.n:
            return False, f"sample {index}: expected {spec.n} base values"
        for a, b in values:
            if (b * b - spec.f.evaluate_mod({"x": a}, p)) % p:
                return False, f"sample {index}: ({a}, {b}) is not on y^2 = f(x) mod {p}"
        images = _sample_images(spec, points, model, values, p)
        if [R.as_list() for R in images] != sample.points:
            return False, f"sample {index}: specialized points differ from the record"
        tables_by_sample.append((curve, [_doubled_multiples(curve, R, evidence.M) for R in images]))

    for key, index in evidence.refutations.items():
        vector = [int(c) for c in key.split(",")]
        if not 0 <= index < len(tables_by_sample):
            return False, f"vector {key}: sample index {index} out of range"
        curve, tables = tables_by_sample[index]
        if not _refutes(curve, tables, vector):
            return False, f"vector {key}: sample {index} does not refute it"

    expected = {_vector_key(v) for v in coefficient_vectors(spec.n, evidence.M)}
    covered = set(evidence.refutations)
    if certificate.kind == "Fp-refutation":
        if covered != expected:
            return False, f"{len(expected - covered)} vectors lack a refutation"
        if certificate.certified_bound != spec.n:
            return False, "certified bound differs from n"
    elif certificate.certified_bound != _largest_refuted_subset(
        spec.n, evidence.M, [[int(c) for c in k.split(",")] for k in expected - covered]
    ):
        return False, "partial bound does not match the refutations"
    return True, f"{len(covered)} refutations re-checked on {len(evidence.samples)} samples"


def _replay_q(spec: ConstructionSpec, certificate: RankCertificate) -> Tuple[bool, str]:
    evidence = certificate.q_evidence
    if evidence is None:
        return False, "missing height evidence"
    tol = certificate.parameters.get("tol", "1e-8")
    t1 = parse_rat(evidence.t1)
    d = spec.f.evaluate({"x": t1}).to_rational()
    if rat_to_str(d) != evidence.d:
        return False, f"d = f(t1) is {rat_to_str(d)}, record says {evidence.d}"
    model = to_weierstrass(spec.f, d)
    E = model.curve
    if [rat_to_str(E.A), rat_to_str(E.B)] != evidence.curve:
        return False, "E_d differs from the record"
    selected = []
    for q in evidence.points:
        P = ECPoint(parse_rat(q.X), parse_rat(q.Y))
        if not E.contains(P):
            return False, f"({q.X}, {q.Y}) is not on {E}"
        t, w = parse_rat(q.t), parse_rat(q.w)
        if d * w * w != spec.f.evaluate({"x": t}).to_rational() or model.forward(t, w) != P:
            return False, f"({q.t}, {q.w}) does not map to ({q.X}, {q.Y})"
        selected.append(P)
    if selected and selected[0] != model.forward(t1, 1):
        return False, "first point is not the image of P_1"

    gram = height_pairing_matrix(E, selected, tol)
    with mp.workdps(gram.digits + GUARD_DIGITS):
        recorded = mp.mpf(evidence.determinant.value)
        if abs(recorded - gram.determinant) > 2 * gram.error + mp.mpf(tol):
            return False, "Gram determinant does not reproduce"
        bound = 0
        for k in range(1, len(selected) + 1):
            if gram.leading_minor(k) > _threshold(k, tol, gram.error):
                bound = k
            else:
                break
    if bound != certificate.certified_bound:
        return False, f"recomputed bound {bound} differs from {certificate.certified_bound}"
    if certificate.kind == "Q-specialization" and bound != spec.n:
        return False, "certificate claims full rank without a full-rank Gram matrix"
    return True, f"Gram matrix of {len(selected)} points recomputed"


def replay_certificate(spec: ConstructionSpec, certificate: RankCertificate, certifier: str = "") -> ReplayResult:
    """Re-check a certificate from its recorded evidence, without searching"""
    if certificate.method == "fp":
        passed, detail = _replay_fp(spec, certificate)
    else:
        passed, detail = _replay_q(spec, certificate)
    if not passed:
        logger.warning("replay_failed", method=certificate.method, detail=detail)
    return ReplayResult(
        certifier=certifier or certificate.method,
        kind=certificate.kind,
        passed=passed,
        detail=detail,
    )
