"""Empirical invariant counts from ranks of the prolongation map.

Each trial samples a point, builds the prolongation matrix and records its
rank. Generic cells use ranks modulo large primes: a modular rank never
exceeds the rational one, so a full-column modular rank certifies
injectivity. Cells where the map is expected to be deficient, and pinned
points, use exact elimination and also record the kernel dimension.
"""

import functools
import logging
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

from dataclasses_json import DataClassJsonMixin
from tenacity import retry, retry_if_exception_type, stop_after_attempt
from termcolor import colored

from metric_invariants.core.errors import JetError, PrimeDividesDenominatorError
from metric_invariants.core.exact import (
    ExactMatrix,
    draw_prime,
    rank_exact,
    rank_mod_prime,
)
from metric_invariants.counting.closed_forms import (
    expected_rank,
    genericity_criterion,
    i_closed_form,
)
from metric_invariants.counting.fanout import run_ordered
from metric_invariants.counting.sampling import make_rng, sample_point
from metric_invariants.geometry.curvature import nabla_r_nonzero, ricci_generic
from metric_invariants.jets.jetspace import MetricJetPoint, dim_metric_jet, dim_vf_jet
from metric_invariants.jets.prolong import phi_matrix
from metric_invariants.utils.constants import (
    DEFAULT_PRIME_COUNT,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    PARANOID_EXACT_MAX_N,
    PARANOID_PRIME_COUNT,
    PRIME_REDRAW_ATTEMPTS,
)

logger = logging.getLogger(__name__)


@dataclass
class TrialRecord(DataClassJsonMixin):
    trial: int
    rank: Optional[int] = None
    primes: list[int] = field(default_factory=list)
    modular_ranks: list[int] = field(default_factory=list)
    exact: bool = False
    exact_fallback: bool = False
    kernel_dim: Optional[int] = None
    witness: Optional[bool] = None
    error: Optional[str] = None


@dataclass
class CountCertificate(DataClassJsonMixin):
    n: int
    r: int
    signature: list[int]
    trials: int
    seed: int
    dim_jet: int
    dim_vf: int
    expected_rank: int
    i_closed: int
    genericity_criterion: str
    witness_required: bool
    observed_ranks: list[Optional[int]] = field(default_factory=list)
    witnesses: list[Optional[bool]] = field(default_factory=list)
    primes: list[list[int]] = field(default_factory=list)
    kernel_dims: list[Optional[int]] = field(default_factory=list)
    exact_fallbacks: int = 0
    failures: list[str] = field(default_factory=list)
    max_rank: Optional[int] = None
    i_empirical: Optional[int] = None
    passed: bool = False
    records: list[TrialRecord] = field(default_factory=list)


def is_deficient(n: int, r: int) -> bool:
    """Cells whose maximal rank is below both matrix dimensions at every point."""
    return (n, r) == (2, 2)


def witness_required(n: int, r: int) -> bool:
    return (r == 2 and n >= 3) or (n == 2 and r >= 3)


def genericity_witness(point: MetricJetPoint) -> Optional[bool]:
    """Explicit open condition for the point's cell, or None where none applies.

    Orders above the witness order are tested on the truncation.
    """
    n, r = point.n, point.r
    if n >= 3 and r >= 2:
        return ricci_generic(point.truncate(2))
    if n == 2 and r >= 3:
        return nabla_r_nonzero(point.truncate(3))
    return None


@retry(
    stop=stop_after_attempt(PRIME_REDRAW_ATTEMPTS),
    retry=retry_if_exception_type(PrimeDividesDenominatorError),
    reraise=True,
)
def modular_rank(matrix: ExactMatrix, rng: random.Random, used: list[int]) -> int:
    """Rank modulo the next prime of the stream; re-drawn if a denominator vanishes."""
    p = draw_prime(rng)
    used.append(p)
    try:
        return rank_mod_prime(matrix, p)
    except PrimeDividesDenominatorError:
        logger.warning("prime %d divides a denominator, drawing another", p)
        raise


def rank_point(
    point: MetricJetPoint,
    trial: int,
    prime_rng: random.Random,
    prime_count: int = DEFAULT_PRIME_COUNT,
    paranoid: bool = False,
    exact: bool = False,
) -> TrialRecord:
    """Rank of the prolongation matrix at one point, with its provenance.

    A modular rank is a lower bound, so it certifies the exact rank only when
    it reaches min(rows, cols); anything lower is redone by exact elimination.
    """
    record = TrialRecord(trial=trial)
    matrix = phi_matrix(point)
    if exact:
        record.exact = True
        record.rank = rank_exact(matrix)
        record.kernel_dim = matrix.cols - record.rank
        return record

    count = max(prime_count, PARANOID_PRIME_COUNT) if paranoid else prime_count
    for _ in range(count):
        attempt_primes: list[int] = []
        rank = modular_rank(matrix, prime_rng, attempt_primes)
        record.primes.append(attempt_primes[-1])
        record.modular_ranks.append(rank)

    best = max(record.modular_ranks)
    if len(set(record.modular_ranks)) > 1 or best < min(matrix.rows, matrix.cols):
        record.exact_fallback = True
        record.exact = True
        best = rank_exact(matrix)
    elif paranoid and point.n <= PARANOID_EXACT_MAX_N:
        record.exact = True
        exact_rank = rank_exact(matrix)
        if exact_rank != best:
            record.error = f"modular rank {best} differs from exact rank {exact_rank}"
        best = exact_rank
    record.rank = best
    record.kernel_dim = matrix.cols - best
    return record


def run_trial(
    n: int,
    signature: tuple[int, int],
    r: int,
    seed: int,
    trial: int,
    prime_count: int = DEFAULT_PRIME_COUNT,
    paranoid: bool = False,
) -> TrialRecord:
    """One sampled point of a cell; errors are recorded, never raised."""
    point_rng = make_rng(seed, "point", n, signature[0], signature[1], r, trial)
    prime_rng = make_rng(seed, "prime", n, signature[0], signature[1], r, trial)
    try:
        point = sample_point(n, signature, r, point_rng)
        record = rank_point(
            point,
            trial,
            prime_rng,
            prime_count=prime_count,
            paranoid=paranoid,
            exact=is_deficient(n, r),
        )
        record.witness = genericity_witness(point)
    except JetError as exc:
        logger.error("trial %d of cell (%d, %d) failed: %s", trial, n, r, exc)
        return TrialRecord(trial=trial, error=f"{type(exc).__name__}: {exc}")
    return record


def certify_point(
    point: MetricJetPoint, trial: int = 0, seed: int = DEFAULT_SEED
) -> TrialRecord:
    """Exact rank, kernel dimension and witness at a pinned point."""
    record = rank_point(point, trial, make_rng(seed, "pinned", trial), exact=True)
    record.witness = genericity_witness(point)
    return record


def assemble_certificate(
    n: int,
    signature: tuple[int, int],
    r: int,
    seed: int,
    records: list[TrialRecord],
) -> CountCertificate:
    """Deterministic reduction of trial records, ordered by trial index."""
    records = sorted(records, key=lambda rec: rec.trial)
    dim_jet = dim_metric_jet(n, r)
    cert = CountCertificate(
        n=n,
        r=r,
        signature=list(signature),
        trials=len(records),
        seed=seed,
        dim_jet=dim_jet,
        dim_vf=dim_vf_jet(n, r + 1),
        expected_rank=expected_rank(n, r),
        i_closed=i_closed_form(n, r),
        genericity_criterion=genericity_criterion(n, r),
        witness_required=witness_required(n, r),
        records=records,
    )
    for rec in records:
        cert.observed_ranks.append(rec.rank)
        cert.witnesses.append(rec.witness)
        cert.primes.append(list(rec.primes))
        cert.kernel_dims.append(rec.kernel_dim)
        cert.exact_fallbacks += int(rec.exact_fallback)
        if rec.error:
            cert.failures.append(f"trial {rec.trial}: {rec.error}")

    ranks = [rank for rank in cert.observed_ranks if rank is not None]
    if not ranks:
        cert.failures.append("no trial produced a rank")
        return cert
    cert.max_rank = max(ranks)
    cert.i_empirical = dim_jet - cert.max_rank
    witnessed = any(
        rec.rank == cert.max_rank and (rec.witness or not cert.witness_required)
        for rec in records
    )
    if not witnessed:
        cert.failures.append("maximal rank not attained at a witnessed point")
    cert.passed = cert.i_empirical == cert.i_closed and witnessed
    return cert


def i_empirical(
    n: int,
    signature: tuple[int, int],
    r: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    prime_count: int = DEFAULT_PRIME_COUNT,
    paranoid: bool = False,
    workers: int = 1,
) -> CountCertificate:
    """Certificate for the invariant count of cell (n, r) from sampled points."""
    jobs = [
        functools.partial(run_trial, n, signature, r, seed, trial, prime_count, paranoid)
        for trial in range(trials)
    ]
    records = run_ordered(jobs, workers)
    cert = assemble_certificate(n, signature, r, seed, records)
    log_verdict(cert)
    return cert


def log_verdict(cert: CountCertificate) -> None:
    label = f"cell n={cert.n} r={cert.r} signature={tuple(cert.signature)}"
    if cert.exact_fallbacks:
        logger.warning("%s: %d exact fallbacks", label, cert.exact_fallbacks)
        print(colored(f"{label}: {cert.exact_fallbacks} exact fallbacks", "yellow"), file=sys.stderr)
    if cert.passed:
        logger.info("%s: PASS (i = %d)", label, cert.i_empirical)
    else:
        logger.error("%s: FAIL %s", label, "; ".join(cert.failures) or "count mismatch")
    verdict = colored("PASS", "green") if cert.passed else colored("FAIL", "red")
    print(f"{label}: {verdict}", file=sys.stderr)
