"""Acceptance oracles behind the ``verify`` subcommand.

Every oracle is exact and deterministic for a given seed. Each returns a
CheckResult; ``run_all`` evaluates them in a fixed order.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from dataclasses_json import DataClassJsonMixin

from metric_invariants.core.exact import (
    ZERO,
    ExactMatrix,
    derivative_part,
    kernel_basis,
)
from metric_invariants.core.multiindex import MultiIndex
from metric_invariants.counting.certificates import certify_point, i_empirical
from metric_invariants.counting.closed_forms import (
    expected_rank,
    flat_kernel_dim,
    i_closed_form,
    weyl_dims,
)
from metric_invariants.counting.sampling import (
    constant_curvature_point,
    flat_point,
    make_rng,
    random_rational,
    random_vf_jet,
    sample_point,
)
from metric_invariants.geometry.curvature import (
    flat_metric,
    random_curvature,
    riemann,
    scalar_curvature,
    scalar_invariants,
    two_jet_from_curvature,
)
from metric_invariants.geometry.kernel_equations import (
    curvature_residual,
    free_parameters,
    kernel_equation_check,
    reflect,
    rotate,
)
from metric_invariants.jets.jetspace import (
    MetricJetPoint,
    TangentVector,
    VectorFieldJet,
    dim_metric_jet,
    dim_vf_jet,
)
from metric_invariants.jets.prolong import (
    PolynomialVectorField,
    bracket_residual,
    determinant_rate,
    lift_vector,
    phi_matrix,
)

logger = logging.getLogger(__name__)


@dataclass
class CheckResult(DataClassJsonMixin):
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _signatures(n: int) -> list[tuple[int, int]]:
    return [(n, 0), (n - 1, 1)]


def check_low_order_surjectivity(seed: int, workers: int = 1) -> tuple[bool, str]:
    bad = []
    for n in range(1, 5):
        for signature in _signatures(n):
            for r in (0, 1):
                cert = i_empirical(n, signature, r, trials=5, seed=seed, workers=workers)
                if cert.observed_ranks != [expected_rank(n, r)] * 5 or cert.i_empirical != 0:
                    bad.append(f"n={n} {signature} r={r}: ranks {cert.observed_ranks}")
    return not bad, "; ".join(bad) or "ranks equal dim J^0 and dim J^1 for n <= 4"


def check_dimension_one(seed: int, workers: int = 1) -> tuple[bool, str]:
    bad = []
    for r in range(6):
        cert = i_empirical(1, (1, 0), r, trials=5, seed=seed, workers=workers)
        if cert.observed_ranks != [r + 2] * 5 or cert.i_empirical != 0:
            bad.append(f"r={r}: ranks {cert.observed_ranks}")
    return not bad, "; ".join(bad) or "bijective for r <= 5"


def flat_kernel_report(n: int, r: int):
    """Kernel basis at the flat normal point together with the equation reports."""
    point = flat_point(n, (n, 0), r)
    basis = kernel_basis(phi_matrix(point))
    jets = [VectorFieldJet.from_vector(n, r + 1, v) for v in basis]
    return basis, [kernel_equation_check(point, jet) for jet in jets]


def check_surface_rank(seed: int, workers: int = 1) -> tuple[bool, str]:
    cert = i_empirical(2, (2, 0), 2, trials=10, seed=seed, workers=workers)
    pinned = {
        "flat": certify_point(flat_point(2, (2, 0), 2)),
        "constant curvature": certify_point(constant_curvature_point((2, 0), 1, 2)),
    }
    basis, reports = flat_kernel_report(2, 2)
    free = free_parameters(2, 3, basis)
    ok = (
        cert.observed_ranks == [19] * 10
        and cert.i_empirical == 1
        and all(rec.rank == 19 for rec in pinned.values())
        and len(basis) == 1
        and all(rep.passed for rep in reports)
        and free == ["u1_(1,0)"]
    )
    detail = (
        f"random ranks {sorted(set(cert.observed_ranks))}, "
        + ", ".join(f"{k} rank {rec.rank}" for k, rec in pinned.items())
        + f", flat kernel dim {len(basis)}, free {free}"
    )
    return ok, detail


def check_order_two_injectivity(seed: int, workers: int = 1) -> tuple[bool, str]:
    parts, ok = [], True
    for n, expected in ((3, 3), (4, 14)):
        cert = i_empirical(n, (n, 0), 2, trials=10, seed=seed, workers=workers)
        flat = certify_point(flat_point(n, (n, 0), 2))
        cell_ok = (
            cert.passed
            and cert.i_empirical == expected
            and cert.max_rank == dim_vf_jet(n, 3)
            and flat.kernel_dim == flat_kernel_dim(n)
            and flat.rank < cert.max_rank
        )
        ok = ok and cell_ok
        parts.append(f"n={n}: i={cert.i_empirical}, flat kernel {flat.kernel_dim}")
    return ok, "; ".join(parts)


def check_order_three_injectivity(seed: int, workers: int = 1) -> tuple[bool, str]:
    surface = i_empirical(2, (2, 0), 3, trials=5, seed=seed, workers=workers)
    solid = i_empirical(3, (3, 0), 3, trials=5, seed=seed, workers=workers)
    ok = (
        surface.passed
        and surface.i_empirical == 2
        and solid.passed
        and solid.i_empirical == 18
    )
    return ok, f"i(2,3)={surface.i_empirical}, i(3,3)={solid.i_empirical}"


def check_full_table(seed: int, workers: int = 1, trials: int = 5) -> tuple[bool, str]:
    failing = []
    for n in range(1, 5):
        for r in range(5):
            cert = i_empirical(n, (n, 0), r, trials=trials, seed=seed, workers=workers)
            if not cert.passed:
                failing.append(f"({n},{r})")
    return not failing, f"failing cells: {', '.join(failing)}" if failing else "20 cells pass"


def _skew_first_order_jet(g0: list[list[Fraction]], i: int, j: int) -> VectorFieldJet:
    """The skew first-order jet with du_j/dx_i = 1."""
    n = len(g0)
    return VectorFieldJet.from_mapping(
        n,
        3,
        {
            (j, MultiIndex.unit(n, i)): 1,
            (i, MultiIndex.unit(n, j)): -g0[j][j] / g0[i][i],
        },
    )


def check_surface_degeneracy(seed: int, workers: int = 1) -> tuple[bool, str]:
    rng = make_rng(seed, "surface-degeneracy")
    for signature in _signatures(2):
        g0 = flat_metric(signature)
        for _ in range(5):
            point = two_jet_from_curvature(g0, random_curvature(2, rng))
            jet = _skew_first_order_jet(g0, 0, 1)
            report = kernel_equation_check(point, jet)
            if not report.curvature_system or not report.orbit_consistent:
                return False, f"nonzero residuals at {signature}: {report.residuals}"
    return True, "curvature residuals vanish on every skew first-order jet"


def check_orbit_signs(seed: int, workers: int = 1) -> tuple[bool, str]:
    rng = make_rng(seed, "orbit-signs")
    n = 3
    for _ in range(5):
        R = random_curvature(n, rng)
        U = [[random_rational(rng) for _ in range(n)] for _ in range(n)]
        for t in itertools.product(range(n), repeat=4):
            value = curvature_residual(U, R, t)
            for move in (rotate, reflect):
                if curvature_residual(U, R, move(t)) != -value:
                    return False, f"{move.__name__} breaks the sign rule at {t}"
    return True, "residual changes sign under both generators"


def check_bracket_identity(seed: int, workers: int = 1) -> tuple[bool, str]:
    rng = make_rng(seed, "bracket")
    for case in range(20):
        n = 1 + case % 3
        r = case % 3
        X = PolynomialVectorField.random(n, 3, rng)
        Y = PolynomialVectorField.random(n, 3, rng)
        point = sample_point(n, (n, 0), r, rng)
        if not bracket_residual(X, Y, point).is_zero():
            return False, f"nonzero residual in case {case} (n={n}, r={r})"
    return True, "20 polynomial pairs"


def _rate(function: Callable[[MetricJetPoint], object], point: MetricJetPoint, tangent) -> Fraction:
    return derivative_part(function(point.dual_along(tangent)))


def gradients(
    function: Callable[[MetricJetPoint], Sequence[object]], point: MetricJetPoint
) -> list[list[Fraction]]:
    """Exact fiber gradients of several jet functions evaluated together, one row each."""
    n, r = point.n, point.r
    size = dim_metric_jet(n, r)
    columns = []
    for position in range(n, size):
        unit = [ZERO] * size
        unit[position] = Fraction(1)
        shifted = point.dual_along(TangentVector.from_vector(n, r, unit))
        columns.append([derivative_part(value) for value in function(shifted)])
    return [list(row) for row in zip(*columns)]


def _along(grad: Sequence[Fraction], tangent: TangentVector) -> Fraction:
    return sum((g * dy for g, dy in zip(grad, tangent.dy)), ZERO)


def check_first_integrals(seed: int, workers: int = 1) -> tuple[bool, str]:
    rng = make_rng(seed, "first-integrals")

    def lifted(point: MetricJetPoint) -> TangentVector:
        n = point.n
        return lift_vector(point, [random_rational(rng) for _ in range(dim_vf_jet(n, 3))])

    for _ in range(10):
        point = sample_point(3, (3, 0), 2, rng)
        for _ in range(20):
            if _rate(scalar_curvature, point, lifted(point)) != 0:
                return False, "scalar curvature moves along a lift at n=3"
    for _ in range(10):
        point = sample_point(2, (2, 0), 2, rng)
        # Rates are linear in dy, so one gradient per point serves every lift
        grads = gradients(scalar_invariants, point)
        for _ in range(20):
            tangent = lifted(point)
            if any(_along(grad, tangent) != 0 for grad in grads):
                return False, "scalar curvature or Kretschmann moves along a lift at n=2"
        rank = ExactMatrix.from_rows(grads).rank()
        if rank != 1:
            return False, f"gradients of rank {rank} at n=2"
    return True, "scalar curvature and Kretschmann are first integrals; dependent at n=2"


def check_determinant_transport(seed: int, workers: int = 1) -> tuple[bool, str]:
    rng = make_rng(seed, "determinant")
    for case in range(20):
        n = 1 + case % 4
        signature = (n - case % 2, case % 2)
        point = sample_point(n, signature, 0, rng)
        vf = random_vf_jet(n, 1, rng)
        trace = sum((vf.d(h, MultiIndex.unit(n, h)) for h in range(n)), ZERO)
        det = ExactMatrix.from_rows(point.metric_block()).det()
        if determinant_rate(point, vf) != -2 * trace * det:
            return False, f"case {case}: rate differs from -2 tr(du) det"
    return True, "20 cases"


def check_weyl_accounting(seed: int, workers: int = 1) -> tuple[bool, str]:
    bad = [
        n
        for n in range(3, 9)
        if weyl_dims(n).curvature_invariant_count != i_closed_form(n, 2)
    ]
    ok = not bad and weyl_dims(4).curvature_invariant_count == 14
    return ok, f"mismatch at n in {bad}" if bad else "n + dim WE = i(n,2) for 3 <= n <= 8"


def check_curvature_round_trip(seed: int, workers: int = 1) -> tuple[bool, str]:
    rng = make_rng(seed, "round-trip")
    for case in range(25):
        n = 2 + case % 3
        minus = rng.randint(0, n)
        R = random_curvature(n, rng)
        recovered = riemann(two_jet_from_curvature(flat_metric((n - minus, minus)), R))
        if any(
            recovered.get(*idx) != R.get(*idx)
            for idx in itertools.product(range(n), repeat=4)
        ):
            return False, f"case {case} (n={n}) does not round-trip"
    return True, "25 random tensors"


ORACLES: list[tuple[str, Callable[..., tuple[bool, str]]]] = [
    ("surjectivity at orders 0 and 1", check_low_order_surjectivity),
    ("dimension one is bijective", check_dimension_one),
    ("surface rank 19 at order 2", check_surface_rank),
    ("order-2 generic injectivity", check_order_two_injectivity),
    ("order-3 generic injectivity", check_order_three_injectivity),
    ("full count table", check_full_table),
    ("surface curvature system degenerates", check_surface_degeneracy),
    ("curvature residual orbit signs", check_orbit_signs),
    ("bracket identity", check_bracket_identity),
    ("first integrals", check_first_integrals),
    ("determinant transport", check_determinant_transport),
    ("Weyl accounting", check_weyl_accounting),
    ("curvature round trip", check_curvature_round_trip),
]


def run_check(name: str, oracle: Callable[..., tuple[bool, str]], seed: int, workers: int = 1) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = oracle(seed, workers)
    except Exception as exc:
        logger.exception("oracle %r raised", name)
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = round(time.perf_counter() - start, 3)
    logger.info("%s: %s (%.3fs)", name, "PASS" if passed else "FAIL", seconds)
    return CheckResult(name=name, passed=passed, detail=detail, seconds=seconds)


def run_all(seed: int, workers: int = 1) -> list[CheckResult]:
    return [run_check(name, oracle, seed, workers) for name, oracle in ORACLES]
