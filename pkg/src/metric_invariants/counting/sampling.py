"""Random and special jet points.

All randomness flows from ``random.Random`` (Mersenne Twister) seeded with
strings built from the run seed and the cell/trial coordinates, so a given
seed reproduces the same points on every platform and in any execution order.
"""

import random
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

from metric_invariants.core.errors import DimensionMismatchError
from metric_invariants.core.multiindex import MultiIndex
from metric_invariants.geometry.curvature import (
    constant_curvature_tensor,
    flat_metric,
    random_curvature,
    three_jet_from_curvature,
    two_jet_from_curvature,
)
from metric_invariants.jets.jetspace import (
    MetricJetPoint,
    VectorFieldJet,
    dim_vf_jet,
    fiber_layout,
)
from metric_invariants.utils.constants import (
    DENOMINATORS,
    ELEMENTARY_ENTRY_RANGE,
    ELEMENTARY_STEPS_PER_DIM,
    NUMERATOR_RANGE,
)

Seed = Union[int, str, random.Random]


def make_rng(seed: Seed, *keys: Any) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    if not keys:
        return random.Random(seed)
    return random.Random(":".join(str(k) for k in (seed,) + keys))


def random_rational(rng: random.Random) -> Fraction:
    low, high = NUMERATOR_RANGE
    return Fraction(rng.randint(low, high), rng.choice(DENOMINATORS))


def random_unimodular(n: int, rng: random.Random) -> list[list[int]]:
    """Product of random elementary row operations; determinant 1."""
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n == 1:
        return M
    low, high = ELEMENTARY_ENTRY_RANGE
    for _ in range(ELEMENTARY_STEPS_PER_DIM * n):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(low, high)
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def congruent_metric(
    M: Sequence[Sequence[Any]], signature: tuple[int, int]
) -> list[list[Fraction]]:
    """M^T D M with D = diag(+1.., -1..)."""
    D = flat_metric(signature)
    n = len(D)
    if len(M) != n:
        raise DimensionMismatchError("congruence matrix does not match the signature")
    return [
        [
            sum((Fraction(M[a][i]) * D[a][a] * Fraction(M[a][j]) for a in range(n)), Fraction(0))
            for j in range(n)
        ]
        for i in range(n)
    ]


def _validate_signature(n: int, signature: tuple[int, int]) -> None:
    if sum(signature) != n or min(signature) < 0:
        raise DimensionMismatchError(f"signature {signature} does not split dimension {n}")


def point_with_metric(
    g0: Sequence[Sequence[Any]],
    signature: tuple[int, int],
    r: int,
    rng: Optional[random.Random] = None,
) -> MetricJetPoint:
    """0-jet g0; higher coordinates random when rng is given, zero otherwise."""
    n = len(g0)
    coords: dict[tuple[int, int, MultiIndex], Fraction] = {}
    for label in fiber_layout(n, r):
        if label.alpha.order == 0:
            coords[(label.j, label.k, label.alpha)] = Fraction(g0[label.j][label.k])
        elif rng is not None:
            coords[(label.j, label.k, label.alpha)] = random_rational(rng)
    return MetricJetPoint.from_mapping(n, r, coords, signature)


def sample_point(
    n: int, signature: tuple[int, int], r: int, seed: Seed
) -> MetricJetPoint:
    _validate_signature(n, signature)
    rng = make_rng(seed)
    g0 = congruent_metric(random_unimodular(n, rng), signature)
    return point_with_metric(g0, signature, r, rng)


def flat_point(n: int, signature: tuple[int, int], r: int) -> MetricJetPoint:
    _validate_signature(n, signature)
    return point_with_metric(flat_metric(signature), signature, r)


def constant_curvature_point(
    signature: tuple[int, int], K: Any, r: int
) -> MetricJetPoint:
    """Normal-coordinate jet of a constant-curvature metric, truncated or padded to order r."""
    g0 = flat_metric(signature)
    R = constant_curvature_tensor(g0, K)
    if r <= 2:
        return two_jet_from_curvature(g0, R).truncate(r)
    three = three_jet_from_curvature(g0, R)
    if r == 3:
        return three
    n = len(g0)
    coords = {(lab.j, lab.k, lab.alpha): v for lab, v in three.coordinates()}
    return MetricJetPoint.from_mapping(n, r, coords, signature)


def random_normal_point(
    n: int, signature: tuple[int, int], rng: random.Random
) -> MetricJetPoint:
    """Normal-form 2-jet with a random algebraic curvature tensor."""
    _validate_signature(n, signature)
    return two_jet_from_curvature(flat_metric(signature), random_curvature(n, rng))


def random_vf_jet(n: int, s: int, rng: random.Random) -> VectorFieldJet:
    return VectorFieldJet.from_vector(
        n, s, [random_rational(rng) for _ in range(dim_vf_jet(n, s))]
    )
