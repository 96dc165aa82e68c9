"""Closed-form invariant counts, expected ranks and Weyl-space dimensions."""

import math
from dataclasses import dataclass
from fractions import Fraction

from dataclasses_json import DataClassJsonMixin

from metric_invariants.core.errors import DimensionMismatchError
from metric_invariants.jets.jetspace import dim_metric_jet, dim_vf_jet


def _check_bounds(n: int, r: int) -> None:
    if n < 1 or r < 0:
        raise DimensionMismatchError(f"invalid (n, r) = ({n}, {r})")


def i_closed_form(n: int, r: int) -> int:
    """Number of functionally independent metric invariants of order r in dimension n."""
    _check_bounds(n, r)
    if r <= 1 or n == 1:
        return 0
    if n == 2:
        return 1 if r == 2 else (r + 1) * (r - 2) // 2
    value = n + Fraction((r - 1) * n * n - (r + 1) * n, 2 * (r + 1)) * math.comb(n + r, r)
    assert value.denominator == 1, f"non-integral count at ({n}, {r})"
    return int(value)


def expected_rank(n: int, r: int) -> int:
    """Rank of the prolongation map on the generic set."""
    _check_bounds(n, r)
    if r == 0:
        return dim_metric_jet(n, 0)
    if r == 1:
        return n * (n * n + 2 * n + 3) // 2
    if (n, r) == (2, 2):
        return 19
    return dim_vf_jet(n, r + 1)


def flat_kernel_dim(n: int) -> int:
    """Kernel dimension at a flat normal point: the infinitesimal isometries fixing x."""
    return n * (n - 1) // 2


def genericity_criterion(n: int, r: int) -> str:
    if r <= 1 or n == 1 or (n, r) == (2, 2):
        return "none needed"
    if r == 2:
        return "ricci-distinct"
    if n == 2:
        return "nabla-r-nonzero"
    return "rank-maximal"


@dataclass
class WeylDims(DataClassJsonMixin):
    n: int
    dim_CE: int
    dim_ZE: int
    dim_UE: int
    dim_WE: int
    curvature_invariant_count: int


def weyl_dims(n: int) -> WeylDims:
    """Decomposition of the algebraic curvature tensors under the orthogonal group.

    dim WE = (n^4 - 7n^2 - 6n) / 12, the trace-free part.
    """
    if n < 3:
        raise DimensionMismatchError(f"Weyl decomposition needs n >= 3, got {n}")
    m = n * (n - 1) // 2
    dim_ce = m * (m + 1) // 2 - math.comb(n, 4)
    dim_ze = n * (n + 1) // 2 - 1
    dim_ue = 1
    dim_we = dim_ce - n * (n + 1) // 2
    assert 12 * dim_we == n**4 - 7 * n**2 - 6 * n
    return WeylDims(
        n=n,
        dim_CE=dim_ce,
        dim_ZE=dim_ze,
        dim_UE=dim_ue,
        dim_WE=dim_we,
        curvature_invariant_count=n + dim_we,
    )
