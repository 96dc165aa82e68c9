"""Explicit kernel equations at a point in normal coordinates.

For a vector-field jet X at a normal point (0-jet diagonal +-1, 1-jet zero)
the report states which of the following hold:

- zero order: u_i(x) = 0;
- skew: g_ii du_i/dx_j + g_jj du_j/dx_i = 0;
- second order: every second derivative of u vanishes;
- third order: every third derivative of u vanishes;
- curvature system: for every (i, j, k, l)
  sum_h (du_h/dx_i R_hkjl + du_h/dx_j R_hlik + du_h/dx_k R_hilj + du_h/dx_l R_hjki) = 0.

The curvature residual changes sign under (ijkl) -> (jkli) and under
(ijkl) -> (ilkj). Those two moves generate a group of order 8, so only one
residual per orbit is stored, with the sign of every other tuple verified.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from dataclasses_json import DataClassJsonMixin

from metric_invariants.core.errors import (
    DimensionMismatchError,
    NotNormalFormError,
    OrderMismatchError,
)
from metric_invariants.core.exact import ZERO, value_part
from metric_invariants.core.multiindex import MultiIndex, enumerate_indices
from metric_invariants.geometry.curvature import CurvatureTensor, check_normal_form, riemann
from metric_invariants.jets.jetspace import MetricJetPoint, VectorFieldJet, vf_layout
from metric_invariants.utils.serialization import fraction_to_json

logger = logging.getLogger(__name__)

IndexTuple = tuple[int, int, int, int]


def rotate(t: IndexTuple) -> IndexTuple:
    i, j, k, l = t
    return (j, k, l, i)


def reflect(t: IndexTuple) -> IndexTuple:
    i, j, k, l = t
    return (i, l, k, j)


def orbit(t: IndexTuple) -> dict[IndexTuple, int]:
    """Tuples reachable from t, each with the residual sign relative to t."""
    signs = {t: 1}
    queue = deque([t])
    while queue:
        current = queue.popleft()
        for move in (rotate, reflect):
            nxt = move(current)
            if nxt not in signs:
                signs[nxt] = -signs[current]
                queue.append(nxt)
    return signs


def orbit_representatives(n: int) -> dict[IndexTuple, tuple[IndexTuple, int]]:
    """Map every tuple to (smallest tuple of its orbit, sign relative to it)."""
    table: dict[IndexTuple, tuple[IndexTuple, int]] = {}
    for t in itertools.product(range(n), repeat=4):
        if t in table:
            continue
        members = orbit(t)
        rep = min(members)
        rep_sign = members[rep]
        for member, sign in members.items():
            table[member] = (rep, sign * rep_sign)
    return table


def first_derivatives(vf: VectorFieldJet) -> list[list[Fraction]]:
    """U[h][i] = du_h/dx_i."""
    n = vf.n
    return [[vf.d(h, MultiIndex.unit(n, i)) for i in range(n)] for h in range(n)]


def curvature_residual(
    U: list[list[Fraction]], R: CurvatureTensor, t: IndexTuple
) -> Fraction:
    i, j, k, l = t
    acc = ZERO
    for h in range(R.n):
        acc += (
            U[h][i] * value_part(R.get(h, k, j, l))
            + U[h][j] * value_part(R.get(h, l, i, k))
            + U[h][k] * value_part(R.get(h, i, l, j))
            + U[h][l] * value_part(R.get(h, j, k, i))
        )
    return acc


@dataclass
class KernelEquationReport(DataClassJsonMixin):
    zero_order: bool
    skew: bool
    second_order: Optional[bool] = None
    third_order: Optional[bool] = None
    curvature_system: Optional[bool] = None
    orbit_consistent: Optional[bool] = None
    residuals: dict[str, str] = field(default_factory=dict)
    nonzero_residuals: int = 0

    @property
    def passed(self) -> bool:
        checks = [
            self.zero_order,
            self.skew,
            self.second_order,
            self.third_order,
            self.curvature_system,
        ]
        return all(c for c in checks if c is not None)

    def equations_holding(self) -> list[str]:
        names = {
            "zero_order": self.zero_order,
            "skew": self.skew,
            "second_order": self.second_order,
            "third_order": self.third_order,
            "curvature_system": self.curvature_system,
        }
        return [name for name, value in names.items() if value]


def _derivatives_vanish(vf: VectorFieldJet, order: int) -> bool:
    return all(
        vf.d(h, beta) == 0
        for h in range(vf.n)
        for beta in enumerate_indices(vf.n, order)
        if beta.order == order
    )


def _require_normal_point(point: MetricJetPoint) -> None:
    check_normal_form(point.metric_block())
    if point.r >= 1:
        for j, k in itertools.combinations_with_replacement(range(point.n), 2):
            for m in range(point.n):
                if value_part(point.y(j, k, MultiIndex.unit(point.n, m))) != 0:
                    raise NotNormalFormError("1-jet of the metric must vanish")


def kernel_equation_check(
    point: MetricJetPoint, vf: VectorFieldJet
) -> KernelEquationReport:
    """Evaluate the kernel equations that apply at the point's order.

    Raises:
        NotNormalFormError: if the point is not in normal form.
        OrderMismatchError: unless vf.s == point.r + 1.
    """
    if vf.n != point.n:
        raise DimensionMismatchError("vector field and point dimensions differ")
    if vf.s != point.r + 1:
        raise OrderMismatchError(
            f"a {point.r}-jet point needs a vector field jet of order {point.r + 1}"
        )
    _require_normal_point(point)
    n = point.n
    g = [value_part(point.metric_block()[i][i]) for i in range(n)]
    U = first_derivatives(vf)
    report = KernelEquationReport(
        zero_order=all(vf.d(h, MultiIndex.zero(n)) == 0 for h in range(n)),
        skew=all(
            g[i] * U[i][j] + g[j] * U[j][i] == 0 for i in range(n) for j in range(n)
        ),
    )
    if vf.s >= 2:
        report.second_order = _derivatives_vanish(vf, 2)
    if vf.s >= 3:
        report.third_order = _derivatives_vanish(vf, 3)
    if point.r >= 2:
        R = riemann(point.truncate(2))
        table = orbit_representatives(n)
        rep_values = {
            rep: curvature_residual(U, R, rep) for rep in {rep for rep, _ in table.values()}
        }
        consistent = True
        for t, (rep, sign) in table.items():
            if curvature_residual(U, R, t) != sign * rep_values[rep]:
                consistent = False
                logger.warning("curvature residual at %s breaks the orbit sign rule", t)
        report.orbit_consistent = consistent
        report.residuals = {
            "".join(map(str, rep)): fraction_to_json(v)
            for rep, v in sorted(rep_values.items())
            if v != 0
        }
        report.nonzero_residuals = len(report.residuals)
        report.curvature_system = report.nonzero_residuals == 0
    return report


def free_parameters(n: int, s: int, basis: list[list[Fraction]]) -> list[str]:
    """Labels of the free columns of an RREF kernel basis.

    Each basis vector is 1 at its free column and 0 past it.
    """
    labels = vf_layout(n, s)
    return [
        str(labels[max(c for c, value in enumerate(vector) if value != 0)])
        for vector in basis
    ]
