"""Curvature of a metric jet at the origin.

Conventions: R_ijkl = g(R(d_k, d_l) d_j, d_i) with
R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so the round sphere has
R_0101 = K > 0. Ricci is r_ij = g^{mp} R_{pjmi}.

Every function here works over any scalar ring the point is valued in
(Fraction or DualScalar), so derivatives of invariants along tangent
vectors come out exactly.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from metric_invariants.core.errors import (
    CurvatureSymmetryError,
    DimensionMismatchError,
    InconsistentSystemError,
    NotNormalFormError,
    OrderMismatchError,
)
from metric_invariants.core.exact import (
    ZERO,
    ExactMatrix,
    Scalar,
    char_poly,
    derivative_part,
    inverse_generic,
    is_squarefree,
    is_zero,
    solve_exact,
    value_part,
)
from metric_invariants.core.multiindex import MultiIndex
from metric_invariants.jets.jetspace import MetricJetPoint, fiber_layout, signature_of_block
from metric_invariants.utils.constants import DENOMINATORS, NUMERATOR_RANGE
from metric_invariants.utils.serialization import (
    RATIONAL_SCHEMA,
    fraction_from_json,
    fraction_to_json,
    validate_document,
)

logger = logging.getLogger(__name__)

# Gamma[i][j][k] = Gamma^i_{jk}
Christoffel = list[list[list[Scalar]]]


def _flat_index(n: int, i: int, j: int, k: int, l: int) -> int:
    return ((i * n + j) * n + k) * n + l


def curvature_orbit_key(i: int, j: int, k: int, l: int) -> tuple[int, tuple[int, int, int, int]]:
    """(sign, representative) under the algebraic symmetries; sign 0 means forced zero."""
    if i == j or k == l:
        return 0, (i, j, k, l)
    sign = 1
    if i > j:
        i, j, sign = j, i, -sign
    if k > l:
        k, l, sign = l, k, -sign
    if (i, j) > (k, l):
        i, j, k, l = k, l, i, j
    return sign, (i, j, k, l)


@dataclass(frozen=True)
class CurvatureTensor:
    """Components R_ijkl stored densely in (i, j, k, l) row-major order."""

    n: int
    components: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.components) != self.n**4:
            raise DimensionMismatchError(
                f"{len(self.components)} components for dimension {self.n}"
            )

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int, int, int], Any]) -> "CurvatureTensor":
        return cls(
            n, tuple(fn(i, j, k, l) for i, j, k, l in itertools.product(range(n), repeat=4))
        )

    @classmethod
    def zero(cls, n: int) -> "CurvatureTensor":
        return cls(n, (ZERO,) * n**4)

    @classmethod
    def from_representatives(
        cls, n: int, reps: dict[tuple[int, int, int, int], Any]
    ) -> "CurvatureTensor":
        """Expand one value per symmetry orbit; Bianchi is checked, not imposed.

        Raises:
            CurvatureSymmetryError: if the expanded tensor violates the first Bianchi identity.
        """
        normalised: dict[tuple[int, int, int, int], Fraction] = {}
        for key, value in reps.items():
            sign, rep = curvature_orbit_key(*key)
            if sign == 0:
                if Fraction(value) != 0:
                    raise CurvatureSymmetryError(f"component {key} must vanish")
                continue
            value = sign * Fraction(value)
            if rep in normalised and normalised[rep] != value:
                raise CurvatureSymmetryError(f"conflicting values for orbit of {key}")
            normalised[rep] = value

        def component(i: int, j: int, k: int, l: int) -> Fraction:
            sign, rep = curvature_orbit_key(i, j, k, l)
            return sign * normalised.get(rep, ZERO) if sign else ZERO

        tensor = cls.from_function(n, component)
        tensor.check_symmetries()
        return tensor

    def get(self, i: int, j: int, k: int, l: int) -> Scalar:
        return self.components[_flat_index(self.n, i, j, k, l)]

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.components)

    def value_part(self) -> "CurvatureTensor":
        return CurvatureTensor(self.n, tuple(value_part(c) for c in self.components))

    def symmetry_violations(self) -> list[str]:
        problems = []
        n = self.n
        for i, j, k, l in itertools.product(range(n), repeat=4):
            R = self.get(i, j, k, l)
            if not is_zero(R + self.get(j, i, k, l)):
                problems.append(f"R{i}{j}{k}{l} != -R{j}{i}{k}{l}")
            if not is_zero(R + self.get(i, j, l, k)):
                problems.append(f"R{i}{j}{k}{l} != -R{i}{j}{l}{k}")
            if not is_zero(R - self.get(k, l, i, j)):
                problems.append(f"R{i}{j}{k}{l} != R{k}{l}{i}{j}")
            if not is_zero(R + self.get(i, k, l, j) + self.get(i, l, j, k)):
                problems.append(f"first Bianchi fails at {i}{j}{k}{l}")
        return problems

    def check_symmetries(self) -> None:
        problems = self.symmetry_violations()
        if problems:
            raise CurvatureSymmetryError("; ".join(problems[:5]))

    def to_json(self) -> dict[str, Any]:
        seen = set()
        components = []
        for i, j, k, l in itertools.product(range(self.n), repeat=4):
            sign, rep = curvature_orbit_key(i, j, k, l)
            if sign == 0 or rep in seen:
                continue
            seen.add(rep)
            a, b, c, d = rep
            components.append(
                {
                    "i": a,
                    "j": b,
                    "k": c,
                    "l": d,
                    "value": fraction_to_json(value_part(self.get(a, b, c, d))),
                }
            )
        return {"n": self.n, "components": components}

    @classmethod
    def from_json(cls, document: Any) -> "CurvatureTensor":
        validate_document(document, CURVATURE_SCHEMA, "curvature tensor")
        n = document["n"]
        reps = {}
        for item in document["components"]:
            key = (item["i"], item["j"], item["k"], item["l"])
            if max(key) >= n:
                raise CurvatureSymmetryError(f"index {key} out of range for dimension {n}")
            reps[key] = fraction_from_json(item["value"])
        return cls.from_representatives(n, reps)


@dataclass(frozen=True)
class RicciData:
    ricci: list[list[Scalar]]
    endo: list[list[Scalar]]


def _require_order(point: MetricJetPoint, r: int) -> None:
    if point.r < r:
        raise OrderMismatchError(f"needs a jet of order >= {r}, got {point.r}")


def _d1(point: MetricJetPoint, a: int, b: int, m: int) -> Scalar:
    return point.y(a, b, MultiIndex.unit(point.n, m))


def _d2(point: MetricJetPoint, a: int, b: int, m: int, q: int) -> Scalar:
    return point.y(a, b, MultiIndex.unit(point.n, m).add_unit(q))


def inverse_metric(point: MetricJetPoint) -> list[list[Scalar]]:
    return inverse_generic(point.metric_block())


def _lowered_christoffel(point: MetricJetPoint) -> list[list[list[Scalar]]]:
    # Gamma_{ljk} = 1/2 (d_j g_lk + d_k g_jl - d_l g_jk)
    n = point.n
    half = Fraction(1, 2)
    return [
        [
            [
                half * (_d1(point, l, k, j) + _d1(point, j, l, k) - _d1(point, j, k, l))
                for k in range(n)
            ]
            for j in range(n)
        ]
        for l in range(n)
    ]


def _raised_christoffel(
    ginv: list[list[Scalar]], low: list[list[list[Scalar]]]
) -> Christoffel:
    n = len(ginv)
    return [
        [
            [sum((ginv[i][l] * low[l][j][k] for l in range(n)), ZERO) for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]


def christoffel(point: MetricJetPoint) -> Christoffel:
    """Gamma^i_{jk} at the origin; needs the 1-jet."""
    _require_order(point, 1)
    return _raised_christoffel(inverse_metric(point), _lowered_christoffel(point))


def _christoffel_derivative(
    point: MetricJetPoint, ginv: list[list[Scalar]], low: list[list[list[Scalar]]]
) -> list[list[list[list[Scalar]]]]:
    """dGamma[m][i][j][k] = d_m Gamma^i_{jk}."""
    n = point.n
    half = Fraction(1, 2)
    result = []
    for m in range(n):
        # d_m g^{il} = -g^{ia} d_m g_ab g^{bl}
        dg = [[_d1(point, a, b, m) for b in range(n)] for a in range(n)]
        dginv = [
            [
                -sum(
                    (ginv[i][a] * dg[a][b] * ginv[b][l] for a in range(n) for b in range(n)),
                    ZERO,
                )
                for l in range(n)
            ]
            for i in range(n)
        ]
        dlow = [
            [
                [
                    half
                    * (
                        _d2(point, l, k, j, m)
                        + _d2(point, j, l, k, m)
                        - _d2(point, j, k, l, m)
                    )
                    for k in range(n)
                ]
                for j in range(n)
            ]
            for l in range(n)
        ]
        result.append(
            [
                [
                    [
                        sum(
                            (
                                dginv[i][l] * low[l][j][k] + ginv[i][l] * dlow[l][j][k]
                                for l in range(n)
                            ),
                            ZERO,
                        )
                        for k in range(n)
                    ]
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )
    return result


def riemann(point: MetricJetPoint) -> CurvatureTensor:
    """R_ijkl at the origin from the 2-jet.

    R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
                + Gamma^i_{kp} Gamma^p_{lj} - Gamma^i_{lp} Gamma^p_{kj},
    lowered with g.
    """
    _require_order(point, 2)
    n = point.n
    g = point.metric_block()
    ginv = inverse_metric(point)
    low = _lowered_christoffel(point)
    gamma = _raised_christoffel(ginv, low)
    dgamma = _christoffel_derivative(point, ginv, low)
    upper = {}
    for i, j, k, l in itertools.product(range(n), repeat=4):
        value = dgamma[k][i][l][j] - dgamma[l][i][k][j]
        for p in range(n):
            value = value + gamma[i][k][p] * gamma[p][l][j] - gamma[i][l][p] * gamma[p][k][j]
        upper[(i, j, k, l)] = value
    tensor = CurvatureTensor.from_function(
        n,
        lambda i, j, k, l: sum((g[i][m] * upper[(m, j, k, l)] for m in range(n)), ZERO),
    )
    tensor.check_symmetries()
    return tensor


def _ricci_from(R: CurvatureTensor, ginv: list[list[Scalar]]) -> list[list[Scalar]]:
    n = R.n
    return [
        [
            sum(
                (ginv[m][p] * R.get(p, j, m, i) for m in range(n) for p in range(n)),
                ZERO,
            )
            for j in range(n)
        ]
        for i in range(n)
    ]


def _contracted_ricci(point: MetricJetPoint) -> tuple[list[list[Scalar]], list[list[Scalar]]]:
    """(g^-1, r) with r_ij = R^m_{jmi} taken straight from the Christoffel symbols.

    Agrees exactly with lowering R and contracting with g^-1, without building R.
    """
    _require_order(point, 2)
    n = point.n
    ginv = inverse_metric(point)
    low = _lowered_christoffel(point)
    gamma = _raised_christoffel(ginv, low)
    dgamma = _christoffel_derivative(point, ginv, low)
    r = [
        [
            sum(
                (
                    dgamma[m][m][i][j]
                    - dgamma[i][m][m][j]
                    + sum(
                        (
                            gamma[m][m][p] * gamma[p][i][j] - gamma[m][i][p] * gamma[p][m][j]
                            for p in range(n)
                        ),
                        ZERO,
                    )
                    for m in range(n)
                ),
                ZERO,
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    return ginv, r


def ricci(point: MetricJetPoint) -> RicciData:
    n = point.n
    ginv, r = _contracted_ricci(point)
    endo = [
        [sum((ginv[i][k] * r[k][j] for k in range(n)), ZERO) for j in range(n)]
        for i in range(n)
    ]
    return RicciData(ricci=r, endo=endo)


def _trace(ginv: list[list[Scalar]], r: list[list[Scalar]]) -> Scalar:
    n = len(ginv)
    return sum((ginv[i][j] * r[i][j] for i in range(n) for j in range(n)), ZERO)


def scalar_curvature(point: MetricJetPoint) -> Scalar:
    return _trace(*_contracted_ricci(point))


def _raise_slot(
    values: dict[tuple[int, ...], Scalar], ginv: list[list[Scalar]], slot: int, n: int
) -> dict[tuple[int, ...], Scalar]:
    raised = {}
    for idx in values:
        acc = ZERO
        for a in range(n):
            source = idx[:slot] + (a,) + idx[slot + 1 :]
            acc = acc + ginv[idx[slot]][a] * values[source]
        raised[idx] = acc
    return raised


def _kretschmann_from(R: CurvatureTensor, ginv: list[list[Scalar]]) -> Scalar:
    n = R.n
    lowered = {idx: R.get(*idx) for idx in itertools.product(range(n), repeat=4)}
    raised = lowered
    for slot in range(4):
        raised = _raise_slot(raised, ginv, slot, n)
    return sum((lowered[idx] * raised[idx] for idx in lowered), ZERO)


def kretschmann(point: MetricJetPoint) -> Scalar:
    """R_ijkl R^ijkl."""
    return _kretschmann_from(riemann(point), inverse_metric(point))


def scalar_invariants(point: MetricJetPoint) -> tuple[Scalar, Scalar]:
    """(scalar curvature, Kretschmann) from a single curvature evaluation."""
    R = riemann(point)
    ginv = inverse_metric(point)
    return _trace(ginv, _ricci_from(R, ginv)), _kretschmann_from(R, ginv)


def ricci_generic(point: MetricJetPoint) -> bool:
    """True iff the Ricci endomorphism has pairwise distinct complex eigenvalues."""
    endo = ricci(point).endo
    A = ExactMatrix.from_rows([[value_part(x) for x in row] for row in endo])
    return is_squarefree(char_poly(A))


# NablaR[m] is the tensor nabla_m R_ijkl
NablaR = list[CurvatureTensor]


def covariant_derivative(point: MetricJetPoint) -> NablaR:
    """nabla R at the origin from a 3-jet.

    d_m R comes from evaluating riemann on the 2-jet at x + eps*e_m.
    """
    _require_order(point, 3)
    n = point.n
    base = point.truncate(2)
    R = riemann(base)
    gamma = christoffel(base)
    result = []
    for m in range(n):
        moved = riemann(point.truncate(3).shifted_along(m))

        def component(i: int, j: int, k: int, l: int, m: int = m, moved=moved) -> Scalar:
            value = moved.get(i, j, k, l)
            derivative = derivative_part(value)
            for p in range(n):
                derivative = (
                    derivative
                    - gamma[p][m][i] * R.get(p, j, k, l)
                    - gamma[p][m][j] * R.get(i, p, k, l)
                    - gamma[p][m][k] * R.get(i, j, p, l)
                    - gamma[p][m][l] * R.get(i, j, k, p)
                )
            return derivative

        result.append(CurvatureTensor.from_function(n, component))
    return result


def nabla_r_nonzero(point: MetricJetPoint) -> bool:
    """True iff some component of nabla R is nonzero (two-dimensional jets of order >= 3)."""
    if point.n != 2:
        raise DimensionMismatchError(f"defined for dimension 2, got {point.n}")
    _require_order(point, 3)
    return any(not tensor.is_zero() for tensor in covariant_derivative(point))


def check_normal_form(g0: Sequence[Sequence[Any]]) -> None:
    n = len(g0)
    for i in range(n):
        for j in range(n):
            v = Fraction(value_part(g0[i][j]))
            if (i == j and v not in (1, -1)) or (i != j and v != 0):
                raise NotNormalFormError("0-jet must be diagonal with entries +1 or -1")


def hessian_from_curvature(R: CurvatureTensor, i: int, j: int, k: int, l: int) -> Scalar:
    """d_k d_l g_ij at a normal point: (R_iklj + R_ilkj) / 3."""
    return Fraction(1, 3) * (R.get(i, k, l, j) + R.get(i, l, k, j))


def curvature_from_hessian(
    n: int, hess: Callable[[int, int, int, int], Scalar]
) -> CurvatureTensor:
    """Curvature at a point where the 1-jet vanishes; hess(i, j, k, l) = d_k d_l g_ij.

    R_ijkl = 1/2 (h_il,jk - h_jl,ik - h_ik,jl + h_jk,il).
    """
    half = Fraction(1, 2)
    return CurvatureTensor.from_function(
        n,
        lambda i, j, k, l: half
        * (hess(i, l, j, k) - hess(j, l, i, k) - hess(i, k, j, l) + hess(j, k, i, l)),
    )


def two_jet_from_curvature(
    g0: Sequence[Sequence[Any]], R: CurvatureTensor
) -> MetricJetPoint:
    """Normal-coordinate 2-jet with 0-jet g0, vanishing 1-jet and the given curvature.

    Raises:
        NotNormalFormError: if g0 is not diagonal with entries +-1.
        CurvatureSymmetryError: if R violates the curvature symmetries.
    """
    n = len(g0)
    if R.n != n:
        raise DimensionMismatchError(f"curvature of dimension {R.n} for a {n}x{n} metric")
    check_normal_form(g0)
    R.check_symmetries()
    coords: dict[tuple[int, int, MultiIndex], Scalar] = {}
    for label in fiber_layout(n, 2):
        alpha = label.alpha
        if alpha.order == 0:
            coords[(label.j, label.k, alpha)] = Fraction(g0[label.j][label.k])
        elif alpha.order == 2:
            k, l = _split_second_order(alpha)
            coords[(label.j, label.k, alpha)] = hessian_from_curvature(R, label.j, label.k, k, l)
    return MetricJetPoint.from_mapping(n, 2, coords, signature_of_block(g0))


def _split_second_order(alpha: MultiIndex) -> tuple[int, int]:
    directions = [t for t, e in enumerate(alpha.exponents) for _ in range(e)]
    return directions[0], directions[1]


def _split_third_order(alpha: MultiIndex) -> tuple[int, int, int]:
    directions = [t for t, e in enumerate(alpha.exponents) for _ in range(e)]
    return directions[0], directions[1], directions[2]


def third_derivative_from_curvature(
    nabla: NablaR, i: int, j: int, k: int, l: int, m: int
) -> Scalar:
    """d_k d_l d_m g_ij in normal coordinates from nabla R."""
    def D(a: int, b: int, c: int, d: int, e: int) -> Scalar:
        return nabla[a].get(b, c, d, e)

    return -Fraction(1, 6) * (
        D(k, i, l, j, m)
        + D(k, i, m, j, l)
        + D(l, i, k, j, m)
        + D(l, i, m, j, k)
        + D(m, i, k, j, l)
        + D(m, i, l, j, k)
    )


def three_jet_from_curvature(
    g0: Sequence[Sequence[Any]],
    R: CurvatureTensor,
    nabla: Optional[NablaR] = None,
) -> MetricJetPoint:
    """Normal-coordinate 3-jet; a missing nabla R means nabla R = 0."""
    n = len(g0)
    two_jet = two_jet_from_curvature(g0, R)
    if nabla is None:
        nabla = [CurvatureTensor.zero(n) for _ in range(n)]
    if len(nabla) != n or any(t.n != n for t in nabla):
        raise DimensionMismatchError("nabla R has the wrong shape")
    coords: dict[tuple[int, int, MultiIndex], Scalar] = {
        (label.j, label.k, label.alpha): value for label, value in two_jet.coordinates()
    }
    for label in fiber_layout(n, 3):
        if label.alpha.order == 3:
            k, l, m = _split_third_order(label.alpha)
            coords[(label.j, label.k, label.alpha)] = third_derivative_from_curvature(
                nabla, label.j, label.k, k, l, m
            )
    return MetricJetPoint.from_mapping(n, 3, coords, two_jet.signature)


def constant_curvature_tensor(g0: Sequence[Sequence[Any]], K: Any) -> CurvatureTensor:
    """R_ijkl = K (g_ik g_jl - g_il g_jk)."""
    n = len(g0)
    K = Fraction(K)
    return CurvatureTensor.from_function(
        n,
        lambda i, j, k, l: K
        * (Fraction(g0[i][k]) * Fraction(g0[j][l]) - Fraction(g0[i][l]) * Fraction(g0[j][k])),
    )


def random_curvature(n: int, rng: random.Random) -> CurvatureTensor:
    """A random algebraic curvature tensor, built from a random symmetric hessian."""
    low, high = NUMERATOR_RANGE
    hess: dict[tuple[int, int, int, int], Fraction] = {}
    for j, k in itertools.combinations_with_replacement(range(n), 2):
        for a, b in itertools.combinations_with_replacement(range(n), 2):
            value = Fraction(rng.randint(low, high), rng.choice(DENOMINATORS))
            for key in {(j, k, a, b), (k, j, a, b), (j, k, b, a), (k, j, b, a)}:
                hess[key] = value
    return curvature_from_hessian(n, lambda i, j, k, l: hess[(i, j, k, l)])


def _ricci_columns(g0: Sequence[Sequence[Any]]) -> tuple[list, list[list[Fraction]]]:
    n = len(g0)
    ginv = inverse_generic([[Fraction(x) for x in row] for row in g0])
    unknowns = [
        (j, k, a, b)
        for j, k in itertools.combinations_with_replacement(range(n), 2)
        for a, b in itertools.combinations_with_replacement(range(n), 2)
    ]
    columns = []
    for unknown in unknowns:
        def hess(i: int, j: int, k: int, l: int, unknown=unknown) -> Fraction:
            hit = (min(i, j), max(i, j), min(k, l), max(k, l)) == unknown
            return Fraction(1) if hit else ZERO

        R = curvature_from_hessian(n, hess)
        r = _ricci_from(R, ginv)
        columns.append([r[i][j] for i, j in itertools.combinations_with_replacement(range(n), 2)])
    return unknowns, columns


def curvature_with_ricci(
    g0: Sequence[Sequence[Any]], target: Sequence[Sequence[Any]]
) -> CurvatureTensor:
    """An algebraic curvature tensor whose Ricci tensor at g0 equals target.

    Exact linear solve over hessian coordinates with free unknowns set to 0.

    Raises:
        InconsistentSystemError: if no curvature tensor has that Ricci tensor.
    """
    n = len(g0)
    unknowns, columns = _ricci_columns(g0)
    rows = [[columns[c][e] for c in range(len(unknowns))] for e in range(len(columns[0]))]
    rhs = [Fraction(target[i][j]) for i, j in itertools.combinations_with_replacement(range(n), 2)]
    for i in range(n):
        for j in range(n):
            if Fraction(target[i][j]) != Fraction(target[j][i]):
                raise InconsistentSystemError("target Ricci tensor is not symmetric")
    solution = solve_exact(ExactMatrix.from_rows(rows), rhs)
    weights = dict(zip(unknowns, solution))

    def hess(i: int, j: int, k: int, l: int) -> Fraction:
        return weights[(min(i, j), max(i, j), min(k, l), max(k, l))]

    return curvature_from_hessian(n, hess)


def flat_metric(signature: tuple[int, int]) -> list[list[Fraction]]:
    plus, minus = signature
    diag = [Fraction(1)] * plus + [Fraction(-1)] * minus
    n = len(diag)
    return [[diag[i] if i == j else ZERO for j in range(n)] for i in range(n)]


_INDEX = {"type": "integer", "minimum": 0}

CURVATURE_SCHEMA = {
    "type": "object",
    "required": ["n", "components"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "k", "l", "value"],
                "properties": {
                    "i": _INDEX,
                    "j": _INDEX,
                    "k": _INDEX,
                    "l": _INDEX,
                    "value": RATIONAL_SCHEMA,
                },
            },
        },
    },
}
