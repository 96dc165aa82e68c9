"""Prolongation of vector fields to the jet bundle of metrics.

Two independent encodings of the prolongation formula live here:
``lift`` evaluates it coordinate by coordinate, and ``phi_matrix`` assembles
its coefficient matrix from the closed-form entry rule. Tests cross-check
them against each other.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional, Sequence

import sympy

from metric_invariants.core.errors import DimensionMismatchError, OrderMismatchError
from metric_invariants.core.exact import (
    ZERO,
    DualScalar,
    ExactMatrix,
    Scalar,
    derivative_part,
    determinant_generic,
    value_part,
)
from metric_invariants.core.multiindex import (
    MultiIndex,
    binomial,
    enumerate_indices,
)
from metric_invariants.jets.jetspace import (
    MetricJetPoint,
    TangentVector,
    VectorFieldJet,
    dim_metric_jet,
    dim_vf_jet,
    fiber_layout,
    vf_position,
)
from metric_invariants.utils.constants import POLY_COEFF_RANGE, POLY_DENOMINATORS

logger = logging.getLogger(__name__)

# D^beta u_h evaluated at the base point
DerivativeFn = Callable[[int, MultiIndex], Scalar]


def dominated(alpha: MultiIndex) -> list[MultiIndex]:
    """All beta <= alpha componentwise."""
    return [
        MultiIndex(exps)
        for exps in itertools.product(*(range(a + 1) for a in alpha.exponents))
    ]


def _lift_components(
    point: MetricJetPoint, derivative: DerivativeFn
) -> tuple[list[Scalar], list[Scalar]]:
    n, r = point.n, point.r
    dx = [derivative(i, MultiIndex.zero(n)) for i in range(n)]
    dy: list[Scalar] = []
    for label in fiber_layout(n, r):
        i, j, alpha = label.j, label.k, label.alpha
        acc: Scalar = ZERO
        for beta in dominated(alpha):
            c = binomial(alpha, beta)
            rest = MultiIndex(tuple(a - b for a, b in zip(alpha, beta)))
            for h in range(n):
                acc = acc + c * (
                    derivative(h, beta.add_unit(i)) * point.y(h, j, rest)
                    + derivative(h, beta.add_unit(j)) * point.y(i, h, rest)
                )
                if beta.order > 0:
                    acc = acc + c * derivative(h, beta) * point.y(i, j, rest.add_unit(h))
        dy.append(-acc)
    return dx, dy


def lift(point: MetricJetPoint, vf: VectorFieldJet) -> TangentVector:
    """The prolonged vector field at the point, from the (r+1)-jet of the field.

    Raises:
        OrderMismatchError: unless vf.s == point.r + 1.
        DimensionMismatchError: if the dimensions differ.
    """
    if vf.n != point.n:
        raise DimensionMismatchError(
            f"vector field of dimension {vf.n} at a point of dimension {point.n}"
        )
    if vf.s != point.r + 1:
        raise OrderMismatchError(
            f"a {point.r}-jet point needs a vector field jet of order {point.r + 1}, got {vf.s}"
        )
    dx, dy = _lift_components(point, vf.d)
    return TangentVector(point.n, point.r, tuple(dx), tuple(dy))


def lift0(point: MetricJetPoint, vf: VectorFieldJet) -> TangentVector:
    if point.r != 0 or vf.s != 1:
        raise OrderMismatchError("lift0 takes a 0-jet point and a 1-jet of a vector field")
    return lift(point, vf)


def phi_matrix(point: MetricJetPoint) -> ExactMatrix:
    """Matrix of the prolongation map at the point.

    Rows follow ``layout(n, r)``, columns ``vf_layout(n, r + 1)``.
    """
    n, r = point.n, point.r
    s = r + 1
    cols = dim_vf_jet(n, s)
    entries: list[Fraction] = []
    zero = MultiIndex.zero(n)
    for i in range(n):
        row = [ZERO] * cols
        row[vf_position(n, s, i, zero)] = Fraction(1)
        entries.extend(row)
    for label in fiber_layout(n, r):
        i, j, alpha = label.j, label.k, label.alpha
        row = [ZERO] * cols
        for gamma in dominated(alpha):
            c = binomial(alpha, gamma)
            rest = MultiIndex(tuple(a - b for a, b in zip(alpha, gamma)))
            for h in range(n):
                # column (h, gamma + (i)) and (h, gamma + (j))
                row[vf_position(n, s, h, gamma.add_unit(i))] -= c * value_part(
                    point.y(h, j, rest)
                )
                row[vf_position(n, s, h, gamma.add_unit(j))] -= c * value_part(
                    point.y(i, h, rest)
                )
                if gamma.order > 0:
                    row[vf_position(n, s, h, gamma)] -= c * value_part(
                        point.y(i, j, rest.add_unit(h))
                    )
        entries.extend(row)
    return ExactMatrix(dim_metric_jet(n, r), cols, tuple(entries))


@dataclass(frozen=True)
class PolynomialVectorField:
    """X = sum_h u_h d/dx_h with polynomial components over the rationals."""

    n: int
    components: tuple[sympy.Poly, ...]
    _derivatives: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.components) != self.n:
            raise DimensionMismatchError(
                f"{len(self.components)} components for dimension {self.n}"
            )

    @staticmethod
    def generators(n: int) -> tuple[sympy.Symbol, ...]:
        return sympy.symbols(f"x0:{n}")

    @classmethod
    def from_terms(
        cls, n: int, terms: Sequence[Mapping[tuple[int, ...], Any]]
    ) -> "PolynomialVectorField":
        """Components given as {exponent tuple: rational coefficient}."""
        gens = cls.generators(n)
        polys = []
        for component in terms:
            rep = {
                tuple(exps): sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                for exps, c in component.items()
            }
            if rep:
                polys.append(sympy.Poly.from_dict(rep, *gens, domain=sympy.QQ))
            else:
                polys.append(sympy.Poly(0, *gens, domain=sympy.QQ))
        return cls(n, tuple(polys))

    @classmethod
    def from_exprs(cls, n: int, exprs: Sequence[Any]) -> "PolynomialVectorField":
        gens = cls.generators(n)
        return cls(
            n, tuple(sympy.Poly(sympy.sympify(e), *gens, domain=sympy.QQ) for e in exprs)
        )

    @classmethod
    def random(cls, n: int, degree: int, rng: random.Random) -> "PolynomialVectorField":
        low, high = POLY_COEFF_RANGE
        terms = []
        for _ in range(n):
            component = {}
            for beta in enumerate_indices(n, degree):
                numerator = rng.randint(low, high)
                if numerator:
                    component[beta.exponents] = Fraction(
                        numerator, rng.choice(POLY_DENOMINATORS)
                    )
            terms.append(component)
        return cls.from_terms(n, terms)

    def derivative_terms(
        self, h: int, beta: MultiIndex
    ) -> list[tuple[tuple[int, ...], Fraction]]:
        key = (h, beta)
        cache = self._derivatives
        if key not in cache:
            gens = self.generators(self.n)
            specs = [(gen, b) for gen, b in zip(gens, beta.exponents) if b]
            poly = self.components[h].diff(*specs) if specs else self.components[h]
            cache[key] = [
                (monom, Fraction(int(c.p), int(c.q))) for monom, c in poly.terms() if c != 0
            ]
        return cache[key]

    def derivative_at(self, h: int, beta: MultiIndex, x: Sequence[Scalar]) -> Scalar:
        """D^beta u_h evaluated at x, in whatever ring x lives in."""
        acc: Scalar = ZERO
        for monom, coeff in self.derivative_terms(h, beta):
            term: Scalar = coeff
            for xt, e in zip(x, monom):
                if e:
                    term = term * xt**e
            acc = acc + term
        return acc

    def jet_at_origin(self, s: int) -> VectorFieldJet:
        coords = {}
        for h, poly in enumerate(self.components):
            for monom, c in poly.terms():
                beta = MultiIndex(tuple(monom))
                if beta.order <= s and c != 0:
                    coords[(h, beta)] = Fraction(int(c.p), int(c.q)) * beta.factorial()
        return VectorFieldJet.from_mapping(self.n, s, coords)

    def apply(self, poly: sympy.Poly) -> sympy.Poly:
        """X(f) for a polynomial f in the same generators."""
        gens = self.generators(self.n)
        result = sympy.Poly(0, *gens, domain=sympy.QQ)
        for u, gen in zip(self.components, gens):
            result = result + u * poly.diff(gen)
        return result

    def bracket(self, other: "PolynomialVectorField") -> "PolynomialVectorField":
        """[X, Y] with components X(w_i) - Y(u_i)."""
        if other.n != self.n:
            raise DimensionMismatchError("vector fields of different dimension")
        return PolynomialVectorField(
            self.n,
            tuple(
                self.apply(w) - other.apply(u)
                for u, w in zip(self.components, other.components)
            ),
        )

    def is_zero(self) -> bool:
        return all(poly.is_zero for poly in self.components)


def lift_eval_generic(
    vf: PolynomialVectorField,
    point: MetricJetPoint,
    x: Optional[Sequence[Scalar]] = None,
) -> TangentVector:
    """Prolongation evaluated at (x, point), entries in the ring of the inputs.

    Missing higher derivatives of the polynomial simply vanish.
    """
    if vf.n != point.n:
        raise DimensionMismatchError(
            f"vector field of dimension {vf.n} at a point of dimension {point.n}"
        )
    base = list(x) if x is not None else [ZERO] * point.n

    def derivative(h: int, beta: MultiIndex) -> Scalar:
        return vf.derivative_at(h, beta, base)

    dx, dy = _lift_components(point, derivative)
    return TangentVector(point.n, point.r, tuple(dx), tuple(dy))


def directional_derivative(
    vf: PolynomialVectorField, point: MetricJetPoint, along: TangentVector
) -> TangentVector:
    """d/dt of the prolonged field's components at p + t*along, t = 0."""
    dual_point = point.dual_along(along)
    dual_x = [DualScalar(ZERO, value_part(c)) for c in along.dx]
    moved = lift_eval_generic(vf, dual_point, dual_x)
    return TangentVector.from_vector(
        point.n, point.r, [derivative_part(c) for c in moved.as_vector()]
    )


def bracket_residual(
    X: PolynomialVectorField, Y: PolynomialVectorField, point: MetricJetPoint
) -> TangentVector:
    """[lift X, lift Y] - lift [X, Y] at the point, computed exactly.

    The result is zero when the prolongation respects brackets.
    """
    if X.n != point.n or Y.n != point.n:
        raise DimensionMismatchError("vector fields do not match the point dimension")
    x_bar = lift_eval_generic(X, point)
    y_bar = lift_eval_generic(Y, point)
    commutator = directional_derivative(Y, point, x_bar) - directional_derivative(
        X, point, y_bar
    )
    return commutator - lift_eval_generic(X.bracket(Y), point)


def determinant_rate(point: MetricJetPoint, vf: VectorFieldJet) -> Fraction:
    """Rate of change of det(y_jk) along the lift at a 0-jet point."""
    tangent = lift0(point, vf)
    moved = point.dual_along(tangent)
    return derivative_part(determinant_generic(moved.metric_block()))


def lift_vector(point: MetricJetPoint, vector: Sequence[Any]) -> TangentVector:
    """lift applied to a vector-field jet given in vf_layout order."""
    return lift(point, VectorFieldJet.from_vector(point.n, point.r + 1, vector))

