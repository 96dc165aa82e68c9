"""Coordinates on J^r of metrics and on jets of vector fields.

A metric jet point stores y^{jk}_alpha for j <= k and |alpha| <= r, with the
base point fixed at the origin. Values are kept as a tuple in the canonical
fiber layout: (j, k) pairs in lexicographic order (j <= k) major, alpha in
graded-lex order minor. Reads with j > k are answered from (k, j).

Coordinates are raw partial derivatives: y^{jk}_alpha = d^alpha g_jk (x).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from metric_invariants.core.errors import (
    DimensionMismatchError,
    InvalidPointFileError,
    OrderMismatchError,
    SingularMetricError,
)
from metric_invariants.core.exact import (
    ZERO,
    DualScalar,
    ExactMatrix,
    Scalar,
    char_poly,
    count_sign_changes,
    det,
    is_zero,
    value_part,
)
from metric_invariants.core.multiindex import MultiIndex, enumerate_indices
from metric_invariants.utils.serialization import (
    RATIONAL_SCHEMA,
    fraction_from_json,
    fraction_to_json,
    validate_document,
)

logger = logging.getLogger(__name__)


class BaseLabel(NamedTuple):
    i: int

    def __str__(self) -> str:
        return f"x{self.i}"


class FiberLabel(NamedTuple):
    j: int
    k: int
    alpha: MultiIndex

    def __str__(self) -> str:
        return f"y{self.j}{self.k}_{self.alpha}"


class VectorFieldLabel(NamedTuple):
    h: int
    beta: MultiIndex

    def __str__(self) -> str:
        return f"u{self.h}_{self.beta}"


RowLabel = Union[BaseLabel, FiberLabel]


def dim_metric_jet(n: int, r: int) -> int:
    return n + n * (n + 1) // 2 * math.comb(n + r, r)


def dim_vf_jet(n: int, s: int) -> int:
    return n * math.comb(n + s, s)


def symmetric_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((j, k) for j in range(n) for k in range(j, n))


@lru_cache(maxsize=None)
def fiber_layout(n: int, r: int) -> tuple[FiberLabel, ...]:
    alphas = enumerate_indices(n, r)
    return tuple(FiberLabel(j, k, alpha) for j, k in symmetric_pairs(n) for alpha in alphas)


@lru_cache(maxsize=None)
def _fiber_positions(n: int, r: int) -> dict[tuple[int, int, MultiIndex], int]:
    return {
        (label.j, label.k, label.alpha): pos
        for pos, label in enumerate(fiber_layout(n, r))
    }


@lru_cache(maxsize=None)
def layout(n: int, r: int) -> tuple[RowLabel, ...]:
    """Row labels of the prolongation matrix: base directions, then fiber."""
    return tuple(BaseLabel(i) for i in range(n)) + fiber_layout(n, r)


@lru_cache(maxsize=None)
def vf_layout(n: int, s: int) -> tuple[VectorFieldLabel, ...]:
    betas = enumerate_indices(n, s)
    return tuple(VectorFieldLabel(h, beta) for h in range(n) for beta in betas)


@lru_cache(maxsize=None)
def _vf_positions(n: int, s: int) -> dict[tuple[int, MultiIndex], int]:
    return {(label.h, label.beta): pos for pos, label in enumerate(vf_layout(n, s))}


def fiber_position(n: int, r: int, j: int, k: int, alpha: MultiIndex) -> int:
    if j > k:
        j, k = k, j
    try:
        return _fiber_positions(n, r)[(j, k, alpha)]
    except KeyError:
        raise OrderMismatchError(
            f"no coordinate y{j}{k}_{alpha} in the {r}-jet of dimension {n}"
        ) from None


def vf_position(n: int, s: int, h: int, beta: MultiIndex) -> int:
    try:
        return _vf_positions(n, s)[(h, beta)]
    except KeyError:
        raise OrderMismatchError(
            f"no coordinate u{h}_{beta} in the {s}-jet of dimension {n}"
        ) from None


def _as_multiindex(alpha: Any) -> MultiIndex:
    return alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))


@dataclass(frozen=True)
class MetricJetPoint:
    n: int
    r: int
    signature: tuple[int, int]
    values: tuple[Scalar, ...]

    def __post_init__(self):
        if self.n < 1 or self.r < 0:
            raise DimensionMismatchError(f"invalid jet space n={self.n}, r={self.r}")
        if sum(self.signature) != self.n or min(self.signature) < 0:
            raise DimensionMismatchError(
                f"signature {self.signature} does not split dimension {self.n}"
            )
        expected = dim_metric_jet(self.n, self.r) - self.n
        if len(self.values) != expected:
            raise DimensionMismatchError(
                f"{len(self.values)} fiber coordinates given, {expected} expected"
            )

    @classmethod
    def from_mapping(
        cls,
        n: int,
        r: int,
        coords: Mapping[tuple[int, int, Any], Any],
        signature: Optional[tuple[int, int]] = None,
    ) -> "MetricJetPoint":
        """Build a point from {(j, k, alpha): value}; unlisted coordinates are 0.

        When no signature is given it is computed from the 0-jet block.
        """
        values: list[Scalar] = [ZERO] * (dim_metric_jet(n, r) - n)
        for (j, k, alpha), value in coords.items():
            values[fiber_position(n, r, j, k, _as_multiindex(alpha))] = (
                value if isinstance(value, DualScalar) else Fraction(value)
            )
        if signature is None:
            signature = signature_of_block(_block_from_values(n, r, values))
        return cls(n, r, tuple(signature), tuple(values))

    @classmethod
    def from_metric(
        cls, g0: Sequence[Sequence[Any]], r: int = 0, signature: Optional[tuple[int, int]] = None
    ) -> "MetricJetPoint":
        n = len(g0)
        zero = MultiIndex.zero(n)
        return cls.from_mapping(
            n,
            r,
            {(j, k, zero): g0[j][k] for j, k in symmetric_pairs(n)},
            signature,
        )

    def y(self, j: int, k: int, alpha: Any) -> Scalar:
        return self.values[fiber_position(self.n, self.r, j, k, _as_multiindex(alpha))]

    def metric_block(self) -> list[list[Scalar]]:
        return _block_from_values(self.n, self.r, self.values)

    def coordinates(self) -> Iterable[tuple[FiberLabel, Scalar]]:
        return zip(fiber_layout(self.n, self.r), self.values)

    def truncate(self, r: int) -> "MetricJetPoint":
        if r > self.r:
            raise OrderMismatchError(f"cannot truncate a {self.r}-jet to order {r}")
        return MetricJetPoint(
            self.n,
            r,
            self.signature,
            tuple(self.y(lab.j, lab.k, lab.alpha) for lab in fiber_layout(self.n, r)),
        )

    def with_values(self, values: Sequence[Scalar]) -> "MetricJetPoint":
        return MetricJetPoint(self.n, self.r, self.signature, tuple(values))

    def dual_along(self, tangent: "TangentVector") -> "MetricJetPoint":
        """The point y + eps*dy; x moves along tangent.dx separately."""
        if tangent.n != self.n or tangent.r != self.r:
            raise DimensionMismatchError("tangent vector does not match the point")
        return self.with_values(
            tuple(
                DualScalar(value_part(y), value_part(dy))
                for y, dy in zip(self.values, tangent.dy)
            )
        )

    def shifted_along(self, m: int) -> "MetricJetPoint":
        """The (r-1)-jet at x + eps*e_m; derivative parts are d/dx_m of each coordinate."""
        if self.r < 1:
            raise OrderMismatchError("a 0-jet cannot be moved off its base point")
        return MetricJetPoint(
            self.n,
            self.r - 1,
            self.signature,
            tuple(
                DualScalar(
                    value_part(self.y(lab.j, lab.k, lab.alpha)),
                    value_part(self.y(lab.j, lab.k, lab.alpha.add_unit(m))),
                )
                for lab in fiber_layout(self.n, self.r - 1)
            ),
        )

    def check_metric(self) -> None:
        """Raises SingularMetricError unless the 0-jet is invertible with the declared signature."""
        if signature_of(self) != self.signature:
            raise SingularMetricError(
                f"0-jet signature {signature_of(self)} differs from declared {self.signature}"
            )

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "r": self.r,
            "signature": list(self.signature),
            "coords": [
                {
                    "j": label.j,
                    "k": label.k,
                    "alpha": list(label.alpha.exponents),
                    "value": fraction_to_json(value_part(value)),
                }
                for label, value in self.coordinates()
            ],
        }

    @classmethod
    def from_json(cls, document: Any) -> "MetricJetPoint":
        validate_document(document, POINT_SCHEMA, "metric jet point")
        n, r = document["n"], document["r"]
        coords: dict[tuple[int, int, MultiIndex], Fraction] = {}
        for item in document["coords"]:
            j, k = sorted((item["j"], item["k"]))
            alpha = tuple(item["alpha"])
            if max(j, k) >= n or len(alpha) != n or sum(alpha) > r:
                raise InvalidPointFileError(
                    f"coordinate y{j}{k}_{alpha} outside the {r}-jet of dimension {n}"
                )
            value = fraction_from_json(item["value"])
            key = (j, k, MultiIndex(alpha))
            if key in coords and coords[key] != value:
                raise InvalidPointFileError(f"conflicting values for y{j}{k}_{alpha}")
            coords[key] = value
        point = cls.from_mapping(n, r, coords, tuple(document["signature"]))
        try:
            point.check_metric()
        except SingularMetricError as exc:
            raise InvalidPointFileError(str(exc)) from exc
        return point


def _block_from_values(n: int, r: int, values: Sequence[Scalar]) -> list[list[Scalar]]:
    zero = MultiIndex.zero(n)
    return [
        [values[fiber_position(n, r, j, k, zero)] for k in range(n)] for j in range(n)
    ]


def signature_of_block(block: Sequence[Sequence[Any]]) -> tuple[int, int]:
    """(positive, negative) eigenvalue counts of a symmetric rational matrix.

    The characteristic polynomial of a symmetric matrix has only real roots,
    so Descartes' rule of signs counts them exactly.

    Raises:
        SingularMetricError: if the matrix is singular.
    """
    M = ExactMatrix.from_rows([[value_part(x) for x in row] for row in block])
    if det(M) == 0:
        raise SingularMetricError("0-jet block is singular")
    coeffs = char_poly(M)
    positive = count_sign_changes(coeffs)
    # chi(-t) flips the sign of odd-degree terms
    degree = len(coeffs) - 1
    mirrored = [c if (degree - idx) % 2 == 0 else -c for idx, c in enumerate(coeffs)]
    negative = count_sign_changes(mirrored)
    return positive, negative


def signature_of(point: MetricJetPoint) -> tuple[int, int]:
    return signature_of_block(point.metric_block())


@dataclass(frozen=True)
class VectorFieldJet:
    n: int
    s: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != dim_vf_jet(self.n, self.s):
            raise DimensionMismatchError(
                f"{len(self.values)} vector field coordinates given, "
                f"{dim_vf_jet(self.n, self.s)} expected"
            )

    @classmethod
    def zero(cls, n: int, s: int) -> "VectorFieldJet":
        return cls(n, s, (ZERO,) * dim_vf_jet(n, s))

    @classmethod
    def from_mapping(
        cls, n: int, s: int, coords: Mapping[tuple[int, Any], Any]
    ) -> "VectorFieldJet":
        values = [ZERO] * dim_vf_jet(n, s)
        for (h, beta), value in coords.items():
            values[vf_position(n, s, h, _as_multiindex(beta))] = Fraction(value)
        return cls(n, s, tuple(values))

    @classmethod
    def from_vector(cls, n: int, s: int, vector: Sequence[Any]) -> "VectorFieldJet":
        return cls(n, s, tuple(Fraction(v) for v in vector))

    def d(self, h: int, beta: Any) -> Fraction:
        return self.values[vf_position(self.n, self.s, h, _as_multiindex(beta))]

    def d_or_zero(self, h: int, beta: MultiIndex) -> Fraction:
        if beta.order > self.s:
            return ZERO
        return self.d(h, beta)

    def truncate(self, s: int) -> "VectorFieldJet":
        if s > self.s:
            raise OrderMismatchError(f"cannot truncate an {self.s}-jet to order {s}")
        return VectorFieldJet(
            self.n, s, tuple(self.d(lab.h, lab.beta) for lab in vf_layout(self.n, s))
        )

    def nonzero(self) -> dict[VectorFieldLabel, Fraction]:
        return {
            label: value
            for label, value in zip(vf_layout(self.n, self.s), self.values)
            if value != 0
        }

    def __add__(self, other: "VectorFieldJet") -> "VectorFieldJet":
        _check_same_vf(self, other)
        return VectorFieldJet(
            self.n, self.s, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def scaled(self, factor: Any) -> "VectorFieldJet":
        return VectorFieldJet(self.n, self.s, tuple(factor * v for v in self.values))

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "s": self.s,
            "coords": [
                {"h": label.h, "beta": list(label.beta.exponents), "value": fraction_to_json(v)}
                for label, v in zip(vf_layout(self.n, self.s), self.values)
            ],
        }

    @classmethod
    def from_json(cls, document: Any) -> "VectorFieldJet":
        validate_document(document, VF_JET_SCHEMA, "vector field jet")
        n, s = document["n"], document["s"]
        coords = {}
        for item in document["coords"]:
            beta = tuple(item["beta"])
            if item["h"] >= n or len(beta) != n or sum(beta) > s:
                raise InvalidPointFileError(
                    f"coordinate u{item['h']}_{beta} outside the {s}-jet of dimension {n}"
                )
            coords[(item["h"], MultiIndex(beta))] = fraction_from_json(item["value"])
        return cls.from_mapping(n, s, coords)


def _check_same_vf(a: VectorFieldJet, b: VectorFieldJet) -> None:
    if a.n != b.n or a.s != b.s:
        raise DimensionMismatchError("vector field jets of different shape")


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector of J^r at a point: dx components then dy components."""

    n: int
    r: int
    dx: tuple[Scalar, ...]
    dy: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.dx) != self.n or len(self.dy) != dim_metric_jet(self.n, self.r) - self.n:
            raise DimensionMismatchError("tangent vector component count mismatch")

    @classmethod
    def from_vector(cls, n: int, r: int, vector: Sequence[Scalar]) -> "TangentVector":
        return cls(n, r, tuple(vector[:n]), tuple(vector[n:]))

    @classmethod
    def zero(cls, n: int, r: int) -> "TangentVector":
        return cls(n, r, (ZERO,) * n, (ZERO,) * (dim_metric_jet(n, r) - n))

    def dy_at(self, j: int, k: int, alpha: Any) -> Scalar:
        return self.dy[fiber_position(self.n, self.r, j, k, _as_multiindex(alpha))]

    def as_vector(self) -> list[Scalar]:
        return list(self.dx) + list(self.dy)

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.as_vector())

    def nonzero(self) -> dict[RowLabel, Scalar]:
        return {
            label: c
            for label, c in zip(layout(self.n, self.r), self.as_vector())
            if not is_zero(c)
        }

    def truncate(self, r: int) -> "TangentVector":
        return TangentVector(
            self.n,
            r,
            self.dx,
            tuple(self.dy_at(lab.j, lab.k, lab.alpha) for lab in fiber_layout(self.n, r)),
        )

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector.from_vector(
            self.n, self.r, [a + b for a, b in zip(self.as_vector(), other.as_vector())]
        )

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector.from_vector(
            self.n, self.r, [a - b for a, b in zip(self.as_vector(), other.as_vector())]
        )

    def scaled(self, factor: Any) -> "TangentVector":
        return TangentVector.from_vector(
            self.n, self.r, [factor * c for c in self.as_vector()]
        )


_MULTI_INDEX_SCHEMA = {"type": "array", "items": {"type": "integer", "minimum": 0}}

POINT_SCHEMA = {
    "type": "object",
    "required": ["n", "r", "signature", "coords"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 0},
        "signature": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 2,
            "maxItems": 2,
        },
        "coords": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["j", "k", "alpha", "value"],
                "properties": {
                    "j": {"type": "integer", "minimum": 0},
                    "k": {"type": "integer", "minimum": 0},
                    "alpha": _MULTI_INDEX_SCHEMA,
                    "value": RATIONAL_SCHEMA,
                },
            },
        },
    },
}

VF_JET_SCHEMA = {
    "type": "object",
    "required": ["n", "s", "coords"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "s": {"type": "integer", "minimum": 0},
        "coords": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["h", "beta", "value"],
                "properties": {
                    "h": {"type": "integer", "minimum": 0},
                    "beta": _MULTI_INDEX_SCHEMA,
                    "value": RATIONAL_SCHEMA,
                },
            },
        },
    },
}
