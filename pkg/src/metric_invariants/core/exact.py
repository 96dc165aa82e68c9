"""Exact scalars and dense exact linear algebra.

Rationals are ``fractions.Fraction``. ``DualScalar`` carries a first-order
infinitesimal part for exact directional derivatives. ``ExactMatrix`` is an
immutable dense row-major matrix of rationals; every elimination below works
on a private copy of its entries.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Iterable, Optional, Sequence, Union

import sympy

from metric_invariants.core.errors import (
    DimensionMismatchError,
    InconsistentSystemError,
    NonSquareMatrixError,
    PrimeDividesDenominatorError,
    SingularMetricError,
)
from metric_invariants.utils.constants import PRIME_BIT_SIZES, PRIMES_PER_BIT_SIZE

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction, "DualScalar"]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class DualScalar:
    """Dual number value + derivative*eps with eps**2 = 0, over the rationals."""

    value: Fraction
    derivative: Fraction = ZERO

    def __post_init__(self):
        if type(self.value) is not Fraction:
            object.__setattr__(self, "value", Fraction(self.value))
        if type(self.derivative) is not Fraction:
            object.__setattr__(self, "derivative", Fraction(self.derivative))

    @staticmethod
    def coerce(other: Any) -> "DualScalar":
        if isinstance(other, DualScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return DualScalar(Fraction(other), ZERO)
        raise TypeError(f"cannot combine DualScalar with {type(other).__name__}")

    def __add__(self, other: Any) -> "DualScalar":
        try:
            o = DualScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return DualScalar(self.value + o.value, self.derivative + o.derivative)

    __radd__ = __add__

    def __neg__(self) -> "DualScalar":
        return DualScalar(-self.value, -self.derivative)

    def __sub__(self, other: Any) -> "DualScalar":
        try:
            o = DualScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return DualScalar(self.value - o.value, self.derivative - o.derivative)

    def __rsub__(self, other: Any) -> "DualScalar":
        try:
            o = DualScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> "DualScalar":
        try:
            o = DualScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return DualScalar(
            self.value * o.value,
            self.value * o.derivative + self.derivative * o.value,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "DualScalar":
        try:
            o = DualScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError(
                "DualScalar division by a divisor with zero value part"
            )
        return DualScalar(
            self.value / o.value,
            (self.derivative * o.value - self.value * o.derivative)
            / (o.value * o.value),
        )

    def __rtruediv__(self, other: Any) -> "DualScalar":
        try:
            o = DualScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> "DualScalar":
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = DualScalar(ONE)
        for _ in range(exponent):
            result = result * self
        return result

    def __repr__(self) -> str:
        return f"{self.value} + {self.derivative}ε"


def value_part(x: Scalar) -> Fraction:
    return x.value if isinstance(x, DualScalar) else Fraction(x)


def derivative_part(x: Scalar) -> Fraction:
    return x.derivative if isinstance(x, DualScalar) else ZERO


def is_invertible(x: Scalar) -> bool:
    return value_part(x) != 0


def is_zero(x: Scalar) -> bool:
    if isinstance(x, DualScalar):
        return x.value == 0 and x.derivative == 0
    return x == 0


def to_fraction(value: Any) -> Fraction:
    """Parse ints, Fractions and "p/q" strings; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "ExactMatrix":
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(
            len(rows), width, tuple(to_fraction(x) for row in rows for x in row)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> "ExactMatrix":
        return cls.from_rows(
            [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
        )

    @classmethod
    def diagonal(cls, values: Sequence[Any]) -> "ExactMatrix":
        size = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(size)] for i in range(size)]
        )

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def get(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols,
            self.rows,
            tuple(self.get(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def matvec(self, vector: Sequence[Any]) -> list[Any]:
        if len(vector) != self.cols:
            raise DimensionMismatchError(
                f"vector of length {len(vector)} for {self.cols} columns"
            )
        result = []
        for i in range(self.rows):
            acc: Any = ZERO
            for a, v in zip(self.row(i), vector):
                if a:
                    acc = acc + a * v
            result.append(acc)
        return result

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError("inner dimensions differ")
        cols = [other.column(j) for j in range(other.cols)]
        return ExactMatrix.from_rows(
            [
                [sum((a * b for a, b in zip(self.row(i), col)), ZERO) for col in cols]
                for i in range(self.rows)
            ]
        )

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.get(i, j) for i in range(self.rows))

    def row_permuted(self, perm: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix.from_rows([self.row(p) for p in perm])

    def col_permuted(self, perm: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix.from_rows(
            [[row[p] for p in perm] for row in self.to_rows()]
        )

    def rank(self) -> int:
        return rank_exact(self)

    def det(self) -> Fraction:
        return det(self)


def _integer_rows(M: ExactMatrix) -> list[list[int]]:
    out = []
    for i in range(M.rows):
        row = M.row(i)
        scale = reduce(math.lcm, (x.denominator for x in row), 1)
        out.append([int(x * scale) for x in row])
    return out


def _bareiss(
    rows: list[list[int]], ncols: int, order: Optional[list[int]] = None
) -> tuple[int, int]:
    """Fraction-free elimination in place, first-nonzero pivoting.

    Returns (rank, last pivot). For a square matrix of full rank the last
    pivot is the determinant of the row-permuted matrix; row swaps are
    mirrored into ``order`` when it is given.
    """
    nrows = len(rows)
    prev = 1
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((i for i in range(rank, nrows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            if order is not None:
                order[rank], order[pivot] = order[pivot], order[rank]
        prow = rows[rank]
        pv = prow[col]
        for i in range(rank + 1, nrows):
            row = rows[i]
            f = row[col]
            if f == 0:
                row[col + 1 :] = [(pv * a) // prev for a in row[col + 1 :]]
            else:
                row[col + 1 :] = [
                    (pv * a - f * b) // prev
                    for a, b in zip(row[col + 1 :], prow[col + 1 :])
                ]
                row[col] = 0
        prev = pv
        rank += 1
    return rank, prev


def rank_exact(M: ExactMatrix) -> int:
    """Exact rank over the rationals by Bareiss elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    rank, _ = _bareiss(_integer_rows(M), M.cols)
    return rank


def det(M: ExactMatrix) -> Fraction:
    if not M.is_square:
        raise NonSquareMatrixError(f"det of a {M.rows}x{M.cols} matrix")
    if M.rows == 0:
        return ONE
    scale = 1
    for i in range(M.rows):
        scale *= reduce(math.lcm, (x.denominator for x in M.row(i)), 1)
    order = list(range(M.rows))
    rank, last = _bareiss(_integer_rows(M), M.cols, order)
    if rank < M.rows:
        return ZERO
    return Fraction(_permutation_sign(order) * last, scale)


def _permutation_sign(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _rref(M: ExactMatrix) -> tuple[list[list[Fraction]], list[int]]:
    rows = M.to_rows()
    pivot_cols: list[int] = []
    rank = 0
    for col in range(M.cols):
        pivot = next((i for i in range(rank, M.rows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        prow = rows[rank]
        for i in range(M.rows):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivot_cols.append(col)
        rank += 1
        if rank == M.rows:
            break
    return rows[:rank], pivot_cols


def kernel_basis(M: ExactMatrix) -> list[list[Fraction]]:
    """Basis of the right null space; one vector per free column."""
    reduced, pivot_cols = _rref(M)
    pivots = set(pivot_cols)
    basis = []
    for free in range(M.cols):
        if free in pivots:
            continue
        v = [ZERO] * M.cols
        v[free] = ONE
        for row, pc in zip(reduced, pivot_cols):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def solve_exact(M: ExactMatrix, b: Sequence[Any]) -> list[Fraction]:
    """A particular solution of Mx = b with every free variable set to zero.

    Raises:
        InconsistentSystemError: if the system has no solution.
    """
    if len(b) != M.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)}")
    augmented = ExactMatrix.from_rows(
        [list(M.row(i)) + [to_fraction(b[i])] for i in range(M.rows)]
    )
    reduced, pivot_cols = _rref(augmented)
    if pivot_cols and pivot_cols[-1] == M.cols:
        raise InconsistentSystemError("linear system has no solution")
    x = [ZERO] * M.cols
    for row, pc in zip(reduced, pivot_cols):
        x[pc] = row[M.cols]
    return x


def _rational(x: Any) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def char_poly(M: ExactMatrix) -> list[Fraction]:
    """Characteristic polynomial det(tI - M), highest degree first."""
    if not M.is_square:
        raise NonSquareMatrixError(f"char_poly of a {M.rows}x{M.cols} matrix")
    if M.rows == 0:
        return [ONE]
    matrix = sympy.Matrix([[_rational(x) for x in row] for row in M.to_rows()])
    poly = matrix.charpoly(sympy.Symbol("t"))
    return [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]


def _to_sympy_poly(coeffs: Sequence[Fraction]) -> sympy.Poly:
    t = sympy.Symbol("t")
    return sympy.Poly(
        [_rational(c) for c in coeffs],
        t,
        domain=sympy.QQ,
    )


def is_squarefree(coeffs: Sequence[Fraction]) -> bool:
    """True iff gcd(p, p') is constant, i.e. all complex roots are simple."""
    poly = _to_sympy_poly(coeffs)
    if poly.degree() <= 0:
        return True
    return sympy.gcd(poly, poly.diff()).degree() == 0


def count_sign_changes(coeffs: Iterable[Fraction]) -> int:
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def determinant_generic(rows: Sequence[Sequence[Scalar]]) -> Scalar:
    """Determinant over any commutative ring by Laplace expansion.

    Minors are memoised by column subset, so the cost is O(n 2^n) ring
    operations; intended for metric blocks, not for the prolongation matrix.
    """
    size = len(rows)
    if size == 0:
        return ONE

    @lru_cache(maxsize=None)
    def minor(start_row: int, cols: tuple[int, ...]) -> Scalar:
        if start_row == size - 1:
            return rows[start_row][cols[0]]
        acc: Scalar = ZERO
        for pos, c in enumerate(cols):
            entry = rows[start_row][c]
            if is_zero(entry):
                continue
            sub = minor(start_row + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    return minor(0, tuple(range(size)))


def inverse_generic(rows: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Gauss-Jordan inverse; pivots are chosen by nonzero value part.

    Raises:
        SingularMetricError: if the value part of the matrix is singular.
    """
    size = len(rows)
    work: list[list[Scalar]] = [
        list(row) + [ONE if i == j else ZERO for j in range(size)]
        for i, row in enumerate(rows)
    ]
    for col in range(size):
        pivot = next((i for i in range(col, size) if is_invertible(work[i][col])), None)
        if pivot is None:
            raise SingularMetricError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        prow = work[col]
        for i in range(size):
            if i != col and not is_zero(work[i][col]):
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
    return [row[size:] for row in work]


@lru_cache(maxsize=1)
def prime_table() -> tuple[int, ...]:
    """The largest primes just below each configured bit size."""
    primes: list[int] = []
    for bits in PRIME_BIT_SIZES:
        p = 2**bits
        for _ in range(PRIMES_PER_BIT_SIZE):
            p = int(sympy.prevprime(p))
            primes.append(p)
    return tuple(primes)


def draw_prime(rng: random.Random) -> int:
    return rng.choice(prime_table())


def _reduce_mod(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise PrimeDividesDenominatorError(p)
    return (x.numerator * pow(x.denominator, -1, p)) % p


def rank_mod_prime(M: ExactMatrix, p: int) -> int:
    """Rank of M reduced modulo the prime p.

    Raises:
        PrimeDividesDenominatorError: if some denominator vanishes mod p.
    """
    rows = [[_reduce_mod(x, p) for x in M.row(i)] for i in range(M.rows)]
    rows = [row for row in rows if any(row)]
    rank = 0
    for col in range(M.cols):
        if rank == len(rows):
            break
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        prow = [(a * inv) % p for a in rows[rank][col:]]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i][col:] = [(a - f * b) % p for a, b in zip(rows[i][col:], prow)]
        rank += 1
        if rank == M.cols:
            break
    return rank
