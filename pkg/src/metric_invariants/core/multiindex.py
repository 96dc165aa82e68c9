"""Multi-index arithmetic for jet coordinates.

Enumeration order is graded lexicographic: indices are grouped by total
order and, within one order, sorted so that earlier directions carry the
larger exponents, e.g. (2,0), (1,1), (0,2). Every matrix layout in the
package is derived from this order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from metric_invariants.core.errors import (
    DirectionOutOfRangeError,
    LengthMismatchError,
    NotDominatedError,
)


@dataclass(frozen=True, order=False)
class MultiIndex:
    """An immutable tuple of per-direction derivative orders."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) < 1:
            raise LengthMismatchError("a multi-index needs at least one slot")
        if any(e < 0 for e in self.exponents):
            raise ValueError(f"negative exponent in {self.exponents}")

    @classmethod
    def of(cls, *exponents: int) -> "MultiIndex":
        return cls(tuple(exponents))

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int) -> "MultiIndex":
        """The unit index (i), with 0 <= i < n."""
        return cls.zero(n).add_unit(i)

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return sum(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self) -> Iterator[int]:
        return iter(self.exponents)

    def __getitem__(self, t: int) -> int:
        return self.exponents[t]

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.exponents) + ")"

    def add_unit(self, i: int) -> "MultiIndex":
        if not 0 <= i < self.n:
            raise DirectionOutOfRangeError(
                f"direction {i} out of range for dimension {self.n}"
            )
        exps = list(self.exponents)
        exps[i] += 1
        return MultiIndex(tuple(exps))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        _check_lengths(self, other)
        return MultiIndex(tuple(a + b for a, b in zip(self, other)))

    def dominates(self, other: "MultiIndex") -> bool:
        """True when other <= self componentwise."""
        _check_lengths(self, other)
        return all(b <= a for a, b in zip(self, other))

    def sub_checked(self, other: "MultiIndex") -> Optional["MultiIndex"]:
        return sub_checked(self, other)

    def factorial(self) -> int:
        return math.prod(math.factorial(e) for e in self.exponents)

    def rank(self) -> int:
        return rank(self)


def _check_lengths(alpha: MultiIndex, beta: MultiIndex) -> None:
    if len(alpha) != len(beta):
        raise LengthMismatchError(
            f"multi-index lengths differ: {len(alpha)} != {len(beta)}"
        )


def add_unit(alpha: MultiIndex, i: int) -> MultiIndex:
    return alpha.add_unit(i)


def sub_checked(alpha: MultiIndex, beta: MultiIndex) -> Optional[MultiIndex]:
    """Return alpha - beta, or None when beta is not dominated by alpha."""
    _check_lengths(alpha, beta)
    if not alpha.dominates(beta):
        return None
    return MultiIndex(tuple(a - b for a, b in zip(alpha, beta)))


def binomial(alpha: MultiIndex, beta: MultiIndex) -> int:
    _check_lengths(alpha, beta)
    if not alpha.dominates(beta):
        raise NotDominatedError(f"{beta} is not <= {alpha}")
    return math.prod(math.comb(a, b) for a, b in zip(alpha, beta))


def _compositions(n: int, total: int) -> Iterator[tuple[int, ...]]:
    # first slot descending gives (2,0),(1,1),(0,2)
    if n == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(n - 1, total - head):
            yield (head,) + tail


@lru_cache(maxsize=None)
def enumerate_indices(n: int, r: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of length n and order <= r, graded-lex."""
    if n < 1 or r < 0:
        raise ValueError(f"invalid enumeration bounds n={n}, r={r}")
    return tuple(
        MultiIndex(exps) for order in range(r + 1) for exps in _compositions(n, order)
    )


@lru_cache(maxsize=None)
def _positions(n: int, r: int) -> dict[MultiIndex, int]:
    return {alpha: pos for pos, alpha in enumerate(enumerate_indices(n, r))}


def count_indices(n: int, r: int) -> int:
    return math.comb(n + r, r)


def rank(alpha: MultiIndex) -> int:
    """Position of alpha in the graded-lex enumeration (independent of r)."""
    return _positions(alpha.n, alpha.order)[alpha]


def unrank(n: int, position: int) -> MultiIndex:
    if position < 0:
        raise ValueError(f"negative position {position}")
    r = 0
    while count_indices(n, r) <= position:
        r += 1
    return enumerate_indices(n, r)[position]
