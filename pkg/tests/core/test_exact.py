import random
import unittest
from fractions import Fraction

import pytest

from metric_invariants.core.errors import (
    InconsistentSystemError,
    NonSquareMatrixError,
    PrimeDividesDenominatorError,
)
from metric_invariants.core.exact import (
    DualScalar,
    ExactMatrix,
    char_poly,
    det,
    determinant_generic,
    inverse_generic,
    is_squarefree,
    kernel_basis,
    prime_table,
    rank_exact,
    rank_mod_prime,
    solve_exact,
    to_fraction,
)


def _random_matrix(rng: random.Random, rows: int, cols: int, rank: int) -> ExactMatrix:
    """A rows x cols integer matrix of rank at most ``rank`` (exact rank for generic draws)."""
    left = [[rng.randint(-4, 4) for _ in range(rank)] for _ in range(rows)]
    right = [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rank)]
    return ExactMatrix.from_rows(
        [
            [sum(left[i][t] * right[t][j] for t in range(rank)) for j in range(cols)]
            for i in range(rows)
        ]
    )


class TestExactRank(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(7)

    def test_small_ranks(self):
        """Test the rank of proportional rows and of the identity."""
        self.assertEqual(rank_exact(ExactMatrix.from_rows([[1, 2], [2, 4]])), 1)
        self.assertEqual(rank_exact(ExactMatrix.identity(5)), 5)
        self.assertEqual(rank_exact(ExactMatrix.zeros(3, 4)), 0)

    def test_rational_entries(self):
        """Test that rows are cleared of denominators before elimination."""
        M = ExactMatrix.from_rows([["1/2", "1/3"], ["3/2", 1]])
        self.assertEqual(rank_exact(M), 1)

    def test_rank_plus_kernel_is_cols(self):
        """Test rank-nullity and that every kernel vector is annihilated."""
        for rows, cols, rank in [(4, 6, 3), (6, 4, 2), (5, 5, 5), (3, 7, 1)]:
            M = _random_matrix(self.rng, rows, cols, rank)
            basis = kernel_basis(M)
            self.assertEqual(rank_exact(M) + len(basis), cols)
            for v in basis:
                self.assertEqual(M.matvec(v), [0] * rows)

    def test_rank_invariant_under_permutation(self):
        """Test that row and column permutations keep the rank."""
        M = _random_matrix(self.rng, 6, 5, 3)
        rows = list(range(6))
        cols = list(range(5))
        self.rng.shuffle(rows)
        self.rng.shuffle(cols)
        expected = rank_exact(M)
        self.assertEqual(rank_exact(M.row_permuted(rows)), expected)
        self.assertEqual(rank_exact(M.col_permuted(cols)), expected)
        self.assertEqual(rank_exact(M.transpose()), expected)

    def test_modular_rank_agrees(self):
        """Test that large primes reproduce the exact rank."""
        primes = prime_table()[:3]
        for rank in range(1, 5):
            M = _random_matrix(self.rng, 5, 6, rank)
            exact = rank_exact(M)
            for p in primes:
                self.assertEqual(rank_mod_prime(M, p), exact)


def test_rank_mod_prime_examples():
    assert rank_mod_prime(ExactMatrix.identity(4), 101) == 4
    assert rank_mod_prime(ExactMatrix.from_rows([[2, 4], [1, 2]]), 99991) == 1
    assert rank_mod_prime(ExactMatrix.from_rows([[1, 0], [0, 101]]), 101) == 1


def test_rank_mod_prime_denominator():
    with pytest.raises(PrimeDividesDenominatorError) as info:
        rank_mod_prime(ExactMatrix.from_rows([[Fraction(1, 101)]]), 101)
    assert info.value.prime == 101


def test_prime_table_is_large():
    table = prime_table()
    assert len(table) == len(set(table))
    assert all(p > 2**50 for p in table)


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(3)) == []
    assert kernel_basis(ExactMatrix.from_rows([[1, 1]])) == [[-1, 1]]


def test_det():
    assert det(ExactMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert det(ExactMatrix.from_rows([[2, 0], [0, 3]])) == 6
    assert det(ExactMatrix.from_rows([["1/2", 1], [1, 4]])) == 1
    assert det(ExactMatrix.from_rows([[0, 2, 1], [1, 0, 0], [0, 0, 3]])) == -6
    assert det(ExactMatrix.from_rows([[1, 2], [2, 4]])) == 0
    with pytest.raises(NonSquareMatrixError):
        det(ExactMatrix.zeros(2, 3))


def test_det_matches_laplace_expansion():
    rng = random.Random(3)
    for size in range(1, 5):
        rows = [
            [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(size)]
            for _ in range(size)
        ]
        matrix = ExactMatrix.from_rows(rows)
        assert det(matrix) == matrix.det() == determinant_generic(rows)


def test_inverse_generic():
    rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert inverse_generic(rows) == [[1, -1], [-1, 2]]


def test_solve_exact():
    M = ExactMatrix.from_rows([[1, 1], [1, -1]])
    assert solve_exact(M, [3, 1]) == [2, 1]
    with pytest.raises(InconsistentSystemError):
        solve_exact(ExactMatrix.from_rows([[1, 1], [2, 2]]), [1, 3])


def test_char_poly():
    assert char_poly(ExactMatrix.diagonal([1, 2, 3])) == [1, -6, 11, -6]
    assert char_poly(ExactMatrix.from_rows([[0, 1], [-1, 0]])) == [1, 0, 1]
    with pytest.raises(NonSquareMatrixError):
        char_poly(ExactMatrix.zeros(1, 2))


def test_char_poly_evaluates_to_determinants():
    rng = random.Random(8)
    rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
    coeffs = char_poly(ExactMatrix.from_rows(rows))
    for t in range(-2, 3):
        shifted = [
            [(t if i == j else 0) - rows[i][j] for j in range(3)] for i in range(3)
        ]
        value = sum(c * t ** (3 - k) for k, c in enumerate(coeffs))
        assert value == determinant_generic(shifted)


def test_is_squarefree():
    assert is_squarefree(char_poly(ExactMatrix.diagonal([1, 2, 3])))
    assert not is_squarefree(char_poly(ExactMatrix.diagonal([1, 1])))
    assert is_squarefree(char_poly(ExactMatrix.from_rows([[0, 1], [-1, 0]])))


def test_dual_chain_rule():
    rng = random.Random(11)
    for _ in range(20):
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        p = [Fraction(rng.randint(-5, 5)) for _ in range(4)]
        q = [Fraction(rng.randint(-5, 5)) for _ in range(3)]

        def evaluate(coeffs, x):
            acc = 0 * x
            for c in coeffs:
                acc = acc * x + c
            return acc

        def derivative(coeffs, x):
            degree = len(coeffs) - 1
            return evaluate([c * (degree - k) for k, c in enumerate(coeffs[:-1])], x)

        out = evaluate(p, evaluate(q, DualScalar(a, b)))
        assert out.value == evaluate(p, evaluate(q, a))
        assert out.derivative == derivative(p, evaluate(q, a)) * derivative(q, a) * b


def test_dual_division():
    x = DualScalar(2, 1)
    quotient = DualScalar(1, 0) / x
    assert quotient == DualScalar(Fraction(1, 2), Fraction(-1, 4))
    with pytest.raises(ZeroDivisionError):
        x / DualScalar(0, 1)


def test_fractions_stay_reduced():
    value = Fraction(6, 4) + Fraction(1, 4)
    assert (value.numerator, value.denominator) == (7, 4)
    assert Fraction(0, 5).denominator == 1


def test_floats_rejected():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction("3/6") == Fraction(1, 2)
