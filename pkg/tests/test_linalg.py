#!/usr/bin/env python3
"""
Test suites for exact sparse linear algebra

The sympy dense Matrix serves as an independent oracle for ranks and kernels.
"""

import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from src.linalg import (
    EchelonBasis,
    SpanCoordinates,
    canonical_basis,
    in_span,
    mat_vec,
    nullspace,
    rank,
    rref,
    solve,
)
from src.supercore import IdentityViolationError
from tests.utils import dense_matrix

sparse_rows = st.lists(
    st.dictionaries(st.integers(0, 5), st.fractions(min_value=-4, max_value=4, max_denominator=3), max_size=4),
    max_size=6,
)


class TestRref(unittest.TestCase):
    """Row reduction over the rationals"""

    def test_pivots_are_normalized(self):
        """Every pivot entry is 1 and pivot columns are cleared elsewhere"""
        rows = [{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 2: Fraction(3)}]
        reduced, pivots = rref(rows)
        self.assertEqual(pivots, [0, 1])
        self.assertEqual(reduced[0], {0: 1, 2: 3})
        self.assertEqual(reduced[1], {1: 1, 2: Fraction(-3, 2)})

    def test_empty_input(self):
        """No rows gives no pivots"""
        self.assertEqual(rref([]), ([], []))
        self.assertEqual(rref([{}]), ([], []))

    def test_canonical_basis_ignores_spanning_set(self):
        """Two spanning sets of the same space give the same basis"""
        a = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}]
        b = [{0: Fraction(3)}, {0: Fraction(1), 1: Fraction(-2)}, {1: Fraction(5)}]
        self.assertEqual(canonical_basis(a), canonical_basis(b))

    @settings(max_examples=60, deadline=None)
    @given(sparse_rows)
    def test_rank_matches_dense_oracle(self, rows):
        """rank agrees with sympy's dense rank"""
        self.assertEqual(rank(rows), dense_matrix(rows, 6).rank())

    @settings(max_examples=60, deadline=None)
    @given(sparse_rows)
    def test_nullspace_is_annihilated(self, rows):
        """Each kernel vector is killed by every row and the dimension matches the oracle"""
        kernel = nullspace(rows, 6)
        self.assertEqual(len(kernel), 6 - dense_matrix(rows, 6).rank())
        for vec in kernel:
            for row in rows:
                self.assertEqual(sum((c * vec.get(j, 0) for j, c in row.items()), Fraction(0)), 0)


class TestSolve(unittest.TestCase):
    """Linear systems and span membership"""

    def test_solve_and_reject(self):
        """Targets in the span are solved, others return None"""
        cols = [{0: Fraction(1)}, {1: Fraction(1)}]
        self.assertEqual(solve(cols, {0: Fraction(2), 1: Fraction(-1)}), [2, -1])
        self.assertIsNone(solve(cols, {2: Fraction(1)}))
        self.assertTrue(in_span(cols, {}))
        self.assertFalse(in_span(cols, {2: Fraction(1)}))

    def test_mat_vec(self):
        """Row-major sparse product"""
        matrix = {0: {0: Fraction(1), 1: Fraction(2)}, 1: {1: Fraction(3)}}
        self.assertEqual(mat_vec(matrix, {1: Fraction(1)}), {0: 2, 1: 3})


class TestEchelonBasis(unittest.TestCase):
    """Incremental independence tracking"""

    def test_dependent_vectors_are_rejected(self):
        """add returns False for a vector already in the span"""
        basis = EchelonBasis()
        self.assertTrue(basis.add({0: Fraction(1), 1: Fraction(1)}))
        self.assertTrue(basis.add({1: Fraction(2)}))
        self.assertFalse(basis.add({0: Fraction(3)}))
        self.assertEqual(len(basis), 2)
        self.assertTrue(basis.contains({0: Fraction(1), 1: Fraction(-1)}))


class TestSpanCoordinates(unittest.TestCase):
    """Coordinates with respect to a fixed independent list"""

    def test_coordinates(self):
        """Coefficients reproduce the target"""
        coords = SpanCoordinates([{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}])
        self.assertEqual(coords.coords({0: Fraction(2), 1: Fraction(5)}), {0: 2, 1: 3})
        self.assertIsNone(coords.coords({2: Fraction(1)}))

    def test_dependent_list_raises(self):
        """A dependent spanning list has no unique coordinates"""
        with self.assertRaises(IdentityViolationError):
            SpanCoordinates([{0: Fraction(1)}, {0: Fraction(2)}])


if __name__ == "__main__":
    unittest.main()
