"""Utility helpers for test suites."""

from fractions import Fraction
from typing import List, Sequence

from sympy import Matrix, Rational

from src.lie import ModuleAction
from src.linalg import Vector
from src.solver import PolySpaceBasis, derivation_matrix
from src.supercore import SuperPoly, VarTable, random_homogeneous


def random_poly(table: VarTable, degree: int, parity: int, seed: int) -> SuperPoly:
    """Reproducible homogeneous element; zero when no monomial fits."""
    try:
        return random_homogeneous(table, degree, parity, seed)
    except ValueError:
        return SuperPoly.zero(table)


def dense_matrix(rows: Sequence[Vector], ncols: int) -> Matrix:
    """sympy Matrix with exact Rational entries from sparse rows."""
    if not rows:
        return Matrix.zeros(0, ncols)
    def entry(value) -> Rational:
        value = Fraction(value)
        return Rational(value.numerator, value.denominator)

    return Matrix([[entry(row.get(j, 0)) for j in range(ncols)] for row in rows])


def dense_invariant_dim(action: ModuleAction, d: int) -> int:
    """Kernel dimension of the stacked derivation matrices for every basis element, via sympy."""
    basis = PolySpaceBasis(action, d)
    rows: List[Vector] = []
    for gamma in range(action.algebra.dim):
        rows.extend(derivation_matrix(action, d, gamma, basis).values())
    if not rows:
        return len(basis)
    return len(dense_matrix(rows, len(basis)).nullspace())


def dense_invariant_basis(action: ModuleAction, d: int) -> List[str]:
    """Reduced row echelon basis of the dense kernel, as polynomial text, via sympy."""
    basis = PolySpaceBasis(action, d)
    rows: List[Vector] = []
    for gamma in range(action.algebra.dim):
        rows.extend(derivation_matrix(action, d, gamma, basis).values())
    if not rows:
        kernel = Matrix.eye(len(basis))
    else:
        columns = dense_matrix(rows, len(basis)).nullspace()
        if not columns:
            return []
        kernel = Matrix.hstack(*columns).T
    reduced, pivots = kernel.rref()
    out = []
    for i in range(len(pivots)):
        vec = {
            j: Fraction(int(c.p), int(c.q)) for j, c in enumerate(reduced.row(i)) if c != 0
        }
        out.append(basis.to_poly(vec).to_text())
    return out
