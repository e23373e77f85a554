"""
Exact Sparse Linear Algebra

Thin layer over sympy's sparse domain matrices:
- Rows are dicts column → Fraction; each row is cleared to integers
- Fraction-free Gauss-Jordan via sdm_rref_den over ZZ
- Canonical kernels, ranks, span membership and linear solves
"""

from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices.sdm import sdm_rref_den

from src.supercore import IdentityViolationError

Vector = Dict[int, Fraction]


def _integer_row(row: Vector) -> Dict[int, int]:
    den = 1
    for c in row.values():
        den = lcm(den, Fraction(c).denominator)
    return {j: ZZ(int(Fraction(c) * den)) for j, c in row.items() if c}


def nnz(rows: Iterable[Vector]) -> int:
    return sum(len(r) for r in rows)


def rref(rows: Sequence[Vector]) -> Tuple[List[Vector], List[int]]:
    """
    Reduced row echelon form with pivots normalized to 1

    Pivot order is the lowest column index first, which makes the output a
    canonical basis of the row space.
    """
    matrix = {}
    for row in rows:
        int_row = _integer_row(row)
        if int_row:
            matrix[len(matrix)] = int_row
    if not matrix:
        return [], []
    reduced, den, pivots = sdm_rref_den(matrix, ZZ)
    den = int(den)
    out = []
    for i in range(len(pivots)):
        out.append({j: Fraction(int(c), den) for j, c in sorted(reduced[i].items())})
    return out, list(pivots)


def rank(rows: Sequence[Vector]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Vector], ncols: int) -> List[Vector]:
    """Basis of {x : row·x = 0 for every row}, one vector per free column."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = {free: Fraction(1)}
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                vec[p] = -c
        basis.append(dict(sorted(vec.items())))
    return basis


def canonical_basis(vectors: Sequence[Vector]) -> List[Vector]:
    """RREF basis of a span; identical for any spanning set of the same space."""
    return rref(vectors)[0]


def solve(columns: Sequence[Vector], target: Vector) -> Optional[List[Fraction]]:
    """
    Find x with Σ x_i columns[i] = target

    Returns:
        Coefficients (free variables set to zero) or None when target is not
        in the span
    """
    n = len(columns)
    coords = set(target)
    for col in columns:
        coords.update(col)
    rows = []
    for c in sorted(coords):
        row = {i: col[c] for i, col in enumerate(columns) if col.get(c)}
        if target.get(c):
            row[n] = target[c]
        if row:
            rows.append(row)
    reduced, pivots = rref(rows)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        x[p] = row.get(n, Fraction(0))
    return x


def in_span(vectors: Sequence[Vector], target: Vector) -> bool:
    if not any(target.values()):
        return True
    return solve(vectors, target) is not None


def mat_vec(matrix: Dict[int, Vector], vec: Vector) -> Vector:
    """(M·v) for M stored as row → {col: value}."""
    out: Vector = {}
    for r, row in matrix.items():
        s = sum((c * vec[j] for j, c in row.items() if j in vec), Fraction(0))
        if s:
            out[r] = s
    return out


class BudgetExceededError(RuntimeError):
    """Resource cap on stored nonzeros was hit"""

    def __init__(self, message: str, processed: int = 0, largest_block: int = 0):
        super().__init__(message)
        self.processed = processed
        self.largest_block = largest_block


class EchelonBasis:
    """
    Incrementally maintained echelon form of a growing span

    Each stored row is normalized to 1 at its pivot (its least column) and
    reduced against earlier pivots, so membership is a single reduction pass.
    """

    def __init__(self):
        self._rows: Dict[int, Vector] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Vector) -> Vector:
        out = {k: Fraction(c) for k, c in vec.items() if c}
        while out:
            for col in sorted(out):
                row = self._rows.get(col)
                if row is not None:
                    factor = out[col]
                    for k, c in row.items():
                        s = out.get(k, 0) - factor * c
                        if s:
                            out[k] = s
                        else:
                            out.pop(k, None)
                    break
            else:
                return out
        return out

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Vector) -> bool:
        """Insert vec; return False when it was already in the span."""
        rem = self.reduce(vec)
        if not rem:
            return False
        pivot = min(rem)
        lead = rem[pivot]
        self._rows[pivot] = {k: c / lead for k, c in rem.items()}
        return True


class SpanCoordinates:
    """
    Coordinates of vectors with respect to a fixed (independent) spanning list

    Gauss-Jordan on [vectors | identity] keeps the transformation that maps
    pivot readings back to coefficients on the original list.
    """

    def __init__(self, vectors: Sequence[Vector]):
        self.size = len(vectors)
        offset = 1 + max((k for v in vectors for k in v), default=-1)
        augmented = []
        for i, v in enumerate(vectors):
            row = dict(v)
            row[offset + i] = Fraction(1)
            augmented.append(row)
        reduced, pivots = rref(augmented)
        self._offset = offset
        self._pivots: List[int] = []
        self._transforms: List[Vector] = []
        self._rows: List[Vector] = []
        for row, p in zip(reduced, pivots):
            if p >= offset:
                raise IdentityViolationError("Spanning list is linearly dependent")
            self._pivots.append(p)
            self._rows.append({k: c for k, c in row.items() if k < offset})
            self._transforms.append({k - offset: c for k, c in row.items() if k >= offset})

    def coords(self, target: Vector) -> Optional[Vector]:
        """Coefficients x with Σ x_i v_i = target, or None if target is outside the span."""
        if any(k >= self._offset for k, c in target.items() if c):
            return None
        rem = {k: Fraction(c) for k, c in target.items() if c}
        result: Vector = {}
        for p, row, transform in zip(self._pivots, self._rows, self._transforms):
            y = rem.get(p)
            if not y:
                continue
            for k, c in row.items():
                s = rem.get(k, 0) - y * c
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
            for i, c in transform.items():
                s = result.get(i, 0) + y * c
                if s:
                    result[i] = s
                else:
                    result.pop(i, None)
        if rem:
            return None
        return result
