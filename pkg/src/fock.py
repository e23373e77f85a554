"""
Fock Representation and Traces

Matrix realization of the Clifford superalgebra on the Grassmann algebra in
ξ₁..ξₙ (ξ̂ᵢ acts by left multiplication, η̂ᵢ by ħ∂/∂ξᵢ), graded supermatrices
with the supertrace, and the moments s_k = str(Q(f)^k) / qtr(Q(f)^k) of the
generic element.
"""

import threading
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.clifford import (
    EMPTY_TABLE,
    CliffordElement,
    Q,
    cliff_mul,
    odd_structure_element,
    qtr,
    theta_word,
)
from src.hpoly import HPoly, lowest_component
from src.linalg import BudgetExceededError
from src.poisson import generic_element
from src.supercore import SuperPoly, VarTable, popcount

__all__ = [
    "FockRep",
    "SuperMatrix",
    "abstract_supertrace",
    "fock_matrix",
    "generic_element",
    "lowest_component",
    "moment",
    "moment_sequence",
    "odd_trace",
    "qtr_matrix_constant",
    "supertrace",
    "top_word_supertrace",
]


class FockRep:
    """Grassmann monomials in ξ₁..ξₙ, graded by parity, basis vector 1 first"""

    def __init__(self, n: int):
        if n < 0:
            raise ValueError(f"n must be nonnegative, got {n}")
        self.n = n
        self.basis: Tuple[int, ...] = tuple(
            sorted(range(1 << n), key=lambda k: (popcount(k), [i for i in range(n) if k >> i & 1]))
        )
        self.index = {mask: i for i, mask in enumerate(self.basis)}
        self.grades: Tuple[int, ...] = tuple(popcount(mask) % 2 for mask in self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def word_action(self, I: int, J: int) -> Dict[int, Tuple[int, int, int]]:
        return _word_action(self.n, I, J)


@lru_cache(maxsize=None)
def _word_action(n: int, I: int, J: int) -> Dict[int, Tuple[int, int, int]]:
    """Column j ↦ (row, sign, ħ-power) for ρ(ξ̂_I η̂_J); words act as monomial matrices."""
    rep_basis = sorted(range(1 << n), key=lambda k: (popcount(k), [i for i in range(n) if k >> i & 1]))
    index = {mask: i for i, mask in enumerate(rep_basis)}
    j_order = [j for j in range(n) if J >> j & 1][::-1]
    i_order = [i for i in range(n) if I >> i & 1][::-1]
    out = {}
    for col, K in enumerate(rep_basis):
        sign, power, state = 1, 0, K
        for j in j_order:
            if not state >> j & 1:
                state = None
                break
            if popcount(state & ((1 << j) - 1)) & 1:
                sign = -sign
            state ^= 1 << j
            power += 1
        if state is None:
            continue
        for i in i_order:
            if state >> i & 1:
                state = None
                break
            if popcount(state & ((1 << i) - 1)) & 1:
                sign = -sign
            state |= 1 << i
        if state is None:
            continue
        out[col] = (index[state], sign, power)
    return out


class SuperMatrix:
    """Square graded matrix with HPoly entries over a supercommutative ring"""

    def __init__(self, grades: Sequence[int], table: VarTable, entries: Optional[Dict[Tuple[int, int], HPoly]] = None):
        self.grades = tuple(grades)
        self.table = table
        self.entries: Dict[Tuple[int, int], HPoly] = {
            key: v for key, v in (entries or {}).items() if v
        }

    @classmethod
    def identity(cls, grades: Sequence[int], table: VarTable = EMPTY_TABLE) -> "SuperMatrix":
        return cls(grades, table, {(i, i): HPoly.constant(table, 1) for i in range(len(grades))})

    @property
    def size(self) -> int:
        return len(self.grades)

    def entry(self, i: int, j: int) -> HPoly:
        return self.entries.get((i, j), HPoly.zero(self.table))

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out[key] + v if key in out else v
        return SuperMatrix(self.grades, self.table, out)

    def __neg__(self):
        return SuperMatrix(self.grades, self.table, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.grades != other.grades or self.table != other.table:
            raise ValueError("Supermatrix shapes or coefficient rings differ")
        rows_b: Dict[int, List[Tuple[int, HPoly]]] = {}
        for (k, j), v in other.entries.items():
            rows_b.setdefault(k, []).append((j, v))
        out: Dict[Tuple[int, int], HPoly] = {}
        for (i, k), u in self.entries.items():
            for j, v in rows_b.get(k, ()):
                p = u * v
                if p:
                    out[(i, j)] = out[(i, j)] + p if (i, j) in out else p
        return SuperMatrix(self.grades, self.table, out)

    def supercommutator(self, other: "SuperMatrix", sign: int) -> "SuperMatrix":
        """AB − sign·BA, sign = (−1)^{p(A)p(B)} supplied by the caller."""
        ab, ba = self @ other, other @ self
        return ab - ba if sign > 0 else ab + ba

    def supertrace(self) -> HPoly:
        total = HPoly.zero(self.table)
        for i, g in enumerate(self.grades):
            v = self.entries.get((i, i))
            if v:
                total = total - v if g else total + v
        return total

    def nnz(self) -> int:
        return sum(len(list(v.items())) for v in self.entries.values())

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.grades == other.grades and self.table == other.table and self.entries == other.entries

    def __repr__(self):
        return f"SuperMatrix(size={self.size}, nnz={len(self.entries)})"


def fock_matrix(x: CliffordElement, rep: FockRep) -> SuperMatrix:
    """
    Matrix of x in the Fock representation

    A coefficient a in front of ρ(w) enters row i with the sign (−1)^{p(a)|i|}.

    Raises:
        ValueError: If x and rep have different n
    """
    if x.n != rep.n:
        raise ValueError(f"Element has n={x.n}, representation has n={rep.n}")
    entries: Dict[Tuple[int, int], HPoly] = {}
    for (I, J), coeff in x.items():
        even, odd = coeff.parity_parts()
        for col, (row, sign, power) in rep.word_action(I, J).items():
            a = even - odd if rep.grades[row] else even + odd
            term = a.shift(power).scale(sign)
            key = (row, col)
            entries[key] = entries[key] + term if key in entries else term
    return SuperMatrix(rep.grades, x.table, entries)


def supertrace(X: SuperMatrix) -> HPoly:
    """str X = Σᵢ (−1)^{|i|} Xᵢᵢ."""
    return X.supertrace()


@lru_cache(maxsize=None)
def top_word_supertrace(n: int) -> HPoly:
    """str ρ(ξ̂₁⋯ξ̂ₙη̂₁⋯η̂ₙ); the only word with nonzero supertrace."""
    full = (1 << n) - 1
    return supertrace(fock_matrix(CliffordElement.word(n, full, full), FockRep(n)))


def abstract_supertrace(x: CliffordElement) -> HPoly:
    """str∘ρ from the top-word coefficient alone (cross-check for the Fock route)."""
    n = x.n
    full = (1 << n) - 1
    coeff = x.coefficient((full, full))
    even, odd = coeff.parity_parts()
    twisted = even - odd if n % 2 else even + odd
    constant = top_word_supertrace(n)
    if x.table != EMPTY_TABLE:
        constant = HPoly(x.table, {k: SuperPoly.constant(x.table, p.constant_term()) for k, p in constant.items()})
    return twisted * constant


def odd_trace(x: CliffordElement, rep: FockRep) -> HPoly:
    """str(ρ(J)·ρ(x)); an odd trace proportional to qtr."""
    J = fock_matrix(odd_structure_element(rep.n), rep)
    if x.table != EMPTY_TABLE:
        raise ValueError("odd_trace expects numeric coefficients")
    return supertrace(J @ fock_matrix(x, rep))


@lru_cache(maxsize=None)
def qtr_matrix_constant(n: int) -> HPoly:
    """κ with str(ρ(J)ρ(x)) = κ·qtr(x); evaluated on the top blade."""
    top = (1 << (2 * n - 1)) - 1
    return odd_trace(theta_word(n, top), FockRep(n))


class _MomentCache:
    """Per-m running power of the generic element and the traces computed so far"""

    def __init__(self):
        self._lock = threading.Lock()
        self._state: Dict[int, Tuple[object, object, List[HPoly]]] = {}

    def get(self, m: int, k: int, budget: Optional[int] = None) -> List[HPoly]:
        with self._lock:
            if m not in self._state:
                f, symbols = generic_element(m)
                x = Q(f, symbols)
                base = fock_matrix(x, FockRep(m // 2)) if m % 2 == 0 else x
                self._state[m] = (base, None, [])
            base, power, traces = self._state[m]
            while len(traces) < k:
                step = len(traces) + 1
                if power is None:
                    power = base
                elif m % 2 == 0:
                    power = power @ base
                else:
                    power = cliff_mul(power, base)
                size = _size(power)
                if budget is not None and size > budget:
                    raise BudgetExceededError(
                        f"Moment power {step} for m={m} exceeds budget",
                        processed=step - 1,
                        largest_block=size,
                    )
                traces.append(supertrace(power) if m % 2 == 0 else qtr(power))
                self._state[m] = (base, power, traces)
            return list(traces[:k])


def _size(power) -> int:
    if isinstance(power, SuperMatrix):
        return power.nnz()
    return sum(len(list(c.items())) for _, c in power.items())


_moments = _MomentCache()


def moment_sequence(m: int, k_max: int, budget: Optional[int] = None) -> List[HPoly]:
    """
    [s_1, …, s_{k_max}] for the generic element of po(0|m)

    Even m: s_k = str(ρ(Q(f))^k); odd m: s_k = qtr(Q(f)^k).

    Raises:
        BudgetExceededError: If an intermediate power exceeds budget nonzeros
    """
    if k_max < 1:
        return []
    return _moments.get(m, k_max, budget)


def moment(m: int, k: int) -> HPoly:
    """s_k for the generic element of po(0|m)."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return _moments.get(m, k)[k - 1]
