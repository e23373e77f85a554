"""
Poisson Superalgebra po(0|m)

Bracket on the Grassmann algebra of m odd generators, the Berezin form B,
the invariants r_k and export of exact structure constants.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Tuple

from src.lie import LieSuperAlgebra
from src.supercore import (
    Monomial,
    SuperPoly,
    VarTable,
    berezin,
    berezin_over,
    iter_monomials,
    mask_indices,
    popcount,
)

Pairing = Dict[Tuple[int, int], Fraction]


@dataclass(frozen=True)
class BracketConvention:
    """
    Derivative used in the first slot and global sign of

        {f, g} = sign · (−1)^{p(f)} · Σ_ab G_ab · D_a f · ∂^L_b g
    """

    first_slot: str
    global_sign: int

    def describe(self) -> Dict[str, object]:
        return {
            "first_slot_derivative": self.first_slot,
            "second_slot_derivative": "left",
            "global_sign": self.global_sign,
            "prefactor": "(-1)^p(f)",
        }


CANDIDATE_CONVENTIONS: Tuple[BracketConvention, ...] = tuple(
    BracketConvention(slot, sign) for slot in ("left", "right") for sign in (1, -1)
)


def basis_monomials(m: int) -> List[Monomial]:
    """All 2^m Grassmann monomials in canonical (degree, lex) order."""
    table = VarTable.grassmann(m)
    keys: List[Monomial] = []
    for d in range(m + 1):
        keys.extend(iter_monomials(table, d))
    return keys


def monomial_label(table: VarTable, key: Monomial) -> str:
    _, mask = key
    names = [table.odd_vars[i] for i in mask_indices(mask)]
    return "*".join(names) if names else "1"


def monomial_weight(m: int, mask: int) -> Optional[Tuple[int, ...]]:
    """Weight under the torus h_i = ξᵢηᵢ; None for odd m (no torus grading)."""
    if m % 2:
        return None
    n = m // 2
    return tuple((mask >> i & 1) - (mask >> (n + i) & 1) for i in range(n))


class PoissonAlgebra:
    """po(0|m) with a calibrated bracket convention"""

    def __init__(
        self,
        m: int,
        convention: Optional[BracketConvention] = None,
        pairing: Optional[Pairing] = None,
    ):
        if m < 0:
            raise ValueError(f"m must be nonnegative, got {m}")
        self.m = m
        self.table = VarTable.grassmann(m)
        if pairing is None or convention is None:
            from src.clifford import calibrate_bracket, generator_pairing

            pairing = pairing if pairing is not None else generator_pairing(m)
            convention = convention if convention is not None else calibrate_bracket(m)
        self.pairing = dict(pairing)
        self.convention = convention

    @property
    def n(self) -> int:
        return (self.m + 1) // 2

    @property
    def is_odd(self) -> bool:
        return self.m % 2 == 1

    def bracket(self, f: SuperPoly, g: SuperPoly) -> SuperPoly:
        """
        Poisson bracket, extended bilinearly over parity components

        Raises:
            IncompatibleAlgebrasError: If f or g is over another table
        """
        if f.table != self.table or g.table != self.table:
            from src.supercore import IncompatibleAlgebrasError

            raise IncompatibleAlgebrasError("Bracket operands must be over the po(0|m) table")
        names = self.table.odd_vars
        g_derivs = [g.derivative(v) for v in names]
        result = SuperPoly.zero(self.table)
        for part, p in zip(f.parity_parts(), (0, 1)):
            if not part:
                continue
            sign = self.convention.global_sign * (-1 if p else 1)
            if self.convention.first_slot == "right":
                # ∂^R = (−1)^{p+1} ∂^L on homogeneous elements
                sign *= 1 if p else -1
            f_derivs = [part.derivative(v) for v in names]
            for (a, b), coeff in self.pairing.items():
                if f_derivs[a] and g_derivs[b]:
                    result = result + (f_derivs[a] * g_derivs[b]).scale(sign * coeff)
        return result

    def form_B(self, f: SuperPoly, g: SuperPoly) -> Fraction:
        """B(f, g) = ∫ f·g vvol."""
        return berezin(f * g)

    def r_k(self, f: SuperPoly, k: int) -> Fraction:
        """r_k(f) = ∫ f^k vvol."""
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        return berezin(f ** k)

    def basis(self) -> List[SuperPoly]:
        return [SuperPoly.monomial(self.table, key) for key in basis_monomials(self.m)]

    def structure_constants(self) -> LieSuperAlgebra:
        return po_structure_constants(self.m)

    def torus_indices(self) -> List[int]:
        """Basis indices of h_i = ξᵢηᵢ (even m only)."""
        if self.is_odd:
            return []
        n = self.m // 2
        index = {key[1]: i for i, key in enumerate(basis_monomials(self.m))}
        return [index[(1 << i) | (1 << (n + i))] for i in range(n)]

    def describe_convention(self) -> Dict[str, object]:
        record = self.convention.describe()
        record["pairing"] = [
            [self.table.odd_vars[a], self.table.odd_vars[b], str(c)]
            for (a, b), c in sorted(self.pairing.items())
        ]
        return record


@lru_cache(maxsize=None)
def poisson_algebra(m: int) -> PoissonAlgebra:
    return PoissonAlgebra(m)


def poisson_bracket(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    """Calibrated bracket on the po(0|m) table f lives on."""
    m = f.table.n_odd
    return poisson_algebra(m).bracket(f, g)


def form_B(f: SuperPoly, g: SuperPoly) -> Fraction:
    return berezin(f * g)


def r_k(f: SuperPoly, k: int) -> Fraction:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return berezin(f ** k)


@lru_cache(maxsize=None)
def po_structure_constants(m: int) -> LieSuperAlgebra:
    """
    po(0|m) as a LieSuperAlgebra

    Basis: all Grassmann monomials in canonical order; weights from the
    torus h_i = ξᵢηᵢ for even m; the Berezin form as invariant form.
    """
    P = poisson_algebra(m)
    keys = basis_monomials(m)
    index = {key: i for i, key in enumerate(keys)}
    basis = [SuperPoly.monomial(P.table, key) for key in keys]
    constants = {}
    for a, fa in enumerate(basis):
        for b, fb in enumerate(basis):
            br = P.bracket(fa, fb)
            if br:
                constants[(a, b)] = {index[key]: c for key, c in br.items()}
    top = P.table.top_mask
    form = {}
    for a, (_, ma) in enumerate(keys):
        mb = top ^ ma
        b = index[((), mb)]
        form[(a, b)] = berezin(basis[a] * basis[b])
    weights = None
    if m % 2 == 0:
        weights = [monomial_weight(m, mask) for _, mask in keys]
    return LieSuperAlgebra(
        f"po(0|{m})",
        [monomial_label(P.table, key) for key in keys],
        [popcount(mask) % 2 for _, mask in keys],
        constants,
        weights,
        form,
        {"constructor": "po_algebra", "m": m, "convention": P.convention.describe()},
    )


def symbol_table(m: int) -> VarTable:
    """Coordinates c_A dual to the po(0|m) basis, with the parity of A."""
    keys = basis_monomials(m)
    even = tuple(f"c{i}" for i, (_, mask) in enumerate(keys) if popcount(mask) % 2 == 0)
    odd = tuple(f"c{i}" for i, (_, mask) in enumerate(keys) if popcount(mask) % 2 == 1)
    return VarTable(even, odd)


def generic_table(m: int) -> VarTable:
    """Symbols followed by the Grassmann generators, for the generic element."""
    symbols = symbol_table(m)
    return VarTable(symbols.even_vars, symbols.odd_vars + VarTable.grassmann(m).odd_vars)


@lru_cache(maxsize=None)
def generic_element(m: int) -> Tuple[SuperPoly, VarTable]:
    """
    f = Σ_A c_A · A over all 2^m monomials; c_A carries the parity of A

    Returns:
        The even generic element over the combined table and the symbol table
    """
    symbols = symbol_table(m)
    table = generic_table(m)
    n_sym = symbols.n_odd
    f = SuperPoly.zero(table)
    for i, (_, mask) in enumerate(basis_monomials(m)):
        c = SuperPoly.var(table, f"c{i}")
        f = f + c * SuperPoly.monomial(table, ((0,) * table.n_even, mask << n_sym))
    return f, symbols


@lru_cache(maxsize=None)
def r_k_polynomial(m: int, k: int) -> SuperPoly:
    """
    r_k pulled back to the coordinates c_A

    With f = c_∅ + N (N nilpotent, N^{m+1} = 0):
    ∫ f^k = Σ_j C(k, j) c_∅^{k−j} ∫ N^j.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    f, symbols = generic_element(m)
    grassmann = VarTable.grassmann(m).odd_vars
    c0 = SuperPoly.var(f.table, "c0")
    nilpotent = f - c0
    total = SuperPoly.zero(f.table)
    power = SuperPoly.one(f.table)
    for j in range(0, min(k, m) + 1):
        if j:
            power = power * nilpotent
        if not power:
            break
        total = total + (c0 ** (k - j)) * power.scale(comb(k, j))
    return berezin_over(total, grassmann)
