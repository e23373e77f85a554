"""
Clifford Quantization

The ħ-deformed Clifford superalgebra on ξ̂₁..ξ̂ₙ, η̂₁..η̂ₙ with
ξ̂ᵢη̂ⱼ + η̂ⱼξ̂ᵢ = δᵢⱼħ, in normal-ordered ξ̂_I η̂_J words:
- cliff_mul, supercommutator and the quantization map Q
- the quantization defect [Q(f),Q(g)] − ħQ({f,g})
- odd generators θ̂_a, the θ̂-blade expansion and the queertrace
- calibration of the Poisson bracket convention against Q
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Optional, Tuple

from src.hpoly import HPoly
from src.poisson import CANDIDATE_CONVENTIONS, BracketConvention, Pairing, PoissonAlgebra
from src.supercore import (
    IdentityViolationError,
    Scalar,
    SuperPoly,
    VarTable,
    mask_indices,
    merge_sign,
    popcount,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

Word = Tuple[int, int]
EMPTY_TABLE = VarTable()


class NotInSubalgebraError(ValueError):
    """Element is outside the subalgebra generated by the odd generators"""


def word_parity(word: Word) -> int:
    return (popcount(word[0]) + popcount(word[1])) % 2


def word_degree(word: Word) -> int:
    return popcount(word[0]) + popcount(word[1])


@lru_cache(maxsize=1 << 18)
def word_product(I: int, J: int, K: int, L: int) -> Tuple[Tuple[Word, int, int], ...]:
    """
    Normal form of (ξ̂_I η̂_J)(ξ̂_K η̂_L)

    Returns:
        Tuple of (word, ħ-power, integer coefficient), sorted
    """
    terms: Dict[Tuple[int, int, int], int] = {(I, J, 0): 1}
    rest = K
    while rest:
        low = rest & -rest
        rest ^= low
        shift = low.bit_length()
        new: Dict[Tuple[int, int, int], int] = {}
        for (im, jm, e), c in terms.items():
            # η̂_{jm} ξ̂_k = (−1)^{|jm|} ξ̂_k η̂_{jm} + [k ∈ jm] (−1)^{#{j ∈ jm, j > k}} ħ η̂_{jm∖k}
            if not im & low:
                s = -1 if (popcount(jm) + popcount(im >> shift)) & 1 else 1
                key = (im | low, jm, e)
                new[key] = new.get(key, 0) + s * c
            if jm & low:
                s = -1 if popcount(jm >> shift) & 1 else 1
                key = (im, jm ^ low, e + 1)
                new[key] = new.get(key, 0) + s * c
        terms = {k: v for k, v in new.items() if v}
    out: Dict[Tuple[Word, int], int] = {}
    for (im, jm, e), c in terms.items():
        if jm & L:
            continue
        key = ((im, jm | L), e)
        out[key] = out.get(key, 0) + merge_sign(jm, L) * c
    return tuple(sorted((w, e, c) for (w, e), c in out.items() if c))


class CliffordElement:
    """Σ_w HPoly_w · w over normal-ordered words; coefficients stand to the left"""

    __slots__ = ("n", "table", "_terms")

    def __init__(self, n: int, table: VarTable = EMPTY_TABLE, terms: Optional[Dict[Word, HPoly]] = None):
        self.n = n
        self.table = table
        self._terms: Dict[Word, HPoly] = {}
        for w, c in (terms or {}).items():
            if c:
                self._terms[w] = c

    @classmethod
    def word(cls, n: int, I: int = 0, J: int = 0, coeff: Scalar = 1, table: VarTable = EMPTY_TABLE):
        return cls(n, table, {(I, J): HPoly.constant(table, coeff)})

    @classmethod
    def identity(cls, n: int, table: VarTable = EMPTY_TABLE) -> "CliffordElement":
        return cls.word(n, 0, 0, 1, table)

    @classmethod
    def xi(cls, n: int, i: int) -> "CliffordElement":
        """ξ̂_i, 1-based."""
        return cls.word(n, 1 << (i - 1), 0)

    @classmethod
    def eta(cls, n: int, i: int) -> "CliffordElement":
        """η̂_i, 1-based."""
        return cls.word(n, 0, 1 << (i - 1))

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, word: Word) -> HPoly:
        return self._terms.get(word, HPoly.zero(self.table))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other: "CliffordElement"):
        if self.n != other.n or self.table != other.table:
            raise ValueError("Clifford elements over different algebras")

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out[w] + c if w in out else c
        return CliffordElement(self.n, self.table, out)

    def __neg__(self):
        return CliffordElement(self.n, self.table, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "CliffordElement":
        """Left multiplication by a scalar, SuperPoly or HPoly."""
        if isinstance(factor, SuperPoly):
            factor = HPoly.from_poly(factor)
        if isinstance(factor, HPoly):
            return CliffordElement(self.n, self.table, {w: factor * c for w, c in self._terms.items()})
        return CliffordElement(self.n, self.table, {w: c.scale(factor) for w, c in self._terms.items()})

    def hbar_shift(self, power: int = 1) -> "CliffordElement":
        return CliffordElement(self.n, self.table, {w: c.shift(power) for w, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return cliff_mul(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.n == other.n and self.table == other.table and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self.table, frozenset(self._terms.items())))

    def parity_parts(self) -> Tuple["CliffordElement", "CliffordElement"]:
        """Split by total parity (word parity plus coefficient parity)."""
        parts: Tuple[Dict[Word, HPoly], Dict[Word, HPoly]] = ({}, {})
        for w, c in self._terms.items():
            even, odd = c.parity_parts()
            pw = word_parity(w)
            if even:
                parts[pw][w] = even
            if odd:
                parts[1 - pw][w] = odd
        return (
            CliffordElement(self.n, self.table, parts[0]),
            CliffordElement(self.n, self.table, parts[1]),
        )

    def valuation(self) -> Optional[int]:
        """Least ħ-power over all coefficients; None for zero."""
        vals = [c.valuation() for c in self._terms.values()]
        return min(vals) if vals else None

    def at_hbar_zero(self) -> "CliffordElement":
        return CliffordElement(
            self.n,
            self.table,
            {w: HPoly.from_poly(c.coefficient(0)) for w, c in self._terms.items()},
        )

    def to_json(self) -> List[Dict[str, object]]:
        return [
            {"I": list(i + 1 for i in mask_indices(w[0])), "J": list(j + 1 for j in mask_indices(w[1])), "coeff": c.to_json()}
            for w, c in self.items()
        ]

    def __repr__(self):
        if not self._terms:
            return "CliffordElement(0)"
        parts = []
        for (I, J), c in self.items():
            word = "".join(f"ξ̂{i + 1}" for i in mask_indices(I)) + "".join(
                f"η̂{j + 1}" for j in mask_indices(J)
            )
            parts.append(f"{c!r}·{word or '1'}")
        return "CliffordElement(" + " + ".join(parts) + ")"


def cliff_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Product in normal form; a word's parity passes the next coefficient with a Koszul sign."""
    a._check(b)
    twisted = {w: c.sign_twist() for w, c in b._terms.items()}
    out: Dict[Word, HPoly] = {}
    for wa, ca in a._terms.items():
        pa = word_parity(wa)
        for wb, cb in b._terms.items():
            product = word_product(wa[0], wa[1], wb[0], wb[1])
            if not product:
                continue
            coeff = ca * (twisted[wb] if pa else cb)
            if not coeff:
                continue
            for w, e, c in product:
                term = coeff.shift(e).scale(c)
                out[w] = out[w] + term if w in out else term
    return CliffordElement(a.n, a.table, out)


def supercommutator(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """[a, b] = ab − (−1)^{p(a)p(b)} ba, extended bilinearly over parity parts."""
    a_parts = a.parity_parts()
    b_parts = b.parity_parts()
    result = CliffordElement(a.n, a.table)
    for pa, x in enumerate(a_parts):
        if not x:
            continue
        for pb, y in enumerate(b_parts):
            if not y:
                continue
            term = cliff_mul(x, y)
            other = cliff_mul(y, x)
            result = result + (term + other if pa & pb else term - other)
    return result


def _split_word(n: int, mask: int) -> Tuple[int, int]:
    """Grassmann mask over ξ₁..ξₙ,η₁..ηₙ → (I, J)."""
    return mask & ((1 << n) - 1), mask >> n


def Q(f: SuperPoly, coeff_table: Optional[VarTable] = None) -> CliffordElement:
    """
    Quantization: ξ_I η_J ↦ ξ̂_I η̂_J (even m); θ_S ↦ θ̂_{s₁}⋯θ̂_{s_k} (odd m)

    With coeff_table the input lives over symbols followed by the Grassmann
    generators (see generic_element); symbol factors become coefficients.
    """
    if coeff_table is None:
        table = f.table
        if table.n_even:
            raise ValueError("Q expects a purely odd Grassmann table")
        m = table.n_odd
        n_sym = 0
        coeff_table = EMPTY_TABLE
    else:
        m = f.table.n_odd - coeff_table.n_odd
        n_sym = coeff_table.n_odd
    odd = m % 2 == 1
    n = (m + 1) // 2
    result: Dict[Word, HPoly] = {}
    sym_mask = (1 << n_sym) - 1
    for (exps, mask), c in f.items():
        coeff = SuperPoly(coeff_table, {(exps, mask & sym_mask): c})
        g_mask = mask >> n_sym
        if odd:
            image = theta_word(n, g_mask)
            if coeff_table != EMPTY_TABLE:
                image = _lift(image, coeff_table)
            for w, hp in image._terms.items():
                term = HPoly.from_poly(coeff) * hp
                result[w] = result[w] + term if w in result else term
        else:
            w = _split_word(n, g_mask)
            term = HPoly.from_poly(coeff)
            result[w] = result[w] + term if w in result else term
    return CliffordElement(n, coeff_table, result)


def lemma4_defect(f: SuperPoly, g: SuperPoly, P: PoissonAlgebra) -> CliffordElement:
    """[Q(f), Q(g)] − ħ·Q({f, g}); every coefficient should have ħ-valuation ≥ 2."""
    return supercommutator(Q(f), Q(g)) - Q(P.bracket(f, g)).hbar_shift(1)


def defect_ok(defect: CliffordElement) -> bool:
    v = defect.valuation()
    return v is None or v >= 2


# -- odd generators and the queer trace -------------------------------------


def odd_generators(n: int) -> List[CliffordElement]:
    """θ̂_{2i−1} = ξ̂ᵢ + η̂ᵢ, θ̂_{2i} = ξ̂ᵢ − η̂ᵢ (i < n), θ̂_{2n−1} = ξ̂ₙ + η̂ₙ."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    gens = []
    for a in range(1, 2 * n):
        gens.append(_theta_generator(n, a))
    return gens


def odd_structure_element(n: int) -> CliffordElement:
    """J = θ̂_{2n} = ξ̂ₙ − η̂ₙ; supercommutes with every odd generator."""
    return _theta_generator(n, 2 * n)


def _theta_generator(n: int, a: int) -> CliffordElement:
    i = (a + 1) // 2
    if a % 2:
        return CliffordElement.xi(n, i) + CliffordElement.eta(n, i)
    return CliffordElement.xi(n, i) - CliffordElement.eta(n, i)


@lru_cache(maxsize=None)
def theta_word(n: int, mask: int) -> CliffordElement:
    """Ordered product θ̂_{s₁}⋯θ̂_{s_k} over the set bits of mask (θ̂_{2n} allowed)."""
    result = CliffordElement.identity(n)
    for a in mask_indices(mask):
        result = cliff_mul(result, _theta_generator(n, a + 1))
    return result


@lru_cache(maxsize=None)
def _theta_table(n: int) -> VarTable:
    return VarTable((), tuple(f"theta{a}" for a in range(1, 2 * n + 1)))


@lru_cache(maxsize=None)
def _word_in_thetas(n: int, word: Word) -> Tuple[Tuple[int, Fraction], ...]:
    """Grassmann expansion of ξ_I η_J in θ's: ξᵢ = (θ_{2i−1}+θ_{2i})/2, ηᵢ = (θ_{2i−1}−θ_{2i})/2."""
    table = _theta_table(n)
    result = SuperPoly.one(table)
    half = Fraction(1, 2)
    I, J = word
    for i in mask_indices(I):
        xi = SuperPoly.var(table, f"theta{2 * i + 1}") + SuperPoly.var(table, f"theta{2 * i + 2}")
        result = result * xi.scale(half)
    for j in mask_indices(J):
        eta = SuperPoly.var(table, f"theta{2 * j + 1}") - SuperPoly.var(table, f"theta{2 * j + 2}")
        result = result * eta.scale(half)
    return tuple(sorted((mask, c) for (_, mask), c in result.items()))


def to_odd_basis(x: CliffordElement) -> Dict[int, HPoly]:
    """
    Expand x in θ̂-blades θ̂_S, S ⊆ {1..2n−1}

    Returns:
        Map blade mask → HPoly coefficient (coefficients stand to the left)

    Raises:
        NotInSubalgebraError: If a θ̂_{2n} component survives
    """
    n = x.n
    j_bit = 1 << (2 * n - 1)
    rem = x
    blades: Dict[int, HPoly] = {}
    for d in range(2 * n, -1, -1):
        acc: Dict[int, HPoly] = {}
        for w, c in rem._terms.items():
            if word_degree(w) != d:
                continue
            for mask, t in _word_in_thetas(n, w):
                term = c.scale(t)
                acc[mask] = acc[mask] + term if mask in acc else term
        for mask, c in sorted(acc.items()):
            if not c:
                continue
            if mask & j_bit:
                raise NotInSubalgebraError(
                    "Element has a component outside the odd-generator subalgebra"
                )
            blades[mask] = c
            blade = theta_word(n, mask)
            if x.table != EMPTY_TABLE:
                blade = _lift(blade, x.table)
            rem = rem - blade.scale(c)
        if any(word_degree(w) == d for w in rem._terms):
            raise NotInSubalgebraError("θ̂-blade expansion did not terminate")
    return blades


def _lift(element: CliffordElement, table: VarTable) -> CliffordElement:
    """Re-home a numeric element over a symbol coefficient table."""
    terms = {}
    for w, c in element._terms.items():
        terms[w] = HPoly(
            table,
            {k: SuperPoly.constant(table, p.constant_term()) for k, p in c.items()},
        )
    return CliffordElement(element.n, table, terms)


def qtr(x: CliffordElement) -> HPoly:
    """
    Queertrace: coefficient of the top blade θ̂₁⋯θ̂_{2n−1} (normalization ν = 1)

    Raises:
        NotInSubalgebraError: If x is not in the odd-generator subalgebra
    """
    top = (1 << (2 * x.n - 1)) - 1
    return to_odd_basis(x).get(top, HPoly.zero(x.table))


# -- calibration --------------------------------------------------------------


def hatted_generators(m: int) -> List[CliffordElement]:
    """Images of the Grassmann generators in table order."""
    n = (m + 1) // 2
    if m % 2:
        return odd_generators(n)
    return [CliffordElement.xi(n, i) for i in range(1, n + 1)] + [
        CliffordElement.eta(n, i) for i in range(1, n + 1)
    ]


@lru_cache(maxsize=None)
def generator_pairing(m: int) -> Pairing:
    """G_ab with [ĝ_a, ĝ_b] = G_ab·ħ read off the Clifford relations."""
    gens = hatted_generators(m)
    pairing: Pairing = {}
    for a, ga in enumerate(gens):
        for b, gb in enumerate(gens):
            comm = supercommutator(ga, gb)
            if not comm:
                continue
            if set(comm._terms) != {(0, 0)}:
                raise IdentityViolationError("Generator supercommutator is not central")
            hp = comm.coefficient((0, 0))
            if hp.valuation() != 1 or hp.degree() != 1:
                raise IdentityViolationError("Generator supercommutator is not proportional to ħ")
            pairing[(a, b)] = hp.coefficient(1).constant_term()
    return pairing


def _calibration_sample(m: int) -> List[SuperPoly]:
    table = VarTable.grassmann(m)
    polys = [SuperPoly.one(table)]
    for d in (1, 2):
        for subset in combinations(range(m), d):
            mask = 0
            for i in subset:
                mask |= 1 << i
            polys.append(SuperPoly.monomial(table, ((), mask)))
    return polys


@lru_cache(maxsize=None)
def surviving_conventions(m: int) -> Tuple[Tuple[BracketConvention, ...], ...]:
    """
    Candidate conventions passing the quantization defect check, super-antisymmetry
    and super Jacobi on monomials of degree ≤ 2, grouped by the bracket they induce

    Candidates inducing the same bracket on the sample (e.g. differing only in the
    sign on even elements when m ≤ 1) form one group.
    """
    pairing = generator_pairing(m)
    sample = _calibration_sample(m)
    groups: Dict[Tuple[str, ...], List[BracketConvention]] = {}
    for convention in CANDIDATE_CONVENTIONS:
        P = PoissonAlgebra(m, convention, pairing)
        if not (_passes(P, sample) and _jacobi_holds(P, sample)):
            continue
        table = tuple(P.bracket(f, g).to_text() for f in sample for g in sample)
        groups.setdefault(table, []).append(convention)
    return tuple(tuple(group) for group in groups.values())


@lru_cache(maxsize=None)
def calibrate_bracket(m: int) -> BracketConvention:
    """
    The unique convention whose quantization defect has ħ-valuation ≥ 2 on all pairs
    of monomials of degree ≤ 2 while satisfying super-antisymmetry and super Jacobi

    Raises:
        IdentityViolationError: If no candidate or more than one inequivalent candidate passes
    """
    groups = surviving_conventions(m)
    if len(groups) != 1:
        raise IdentityViolationError(
            f"Expected exactly one bracket convention for m={m}, {len(groups)} inequivalent ones pass"
        )
    convention = groups[0][0]
    logger.debug(f"Calibrated bracket for m={m}: {convention}")
    return convention


def _passes(P: PoissonAlgebra, sample: List[SuperPoly]) -> bool:
    for f in sample:
        for g in sample:
            if not defect_ok(lemma4_defect(f, g, P)):
                return False
            pf, pg = f.parity(), g.parity()
            sign = -1 if pf & pg else 1
            if P.bracket(f, g) + P.bracket(g, f).scale(sign):
                return False
    return True


def _jacobi_holds(P: PoissonAlgebra, sample: List[SuperPoly]) -> bool:
    # unordered triples suffice once super-antisymmetry holds
    for i, j, k in combinations_with_replacement(range(len(sample)), 3):
        f, g, h = sample[i], sample[j], sample[k]
        sign = -1 if f.parity() & g.parity() else 1
        lhs = P.bracket(f, P.bracket(g, h))
        rhs = P.bracket(P.bracket(f, g), h) + P.bracket(g, P.bracket(f, h)).scale(sign)
        if lhs - rhs:
            return False
    return True
