"""
Algebra Zoo

Constructors for the Lie superalgebras of the open-case list and their
modules:
- po(0|m) and its relatives h, sh and the two spo candidates
- vector fields vect(0|m), svect(0|m) and the deformed svect
- gl from the Fock module and the queer family q, sq, psq, pq
- adjoint, coadjoint and natural actions

Every constructed algebra is validated (antisymmetry, Jacobi, form) before
it is returned; subalgebras and quotients verify closure and the ideal
property instead of assuming them.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.fock import FockRep
from src.lie import (
    Constants,
    LieSuperAlgebra,
    ModuleAction,
    SparseMatrix,
    Vector,
    matmul,
)
from src.linalg import EchelonBasis, SpanCoordinates, canonical_basis, nullspace
from src.poisson import po_structure_constants
from src.supercore import (
    IdentityViolationError,
    ParityError,
    SuperPoly,
    VarTable,
    apply_derivation,
    mask_indices,
    popcount,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFORM_TERMS = ("top", "pair")


# -- generic constructions ---------------------------------------------------


@lru_cache(maxsize=None)
def po_algebra(m: int) -> LieSuperAlgebra:
    g = po_structure_constants(m)
    g.validate()
    return g


def center(g: LieSuperAlgebra) -> List[Vector]:
    """Canonical basis of {x : [e_γ, x] = 0 for all γ}."""
    rows: List[Vector] = []
    for gamma in range(g.dim):
        by_output: Dict[int, Vector] = {}
        for b in range(g.dim):
            for a, c in g.bracket_basis(gamma, b).items():
                by_output.setdefault(a, {})[b] = c
        rows.extend(by_output.values())
    return nullspace(rows, g.dim)


def _vector_parity(g: LieSuperAlgebra, vec: Vector) -> int:
    parities = {g.parities[i] for i, c in vec.items() if c}
    if len(parities) != 1:
        raise ParityError(f"{g.name}: vector {vec} is not parity-homogeneous")
    return parities.pop()


def _vector_weight(g: LieSuperAlgebra, vec: Vector) -> Optional[Tuple[int, ...]]:
    if g.weights is None:
        return None
    weights = {g.weights[i] for i, c in vec.items() if c}
    return weights.pop() if len(weights) == 1 else None


def _vector_label(g: LieSuperAlgebra, vec: Vector) -> str:
    items = [(i, c) for i, c in sorted(vec.items()) if c]
    if len(items) == 1 and items[0][1] == 1:
        return g.labels[items[0][0]]
    return "(" + " + ".join(f"{c}*[{g.labels[i]}]" for i, c in items) + ")"


def subalgebra(
    g: LieSuperAlgebra,
    vectors: Sequence[Vector],
    name: str,
    provenance: Optional[Dict] = None,
) -> LieSuperAlgebra:
    """
    Subalgebra spanned by vectors, on its canonical (RREF) basis

    Raises:
        ParityError: If a basis vector of the span mixes parities
        ValueError: If the span is not closed under the bracket
    """
    basis = canonical_basis(vectors)
    parities = [_vector_parity(g, v) for v in basis]
    coords = SpanCoordinates(basis) if basis else None
    constants: Constants = {}
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            br = g.bracket(u, v)
            if not br:
                continue
            x = coords.coords(br)
            if x is None:
                raise IdentityViolationError(f"{name}: span is not closed under the bracket")
            constants[(i, j)] = x
    weights = [_vector_weight(g, v) for v in basis]
    sub = LieSuperAlgebra(
        name,
        [_vector_label(g, v) for v in basis],
        parities,
        constants,
        weights if basis and all(w is not None for w in weights) else None,
        None,
        dict(provenance or {}, parent=g.name),
    )
    sub.validate()
    return sub


def quotient(
    g: LieSuperAlgebra,
    ideal: Sequence[Vector],
    name: str,
    provenance: Optional[Dict] = None,
) -> LieSuperAlgebra:
    """
    g / ideal on the complement spanned by the non-pivot basis elements

    Raises:
        ValueError: If the span of ideal is not an ideal of g
    """
    rows = canonical_basis(ideal)
    tracker = EchelonBasis()
    for row in rows:
        tracker.add(row)
    for row in rows:
        for gamma in range(g.dim):
            if not tracker.contains(g.bracket({gamma: Fraction(1)}, row)):
                raise IdentityViolationError(f"{name}: span is not an ideal of {g.name}")
    pivots = {min(row) for row in rows}
    keep = [i for i in range(g.dim) if i not in pivots]
    position = {old: new for new, old in enumerate(keep)}

    def project(vec: Vector) -> Vector:
        rem = tracker.reduce(vec)
        return {position[i]: c for i, c in rem.items()}

    constants: Constants = {}
    for a, old_a in enumerate(keep):
        for b, old_b in enumerate(keep):
            br = g.bracket_basis(old_a, old_b)
            if br:
                image = project(br)
                if image:
                    constants[(a, b)] = image
    weights = [g.weights[i] for i in keep] if g.weights is not None else None
    quot = LieSuperAlgebra(
        name,
        [g.labels[i] for i in keep],
        [g.parities[i] for i in keep],
        constants,
        weights,
        None,
        dict(provenance or {}, parent=g.name, ideal_dim=len(rows)),
    )
    quot.validate()
    return quot


def quotient_by_center(g: LieSuperAlgebra, name: Optional[str] = None) -> LieSuperAlgebra:
    return quotient(g, center(g), name or f"{g.name}/z", {"constructor": "quotient_by_center"})


def derived_subalgebra(g: LieSuperAlgebra, name: Optional[str] = None) -> LieSuperAlgebra:
    """[g, g] as a subalgebra; zero for abelian g."""
    vectors = list(g.constants.values())
    return subalgebra(g, vectors, name or f"[{g.name},{g.name}]", {"constructor": "derived_subalgebra"})


def generating_subset(g: LieSuperAlgebra) -> List[int]:
    """
    Basis indices that generate g as a Lie superalgebra

    Greedy in basis order: an index is taken only if e_i is not yet in the
    subalgebra generated by the previous choices.
    """
    tracker = EchelonBasis()
    span: List[Vector] = []
    gens: List[int] = []

    def push(vec: Vector, stack: List[Vector]) -> None:
        if vec and tracker.add(vec):
            span.append(vec)
            stack.append(vec)

    for idx in range(g.dim):
        unit = {idx: Fraction(1)}
        if tracker.contains(unit):
            continue
        gens.append(idx)
        stack: List[Vector] = []
        for v in list(span):
            push(g.bracket(unit, v), stack)
        push(unit, stack)
        while stack:
            v = stack.pop()
            for x in gens:
                push(g.bracket({x: Fraction(1)}, v), stack)
        if len(tracker) == g.dim:
            break
    return gens


# -- the Poisson family ------------------------------------------------------


@lru_cache(maxsize=None)
def h_algebra(m: int) -> LieSuperAlgebra:
    return quotient_by_center(po_algebra(m), f"h(0|{m})")


@lru_cache(maxsize=None)
def sh_algebra(m: int) -> LieSuperAlgebra:
    return derived_subalgebra(h_algebra(m), f"sh(0|{m})")


@lru_cache(maxsize=None)
def spo_derived(m: int) -> LieSuperAlgebra:
    """First spo candidate: [po(0|m), po(0|m)]."""
    return derived_subalgebra(po_algebra(m), f"spo-derived(0|{m})")


@lru_cache(maxsize=None)
def spo_integral(m: int) -> LieSuperAlgebra:
    """Second spo candidate: the integral-zero functions {f : ∫f vvol = 0}."""
    g = po_algebra(m)
    top = g.dim - 1
    vectors = [{i: Fraction(1)} for i in range(g.dim) if i != top]
    return subalgebra(g, vectors, f"spo-integral(0|{m})", {"constructor": "spo_integral"})


# -- vector fields -----------------------------------------------------------


class FieldSpace:
    """
    Vector fields Σ f_j ∂_j on Λ(θ₁..θ_m)

    Basis θ_I ∂_j ordered by (|I|, I, j); weight of θ_I ∂_j under the torus
    θᵢ∂ᵢ is e_I − e_j.
    """

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"Vector fields need m >= 1, got {m}")
        self.m = m
        self.table = VarTable((), tuple(f"theta{i}" for i in range(1, m + 1)))
        masks = sorted(range(1 << m), key=lambda k: (popcount(k), mask_indices(k)))
        self.basis: List[Tuple[int, int]] = [(mask, j) for mask in masks for j in range(m)]
        self.index = {key: i for i, key in enumerate(self.basis)}
        self.masks = masks
        self.mask_index = {mask: i for i, mask in enumerate(masks)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def parity(self, i: int) -> int:
        mask, _ = self.basis[i]
        return (popcount(mask) + 1) % 2

    def weight(self, i: int) -> Tuple[int, ...]:
        mask, j = self.basis[i]
        return tuple((mask >> a & 1) - (1 if a == j else 0) for a in range(self.m))

    def label(self, i: int) -> str:
        mask, j = self.basis[i]
        coeff = "*".join(self.table.odd_vars[a] for a in mask_indices(mask))
        return f"{coeff}*d{j + 1}" if coeff else f"d{j + 1}"

    def components(self, vec: Vector) -> List[SuperPoly]:
        comps = [SuperPoly.zero(self.table) for _ in range(self.m)]
        for i, c in vec.items():
            mask, j = self.basis[i]
            comps[j] = comps[j] + SuperPoly.monomial(self.table, ((), mask), c)
        return comps

    def from_components(self, comps: Sequence[SuperPoly]) -> Vector:
        out: Vector = {}
        for j, comp in enumerate(comps):
            for (_, mask), c in comp.items():
                out[self.index[(mask, j)]] = c
        return out

    def apply(self, comps: Sequence[SuperPoly], g: SuperPoly) -> SuperPoly:
        return apply_derivation(g, dict(zip(self.table.odd_vars, comps)))

    def bracket(self, a: int, b: int) -> Vector:
        """[X, Y]_j = X(Y_j) − (−1)^{p(X)p(Y)} Y(X_j)."""
        X = self.components({a: Fraction(1)})
        Y = self.components({b: Fraction(1)})
        sign = -1 if self.parity(a) & self.parity(b) else 1
        comps = [self.apply(X, Y[j]) - self.apply(Y, X[j]).scale(sign) for j in range(self.m)]
        return self.from_components(comps)

    def divergence(self, i: int) -> SuperPoly:
        """div(θ_I ∂_j) = (−1)^{|I|} ∂_j θ_I."""
        mask, j = self.basis[i]
        d = SuperPoly.monomial(self.table, ((), mask)).derivative(self.table.odd_vars[j])
        return -d if popcount(mask) % 2 else d

    def density_action(self, i: int, density: SuperPoly) -> SuperPoly:
        """L_X(g·vvol)/vvol = X(g) + div(X)·g for an even density g."""
        X = self.components({i: Fraction(1)})
        return self.apply(X, density) + self.divergence(i) * density

    def function_vector(self, f: SuperPoly) -> Vector:
        return {self.mask_index[mask]: c for (_, mask), c in f.items()}


@lru_cache(maxsize=None)
def field_space(m: int) -> FieldSpace:
    return FieldSpace(m)


@lru_cache(maxsize=None)
def vect_algebra(m: int) -> LieSuperAlgebra:
    """vect(0|m) on the basis θ_I ∂_j; dimension m·2^m."""
    space = field_space(m)
    constants: Constants = {}
    for a in range(space.dim):
        for b in range(space.dim):
            br = space.bracket(a, b)
            if br:
                constants[(a, b)] = br
    g = LieSuperAlgebra(
        f"vect(0|{m})",
        [space.label(i) for i in range(space.dim)],
        [space.parity(i) for i in range(space.dim)],
        constants,
        [space.weight(i) for i in range(space.dim)],
        None,
        {"constructor": "vect_algebra", "m": m},
    )
    g.validate()
    logger.debug(f"Built {g}")
    return g


def _kernel_subalgebra(m: int, image, name: str, provenance: Dict) -> LieSuperAlgebra:
    space = field_space(m)
    by_row: Dict[int, Vector] = {}
    for i in range(space.dim):
        for row, c in space.function_vector(image(i)).items():
            by_row.setdefault(row, {})[i] = c
    kernel = nullspace(list(by_row.values()), space.dim)
    return subalgebra(vect_algebra(m), kernel, name, provenance)


@lru_cache(maxsize=None)
def svect_algebra(m: int) -> LieSuperAlgebra:
    """Divergence-free fields; dimension m·2^m − (2^m − 1)."""
    if m < 2:
        raise ValueError(f"svect(0|m) needs m >= 2, got {m}")
    space = field_space(m)
    return _kernel_subalgebra(m, space.divergence, f"svect(0|{m})", {"constructor": "svect_algebra", "m": m})


def deformation_density(m: int, deform_term: Optional[str] = "top") -> SuperPoly:
    """
    1 + θ₁⋯θ_m ("top"), 1 + θ₁θ_m ("pair") or 1 (None)

    Raises:
        ParityError: If the deformation term is odd
        ValueError: If deform_term is unknown
    """
    table = field_space(m).table
    one = SuperPoly.one(table)
    if deform_term is None:
        return one
    if deform_term == "top":
        mask = table.top_mask
    elif deform_term == "pair":
        mask = 1 | (1 << (m - 1))
    else:
        raise ValueError(f"Unknown deformation term {deform_term!r}, expected one of {DEFORM_TERMS}")
    if popcount(mask) % 2:
        raise ParityError(f"Deformation term for m={m} is odd; the density must be even")
    return one + SuperPoly.monomial(table, ((), mask))


@lru_cache(maxsize=None)
def svect_tilde(m: int, deform_term: Optional[str] = "top") -> LieSuperAlgebra:
    """
    Stabilizer of the volume (1 + t)·vvol, t from deformation_density

    deform_term=None gives back svect(0|m) on the same basis.
    """
    if m < 2:
        raise ValueError(f"svect_tilde(0|m) needs m >= 2, got {m}")
    density = deformation_density(m, deform_term)
    space = field_space(m)
    suffix = "" if deform_term is None else f",{deform_term}"
    return _kernel_subalgebra(
        m,
        lambda i: space.density_action(i, density),
        f"svect-tilde(0|{m}{suffix})",
        {"constructor": "svect_tilde", "m": m, "deform_term": deform_term, "density": density.to_text()},
    )


# -- matrix algebras ---------------------------------------------------------


def _elementary(i: int, j: int) -> SparseMatrix:
    return {(i, j): Fraction(1)}


def _combine(*terms: Tuple[Fraction, SparseMatrix]) -> SparseMatrix:
    out: SparseMatrix = {}
    for c, mat in terms:
        for key, v in mat.items():
            s = out.get(key, 0) + c * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _matrix_parity(grades: Sequence[int], mat: SparseMatrix) -> int:
    parities = {(grades[i] + grades[j]) % 2 for (i, j) in mat}
    if len(parities) != 1:
        raise ParityError(f"Matrix {mat} is not parity-homogeneous")
    return parities.pop()


def _matrix_algebra(
    name: str,
    grades: Sequence[int],
    labels: Sequence[str],
    matrices: Sequence[SparseMatrix],
    weights: Optional[Sequence[Tuple[int, ...]]],
    module_weights: Optional[Sequence[Tuple[int, ...]]],
    provenance: Dict,
    form: Optional[SparseMatrix] = None,
) -> Tuple[LieSuperAlgebra, ModuleAction]:
    """Lie superalgebra spanned by graded matrices, with its natural module."""
    size = len(grades)
    flat = [{i * size + j: c for (i, j), c in mat.items()} for mat in matrices]
    coords = SpanCoordinates(flat)
    parities = [_matrix_parity(grades, mat) for mat in matrices]
    constants: Constants = {}
    for a, A in enumerate(matrices):
        for b, B in enumerate(matrices):
            sign = -1 if parities[a] & parities[b] else 1
            br = _combine((Fraction(1), matmul(A, B)), (Fraction(-sign), matmul(B, A)))
            if not br:
                continue
            x = coords.coords({i * size + j: c for (i, j), c in br.items()})
            if x is None:
                raise IdentityViolationError(f"{name}: matrix span is not closed under the supercommutator")
            constants[(a, b)] = x
    g = LieSuperAlgebra(name, labels, parities, constants, weights, form, provenance)
    g.validate()
    action = ModuleAction(
        g,
        "natural",
        [f"v{i + 1}" for i in range(size)],
        grades,
        matrices,
        module_weights,
    )
    return g, action


@lru_cache(maxsize=None)
def gl_from_fock(n: int) -> Tuple[LieSuperAlgebra, ModuleAction]:
    """
    gl(2^{n−1}|2^{n−1}) as all matrices on the Fock module of Cliff(n)

    Elementary matrices E_ij on the Fock basis (parity |i| + |j|), weights
    e_i − e_j, invariant form str(xy).
    """
    if n < 1:
        raise ValueError(f"gl_from_fock needs n >= 1, got {n}")
    rep = FockRep(n)
    size, grades = rep.dim, rep.grades
    keys = [(i, j) for i in range(size) for j in range(size)]
    matrices = [_elementary(i, j) for i, j in keys]

    def unit(i: int) -> Tuple[int, ...]:
        return tuple(1 if a == i else 0 for a in range(size))

    weights = [tuple(x - y for x, y in zip(unit(i), unit(j))) for i, j in keys]
    position = {key: a for a, key in enumerate(keys)}
    form: SparseMatrix = {}
    for (i, j), a in position.items():
        form[(a, position[(j, i)])] = Fraction(-1 if grades[i] else 1)
    half = size // 2
    return _matrix_algebra(
        f"gl({half}|{half})",
        grades,
        [f"E{i + 1}_{j + 1}" for i, j in keys],
        matrices,
        weights,
        [unit(i) for i in range(size)],
        {"constructor": "gl_from_fock", "n": n, "fock_grades": list(grades)},
        form,
    )


def _queer_basis(N: int) -> Tuple[List[str], List[SparseMatrix], List[Tuple[int, ...]]]:
    def weight(i: int, j: int) -> Tuple[int, ...]:
        return tuple((1 if a == i else 0) - (1 if a == j else 0) for a in range(N))

    labels, mats, weights = [], [], []
    for i in range(N):
        for j in range(N):
            labels.append(f"A{i + 1}_{j + 1}")
            mats.append(_combine((Fraction(1), _elementary(i, j)), (Fraction(1), _elementary(N + i, N + j))))
            weights.append(weight(i, j))
    for i in range(N):
        for j in range(N):
            labels.append(f"B{i + 1}_{j + 1}")
            mats.append(_combine((Fraction(1), _elementary(i, N + j)), (Fraction(1), _elementary(N + i, j))))
            weights.append(weight(i, j))
    return labels, mats, weights


def _queer_module_weights(N: int) -> List[Tuple[int, ...]]:
    units = [tuple(1 if a == i else 0 for a in range(N)) for i in range(N)]
    return units + units


@lru_cache(maxsize=None)
def queer_family(kind: str, N: int) -> Tuple[LieSuperAlgebra, ModuleAction]:
    """
    q(N) = {(A B; B A)} or sq(N) = its tr B = 0 part, with the natural module

    sq(N) keeps every A_ij, every B_ij with i ≠ j and B_ii − B_{i+1,i+1}.
    """
    if N < 1:
        raise ValueError(f"q(N) needs N >= 1, got {N}")
    labels, mats, weights = _queer_basis(N)
    if kind == "sq":
        keep_labels, keep_mats, keep_weights = [], [], []
        for label, mat, weight in zip(labels, mats, weights):
            if label.startswith("B"):
                i, j = (int(x) for x in label[1:].split("_"))
                if i == j:
                    continue
            keep_labels.append(label)
            keep_mats.append(mat)
            keep_weights.append(weight)
        offset = N * N
        for i in range(N - 1):
            bi = mats[offset + i * N + i]
            bj = mats[offset + (i + 1) * N + i + 1]
            keep_labels.append(f"B{i + 1}_{i + 1}-B{i + 2}_{i + 2}")
            keep_mats.append(_combine((Fraction(1), bi), (Fraction(-1), bj)))
            keep_weights.append(tuple(0 for _ in range(N)))
        labels, mats, weights = keep_labels, keep_mats, keep_weights
    elif kind != "q":
        raise ValueError(f"Unknown queer family member {kind!r}")
    return _matrix_algebra(
        f"{kind}({N})",
        [0] * N + [1] * N,
        labels,
        mats,
        weights,
        _queer_module_weights(N),
        {"constructor": f"{kind}_algebra", "N": N},
    )


def q_algebra(N: int) -> LieSuperAlgebra:
    return queer_family("q", N)[0]


def sq_algebra(N: int) -> LieSuperAlgebra:
    return queer_family("sq", N)[0]


def _identity_vector(g: LieSuperAlgebra, N: int) -> Vector:
    return {g.labels.index(f"A{i + 1}_{i + 1}"): Fraction(1) for i in range(N)}


@lru_cache(maxsize=None)
def psq_algebra(N: int) -> LieSuperAlgebra:
    """sq(N) modulo the scalar identity."""
    g = sq_algebra(N)
    return quotient(g, [_identity_vector(g, N)], f"psq({N})", {"constructor": "psq_algebra", "ideal": "scalar identity"})


@lru_cache(maxsize=None)
def pq_algebra(N: int) -> LieSuperAlgebra:
    """q(N) modulo its center."""
    return quotient_by_center(q_algebra(N), f"pq({N})")


def natural_action(kind: str, size: int) -> ModuleAction:
    """Matrix module of gl (size = n of the Fock module), q or sq (size = N)."""
    if kind == "gl":
        return gl_from_fock(size)[1]
    return queer_family(kind, size)[1]


def queertrace_matrix(mat: SparseMatrix, N: int) -> Fraction:
    """qtr((A B; B A)) = tr B."""
    return sum((c for (i, j), c in mat.items() if i < N and j == N + i), Fraction(0))


# -- actions -----------------------------------------------------------------


@lru_cache(maxsize=None)
def adjoint_action(g: LieSuperAlgebra) -> ModuleAction:
    return ModuleAction(
        g,
        "adjoint",
        [f"e{i}" for i in range(g.dim)],
        g.parities,
        [g.ad_matrix(gamma) for gamma in range(g.dim)],
        g.weights,
    )


@lru_cache(maxsize=None)
def coadjoint_action(g: LieSuperAlgebra) -> ModuleAction:
    """
    Action on the dual basis c_a of g*

    (e_γ·c_a)(e_b) = −(−1)^{p_γ p_a} f_{γb}^a, so the coordinate c_a is the
    polynomial variable of weight −wt(e_a).
    """
    matrices: List[SparseMatrix] = []
    for gamma in range(g.dim):
        mat: SparseMatrix = {}
        for b in range(g.dim):
            for a, c in g.bracket_basis(gamma, b).items():
                sign = -1 if g.parities[gamma] & g.parities[a] else 1
                mat[(b, a)] = -sign * c
        matrices.append(mat)
    weights = None
    if g.weights is not None:
        weights = [tuple(-x for x in w) for w in g.weights]
    return ModuleAction(g, "coadjoint", [f"c{i}" for i in range(g.dim)], g.parities, matrices, weights)


def form_intertwiner_defects(g: LieSuperAlgebra) -> List[int]:
    """
    Basis indices γ where x ↦ B(x, ·) fails to intertwine adjoint and coadjoint

    Only meaningful for an even invariant form.
    """
    if not g.form:
        raise ValueError(f"{g.name} carries no invariant form")
    M: SparseMatrix = {(b, a): c for (a, b), c in g.form.items()}
    ad, co = adjoint_action(g), coadjoint_action(g)
    bad = []
    for gamma in range(g.dim):
        lhs = matmul(M, ad.matrices[gamma])
        rhs = matmul(co.matrices[gamma], M)
        if lhs != rhs:
            bad.append(gamma)
    return bad


def form_block_parity(g: LieSuperAlgebra) -> Optional[int]:
    """0 if B pairs equal parities, 1 if it pairs opposite ones, None if mixed."""
    if not g.form:
        return None
    kinds = {(g.parities[a] + g.parities[b]) % 2 for (a, b) in g.form}
    return kinds.pop() if len(kinds) == 1 else None


# -- dispatch ----------------------------------------------------------------


def build_algebra(name: str, m: int = 2, n: int = 1, deform_term: Optional[str] = "top") -> LieSuperAlgebra:
    """
    Algebra selected by its CLI name

    m parametrizes the Poisson and vector-field families; n is the Fock
    parameter for gl and the matrix size N for the queer family.

    Raises:
        ValueError: If the name is unknown or the parameters are out of range
    """
    if name == "po":
        return po_algebra(m)
    if name == "h":
        return h_algebra(m)
    if name == "sh":
        return sh_algebra(m)
    if name == "spo-derived":
        return spo_derived(m)
    if name == "spo-integral":
        return spo_integral(m)
    if name == "vect":
        return vect_algebra(m)
    if name == "svect":
        return svect_algebra(m)
    if name == "svect-tilde":
        return svect_tilde(m, deform_term)
    if name == "gl":
        return gl_from_fock(n)[0]
    if name == "q":
        return q_algebra(n)
    if name == "sq":
        return sq_algebra(n)
    if name == "psq":
        return psq_algebra(n)
    if name == "pq":
        return pq_algebra(n)
    raise ValueError(f"Unknown algebra {name!r}")


def build_action(g: LieSuperAlgebra, module: str) -> ModuleAction:
    if module == "adjoint":
        return adjoint_action(g)
    if module == "coadjoint":
        return coadjoint_action(g)
    raise ValueError(f"Unknown module {module!r}")
