"""
Invariant Solver

Exact invariants of a Lie superalgebra in the symmetric algebra of a module:
- PolySpaceBasis enumerates S^d (symmetric in even, exterior in odd coordinates)
- derivation_matrix extends ρ(e_γ) to S^d as a superderivation
- invariants intersects the kernels over a generating subset, restricted to
  the torus grade-zero block, by fraction-free elimination
- radial parts, span membership, the valuation-aware lowest-component span
  and the comparison of both for po(0|m)
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from src.fock import SuperMatrix, moment_sequence
from src.hpoly import HPoly
from src.lie import ModuleAction, Vector
from src.linalg import BudgetExceededError, EchelonBasis, canonical_basis, nnz, nullspace, solve
from src.poisson import poisson_algebra, r_k_polynomial, symbol_table
from src.supercore import (
    Monomial,
    SuperPoly,
    VarTable,
    apply_derivation,
    iter_monomials,
    mask_indices,
    monomial_sort_key,
    substitute,
)
from src.utils.logger import get_logger
from src.zoo import coadjoint_action, generating_subset, po_algebra

logger = get_logger(__name__)

Grade = Tuple[Fraction, ...]

EXCEPTIONAL_RADIAL = "x1^2*x2^2*(x1^2 - x2^2)"
EXCEPTIONAL_RADIAL_ROTATED = "x1^2*x2^2*(x1^2 + x2^2)"


# -- polynomial spaces -------------------------------------------------------


def torus_grading(action: ModuleAction) -> Optional[List[Grade]]:
    """
    Eigenvalues of the diagonal basis elements of g on each module vector

    A monomial of nonzero total grade cannot occur in an invariant. None when
    no basis element of g acts diagonally.
    """
    diagonal = [
        mat for mat in action.matrices if mat and all(a == b for (a, b) in mat)
    ]
    if not diagonal:
        return None
    return [tuple(mat.get((b, b), Fraction(0)) for mat in diagonal) for b in range(action.dim)]


class PolySpaceBasis:
    """Degree-d monomials in the module coordinates, in canonical order"""

    def __init__(self, action: ModuleAction, degree: int, weight_filter: bool = False):
        if degree < 0:
            raise ValueError(f"Degree must be nonnegative, got {degree}")
        self.action = action
        self.degree = degree
        self.table: VarTable = action.var_table()
        grading = torus_grading(action) if weight_filter else None
        self.weight_filter = grading is not None
        self._grading = None
        if grading is not None:
            by_label = dict(zip(action.labels, grading))
            self._grading = [by_label[name] for name in self.table.even_vars + self.table.odd_vars]
        monomials = list(iter_monomials(self.table, degree))
        if self.weight_filter:
            monomials = [key for key in monomials if not any(self.grade(key))]
        self.monomials: List[Monomial] = monomials
        self.index = {key: i for i, key in enumerate(monomials)}

    def __len__(self) -> int:
        return len(self.monomials)

    def grade(self, key: Monomial) -> Grade:
        exps, mask = key
        n_even = self.table.n_even
        total = [Fraction(0)] * len(self._grading[0])
        for i, e in enumerate(exps):
            if e:
                for t, x in enumerate(self._grading[i]):
                    total[t] += e * x
        for j in mask_indices(mask):
            for t, x in enumerate(self._grading[n_even + j]):
                total[t] += x
        return tuple(total)

    def to_poly(self, vec: Vector) -> SuperPoly:
        return SuperPoly(self.table, {self.monomials[i]: c for i, c in vec.items()})

    def to_vector(self, poly: SuperPoly) -> Vector:
        """
        Raises:
            ValueError: If poly has a monomial outside this basis
        """
        out: Vector = {}
        for key, c in poly.items():
            if key not in self.index:
                raise ValueError(f"Monomial {key} is not in the degree-{self.degree} basis")
            out[self.index[key]] = c
        return out


def _images(action: ModuleAction, gamma: int, table: VarTable) -> Dict[str, SuperPoly]:
    """D_γ(v_b) = Σ_a ρ(e_γ)_{ab} v_a for every coordinate v_b."""
    images = {}
    for b, name in enumerate(action.labels):
        image = SuperPoly.zero(table)
        for a, c in action.column(gamma, b).items():
            image = image + SuperPoly.var(table, action.labels[a]).scale(c)
        if image:
            images[name] = image
    return images


def derivation_matrix(action: ModuleAction, d: int, gamma: int, basis: Optional[PolySpaceBasis] = None) -> Dict[Monomial, Vector]:
    """
    D_γ on the degree-d basis: target monomial → {column: coefficient}

    Rows are keyed by monomial because D_γ leaves the weight-zero block.
    """
    basis = basis or PolySpaceBasis(action, d)
    images = _images(action, gamma, basis.table)
    rows: Dict[Monomial, Vector] = {}
    if not images:
        return rows
    for col, key in enumerate(basis.monomials):
        image = apply_derivation(SuperPoly.monomial(basis.table, key), images)
        for target, c in image.items():
            rows.setdefault(target, {})[col] = c
    return rows


# -- invariants --------------------------------------------------------------


@dataclass
class InvariantBasis:
    """Exact basis of the degree-d invariants, with provenance"""

    algebra: str
    module: str
    degree: int
    table: VarTable
    basis: List[SuperPoly]
    convention_hash: str = ""
    weight_filter: bool = False
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    # cumulative constraint nonzeros after each generator block
    block_nnz: List[int] = field(default_factory=list, repr=False)
    monomials: int = field(default=0, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_json(self) -> Dict[str, Any]:
        data = {
            "algebra": self.algebra,
            "module": self.module,
            "degree": self.degree,
            "dim": self.dim,
            "basis": [p.to_text() for p in self.basis],
            "convention_hash": self.convention_hash,
        }
        if self.witnesses:
            data["witnesses"] = self.witnesses
        return data


_CACHE_LOCK = threading.Lock()
_INVARIANT_CACHE: Dict[Tuple[str, int, bool], InvariantBasis] = {}


def _check_budget(result: InvariantBasis, budget: Optional[int]) -> None:
    """Replay the budget against the block sizes recorded when the basis was solved."""
    if budget is None:
        return
    for processed, total in enumerate(result.block_nnz):
        if total > budget:
            raise BudgetExceededError(
                f"Constraint matrix for {result.algebra} degree {result.degree} exceeds {budget} nonzeros",
                processed=processed,
                largest_block=result.monomials,
            )


def invariants(
    action: ModuleAction,
    d: int,
    weight_filter: bool = True,
    threads: int = 1,
    budget: Optional[int] = None,
    convention_hash: str = "",
) -> InvariantBasis:
    """
    Basis of the invariants in S^d of the module, canonical (RREF) form

    Invariance is imposed for a generating subset of g, which is equivalent
    to invariance under all of g.

    Raises:
        BudgetExceededError: If the stacked constraint rows exceed budget nonzeros
    """
    key = (action.cache_key(), d, weight_filter)
    with _CACHE_LOCK:
        cached = _INVARIANT_CACHE.get(key)
    if cached is not None:
        _check_budget(cached, budget)
        return replace(cached, convention_hash=convention_hash)
    g = action.algebra
    if d == 0:
        table = action.var_table()
        result = InvariantBasis(g.name, action.kind, 0, table, [SuperPoly.one(table)], convention_hash, weight_filter)
    else:
        basis = PolySpaceBasis(action, d, weight_filter)
        if weight_filter and not basis.weight_filter:
            logger.warning(f"⚠️ {g.name} has no torus grading on the {action.kind} module; solving unfiltered")
        gens = generating_subset(g)
        logger.info(
            f"🔍 Solving degree {d} for {g.name} ({action.kind}): {len(basis)} monomials, {len(gens)} generators"
        )

        def assemble(gamma: int) -> List[Vector]:
            return list(derivation_matrix(action, d, gamma, basis).values())

        rows: List[Vector] = []
        block_nnz: List[int] = []
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            for processed, block in enumerate(pool.map(assemble, gens), start=1):
                rows.extend(block)
                block_nnz.append(nnz(rows))
                if budget is not None and block_nnz[-1] > budget:
                    raise BudgetExceededError(
                        f"Constraint matrix for {g.name} degree {d} exceeds {budget} nonzeros",
                        processed=processed - 1,
                        largest_block=len(basis),
                    )
        kernel = canonical_basis(nullspace(rows, len(basis)))
        result = InvariantBasis(
            g.name,
            action.kind,
            d,
            basis.table,
            [basis.to_poly(v) for v in kernel],
            convention_hash,
            basis.weight_filter,
            block_nnz=block_nnz,
            monomials=len(basis),
        )
        logger.info(f"✅ Degree {d} for {g.name}: {result.dim} invariants")
    with _CACHE_LOCK:
        _INVARIANT_CACHE[key] = result
    return result


def clear_invariant_cache() -> None:
    with _CACHE_LOCK:
        _INVARIANT_CACHE.clear()


def check_invariant(P: SuperPoly, action: ModuleAction) -> bool:
    """True iff D_γ P = 0 for every basis element e_γ."""
    if not P:
        return True
    for gamma in range(action.algebra.dim):
        if apply_derivation(P, _images(action, gamma, P.table)):
            return False
    return True


def supertrace_polynomial(action: ModuleAction, k: int) -> SuperPoly:
    """
    P_k(X) = str(ρ(X)^k) for the generic element X = Σ c_a e_a of g

    Coordinates c_a are those of the coadjoint module; a coefficient c in
    front of ρ(e)_{ij} enters with the sign (−1)^{p(c)|i|}.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    g = action.algebra
    table = coadjoint_action(g).var_table()
    grades = action.parities
    entries: Dict[Tuple[int, int], HPoly] = {}
    for gamma, mat in enumerate(action.matrices):
        c = SuperPoly.var(table, f"c{gamma}")
        for (i, j), v in mat.items():
            sign = -1 if g.parities[gamma] and grades[i] else 1
            term = HPoly.from_poly(c.scale(sign * v))
            entries[(i, j)] = entries[(i, j)] + term if (i, j) in entries else term
    X = SuperMatrix(grades, table, entries)
    power = X
    for _ in range(k - 1):
        power = power @ X
    return power.supertrace().coefficient(0)


# -- radial parts and spans ---------------------------------------------------


def radial_table(n: int) -> VarTable:
    return VarTable(tuple(f"x{i}" for i in range(1, n + 1)), ())


def radial_part(P: SuperPoly, torus: Sequence[str]) -> SuperPoly:
    """Set every non-torus coordinate to zero and rename the torus coordinates x₁..xₙ."""
    target = radial_table(len(torus))
    rename = {name: SuperPoly.var(target, f"x{i}") for i, name in enumerate(torus, start=1)}
    assignment = {}
    for name in P.table.even_vars + P.table.odd_vars:
        assignment[name] = rename.get(name, SuperPoly.zero(target))
    return substitute(P, assignment, target)


def po_torus(m: int) -> List[str]:
    """Coordinates c_A of the torus elements ξᵢηᵢ of po(0|m)."""
    return [f"c{i}" for i in poisson_algebra(m).torus_indices()]


def _monomial_vectors(polys: Sequence[SuperPoly]) -> Tuple[List[Vector], List[Monomial]]:
    keys = sorted({key for p in polys for key, _ in p.items()}, key=monomial_sort_key)
    index = {key: i for i, key in enumerate(keys)}
    return [{index[key]: c for key, c in p.items()} for p in polys], keys


def _partitions(total: int, parts: Sequence[int], start: int = 0) -> Iterator[Tuple[int, ...]]:
    """Multisets of indices into parts whose degrees sum to total, non-decreasing."""
    if total == 0:
        yield ()
        return
    for i in range(start, len(parts)):
        if 0 < parts[i] <= total:
            for rest in _partitions(total - parts[i], parts, i):
                yield (i,) + rest


def generator_products(generators: Sequence[SuperPoly], d: int) -> List[Tuple[Tuple[int, ...], SuperPoly]]:
    """All products of generators (with repetition) of total degree d; [()] ↦ 1 for d = 0."""
    if not generators:
        return []
    table = generators[0].table
    degrees = [p.degree() if p else 0 for p in generators]
    out = []
    for combo in _partitions(d, degrees):
        prod = SuperPoly.one(table)
        for i in combo:
            prod = prod * generators[i]
        out.append((combo, prod))
    return out


def span_membership_witness(
    candidate: SuperPoly, generators: Sequence[SuperPoly], d: int
) -> Optional[Dict[Tuple[int, ...], Fraction]]:
    """
    Coefficients on products of generators reproducing candidate, or None

    Raises:
        ValueError: If candidate is not homogeneous of degree d
    """
    if not candidate:
        return {}
    if candidate.degrees() != {d}:
        raise ValueError(f"Candidate is not homogeneous of degree {d}")
    products = [(combo, p) for combo, p in generator_products(generators, d) if p]
    if not products:
        return None
    vectors, keys = _monomial_vectors([p for _, p in products] + [candidate])
    x = solve(vectors[:-1], vectors[-1])
    if x is None:
        return None
    return {combo: c for (combo, _), c in zip(products, x) if c}


def span_membership(candidate: SuperPoly, generators: Sequence[SuperPoly], d: int) -> bool:
    """True iff candidate lies in the degree-d part of the algebra generated by generators."""
    return span_membership_witness(candidate, generators, d) is not None


def find_invariant_with_radial(
    basis: InvariantBasis,
    torus: Sequence[str],
    target: SuperPoly,
    modulo: Sequence[SuperPoly] = (),
) -> Optional[SuperPoly]:
    """
    An element of the invariant space whose radial part equals target up to the
    span of modulo, or None
    """
    radials = [radial_part(p, torus) for p in basis.basis]
    vectors, keys = _monomial_vectors(radials + list(modulo) + [target])
    x = solve(vectors[:-1], vectors[-1])
    if x is None:
        return None
    result = SuperPoly.zero(basis.table)
    for c, p in zip(x, basis.basis):
        if c:
            result = result + p.scale(c)
    return result


def exceptional_radial_targets() -> List[Tuple[str, SuperPoly]]:
    """x₁²x₂²(x₁² − x₂²) and its image x₁²x₂²(x₁² + x₂²) under x₂ ↦ i·x₂."""
    table = radial_table(2)
    x1, x2 = SuperPoly.var(table, "x1"), SuperPoly.var(table, "x2")
    base = x1 ** 2 * x2 ** 2
    return [
        (EXCEPTIONAL_RADIAL, base * (x1 ** 2 - x2 ** 2)),
        (EXCEPTIONAL_RADIAL_ROTATED, base * (x1 ** 2 + x2 ** 2)),
    ]


def find_exceptional_invariant(
    basis: InvariantBasis, torus: Sequence[str], generators: Sequence[SuperPoly]
) -> Optional[Tuple[SuperPoly, str]]:
    """
    An invariant whose radial part matches an exceptional target modulo the radial
    parts of degree-d products of generators, with the label of the matched target

    The sign between x₁⁴ and x₂⁴ depends on the bracket convention, so both
    targets are tried in order.
    """
    radial_generators = [radial_part(g, torus) for g in generators]
    modulo = [p for _, p in generator_products(radial_generators, basis.degree) if p]
    for label, target in exceptional_radial_targets():
        found = find_invariant_with_radial(basis, torus, target, modulo)
        if found is not None:
            return found, label
    return None


# -- lowest components --------------------------------------------------------


@dataclass
class LowestComponentSpan:
    """Independent lowest components and the combinations producing them"""

    table: VarTable
    basis: List[SuperPoly]
    witnesses: List[Dict[str, Any]]
    leading: List[SuperPoly]

    @property
    def dim(self) -> int:
        return len(self.basis)


def lowest_component_span(family: Sequence[HPoly], d: int) -> LowestComponentSpan:
    """
    Span of all lowest ħ-components of rational combinations of family

    Members are inserted in order of valuation. A leading coefficient vector
    is reduced against the stored ones at the same valuation; if it cancels
    completely, the remainder moves to its new valuation and is reduced
    again, until it is stored or vanishes.

    Raises:
        ValueError: If a coefficient is not homogeneous of degree d
    """
    members = [F for F in family if F]
    if not members:
        table = family[0].table if family else VarTable()
        return LowestComponentSpan(table, [], [], [])
    table = members[0].table
    for F in members:
        for _, c in F.items():
            if c.degrees() != {d}:
                raise ValueError(f"Family coefficient is not homogeneous of degree {d}")
    keys = sorted({key for F in members for _, c in F.items() for key, _ in c.items()}, key=monomial_sort_key)
    index = {key: i for i, key in enumerate(keys)}

    def expand(F: Dict[int, Vector]) -> Dict[int, Vector]:
        return {k: v for k, v in F.items() if v}

    # element: (ħ-power → coefficient vector, witness combination)
    stored: Dict[int, List[Tuple[int, Dict[int, Vector], Dict[int, Fraction]]]] = {}
    order: List[Tuple[int, int]] = []
    indexed = sorted(
        range(len(members)), key=lambda i: (members[i].valuation(), i)
    )
    for i in indexed:
        F = expand({k: {index[key]: c for key, c in coeff.items()} for k, coeff in members[i].items()})
        witness = {i: Fraction(1)}
        while F:
            v = min(F)
            for pivot, E, w in stored.get(v, []):
                lead = F.get(v, {})
                factor = lead.get(pivot)
                if not factor:
                    continue
                factor = factor / E[v][pivot]
                for k, vec in E.items():
                    target = dict(F.get(k, {}))
                    for col, c in vec.items():
                        s = target.get(col, 0) - factor * c
                        if s:
                            target[col] = s
                        else:
                            target.pop(col, None)
                    F[k] = target
                for j, c in w.items():
                    s = witness.get(j, 0) - factor * c
                    if s:
                        witness[j] = s
                    else:
                        witness.pop(j, None)
                F = expand(F)
            if not F:
                break
            if min(F) != v:
                continue
            pivot = min(F[v])
            stored.setdefault(v, []).append((pivot, F, dict(witness)))
            order.append((v, len(stored[v]) - 1))
            break

    leading: List[SuperPoly] = []
    records: List[Tuple[int, SuperPoly, Dict[int, Fraction]]] = []
    for v, pos in sorted(order):
        _, E, w = stored[v][pos]
        poly = SuperPoly(table, {keys[col]: c for col, c in E[v].items()})
        leading.append(poly)
        records.append((v, poly, w))
    tracker = EchelonBasis()
    basis, witnesses = [], []
    for v, poly, w in records:
        if tracker.add({index[key]: c for key, c in poly.items()}):
            basis.append(poly)
            witnesses.append(
                {
                    "valuation": v,
                    "combination": {str(j): str(c) for j, c in sorted(w.items())},
                    "lowest": poly.to_text(),
                }
            )
    return LowestComponentSpan(table, basis, witnesses, leading)


# -- comparison for po(0|m) ---------------------------------------------------


def moment_products(m: int, d: int, budget: Optional[int] = None) -> List[Tuple[Tuple[int, ...], HPoly]]:
    """Products s_{k₁}⋯s_{k_r} with k₁ ≤ … ≤ k_r and Σkᵢ = d."""
    table = symbol_table(m)
    if d == 0:
        return [((), HPoly.constant(table, 1))]
    moments = moment_sequence(m, d, budget)
    out = []
    for combo in _partitions(d, list(range(1, d + 1))):
        prod = HPoly.constant(table, 1)
        for i in combo:
            prod = prod * moments[i]
        out.append((tuple(i + 1 for i in combo), prod))
    return out


def conjecture6_report(
    m: int,
    d_max: int,
    budget: Optional[int] = None,
    threads: int = 1,
    convention_hash: str = "",
) -> Dict[str, Any]:
    """
    Per degree: dim of the invariants of po(0|m) against dim of the span of
    lowest components of moment products

    Every lowest component (of each product and of each stored combination)
    is checked for invariance. Even m asserts equality, odd m only reports.

    Returns:
        Dict with "degrees" (one entry per d) and "status"
    """
    if m > 6:
        raise ValueError(f"conjecture6_report supports m <= 6, got {m}")
    action = coadjoint_action(po_algebra(m))
    even = m % 2 == 0
    rows = []
    status = "ok" if even else "report-only"
    for d in range(0, d_max + 1):
        try:
            inv = invariants(action, d, weight_filter=even, threads=threads, budget=budget, convention_hash=convention_hash)
            products = moment_products(m, d, budget)
        except BudgetExceededError as e:
            logger.warning(f"⚠️ Degree {d} aborted: {e}")
            rows.append({"degree": d, "aborted": True, "processed": e.processed, "largest_block": e.largest_block})
            status = "aborted"
            break
        nonzero = [(combo, F) for combo, F in products if F]
        product_checks = []
        for combo, F in nonzero:
            v, lowest = F.valuation(), F.coefficient(F.valuation())
            product_checks.append(
                {"moments": list(combo), "valuation": v, "invariant": check_invariant(lowest, action)}
            )
        span = lowest_component_span([F for _, F in nonzero], d)
        lowest_ok = all(check_invariant(p, action) for p in span.leading)
        products_ok = all(c["invariant"] for c in product_checks)
        equal = span.dim == inv.dim
        rows.append(
            {
                "degree": d,
                "invariants_dim": inv.dim,
                "lowest_span_dim": span.dim,
                "dims_equal": equal,
                "lowest_components_invariant": lowest_ok and products_ok,
                "products": product_checks,
                "witnesses": span.witnesses,
            }
        )
        if not (lowest_ok and products_ok):
            status = "mismatch"
        elif even and not equal and status == "ok":
            status = "mismatch"
    return {"m": m, "d_max": d_max, "degrees": rows, "status": status}


def r_k_family(m: int, k_max: int) -> List[SuperPoly]:
    """[r₁, …, r_{k_max}] as coordinate polynomials on po(0|m)."""
    return [r_k_polynomial(m, k) for k in range(1, k_max + 1)]
