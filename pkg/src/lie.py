"""
Lie Superalgebra Data Types

Exact structure constants, module actions, consistency checks and the JSON
exchange format shared by the zoo, the solver and the CLI.
"""

import hashlib
import json
import random
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.supercore import IdentityViolationError, VarTable, format_rat, parse_rat

Vector = Dict[int, Fraction]
Constants = Dict[Tuple[int, int], Vector]
SparseMatrix = Dict[Tuple[int, int], Fraction]

EXHAUSTIVE_JACOBI_LIMIT = 64
SAMPLED_JACOBI_TRIPLES = 2000


def add_into(target: Vector, vec: Vector, factor: Fraction = Fraction(1)) -> None:
    for k, c in vec.items():
        s = target.get(k, 0) + factor * c
        if s:
            target[k] = s
        else:
            target.pop(k, None)


class LieSuperAlgebra:
    """Finite-dimensional Lie superalgebra given by exact structure constants"""

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        parities: Sequence[int],
        constants: Constants,
        weights: Optional[Sequence[Tuple[int, ...]]] = None,
        form: Optional[SparseMatrix] = None,
        provenance: Optional[Dict[str, Any]] = None,
    ):
        if len(labels) != len(parities):
            raise ValueError("labels and parities must have equal length")
        self.name = name
        self.labels: Tuple[str, ...] = tuple(labels)
        self.parities: Tuple[int, ...] = tuple(p % 2 for p in parities)
        self.constants: Constants = {
            key: dict(vec) for key, vec in constants.items() if any(vec.values())
        }
        self.weights = tuple(tuple(w) for w in weights) if weights is not None else None
        self.form = {k: Fraction(v) for k, v in (form or {}).items() if v} if form else None
        self.provenance = dict(provenance or {})
        self._fingerprint = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def sdim(self) -> Tuple[int, int]:
        odd = sum(self.parities)
        return self.dim - odd, odd

    def bracket_basis(self, a: int, b: int) -> Vector:
        return self.constants.get((a, b), {})

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for a, ca in u.items():
            for b, cb in v.items():
                vec = self.constants.get((a, b))
                if vec:
                    add_into(out, vec, ca * cb)
        return out

    def ad_matrix(self, gamma: int) -> SparseMatrix:
        """ad(e_γ): entry (α, β) = f_{γβ}^α."""
        out: SparseMatrix = {}
        for b in range(self.dim):
            for a, c in self.constants.get((gamma, b), {}).items():
                out[(a, b)] = c
        return out

    def is_abelian(self) -> bool:
        return not self.constants

    # -- consistency checks -------------------------------------------------

    def check_antisymmetry(self) -> List[Tuple[int, int]]:
        """Return basis pairs violating f_{ab} = −(−1)^{p_a p_b} f_{ba}."""
        bad = []
        for a in range(self.dim):
            for b in range(a, self.dim):
                sign = -1 if self.parities[a] & self.parities[b] else 1
                ab = self.bracket_basis(a, b)
                ba = self.bracket_basis(b, a)
                total = dict(ab)
                add_into(total, ba, Fraction(sign))
                if total:
                    bad.append((a, b))
        return bad

    def jacobiator(self, a: int, b: int, c: int) -> Vector:
        p = self.parities
        out: Vector = {}
        for x, y, z, s in (
            (a, b, c, p[a] * p[c]),
            (b, c, a, p[b] * p[a]),
            (c, a, b, p[c] * p[b]),
        ):
            inner = self.bracket_basis(y, z)
            if inner:
                add_into(out, self.bracket({x: Fraction(1)}, inner), Fraction(-1 if s & 1 else 1))
        return out

    def check_jacobi(self, seed: int = 0, samples: int = SAMPLED_JACOBI_TRIPLES) -> List[Tuple[int, int, int]]:
        """Exhaustive over sorted triples up to EXHAUSTIVE_JACOBI_LIMIT, sampled above."""
        if self.dim <= EXHAUSTIVE_JACOBI_LIMIT:
            triples = combinations_with_replacement(range(self.dim), 3)
        else:
            rng = random.Random(seed)
            triples = [tuple(sorted(rng.randrange(self.dim) for _ in range(3))) for _ in range(samples)]
        return [t for t in triples if self.jacobiator(*t)]

    def form_value(self, u: Vector, v: Vector) -> Fraction:
        total = Fraction(0)
        for a, ca in u.items():
            for b, cb in v.items():
                total += ca * cb * self.form.get((a, b), 0)
        return total

    def check_form_invariance(self, seed: int = 0, samples: int = SAMPLED_JACOBI_TRIPLES) -> List[Tuple[int, int, int]]:
        """Triples where B([x,y],z) ≠ B(x,[y,z]); sampled above EXHAUSTIVE_JACOBI_LIMIT."""
        if not self.form:
            return []
        if self.dim <= EXHAUSTIVE_JACOBI_LIMIT:
            triples = product(range(self.dim), repeat=3)
        else:
            rng = random.Random(seed)
            triples = [tuple(rng.randrange(self.dim) for _ in range(3)) for _ in range(samples)]
        bad = []
        for a, b, c in triples:
            ab = self.bracket_basis(a, b)
            lhs = self.form_value(ab, {c: Fraction(1)}) if ab else 0
            bc = self.bracket_basis(b, c)
            rhs = self.form_value({a: Fraction(1)}, bc) if bc else 0
            if lhs != rhs:
                bad.append((a, b, c))
        return bad

    def validate(self, check_form: bool = True) -> None:
        """
        Raise IdentityViolationError if antisymmetry, Jacobi or form invariance fails
        """
        bad = self.check_antisymmetry()
        if bad:
            raise IdentityViolationError(f"{self.name}: super-antisymmetry fails on {bad[:5]}")
        bad = self.check_jacobi()
        if bad:
            raise IdentityViolationError(f"{self.name}: super Jacobi fails on {bad[:5]}")
        if check_form and self.form:
            bad = self.check_form_invariance()
            if bad:
                raise IdentityViolationError(f"{self.name}: form is not invariant on {bad[:5]}")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        basis = []
        for i, (label, parity) in enumerate(zip(self.labels, self.parities)):
            entry = {"label": label, "parity": parity}
            if self.weights is not None:
                entry["weight"] = list(self.weights[i])
            basis.append(entry)
        constants = [
            [a, b, g, format_rat(c)]
            for (a, b) in sorted(self.constants)
            for g, c in sorted(self.constants[(a, b)].items())
        ]
        data = {"name": self.name, "basis": basis, "constants": constants}
        if self.form:
            data["form"] = [[a, b, format_rat(c)] for (a, b), c in sorted(self.form.items())]
        if self.provenance:
            data["provenance"] = self.provenance
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "LieSuperAlgebra":
        """
        Build an algebra from the exchange format

        Raises:
            ValueError: If the payload is malformed
        """
        try:
            basis = data["basis"]
            labels = [entry["label"] for entry in basis]
            parities = [int(entry["parity"]) for entry in basis]
            weights = None
            if basis and all("weight" in entry for entry in basis):
                weights = [tuple(entry["weight"]) for entry in basis]
            constants: Constants = {}
            for a, b, g, c in data.get("constants", []):
                if not (0 <= a < len(basis) and 0 <= b < len(basis) and 0 <= g < len(basis)):
                    raise ValueError(f"Index out of range in constant {[a, b, g]}")
                constants.setdefault((a, b), {})[g] = parse_rat(c)
            form = None
            if "form" in data:
                form = {(a, b): parse_rat(c) for a, b, c in data["form"]}
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed algebra payload: {e}") from e
        return cls(
            data.get("name", "imported"),
            labels,
            parities,
            constants,
            weights,
            form,
            data.get("provenance"),
        )

    def fingerprint(self) -> str:
        if self._fingerprint is None:
            payload = json.dumps(self.to_json(), sort_keys=True)
            self._fingerprint = hashlib.sha256(payload.encode()).hexdigest()
        return self._fingerprint

    def __repr__(self):
        even, odd = self.sdim
        return f"LieSuperAlgebra({self.name}, dim {even}|{odd})"


class ModuleAction:
    """
    Graded module of a Lie superalgebra

    matrices[γ][(a, b)] is the coefficient of v_a in e_γ·v_b.
    """

    def __init__(
        self,
        algebra: LieSuperAlgebra,
        kind: str,
        labels: Sequence[str],
        parities: Sequence[int],
        matrices: Sequence[SparseMatrix],
        weights: Optional[Sequence[Tuple[int, ...]]] = None,
    ):
        if len(matrices) != algebra.dim:
            raise ValueError("One action matrix per algebra basis element is required")
        self.algebra = algebra
        self.kind = kind
        self.labels = tuple(labels)
        self.parities = tuple(p % 2 for p in parities)
        self.matrices = [dict(m) for m in matrices]
        self.weights = tuple(tuple(w) for w in weights) if weights is not None else None
        self._columns = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def column(self, gamma: int, b: int) -> Vector:
        """Coordinates of e_γ·v_b."""
        if self._columns is None:
            cols = []
            for mat in self.matrices:
                by_col: Dict[int, Vector] = {}
                for (a, bb), c in mat.items():
                    by_col.setdefault(bb, {})[a] = c
                cols.append(by_col)
            self._columns = cols
        return self._columns[gamma].get(b, {})

    def var_table(self) -> VarTable:
        """Coordinate variables of the module, even and odd in basis order."""
        even = tuple(l for l, p in zip(self.labels, self.parities) if p == 0)
        odd = tuple(l for l, p in zip(self.labels, self.parities) if p == 1)
        return VarTable(even, odd)

    def check_brackets(self) -> List[Tuple[int, int]]:
        """Pairs (x, y) with ρ([x,y]) ≠ ρ(x)ρ(y) − (−1)^{p(x)p(y)} ρ(y)ρ(x)."""
        g = self.algebra
        bad = []
        for x in range(g.dim):
            for y in range(x, g.dim):
                lhs: SparseMatrix = {}
                for c, coeff in g.bracket_basis(x, y).items():
                    for key, v in self.matrices[c].items():
                        s = lhs.get(key, 0) + coeff * v
                        if s:
                            lhs[key] = s
                        else:
                            lhs.pop(key, None)
                sign = -1 if g.parities[x] & g.parities[y] else 1
                rhs = _matmul(self.matrices[x], self.matrices[y])
                for key, v in _matmul(self.matrices[y], self.matrices[x]).items():
                    s = rhs.get(key, 0) - sign * v
                    if s:
                        rhs[key] = s
                    else:
                        rhs.pop(key, None)
                if lhs != rhs:
                    bad.append((x, y))
        return bad

    def cache_key(self) -> str:
        return f"{self.algebra.fingerprint()}:{self.kind}"

    def __repr__(self):
        return f"ModuleAction({self.algebra.name}, {self.kind}, dim {self.dim})"


def _matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    rows_b: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (k, j), v in b.items():
        rows_b.setdefault(k, []).append((j, v))
    out: SparseMatrix = {}
    for (i, k), u in a.items():
        for j, v in rows_b.get(k, ()):
            s = out.get((i, j), 0) + u * v
            if s:
                out[(i, j)] = s
            else:
                out.pop((i, j), None)
    return out


def matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return _matmul(a, b)
