"""
Supercommutative Polynomial Kernel

Exact arithmetic on polynomials in even and odd variables:
- Sparse term storage keyed by (even exponents, odd bitmask)
- Koszul-signed products, left odd derivatives, substitution
- Berezin integration (full and partial)
- Canonical text form shared by every JSON report
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

Rat = Fraction
Monomial = Tuple[Tuple[int, ...], int]
Scalar = Union[int, Fraction]


class IncompatibleAlgebrasError(ValueError):
    """Operands live over different variable tables"""


class ParityError(ValueError):
    """Parity mismatch or inhomogeneous input where homogeneity is required"""


class IdentityViolationError(ArithmeticError):
    """An identity that holds by construction fails on concrete data"""


def format_rat(value: Fraction) -> str:
    """Exact 'p/q' string used in every serialized output."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=1 << 20)
def merge_sign(a: int, b: int) -> int:
    """Sign of reordering the odd word a·b (disjoint masks) into canonical order."""
    swaps = 0
    while b:
        low = b & -b
        swaps += popcount(a >> low.bit_length())
        b ^= low
    return -1 if swaps & 1 else 1


def mask_indices(mask: int) -> Tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(frozen=True)
class VarTable:
    """Ordered even and odd variable names; the order fixes every sign."""

    even_vars: Tuple[str, ...] = ()
    odd_vars: Tuple[str, ...] = ()
    _positions: Dict[str, Tuple[int, int]] = field(
        default=None, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "even_vars", tuple(self.even_vars))
        object.__setattr__(self, "odd_vars", tuple(self.odd_vars))
        names = self.even_vars + self.odd_vars
        if len(set(names)) != len(names):
            raise ValueError(f"Variable names must be unique: {names}")
        for name in names:
            if not name or any(ch in name for ch in " *^+"):
                raise ValueError(f"Invalid variable name: {name!r}")
        positions = {name: (0, i) for i, name in enumerate(self.even_vars)}
        positions.update({name: (1, i) for i, name in enumerate(self.odd_vars)})
        object.__setattr__(self, "_positions", positions)

    @classmethod
    def grassmann(cls, m: int) -> "VarTable":
        """ξ₁..ξₙ, η₁..ηₙ for m = 2n; θ₁..θ_m for odd m."""
        if m < 0:
            raise ValueError(f"m must be nonnegative, got {m}")
        if m % 2 == 0:
            n = m // 2
            return cls(
                (),
                tuple(f"xi{i}" for i in range(1, n + 1))
                + tuple(f"eta{i}" for i in range(1, n + 1)),
            )
        return cls((), tuple(f"theta{a}" for a in range(1, m + 1)))

    @property
    def n_even(self) -> int:
        return len(self.even_vars)

    @property
    def n_odd(self) -> int:
        return len(self.odd_vars)

    @property
    def top_mask(self) -> int:
        return (1 << self.n_odd) - 1

    def locate(self, name: str) -> Tuple[int, int]:
        """Return (parity, position) of a variable."""
        try:
            return self._positions[name]
        except KeyError:
            raise ValueError(f"Variable {name!r} not in table") from None

    def __contains__(self, name: str) -> bool:
        return name in self._positions

    def restrict_odd(self, drop: Iterable[str]) -> "VarTable":
        drop = set(drop)
        return VarTable(self.even_vars, tuple(v for v in self.odd_vars if v not in drop))


def monomial_sort_key(key: Monomial) -> Tuple:
    """Total degree first, then lexicographic (larger leading exponents first)."""
    exps, mask = key
    return (sum(exps) + popcount(mask), tuple(-e for e in exps), mask_indices(mask))


def iter_monomials(table: VarTable, degree: int, parity: Optional[int] = None) -> Iterator[Monomial]:
    """All monomials of the given total degree, in canonical order."""
    keys = []
    for j in range(min(degree, table.n_odd) + 1):
        if parity is not None and j % 2 != parity:
            continue
        rest = degree - j
        if rest and not table.n_even:
            continue
        for odd in combinations(range(table.n_odd), j):
            mask = 0
            for i in odd:
                mask |= 1 << i
            for exps in _compositions(rest, table.n_even):
                keys.append((exps, mask))
    keys.sort(key=monomial_sort_key)
    return iter(keys)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _mul_terms(table: VarTable, a: Dict[Monomial, Fraction], b: Dict[Monomial, Fraction]):
    out: Dict[Monomial, Fraction] = {}
    has_even = table.n_even > 0
    for (ea, ma), ca in a.items():
        for (eb, mb), cb in b.items():
            if ma & mb:
                continue
            c = ca * cb
            if merge_sign(ma, mb) < 0:
                c = -c
            e = tuple(x + y for x, y in zip(ea, eb)) if has_even else ea
            key = (e, ma | mb)
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                s = prev + c
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


class SuperPoly:
    """Sparse supercommutative polynomial with exact rational coefficients"""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.table = table
        self._terms: Dict[Monomial, Fraction] = {}
        self._hash = None
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    self._terms[key] = Fraction(coeff)

    @classmethod
    def _raw(cls, table: VarTable, terms: Dict[Monomial, Fraction]) -> "SuperPoly":
        poly = cls.__new__(cls)
        poly.table = table
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, table: VarTable) -> "SuperPoly":
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table: VarTable, value: Scalar) -> "SuperPoly":
        if not value:
            return cls.zero(table)
        return cls._raw(table, {((0,) * table.n_even, 0): Fraction(value)})

    @classmethod
    def one(cls, table: VarTable) -> "SuperPoly":
        return cls.constant(table, 1)

    @classmethod
    def var(cls, table: VarTable, name: str) -> "SuperPoly":
        parity, pos = table.locate(name)
        if parity == 0:
            exps = tuple(1 if i == pos else 0 for i in range(table.n_even))
            return cls._raw(table, {(exps, 0): Fraction(1)})
        return cls._raw(table, {((0,) * table.n_even, 1 << pos): Fraction(1)})

    @classmethod
    def monomial(cls, table: VarTable, key: Monomial, coeff: Scalar = 1) -> "SuperPoly":
        return cls(table, {key: coeff})

    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, key: Monomial) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient(((0,) * self.table.n_even, 0))

    def _check(self, other: "SuperPoly"):
        if self.table != other.table:
            raise IncompatibleAlgebrasError(
                f"Incompatible algebras: {self.table} vs {other.table}"
            )

    def parity_parts(self) -> Tuple["SuperPoly", "SuperPoly"]:
        even: Dict[Monomial, Fraction] = {}
        odd: Dict[Monomial, Fraction] = {}
        for key, c in self._terms.items():
            (odd if popcount(key[1]) & 1 else even)[key] = c
        return SuperPoly._raw(self.table, even), SuperPoly._raw(self.table, odd)

    def parity(self) -> int:
        """Parity of a homogeneous element (zero counts as even)."""
        parities = {popcount(mask) & 1 for _, mask in self._terms}
        if len(parities) > 1:
            raise ParityError(f"Element is not parity-homogeneous: {self}")
        return parities.pop() if parities else 0

    def is_homogeneous(self) -> bool:
        return len({popcount(mask) & 1 for _, mask in self._terms}) <= 1

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) + popcount(m) for e, m in self._terms)

    def degrees(self) -> set:
        return {sum(e) + popcount(m) for e, m in self._terms}

    def __add__(self, other):
        if not isinstance(other, SuperPoly):
            other = SuperPoly.constant(self.table, other)
        self._check(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return SuperPoly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPoly._raw(self.table, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SuperPoly):
            other = SuperPoly.constant(self.table, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: Scalar) -> "SuperPoly":
        factor = Fraction(factor)
        if not factor:
            return SuperPoly.zero(self.table)
        return SuperPoly._raw(self.table, {k: c * factor for k, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPoly):
            return self.scale(other)
        self._check(other)
        return SuperPoly._raw(self.table, _mul_terms(self.table, self._terms, other._terms))

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("Negative powers are not supported")
        result = SuperPoly.one(self.table)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperPoly.constant(self.table, other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    def derivative(self, name: str) -> "SuperPoly":
        """Left derivative by an odd variable, ordinary derivative by an even one."""
        parity, pos = self.table.locate(name)
        out: Dict[Monomial, Fraction] = {}
        if parity == 0:
            for (exps, mask), c in self._terms.items():
                e = exps[pos]
                if e:
                    new = exps[:pos] + (e - 1,) + exps[pos + 1:]
                    out[(new, mask)] = c * e
        else:
            bit = 1 << pos
            below = bit - 1
            for (exps, mask), c in self._terms.items():
                if mask & bit:
                    out[(exps, mask ^ bit)] = -c if popcount(mask & below) & 1 else c
        return SuperPoly._raw(self.table, out)

    def substitute(self, assignment: Mapping[str, "SuperPoly"], target: Optional[VarTable] = None):
        return substitute(self, assignment, target)

    def to_text(self) -> str:
        return to_text(self)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"SuperPoly({to_text(self)!r})"


def mul(a: SuperPoly, b: SuperPoly) -> SuperPoly:
    """
    Koszul-signed product

    Raises:
        IncompatibleAlgebrasError: If the operands use different variable tables
    """
    return a * b


def left_deriv(v: str, f: SuperPoly) -> SuperPoly:
    """
    Odd left derivative ∂/∂v

    Args:
        v: Name of an odd variable
        f: Polynomial to differentiate

    Raises:
        ValueError: If v is not an odd variable of f's table
    """
    parity, _ = f.table.locate(v)
    if parity != 1:
        raise ParityError(f"Left derivative requires an odd variable, got {v!r}")
    return f.derivative(v)


def right_deriv(v: str, f: SuperPoly) -> SuperPoly:
    """Right derivative: ∂^R f = (-1)^(p(f)+1) ∂^L f on homogeneous parts."""
    even, odd = f.parity_parts()
    return -left_deriv(v, even) + left_deriv(v, odd)


def substitute(
    f: SuperPoly, assignment: Mapping[str, SuperPoly], target: Optional[VarTable] = None
) -> SuperPoly:
    """
    Extend a variable assignment to an algebra homomorphism

    Unassigned variables map to the same-named variable of the target table
    (the source table when no target is given).

    Raises:
        ParityError: If an assigned value has the wrong parity
        ValueError: If an unassigned variable does not exist in the target table
    """
    table = f.table
    target = target or table
    images: List[SuperPoly] = []
    for name in table.even_vars + table.odd_vars:
        parity, _ = table.locate(name)
        if name in assignment:
            value = assignment[name]
            if value.table != target:
                raise IncompatibleAlgebrasError(f"Value for {name!r} uses another table")
            if value and (not value.is_homogeneous() or value.parity() != parity):
                raise ParityError(
                    f"Substitution for {name!r} must have parity {parity}: {value}"
                )
            images.append(value)
        else:
            if name not in target or target.locate(name)[0] != parity:
                raise ValueError(f"No image for variable {name!r} in target table")
            images.append(SuperPoly.var(target, name))
    even_images = images[: table.n_even]
    odd_images = images[table.n_even:]

    power_cache: Dict[Tuple[int, int], SuperPoly] = {}

    def power(i: int, e: int) -> SuperPoly:
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = even_images[i] ** e
        return power_cache[key]

    result = SuperPoly.zero(target)
    for (exps, mask), c in f.items():
        term = SuperPoly.constant(target, c)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        for j in mask_indices(mask):
            term = term * odd_images[j]
            if not term:
                break
        if term:
            result = result + term
    return result


def apply_derivation(f: SuperPoly, images: Mapping[str, SuperPoly]) -> SuperPoly:
    """D(f) = Σ_v D(v)·∂f/∂v for the (super)derivation D determined by images."""
    out: Dict[Monomial, Fraction] = {}
    for name, image in images.items():
        if not image:
            continue
        d = f.derivative(name)
        if not d:
            continue
        for key, c in _mul_terms(f.table, image._terms, d._terms).items():
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return SuperPoly._raw(f.table, out)


def berezin(f: SuperPoly) -> Fraction:
    """
    Berezin integral: coefficient of the canonical top monomial

    Raises:
        ValueError: If the table has even variables
    """
    if f.table.n_even:
        raise ValueError("Berezin integral requires a purely odd variable table")
    return f.coefficient(((), f.table.top_mask))


def berezin_over(f: SuperPoly, names: Sequence[str]) -> SuperPoly:
    """
    Partial Berezin integral over a set of odd variables

    The remaining variables are factored to the left; the result lives over
    the table with the integrated variables removed.
    """
    table = f.table
    t_mask = 0
    for name in names:
        parity, pos = table.locate(name)
        if parity != 1:
            raise ParityError(f"Can only integrate over odd variables, got {name!r}")
        t_mask |= 1 << pos
    reduced = table.restrict_odd(names)
    keep = [i for i in range(table.n_odd) if not t_mask >> i & 1]
    out: Dict[Monomial, Fraction] = {}
    for (exps, mask), c in f.items():
        if mask & t_mask != t_mask:
            continue
        rest = mask ^ t_mask
        if merge_sign(rest, t_mask) < 0:
            c = -c
        new_mask = 0
        for new_pos, old_pos in enumerate(keep):
            if rest >> old_pos & 1:
                new_mask |= 1 << new_pos
        key = (exps, new_mask)
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return SuperPoly._raw(reduced, out)


def random_homogeneous(table: VarTable, degree: int, parity: int, seed: int, terms: int = 4) -> SuperPoly:
    """
    Reproducible pseudo-random element of the given degree and parity

    Raises:
        ValueError: If no monomial has this degree and parity
    """
    if degree < 0:
        raise ValueError(f"Degree must be nonnegative, got {degree}")
    candidates = list(iter_monomials(table, degree, parity % 2))
    if not candidates:
        raise ParityError(
            f"No monomials of degree {degree} and parity {parity} over {table}"
        )
    rng = random.Random(seed)
    picks = rng.sample(candidates, min(terms, len(candidates)))
    coeffs = {}
    for key in picks:
        num = rng.choice([n for n in range(-5, 6) if n])
        coeffs[key] = Fraction(num, rng.randint(1, 3))
    return SuperPoly(table, coeffs)


def _monomial_text(table: VarTable, key: Monomial) -> str:
    exps, mask = key
    parts = []
    for name, e in zip(table.even_vars, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    parts.extend(table.odd_vars[i] for i in mask_indices(mask))
    return "*".join(parts)


def to_text(f: SuperPoly) -> str:
    """Canonical text: terms by (degree, lex), coefficients as p/q, joined by ' + '."""
    if not f:
        return "0"
    out = []
    for key in sorted(f._terms, key=monomial_sort_key):
        mono = _monomial_text(f.table, key)
        coeff = format_rat(f._terms[key])
        out.append(f"{coeff}*{mono}" if mono else coeff)
    return " + ".join(out)


def parse_poly(text: str, table: VarTable) -> SuperPoly:
    """Inverse of to_text; factors may appear in any order (signs are applied)."""
    text = text.strip()
    result = SuperPoly.zero(table)
    if text == "0":
        return result
    for chunk in text.split(" + "):
        factors = chunk.strip().split("*")
        term = SuperPoly.constant(table, parse_rat(factors[0]))
        for factor in factors[1:]:
            name, _, exp = factor.partition("^")
            term = term * (SuperPoly.var(table, name) ** (int(exp) if exp else 1))
        result = result + term
    return result
