"""Polynomials in ħ with supercommutative polynomial coefficients."""

from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple

from src.supercore import Scalar, SuperPoly, VarTable


class HPoly:
    """Σ_k F_k ħ^k with SuperPoly coefficients; zero coefficients are never stored"""

    __slots__ = ("table", "_coeffs")

    def __init__(self, table: VarTable, coeffs: Optional[Mapping[int, SuperPoly]] = None):
        self.table = table
        self._coeffs: Dict[int, SuperPoly] = {}
        for k, c in (coeffs or {}).items():
            if k < 0:
                raise ValueError(f"Negative ħ-power {k}")
            if c.table != table:
                raise ValueError("HPoly coefficient over a different table")
            if c:
                self._coeffs[k] = c

    @classmethod
    def zero(cls, table: VarTable) -> "HPoly":
        return cls(table)

    @classmethod
    def constant(cls, table: VarTable, value: Scalar, power: int = 0) -> "HPoly":
        return cls(table, {power: SuperPoly.constant(table, value)})

    @classmethod
    def from_poly(cls, poly: SuperPoly, power: int = 0) -> "HPoly":
        return cls(poly.table, {power: poly})

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def items(self) -> Iterator[Tuple[int, SuperPoly]]:
        return iter(sorted(self._coeffs.items()))

    def coefficient(self, k: int) -> SuperPoly:
        return self._coeffs.get(k, SuperPoly.zero(self.table))

    def valuation(self) -> Optional[int]:
        return min(self._coeffs) if self._coeffs else None

    def degree(self) -> Optional[int]:
        return max(self._coeffs) if self._coeffs else None

    def shift(self, power: int) -> "HPoly":
        """Multiply by ħ^power."""
        return HPoly(self.table, {k + power: c for k, c in self._coeffs.items()})

    def scale(self, factor: Scalar) -> "HPoly":
        return HPoly(self.table, {k: c.scale(factor) for k, c in self._coeffs.items()})

    def parity_parts(self) -> Tuple["HPoly", "HPoly"]:
        even, odd = {}, {}
        for k, c in self._coeffs.items():
            e, o = c.parity_parts()
            even[k], odd[k] = e, o
        return HPoly(self.table, even), HPoly(self.table, odd)

    def sign_twist(self) -> "HPoly":
        """even part − odd part, i.e. (−1)^p applied componentwise."""
        even, odd = self.parity_parts()
        return even - odd

    def __add__(self, other: "HPoly") -> "HPoly":
        if other.table != self.table:
            raise ValueError("HPoly tables differ")
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out[k] + c if k in out else c
        return HPoly(self.table, out)

    def __neg__(self) -> "HPoly":
        return HPoly(self.table, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other: "HPoly") -> "HPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, SuperPoly):
            other = HPoly.from_poly(other)
        out: Dict[int, SuperPoly] = {}
        for i, a in self._coeffs.items():
            for j, b in other._coeffs.items():
                p = a * b
                if p:
                    out[i + j] = out[i + j] + p if i + j in out else p
        return HPoly(self.table, out)

    def __rmul__(self, other):
        if isinstance(other, SuperPoly):
            return HPoly.from_poly(other) * self
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.table == other.table and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.table, frozenset(self._coeffs.items())))

    def to_json(self) -> Dict[str, str]:
        return {str(k): c.to_text() for k, c in self.items()}

    def __repr__(self):
        if not self._coeffs:
            return "HPoly(0)"
        body = " + ".join(f"ħ^{k}·({c.to_text()})" for k, c in self.items())
        return f"HPoly({body})"


def lowest_component(F: HPoly) -> Tuple[int, SuperPoly]:
    """
    Valuation and lowest ħ-coefficient of F

    Raises:
        ValueError: If F is zero (no valuation)
    """
    k0 = F.valuation()
    if k0 is None:
        raise ValueError("Zero HPoly has no lowest component")
    return k0, F.coefficient(k0)
