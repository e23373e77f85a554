#!/usr/bin/env python3
"""
Test suites for the Clifford quantization

These tests focus on:
- The ħ-deformed Clifford relations
- Q and the quantization defect on both parities of m
- Odd generators, the structure element J and the queertrace
"""

import unittest
from unittest.mock import patch

from src.clifford import (
    EMPTY_TABLE,
    CliffordElement,
    NotInSubalgebraError,
    Q,
    calibrate_bracket,
    defect_ok,
    lemma4_defect,
    odd_generators,
    odd_structure_element,
    qtr,
    supercommutator,
    surviving_conventions,
    theta_word,
)
from src.fock import FockRep, odd_trace, qtr_matrix_constant
from src.hpoly import HPoly
from src.poisson import poisson_algebra
from src.supercore import IdentityViolationError, SuperPoly, VarTable


def hbar_identity(n: int, coeff: int = 1) -> CliffordElement:
    return CliffordElement(n, EMPTY_TABLE, {(0, 0): HPoly.constant(EMPTY_TABLE, coeff, power=1)})


class TestCliffordRelations(unittest.TestCase):
    """ξ̂ᵢη̂ⱼ + η̂ⱼξ̂ᵢ = δᵢⱼħ and ξ̂, η̂ anticommute among themselves"""

    def test_generator_relations(self):
        """Only ξ̂ᵢ and η̂ᵢ pair nontrivially"""
        n = 2
        zero = CliffordElement(n)
        for i in (1, 2):
            for j in (1, 2):
                expected = hbar_identity(n) if i == j else zero
                self.assertEqual(supercommutator(CliffordElement.xi(n, i), CliffordElement.eta(n, j)), expected)
                self.assertEqual(supercommutator(CliffordElement.xi(n, i), CliffordElement.xi(n, j)), zero)
                self.assertEqual(supercommutator(CliffordElement.eta(n, i), CliffordElement.eta(n, j)), zero)

    def test_quantization_of_constants(self):
        """Q(1) is the identity and Q(ξ₁) is ξ̂₁"""
        table = VarTable.grassmann(2)
        self.assertEqual(Q(SuperPoly.one(table)), CliffordElement.identity(1))
        self.assertEqual(Q(SuperPoly.var(table, "xi1")), CliffordElement.xi(1, 1))

    def test_q_rejects_even_variables(self):
        """The Grassmann table must be purely odd"""
        with self.assertRaises(ValueError):
            Q(SuperPoly.one(VarTable(("x",), ())))


class TestQuantizationDefect(unittest.TestCase):
    """[Q(f),Q(g)] − ħQ({f,g}) starts at ħ²"""

    def test_defect_on_all_monomial_pairs(self):
        """Both the ξ/η route (even m) and the θ route (odd m)"""
        for m in (1, 2, 3, 4):
            P = poisson_algebra(m)
            basis = P.basis()
            for f in basis:
                for g in basis:
                    self.assertTrue(defect_ok(lemma4_defect(f, g, P)), f"m={m}: {f} , {g}")

    def test_defect_on_larger_m(self):
        """All 4^m pairs for m = 5 (θ route) and m = 6 (ξ/η route)"""
        for m in (5, 6):
            P = poisson_algebra(m)
            basis = P.basis()
            failures = [(f, g) for f in basis for g in basis if not defect_ok(lemma4_defect(f, g, P))]
            self.assertEqual(failures, [], f"m={m}")

    def test_defect_vanishes_for_generators(self):
        """Quantization is exact on pairs of generators"""
        P = poisson_algebra(2)
        xi, eta = (SuperPoly.var(P.table, v) for v in P.table.odd_vars)
        self.assertFalse(lemma4_defect(xi, eta, P))

    def test_calibration_is_recorded(self):
        """The chosen convention serializes for the report"""
        record = calibrate_bracket(2).describe()
        self.assertIn(record["first_slot_derivative"], ("left", "right"))
        self.assertIn(record["global_sign"], (1, -1))

    def test_exactly_one_convention_survives(self):
        """Defect, antisymmetry and Jacobi leave a single bracket"""
        for m in (1, 2, 3, 4):
            groups = surviving_conventions(m)
            self.assertEqual(len(groups), 1, f"m={m}")
            self.assertIn(calibrate_bracket(m), groups[0])
        for m in (2, 3, 4):
            self.assertEqual(len(surviving_conventions(m)[0]), 1, f"m={m}")

    def test_calibration_requires_a_unique_survivor(self):
        """No surviving bracket, or two inequivalent ones, is a failing identity"""
        uncached = calibrate_bracket.__wrapped__
        survivor = calibrate_bracket(2)
        for groups in ((), ((survivor,), (survivor,))):
            with patch("src.clifford.surviving_conventions", return_value=groups):
                with self.assertRaises(IdentityViolationError):
                    uncached(2)
        with patch("src.clifford.surviving_conventions", return_value=((survivor,),)):
            self.assertEqual(uncached(2), survivor)


class TestOddGenerators(unittest.TestCase):
    """θ̂_a = ξ̂ᵢ ± η̂ᵢ and J = θ̂_{2n}"""

    def test_generators_are_orthogonal(self):
        """[θ̂_a, θ̂_b] vanishes for a ≠ b and is ±2ħ on the diagonal"""
        n = 2
        gens = odd_generators(n)
        self.assertEqual(len(gens), 2 * n - 1)
        for a, ga in enumerate(gens, start=1):
            for b, gb in enumerate(gens, start=1):
                comm = supercommutator(ga, gb)
                if a != b:
                    self.assertFalse(comm)
                else:
                    self.assertEqual(comm, hbar_identity(n, 2 if a % 2 else -2))

    def test_structure_element_supercommutes(self):
        """J supercommutes with every odd generator"""
        for n in (1, 2):
            J = odd_structure_element(n)
            for gen in odd_generators(n):
                self.assertFalse(supercommutator(J, gen))

    def test_qtr_of_top_blade(self):
        """The top blade has queertrace 1; J lies outside the odd subalgebra"""
        for n in (1, 2):
            top = (1 << (2 * n - 1)) - 1
            self.assertEqual(qtr(theta_word(n, top)), HPoly.constant(EMPTY_TABLE, 1))
        with self.assertRaises(NotInSubalgebraError):
            qtr(odd_structure_element(1))

    def test_qtr_vanishes_on_supercommutators(self):
        """qtr [a, b] = 0 for every pair of θ̂-blades, n ≤ 2"""
        for n in (1, 2):
            blades = [theta_word(n, mask) for mask in range(1 << (2 * n - 1))]
            for a in blades:
                for b in blades:
                    self.assertFalse(qtr(supercommutator(a, b)))

    def test_fock_odd_trace_is_proportional_to_qtr(self):
        """str(ρ(J)ρ(x)) = κ·qtr(x) on every blade"""
        for n in (1, 2):
            kappa = qtr_matrix_constant(n)
            self.assertTrue(kappa)
            for mask in range(1 << (2 * n - 1)):
                blade = theta_word(n, mask)
                self.assertEqual(odd_trace(blade, FockRep(n)), kappa * qtr(blade))


if __name__ == "__main__":
    unittest.main()
