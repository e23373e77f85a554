#!/usr/bin/env python3
"""
Test suites for the invariant solver

The dense sympy nullspace in tests/utils.py is the oracle for the sparse
solver; the remaining tests pin invariance, radial parts, span membership
and the lowest-component span.
"""

import unittest
from fractions import Fraction

from src.hpoly import HPoly
from src.linalg import BudgetExceededError
from src.poisson import r_k_polynomial
from src.solver import (
    PolySpaceBasis,
    check_invariant,
    clear_invariant_cache,
    conjecture6_report,
    exceptional_radial_targets,
    find_exceptional_invariant,
    find_invariant_with_radial,
    generator_products,
    invariants,
    lowest_component_span,
    moment_products,
    po_torus,
    r_k_family,
    radial_part,
    radial_table,
    span_membership,
    span_membership_witness,
    supertrace_polynomial,
    torus_grading,
)
from src.supercore import SuperPoly, VarTable
from src.zoo import adjoint_action, build_algebra, coadjoint_action, natural_action, po_algebra, vect_algebra
from tests.constants import (
    GL11_DEGREE1_DIM,
    PO4_INVARIANT_DIMS,
    PO_INVARIANT_DIMS,
    R2_RADIAL_PO4,
    VECT3_INVARIANT_DIMS,
)
from tests.utils import dense_invariant_basis, dense_invariant_dim


class TestInvariants(unittest.TestCase):
    """Kernels of the stacked derivation matrices"""

    def test_small_dimensions(self):
        """Known dimensions for po(0|2) and gl(1|1)"""
        for (m, d), dim in PO_INVARIANT_DIMS.items():
            self.assertEqual(invariants(coadjoint_action(po_algebra(m)), d).dim, dim)
        gl = build_algebra("gl", n=1)
        self.assertEqual(invariants(coadjoint_action(gl), 1).dim, GL11_DEGREE1_DIM)

    def test_matches_dense_oracle(self):
        """Sparse solver over a generating subset agrees with the dense kernel over all of g"""
        cases = [
            (coadjoint_action(po_algebra(2)), 2),
            (coadjoint_action(po_algebra(2)), 3),
            (coadjoint_action(build_algebra("gl", n=1)), 2),
            (coadjoint_action(build_algebra("q", n=1)), 2),
            (adjoint_action(po_algebra(3)), 2),
        ]
        for action, d in cases:
            sparse = invariants(action, d, weight_filter=False)
            self.assertEqual(sparse.dim, dense_invariant_dim(action, d), repr(action))
            self.assertEqual([p.to_text() for p in sparse.basis], dense_invariant_basis(action, d), repr(action))

    def test_weight_filter_does_not_change_the_answer(self):
        """Grade-zero restriction returns the identical canonical basis"""
        for m, d in ((2, 2), (4, 2)):
            action = coadjoint_action(po_algebra(m))
            on = invariants(action, d, weight_filter=True)
            off = invariants(action, d, weight_filter=False)
            self.assertEqual([p.to_text() for p in on.basis], [p.to_text() for p in off.basis])

    def test_every_basis_element_is_invariant(self):
        """Solver output passes the independent invariance check"""
        action = coadjoint_action(po_algebra(4))
        for p in invariants(action, 3).basis:
            self.assertTrue(check_invariant(p, action))

    def test_threads_do_not_change_the_result(self):
        """Parallel assembly gives the same basis"""
        action = coadjoint_action(po_algebra(3))
        clear_invariant_cache()
        one = invariants(action, 3, threads=1).to_json()
        clear_invariant_cache()
        many = invariants(action, 3, threads=4).to_json()
        self.assertEqual(one, many)

    def test_vector_fields_have_only_constants(self):
        """vect(0|3) has no invariants beyond the constants through degree 4"""
        action = adjoint_action(vect_algebra(3))
        self.assertEqual([invariants(action, d).dim for d in range(5)], VECT3_INVARIANT_DIMS)

    def test_budget_aborts(self):
        """Exceeding the nonzero budget raises with progress information"""
        clear_invariant_cache()
        with self.assertRaises(BudgetExceededError) as ctx:
            invariants(coadjoint_action(po_algebra(4)), 2, budget=1)
        self.assertGreaterEqual(ctx.exception.largest_block, 1)

    def test_budget_applies_to_cached_results(self):
        """A basis already in the cache still respects a smaller budget"""
        action = coadjoint_action(po_algebra(4))
        solved = invariants(action, 2)
        with self.assertRaises(BudgetExceededError) as ctx:
            invariants(action, 2, budget=1)
        first_over = next(i for i, total in enumerate(solved.block_nnz) if total > 1)
        self.assertEqual(ctx.exception.processed, first_over)
        self.assertEqual(ctx.exception.largest_block, solved.monomials)
        self.assertEqual(invariants(action, 2, budget=10 ** 9).basis, solved.basis)

    def test_negative_degree_raises(self):
        """Degrees start at 0"""
        with self.assertRaises(ValueError):
            PolySpaceBasis(coadjoint_action(po_algebra(2)), -1)

    def test_torus_grading(self):
        """po(0|2) acts diagonally through ξη; vect fields too through θᵢ∂ᵢ"""
        self.assertIsNotNone(torus_grading(coadjoint_action(po_algebra(2))))
        self.assertIsNotNone(torus_grading(adjoint_action(vect_algebra(2))))

    def test_serialization(self):
        """InvariantBasis JSON carries canonical text and the dimension"""
        data = invariants(coadjoint_action(po_algebra(2)), 1, convention_hash="abc").to_json()
        self.assertEqual(data["dim"], 1)
        self.assertEqual(data["convention_hash"], "abc")
        self.assertEqual(len(data["basis"]), 1)


class TestKnownInvariants(unittest.TestCase):
    """r_k and supertrace polynomials"""

    def test_r_k_are_invariant(self):
        """∫f^k is invariant on po(0|m) for both parities of m"""
        for m in (2, 3, 4):
            action = coadjoint_action(po_algebra(m))
            for k in (1, 2, 3):
                self.assertTrue(check_invariant(r_k_polynomial(m, k), action), f"m={m}, k={k}")

    def test_first_supertrace_polynomial_is_invariant(self):
        """str ρ(X) on gl(1|1)"""
        action = natural_action("gl", 1)
        P = supertrace_polynomial(action, 1)
        self.assertTrue(P)
        self.assertTrue(check_invariant(P, coadjoint_action(action.algebra)))

    def test_non_invariant_is_detected(self):
        """A single coordinate off the center fails the check"""
        action = coadjoint_action(po_algebra(2))
        table = action.var_table()
        self.assertFalse(check_invariant(SuperPoly.var(table, "c1"), action))


class TestRadialParts(unittest.TestCase):
    """Restriction to the torus ξᵢηᵢ"""

    def test_r_k_radial_parts_on_po4(self):
        """Only r_2 survives in low degree: r_2 ↦ −2x₁x₂, r_1 ↦ 0"""
        torus = po_torus(4)
        r1, r2 = r_k_family(4, 2)
        self.assertEqual(radial_part(r1, torus).to_text(), "0")
        self.assertEqual(radial_part(r2, torus).to_text(), R2_RADIAL_PO4)

    def test_find_invariant_with_given_radial_part(self):
        """The solver recovers an invariant from its radial part"""
        torus = po_torus(4)
        basis = invariants(coadjoint_action(po_algebra(4)), 2)
        target = radial_part(r_k_polynomial(4, 2), torus)
        found = find_invariant_with_radial(basis, torus, target)
        self.assertIsNotNone(found)
        self.assertEqual(radial_part(found, torus), target)

    def test_unreachable_radial_part(self):
        """A non-symmetric target has no invariant preimage"""
        torus = po_torus(4)
        basis = invariants(coadjoint_action(po_algebra(4)), 2)
        x1 = SuperPoly.var(radial_table(2), "x1")
        self.assertIsNone(find_invariant_with_radial(basis, torus, x1 * x1))

    def test_exceptional_invariant_exists(self):
        """Degree 6 on po(0|4) has an invariant matching x₁²x₂²(x₁² ∓ x₂²) modulo r_k products"""
        torus = po_torus(4)
        action = coadjoint_action(po_algebra(4))
        basis = invariants(action, 6)
        found = find_exceptional_invariant(basis, torus, r_k_family(4, 6))
        self.assertIsNotNone(found)
        exceptional, label = found
        self.assertIn(label, [name for name, _ in exceptional_radial_targets()])
        self.assertTrue(check_invariant(exceptional, action))
        self.assertFalse(span_membership(exceptional, r_k_family(4, 6), 6))

    def test_r_k_products_do_not_reach_the_exceptional_targets(self):
        """Radial parts of r_k products in degree 6 are multiples of x₁³x₂³"""
        torus = po_torus(4)
        radials = [radial_part(r, torus) for r in r_k_family(4, 6)]
        products = [p for _, p in generator_products(radials, 6) if p]
        self.assertTrue(products)
        table = radial_table(2)
        cube = (SuperPoly.var(table, "x1") * SuperPoly.var(table, "x2")) ** 3
        for p in products:
            self.assertEqual(set(p.terms()), set(cube.terms()))
        for _, target in exceptional_radial_targets():
            self.assertNotEqual(set(target.terms()), set(cube.terms()))


class TestSpanMembership(unittest.TestCase):
    """Degree-d part of the algebra generated by a family"""

    def test_powers_are_members(self):
        """r_k^j lies in the algebra generated by r_k"""
        for m, k in ((2, 1), (4, 2)):
            r = r_k_polynomial(m, k)
            self.assertTrue(span_membership(r * r, [r], 2 * k))
        r2 = r_k_polynomial(4, 2)
        witness = span_membership_witness(r2 * r2.scale(3), [r2], 4)
        self.assertEqual(witness, {(0, 0): Fraction(3)})

    def test_non_member(self):
        """r_2 is not a multiple of r_1² on po(0|4)"""
        r1, r2 = r_k_family(4, 2)
        self.assertFalse(span_membership(r2, [r1], 2))

    def test_zero_is_always_a_member(self):
        """The empty combination represents 0"""
        r1 = r_k_polynomial(2, 1)
        self.assertTrue(span_membership(SuperPoly.zero(r1.table), [r1], 3))

    def test_inhomogeneous_candidate_raises(self):
        """The candidate must have degree exactly d"""
        r1 = r_k_polynomial(2, 1)
        with self.assertRaises(ValueError):
            span_membership(r1 + r1 * r1, [r1], 2)


class TestLowestComponentSpan(unittest.TestCase):
    """Valuation-aware span of lowest ħ-components"""

    def setUp(self):
        self.table = VarTable(("a", "b"), ())
        a, b = SuperPoly.var(self.table, "a"), SuperPoly.var(self.table, "b")
        self.u, self.v = a * a, b * b

    def test_cancellation_exposes_higher_component(self):
        """{3ħ²u, 3ħ²u + ħ³v} spans lowest components u and v"""
        F1 = HPoly(self.table, {2: self.u.scale(3)})
        F2 = HPoly(self.table, {2: self.u.scale(3), 3: self.v})
        span = lowest_component_span([F1, F2], 2)
        self.assertEqual(span.dim, 2)
        self.assertIn(self.v.to_text(), [p.to_text() for p in span.basis])
        self.assertEqual(span.witnesses[1]["valuation"], 3)
        self.assertEqual(span.witnesses[1]["combination"], {"0": "-1", "1": "1"})

    def test_independent_members(self):
        """Members with independent lowest components are kept as they are"""
        F1 = HPoly(self.table, {0: self.u})
        F2 = HPoly(self.table, {1: self.v})
        self.assertEqual(lowest_component_span([F1, F2], 2).dim, 2)

    def test_empty_family(self):
        """No members, no basis"""
        span = lowest_component_span([], 2)
        self.assertEqual(span.dim, 0)
        self.assertEqual(lowest_component_span([HPoly.zero(self.table)], 2).dim, 0)

    def test_wrong_degree_raises(self):
        """Coefficients must be homogeneous of degree d"""
        with self.assertRaises(ValueError):
            lowest_component_span([HPoly(self.table, {0: self.u})], 3)


class TestConjectureComparison(unittest.TestCase):
    """Invariants against lowest components of moment products"""

    def test_moment_products(self):
        """Partitions of d index the products"""
        combos = {combo for combo, _ in moment_products(2, 3)}
        self.assertEqual(combos, {(1, 1, 1), (1, 2), (3,)})
        self.assertEqual([c for c, _ in moment_products(2, 0)], [()])

    def test_po2_agrees(self):
        """Even m asserts equal dimensions degree by degree"""
        report = conjecture6_report(2, 3)
        self.assertEqual(report["status"], "ok")
        for row in report["degrees"]:
            self.assertTrue(row["dims_equal"], row)
            self.assertTrue(row["lowest_components_invariant"], row)

    def test_po4_agrees_through_degree_six(self):
        """po(0|4): invariants and lowest components agree degree by degree"""
        report = conjecture6_report(4, 6)
        self.assertEqual(report["status"], "ok")
        self.assertEqual([row["invariants_dim"] for row in report["degrees"]], PO4_INVARIANT_DIMS)
        for row in report["degrees"]:
            self.assertTrue(row["dims_equal"], row)

    def test_large_m_is_rejected(self):
        """m above the supported range raises"""
        with self.assertRaises(ValueError):
            conjecture6_report(7, 1)


if __name__ == "__main__":
    unittest.main()
