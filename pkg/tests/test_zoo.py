#!/usr/bin/env python3
"""
Test suites for the algebra zoo

These tests focus on:
- Dimensions of every family on small parameters
- Lie superalgebra axioms and module bracket compatibility
- The exchange format (export, import, validation)
- Volume deformations and the queertrace
"""

import unittest
from fractions import Fraction

from src.lie import LieSuperAlgebra, matmul
from src.supercore import IdentityViolationError, ParityError
from src.zoo import (
    build_action,
    build_algebra,
    center,
    coadjoint_action,
    deformation_density,
    derived_subalgebra,
    field_space,
    form_block_parity,
    form_intertwiner_defects,
    generating_subset,
    natural_action,
    po_algebra,
    queertrace_matrix,
    svect_algebra,
    svect_tilde,
    vect_algebra,
)
from tests.constants import ALGEBRA_DIMENSIONS, PQ_1_DIM, PSQ_1_DIM, SVECT_DIMENSIONS


class TestDimensions(unittest.TestCase):
    """Expected dimensions across the zoo"""

    def test_family_dimensions(self):
        """po, h, vect, q, sq and gl on small parameters"""
        for name, cases in ALGEBRA_DIMENSIONS.items():
            for size, dim in cases:
                if name == "po" and size == 0:
                    continue
                if name in ("q", "sq", "gl"):
                    g = build_algebra(name, n=size)
                else:
                    g = build_algebra(name, m=size)
                self.assertEqual(g.dim, dim, f"{name} at {size}")

    def test_divergence_free_dimensions(self):
        """dim svect(0|m) = m·2^m − (2^m − 1)"""
        for m, dim in SVECT_DIMENSIONS.items():
            self.assertEqual(svect_algebra(m).dim, dim)

    def test_projective_queer_algebras(self):
        """psq(1) is zero while pq(1) keeps the odd generator"""
        self.assertEqual(build_algebra("psq", n=1).dim, PSQ_1_DIM)
        self.assertEqual(build_algebra("pq", n=1).dim, PQ_1_DIM)

    def test_center_of_po_is_the_constants(self):
        """Only the constant function is central in po(0|m)"""
        for m in (2, 3, 4):
            self.assertEqual(len(center(po_algebra(m))), 1)

    def test_spo_candidates(self):
        """Both spo candidates sit inside po(0|m) and drop at least the top direction"""
        for m in (2, 4):
            for name in ("spo-derived", "spo-integral"):
                self.assertLess(build_algebra(name, m=m).dim, 2 ** m)

    def test_unknown_algebra_raises(self):
        """Names outside the zoo are rejected"""
        with self.assertRaises(ValueError):
            build_algebra("e8")


class TestAxioms(unittest.TestCase):
    """Every constructed algebra validates and its modules respect brackets"""

    def test_vector_fields_validate(self):
        """vect and svect on m = 2, 3 satisfy antisymmetry and Jacobi"""
        for g in (vect_algebra(2), vect_algebra(3), svect_algebra(3)):
            self.assertEqual(g.check_antisymmetry(), [])
            self.assertEqual(g.check_jacobi(), [])

    def test_partial_derivatives_act_on_coefficients(self):
        """[∂₁, θ₁∂₂] = ∂₂"""
        space = field_space(2)
        d1 = space.index[(0, 0)]
        theta1_d2 = space.index[(0b01, 1)]
        d2 = space.index[(0, 1)]
        self.assertEqual(space.bracket(d1, theta1_d2), {d2: Fraction(1)})

    def test_module_brackets(self):
        """ρ([x,y]) = ρ(x)ρ(y) − (−1)^{p(x)p(y)}ρ(y)ρ(x) for the shipped modules"""
        actions = [
            build_action(po_algebra(2), "adjoint"),
            build_action(po_algebra(3), "coadjoint"),
            build_action(build_algebra("h", m=2), "coadjoint"),
            natural_action("gl", 1),
            natural_action("q", 2),
            natural_action("sq", 2),
            build_action(vect_algebra(2), "adjoint"),
        ]
        for action in actions:
            self.assertEqual(action.check_brackets(), [], repr(action))

    def test_form_intertwines_adjoint_and_coadjoint(self):
        """x ↦ B(x, ·) is an isomorphism of modules for even m"""
        for m in (2, 4):
            g = po_algebra(m)
            self.assertEqual(form_block_parity(g), 0)
            self.assertEqual(form_intertwiner_defects(g), [])

    def test_generating_subset_generates(self):
        """The closure of the chosen generators is the whole algebra"""
        for g in (po_algebra(2), build_algebra("gl", n=1), vect_algebra(2)):
            gens = generating_subset(g)
            self.assertTrue(gens)
            self.assertLessEqual(len(gens), g.dim)

    def test_derived_subalgebra_of_po2(self):
        """[po(0|2), po(0|2)] drops the top monomial"""
        self.assertEqual(derived_subalgebra(po_algebra(2)).dim, 3)


class TestExchangeFormat(unittest.TestCase):
    """to_json / from_json / validate"""

    def test_roundtrip_preserves_fingerprint(self):
        """Export then import gives the same structure constants"""
        for g in (po_algebra(2), build_algebra("q", n=1), svect_algebra(2)):
            back = LieSuperAlgebra.from_json(g.to_json())
            back.validate()
            self.assertEqual(back.fingerprint(), g.fingerprint())
            self.assertEqual(back.sdim, g.sdim)

    def test_corrupted_constants_fail_validation(self):
        """A broken bracket is caught by validate"""
        data = po_algebra(2).to_json()
        for entry in data["basis"]:
            entry["parity"] = 1 - entry["parity"]
        with self.assertRaises(IdentityViolationError):
            LieSuperAlgebra.from_json(data).validate()


class TestDeformedVolume(unittest.TestCase):
    """svect-tilde: stabilizer of (1 + t)·vvol"""

    def test_undeformed_volume_gives_svect(self):
        """No deformation term reproduces the divergence-free fields"""
        for m in (2, 3):
            self.assertEqual(svect_tilde(m, None).dim, svect_algebra(m).dim)
            self.assertEqual(
                svect_tilde(m, None).to_json()["constants"], svect_algebra(m).to_json()["constants"]
            )

    def test_deformed_algebra_validates(self):
        """The stabilizer is closed under the bracket"""
        for m, term in ((2, "top"), (3, "pair"), (4, "top")):
            g = svect_tilde(m, term)
            self.assertGreater(g.dim, 0)
            self.assertEqual(g.check_jacobi(), [])

    def test_odd_deformation_is_rejected(self):
        """θ₁θ₂θ₃ is odd and cannot deform an even volume"""
        with self.assertRaises(ParityError):
            deformation_density(3, "top")
        with self.assertRaises(ValueError):
            deformation_density(2, "cubic")


class TestQueertrace(unittest.TestCase):
    """qtr((A B; B A)) = tr B"""

    def test_queertrace_vanishes_on_brackets(self):
        """qtr [x, y] = 0 on q(2)"""
        action = natural_action("q", 2)
        g = action.algebra
        mats = action.matrices
        for a in range(g.dim):
            for b in range(g.dim):
                sign = -1 if g.parities[a] & g.parities[b] else 1
                ab, ba = matmul(mats[a], mats[b]), matmul(mats[b], mats[a])
                self.assertEqual(queertrace_matrix(ab, 2) - sign * queertrace_matrix(ba, 2), 0)

    def test_queertrace_of_odd_identity(self):
        """The odd identity B = 1 has queertrace N"""
        action = natural_action("q", 2)
        labels = action.algebra.labels
        odd_identity = {}
        for i in (1, 2):
            for key, c in action.matrices[labels.index(f"B{i}_{i}")].items():
                odd_identity[key] = odd_identity.get(key, 0) + c
        self.assertEqual(queertrace_matrix(odd_identity, 2), 2)


class TestCoadjoint(unittest.TestCase):
    def test_coadjoint_weights_are_negated(self):
        g = po_algebra(4)
        action = coadjoint_action(g)
        for w, v in zip(g.weights, action.weights):
            self.assertEqual(tuple(-x for x in w), v)


if __name__ == "__main__":
    unittest.main()
