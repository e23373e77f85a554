#!/usr/bin/env python3
"""
Test suites for the pipelines and the command line

These tests run every subcommand on small instances and check:
- Report statuses and exit codes
- Caching and determinism of the JSON output
- The zoo exchange round trip through a file
"""

import json
import os
import tempfile
import unittest

from app import main
from constants import ExitCode, ReportStatus
from src.config import RunConfig
from src.pipelines import PipelineRunner
from src.solver import EXCEPTIONAL_RADIAL, EXCEPTIONAL_RADIAL_ROTATED, clear_invariant_cache
from tests.constants import R2_RADIAL_PO4


class PipelineTestCase(unittest.TestCase):
    """Fresh cache directory per test"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def run_command(self, **fields):
        fields.setdefault("cache_dir", os.path.join(self.tmp.name, "cache"))
        return PipelineRunner(RunConfig(**fields).validate()).run()


class TestVerificationPipelines(PipelineTestCase):
    """verify-lemma4 and verify-star3"""

    def test_lemma4_both_routes(self):
        """Every monomial pair passes for even and odd m"""
        for m in (2, 3):
            report = self.run_command(command="verify-lemma4", m=m)
            self.assertEqual(report.status, ReportStatus.OK.value)
            (result,) = report.results
            self.assertEqual(result["pairs"], 4 ** m)
            self.assertEqual(result["failures"], 0)
            self.assertEqual(result["route"], "theta" if m % 2 else "xi-eta")

    def test_star3_first_moment(self):
        """s₁ on po(0|2): lowest component −ħ·∫f"""
        report = self.run_command(command="verify-star3", n=1, k=1)
        self.assertEqual(report.status, ReportStatus.OK.value)
        first = [r for r in report.results if r["route"] == "supertrace"][0]
        self.assertEqual(first["valuation"], 1)
        self.assertEqual(first["constant"], "-1/1")
        self.assertTrue(first["exponent_matches_claim"])

    def test_star3_second_moment(self):
        """s₂ on po(0|2): lowest component proportional to ½∫f²"""
        report = self.run_command(command="verify-star3", n=1, k=2)
        self.assertEqual(report.status, ReportStatus.OK.value)
        second = [r for r in report.results if r["route"] == "supertrace" and r["k"] == 2][0]
        self.assertTrue(second["proportional"])
        self.assertIsNotNone(second["constant"])

    def test_star3_on_po4(self):
        """s₁ on po(0|4): lowest component at ħ²"""
        report = self.run_command(command="verify-star3", n=2, k=1)
        self.assertEqual(report.status, ReportStatus.OK.value)
        first = [r for r in report.results if r["route"] == "supertrace"][0]
        self.assertEqual(first["valuation"], 2)
        self.assertTrue(first["proportional"])

    def test_star3_remainder_and_route_deviations(self):
        """Each moment reports its next ħ-power; deviations from either route name the route"""
        report = self.run_command(command="verify-star3", n=1, k=2)
        for item in report.results:
            self.assertIn("remainder_order", item)
            if item["remainder_order"] is not None:
                self.assertGreater(item["remainder_order"], item["valuation"])
        deviations = report.witnesses[0]["exponent_deviations"] if report.witnesses else []
        expected = [
            (r["route"], r["k"]) for r in report.results if r["exponent_matches_claim"] is False
        ]
        self.assertEqual([(f["route"], f["k"]) for f in deviations], expected)


class TestInvariantPipelines(PipelineTestCase):
    """invariants, conjecture6, radial, membership"""

    def test_po_invariants(self):
        """One result per degree; each basis element re-checked"""
        report = self.run_command(command="invariants", algebra="po", m=2, degree=2)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertEqual([r["degree"] for r in report.results], [0, 1, 2])
        self.assertTrue(all(r["self_consistent"] for r in report.results))
        self.assertEqual(report.results[1]["dim"], 1)

    def test_vect_only_constants(self):
        """vect(0|3) asserts no invariants beyond degree 0"""
        report = self.run_command(command="invariants", algebra="vect", m=3, degree=1)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertEqual([r["dim"] for r in report.results], [1, 0])

    def test_vect3_constants_through_degree_four(self):
        """vect(0|3) has invariants only in degree 0"""
        report = self.run_command(command="invariants", algebra="vect", m=3, degree=4)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertEqual([r["dim"] for r in report.results], [1, 0, 0, 0, 0])

    def test_exceptional_radial_part(self):
        """po(0|4) in degree 6 has an invariant matching x₁²x₂²(x₁² ∓ x₂²) modulo r_k products"""
        report = self.run_command(command="radial", m=4, k=6, degree=6)
        self.assertEqual(report.status, ReportStatus.OK.value)
        (witness,) = report.witnesses
        self.assertIn(witness["matched_target"], (EXCEPTIONAL_RADIAL, EXCEPTIONAL_RADIAL_ROTATED))
        self.assertEqual(witness["matched_target"] != EXCEPTIONAL_RADIAL, "sign_deviation" in witness)

    def test_exceptional_candidate_is_not_generated(self):
        """The exceptional invariant lies outside the algebra generated by r_1..r_6"""
        report = self.run_command(command="membership", candidate="exceptional", m=4, degree=6)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertFalse(report.results[0]["member"])
        self.assertIn("matched_target", report.witnesses[0])

    def test_svect_is_report_only(self):
        """Divergence-free algebras report a verdict without failing"""
        report = self.run_command(command="invariants", algebra="svect", m=2, degree=1)
        self.assertEqual(report.status, ReportStatus.REPORT_ONLY.value)
        self.assertEqual(report.exit_code, ExitCode.OK.value)
        self.assertIn(report.witnesses[0]["verdict"], ("conjecture-consistent", "conjecture-violating"))

    def test_solver_range_is_enforced(self):
        """m beyond the solver range is invalid input"""
        report = self.run_command(command="invariants", algebra="po", m=7, degree=1)
        self.assertEqual(report.status, ReportStatus.INVALID.value)
        self.assertEqual(report.exit_code, ExitCode.INVALID_INPUT.value)

    def test_budget_abort(self):
        """A tiny budget aborts with partial results"""
        clear_invariant_cache()
        report = self.run_command(command="invariants", algebra="po", m=4, degree=2, budget=1)
        self.assertEqual(report.status, ReportStatus.ABORTED.value)
        self.assertEqual(report.exit_code, ExitCode.ABORTED.value)
        self.assertTrue(report.results[-1]["aborted"])

    def test_conjecture6_po2(self):
        """Dimensions agree for po(0|2)"""
        report = self.run_command(command="conjecture6", m=2, degree=2)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertEqual(len(report.results), 3)

    def test_radial_parts(self):
        """r_2 on po(0|4) restricts to −2x₁x₂"""
        report = self.run_command(command="radial", m=4, k=2, degree=0)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertEqual(report.results[1], {"polynomial": "r2", "radial": R2_RADIAL_PO4})

    def test_radial_needs_even_m(self):
        """Odd m has no torus of this shape"""
        report = self.run_command(command="radial", m=3)
        self.assertEqual(report.status, ReportStatus.INVALID.value)

    def test_membership_of_powers(self):
        """r_1² lies in the algebra generated by r_1"""
        report = self.run_command(command="membership", candidate="rk-power", m=2, k=1, degree=2)
        self.assertEqual(report.status, ReportStatus.OK.value)
        self.assertTrue(report.results[0]["member"])

    def test_membership_degree_must_be_a_multiple(self):
        """--degree must be divisible by --k"""
        report = self.run_command(command="membership", candidate="rk-power", m=2, k=2, degree=3)
        self.assertEqual(report.status, ReportStatus.INVALID.value)


class TestCachingAndDeterminism(PipelineTestCase):
    """Byte-identical reruns"""

    def test_cached_rerun_is_identical(self):
        """The second run is served from the cache with the same JSON"""
        first = self.run_command(command="invariants", algebra="po", m=2, degree=1)
        second = self.run_command(command="invariants", algebra="po", m=2, degree=1)
        self.assertEqual(first.render("json"), second.render("json"))

    def test_thread_count_does_not_change_content(self):
        """Reports differ at most in timing"""
        one = self.run_command(command="invariants", algebra="po", m=3, degree=2, threads=1, cache_dir=os.path.join(self.tmp.name, "a"))
        many = self.run_command(command="invariants", algebra="po", m=3, degree=2, threads=4, cache_dir=os.path.join(self.tmp.name, "b"))
        self.assertEqual(one.to_json(include_timing=False), many.to_json(include_timing=False))


class TestZooPipeline(PipelineTestCase):
    """zoo export | import"""

    def test_export_then_import(self):
        """The imported algebra has the exported fingerprint"""
        path = os.path.join(self.tmp.name, "h2.json")
        exported = self.run_command(command="zoo", zoo_action="export", algebra="h", m=2, path=path)
        self.assertEqual(exported.status, ReportStatus.OK.value)
        self.assertTrue(os.path.exists(path))
        imported = self.run_command(command="zoo", zoo_action="import", path=path)
        self.assertEqual(imported.status, ReportStatus.OK.value)
        self.assertEqual(imported.results[0]["fingerprint"], exported.results[0]["fingerprint"])

    def test_import_rejects_broken_payloads(self):
        """Missing files and malformed payloads are invalid input"""
        missing = self.run_command(command="zoo", zoo_action="import", path=os.path.join(self.tmp.name, "nope.json"))
        self.assertEqual(missing.status, ReportStatus.INVALID.value)

        path = os.path.join(self.tmp.name, "malformed.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"name": "po(0|2)", "constants": []}, f)
        malformed = self.run_command(command="zoo", zoo_action="import", path=path)
        self.assertEqual(malformed.status, ReportStatus.INVALID.value)
        self.assertEqual(malformed.exit_code, ExitCode.INVALID_INPUT.value)

    def test_import_reports_failing_identities_as_mismatch(self):
        """A well-formed payload whose bracket breaks super-antisymmetry is a mismatch"""
        path = os.path.join(self.tmp.name, "broken.json")
        exported = self.run_command(command="zoo", zoo_action="export", algebra="po", m=2)
        payload = exported.results[0]["payload"]
        for entry in payload["basis"]:
            entry["parity"] = 1 - entry["parity"]
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f)
        broken = self.run_command(command="zoo", zoo_action="import", path=path)
        self.assertEqual(broken.status, ReportStatus.MISMATCH.value)
        self.assertEqual(broken.exit_code, ExitCode.MISMATCH.value)
        self.assertIn("super-antisymmetry", broken.message)


class TestSelftest(PipelineTestCase):
    def test_selftest_passes(self):
        """Every small instance is ok or report-only"""
        report = self.run_command(command="selftest")
        self.assertEqual(report.status, ReportStatus.OK.value, report.results)


class TestCommandLine(unittest.TestCase):
    """app.main exit codes"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_ok_run_exits_zero(self):
        """A passing check returns 0"""
        code = main(["verify-lemma4", "--m", "2", "--output", "text", "--cache-dir", self.tmp.name])
        self.assertEqual(code, ExitCode.OK.value)

    def test_bad_flag_exits_two(self):
        """Unparsable or out-of-range flags return 2"""
        self.assertEqual(main(["invariants", "--m", "abc"]), ExitCode.INVALID_INPUT.value)
        self.assertEqual(main(["invariants", "--m", "99"]), ExitCode.INVALID_INPUT.value)
        self.assertEqual(main(["invariants", "--weight-filter", "sometimes"]), ExitCode.INVALID_INPUT.value)
        self.assertEqual(main(["not-a-command"]), ExitCode.INVALID_INPUT.value)

    def test_weight_filter_flag(self):
        """--weight-filter off is accepted and reported in the config echo"""
        code = main(
            ["invariants", "--algebra", "po", "--m", "2", "--degree", "1", "--weight-filter", "off", "--cache-dir", self.tmp.name]
        )
        self.assertEqual(code, ExitCode.OK.value)


if __name__ == "__main__":
    unittest.main()
