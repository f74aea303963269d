import unittest

from subsemi.clifford import octonion_generators
from subsemi.suite import SuiteSettings, expected_real_pairs, run_suite

SMALL = SuiteSettings(oracle_cases=2, oracle_steps=2000, oracle_samples=11, translation_cases=1)


class SuiteTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = run_suite(seed=7, settings=SMALL)

    def test_all_checks_pass(self):
        self.assertTrue(self.report.passed, self.report.failed_names)

    def test_check_names(self):
        names = {check.name for check in self.report.checks}
        for expected in (
            "octonion_char_poly",
            "parity",
            "determinant",
            "odd_minors",
            "generators",
            "j2_condition",
            "eta_j_spectra",
            "projection_curves",
            "closed_form_vs_oracle",
            "left_translation",
            "bracket_generating",
            "rk4_convergence",
        ):
            self.assertIn(expected, names)
        self.assertNotIn("injected_fault", names)

    def test_oracle_settings_reported(self):
        details = self.report.to_dict()["checks"]["closed_form_vs_oracle"]["details"]
        self.assertEqual(details["rk4_steps"], 2000)
        self.assertAlmostEqual(details["rk4_step_size"], 5e-4)
        self.assertEqual(details["compared_samples"], 11)
        self.assertNotIn("details", self.report.to_dict()["checks"]["parity"])

    def test_j2_condition_covers_every_index(self):
        check = next(check for check in self.report.checks if check.name == "j2_condition")
        # heisenberg 2, quaternion 3, octonion 5, clifford_8_7 5
        self.assertEqual(check.cases, 15)
        self.assertTrue(check.passed)

    def test_same_seed_same_report(self):
        self.assertEqual(run_suite(seed=7, settings=SMALL).to_dict(), self.report.to_dict())

    def test_injected_fault_fails(self):
        report = run_suite(seed=1, settings=SMALL, inject_fault=True)
        self.assertFalse(report.passed)
        self.assertIn("injected_fault", report.failed_names)


class RealPairTests(unittest.TestCase):
    def test_octonion_patterns(self):
        gens = octonion_generators()
        self.assertEqual(expected_real_pairs(gens, 1, 1), 1)
        self.assertEqual(expected_real_pairs(gens, 2, 1), 0)
        self.assertEqual(expected_real_pairs(gens, 4, 4), 4)
        self.assertEqual(expected_real_pairs(gens, 0, 3), 0)


if __name__ == "__main__":
    unittest.main()
