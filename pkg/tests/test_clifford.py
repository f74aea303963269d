import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from subsemi.clifford import (
    GeneratorSet,
    build_generators,
    generators_from_dict,
    generators_to_dict,
    hurwitz_radon,
    octonion_generators,
    quaternion_generators,
    validate_generators,
)
from subsemi.errors import AdmissibilityError, DimensionMismatchError


class HurwitzRadonTests(unittest.TestCase):
    def test_known_values(self):
        expected = {1: 1, 2: 2, 4: 4, 6: 2, 8: 8, 12: 4, 16: 9, 32: 10, 64: 12, 128: 16, 256: 17}
        for n, rho in expected.items():
            with self.subTest(n=n):
                self.assertEqual(hurwitz_radon(n), rho)

    def test_matches_decomposition_up_to_1024(self):
        for n in range(1, 1025):
            k, exponent = n, 0
            while k % 2 == 0:
                k //= 2
                exponent += 1
            r, s = divmod(exponent, 4)
            self.assertEqual(n, k * 2 ** (4 * r + s))
            self.assertEqual(hurwitz_radon(n), 8 * r + 2**s)

    def test_rejects_non_positive(self):
        with self.assertRaises(ValueError):
            hurwitz_radon(0)


class BuildGeneratorsTests(unittest.TestCase):
    def test_heisenberg_generator(self):
        g = build_generators(2, 1)
        assert_array_equal(g.matrices[0], [[0, 1], [-1, 0]])
        self.assertTrue(g.is_integral)

    def test_all_admissible_sets_up_to_sixteen_validate_exactly(self):
        for n in range(2, 17, 2):
            for m in range(hurwitz_radon(n)):
                with self.subTest(n=n, m=m):
                    report = validate_generators(build_generators(n, m))
                    self.assertTrue(report.passed, report.failed_names)
                    self.assertEqual(report.max_violation, 0.0)

    def test_prefix_stability(self):
        full = build_generators(16, 8)
        for m in range(9):
            assert_array_equal(build_generators(16, m).matrices, full.matrices[:m])

    def test_deterministic(self):
        assert_array_equal(build_generators(8, 7).matrices, build_generators(8, 7).matrices)

    def test_inadmissible_reports_rho(self):
        with self.assertRaises(AdmissibilityError) as ctx:
            build_generators(2, 2)
        self.assertEqual(ctx.exception.m, 2)
        self.assertEqual(ctx.exception.rho, 2)
        with self.assertRaises(AdmissibilityError):
            build_generators(16, 9)

    def test_odd_dimension_rejected(self):
        with self.assertRaises(DimensionMismatchError):
            build_generators(3, 1)

    def test_unit_combinations_square_to_minus_identity(self):
        rng = np.random.default_rng(11)
        for n, m in ((4, 3), (8, 7), (16, 8)):
            g = build_generators(n, m).as_float()
            for _ in range(100):
                u = rng.standard_normal(m)
                u /= np.linalg.norm(u)
                J = np.einsum("a,aij->ij", u, g)
                assert_allclose(J @ J, -np.eye(n), atol=1e-10)

    def test_matrices_are_read_only(self):
        g = build_generators(4, 3)
        with self.assertRaises(ValueError):
            g.matrices[0, 0, 0] = 5


class OctonionTests(unittest.TestCase):
    def test_first_generator_entries(self):
        j1 = octonion_generators().matrices[0]
        self.assertEqual(j1[0, 1], 1)
        self.assertEqual(j1[1, 0], -1)
        self.assertEqual(j1[6, 7], -1)
        self.assertEqual(j1[7, 6], 1)

    def test_last_generator_entries(self):
        j7 = octonion_generators().matrices[6]
        self.assertEqual(j7[0, 7], 1)
        self.assertEqual(j7[7, 0], -1)

    def test_validates(self):
        report = validate_generators(octonion_generators())
        self.assertTrue(report.passed)
        self.assertEqual(report.max_violation, 0.0)

    def test_quaternion_type(self):
        for k in (1, 2, 3):
            g = quaternion_generators(k)
            self.assertEqual((g.n, g.m), (4 * k, 3))
            self.assertTrue(validate_generators(g).passed)


class ValidateGeneratorsTests(unittest.TestCase):
    def test_sign_flip_still_passes(self):
        matrices = octonion_generators().as_float()
        matrices[0] = -matrices[0]
        self.assertTrue(validate_generators(GeneratorSet(8, 7, matrices)).passed)

    def test_zeroed_entry_names_violation(self):
        matrices = octonion_generators().as_float()
        matrices[0, 0, 1] = 0.0
        report = validate_generators(GeneratorSet(8, 7, matrices))
        self.assertFalse(report.passed)
        self.assertIn("skew", report.failed_names)
        self.assertIn("square", report.failed_names)
        self.assertAlmostEqual(report.to_dict()["checks"]["skew"]["max_violation"], 1.0)

    def test_commuting_pair_fails_anticommute(self):
        j = build_generators(4, 1).as_float()[0]
        report = validate_generators(GeneratorSet(4, 2, np.stack([j, j])))
        self.assertEqual(report.failed_names, ["anticommute"])

    def test_too_many_generators_inadmissible(self):
        j = build_generators(2, 1).as_float()[0]
        report = validate_generators(GeneratorSet(2, 2, np.stack([j, -j])))
        self.assertIn("admissible", report.failed_names)

    def test_loaded_set_within_tolerance(self):
        matrices = octonion_generators().as_float()
        matrices[2, 0, 3] += 1e-14
        self.assertTrue(validate_generators(GeneratorSet(8, 7, matrices)).passed)


class SerializationTests(unittest.TestCase):
    def test_document_shape(self):
        doc = generators_to_dict(octonion_generators())
        self.assertEqual((doc["n"], doc["m"]), (8, 7))
        self.assertEqual(len(doc["matrices"]), 7)
        self.assertIsInstance(doc["matrices"][0][0][1], int)
        loaded = generators_from_dict(doc)
        assert_array_equal(loaded.matrices, octonion_generators().matrices)

    def test_declared_dimensions_must_match(self):
        doc = generators_to_dict(build_generators(4, 3))
        doc["m"] = 2
        with self.assertRaises(DimensionMismatchError):
            generators_from_dict(doc)


if __name__ == "__main__":
    unittest.main()
