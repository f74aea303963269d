import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from subsemi.algebra import (
    CausalType,
    GroupElement,
    Signature,
    Velocity,
    a_of_u,
    bracket,
    bracket_generating_singular_values,
    causal_type,
    check_j2_condition,
    connection_on_frame,
    group_inverse,
    group_multiply,
    identity,
    inner_v,
    is_nonspacelike,
    j_of_u,
    left_invariant_frame,
    left_translate_velocity,
    make_algebra,
    metric_at,
)
from subsemi.clifford import GeneratorSet, build_generators, octonion_generators, quaternion_generators
from subsemi.errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidGeneratorsError,
    SignatureError,
)


def octonion(p):
    return make_algebra(octonion_generators(), Signature.for_dimension(8, p))


def heisenberg(p=1):
    return make_algebra(build_generators(2, 1), Signature.for_dimension(2, p))


def random_element(rng, alg):
    return GroupElement(rng.standard_normal(alg.n), rng.standard_normal(alg.m))


class SignatureTests(unittest.TestCase):
    def test_epsilon(self):
        assert_array_equal(Signature(2, 6).epsilon, [-1, -1, 1, 1, 1, 1, 1, 1])

    def test_index_above_half_rejected(self):
        with self.assertRaises(SignatureError):
            Signature.for_dimension(8, 5)

    def test_odd_dimension_rejected(self):
        with self.assertRaises(SignatureError):
            Signature(1, 2)


class MakeAlgebraTests(unittest.TestCase):
    def test_octonion_operator_at_first_axis(self):
        alg = octonion(1)
        e1 = np.eye(7)[0]
        assert_array_equal(a_of_u(alg, e1), alg.eta @ octonion_generators().as_float()[0])

    def test_heisenberg_structure_constants(self):
        alg = heisenberg()
        B = alg.structure[0]
        self.assertEqual(B.shape, (2, 2))
        self.assertEqual(B[0, 1], -B[1, 0])
        self.assertNotEqual(B[0, 1], 0.0)

    def test_structure_is_eps_weighted_operator(self):
        alg = octonion(3)
        eps = alg.sig.epsilon
        for a in range(alg.m):
            A = alg.eta_j[a]
            assert_allclose(alg.structure[a], A.T * eps[None, :], atol=0)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            make_algebra(build_generators(4, 3), Signature(1, 1))

    def test_invalid_generators_carry_report(self):
        matrices = octonion_generators().as_float()
        matrices[1, 0, 2] = 0.0
        with self.assertRaises(InvalidGeneratorsError) as ctx:
            make_algebra(GeneratorSet(8, 7, matrices), Signature(1, 7))
        self.assertFalse(ctx.exception.report.passed)

    def test_generator_stack_is_cached_and_read_only(self):
        alg = octonion(2)
        self.assertIs(alg.J, alg.J)
        assert_array_equal(alg.J, octonion_generators().as_float())
        with self.assertRaises(ValueError):
            alg.J[0, 0, 1] = 5.0

    def test_operator_is_orthogonal_and_eta_skew(self):
        alg = octonion(1)
        rng = np.random.default_rng(3)
        for _ in range(20):
            u = rng.standard_normal(7)
            A = a_of_u(alg, u)
            assert_allclose(A @ A.T, (u @ u) * np.eye(8), atol=1e-10)
            assert_allclose(alg.eta @ A + A.T @ alg.eta, 0.0, atol=1e-10)


class MetricTests(unittest.TestCase):
    def test_inner_products(self):
        self.assertEqual(inner_v(Signature(1, 1), [1, 0], [1, 0]), -1.0)
        self.assertEqual(inner_v(Signature(1, 1), [1, 1], [1, 1]), 0.0)
        e5 = np.eye(8)[4]
        self.assertEqual(inner_v(Signature(2, 6), e5, e5), 1.0)

    def test_inner_product_dimension_check(self):
        with self.assertRaises(DimensionMismatchError):
            inner_v(Signature(1, 1), [1, 0, 0], [1, 0])

    def test_causal_types(self):
        sig = Signature(1, 1)
        self.assertIs(causal_type(sig, [1, 0]), CausalType.TIMELIKE)
        self.assertIs(causal_type(sig, [1, 1]), CausalType.LIGHTLIKE)
        self.assertIs(causal_type(sig, [0, 1]), CausalType.SPACELIKE)
        self.assertIs(causal_type(sig, [0, 0]), CausalType.SPACELIKE)
        self.assertTrue(is_nonspacelike(sig, [1, 1]))
        self.assertFalse(is_nonspacelike(sig, [0, 0]))


class CliffordMapTests(unittest.TestCase):
    def test_first_axis_gives_first_generator(self):
        alg = octonion(2)
        assert_array_equal(j_of_u(alg, np.eye(7)[0]), octonion_generators().as_float()[0])

    def test_zero_vector(self):
        assert_array_equal(j_of_u(octonion(2), np.zeros(7)), np.zeros((8, 8)))

    def test_square_scales_with_norm(self):
        rng = np.random.default_rng(5)
        u = rng.standard_normal(7)
        u *= 2.0 / np.linalg.norm(u)
        J = j_of_u(octonion(0), u)
        assert_allclose(J @ J, -4.0 * np.eye(8), atol=1e-12)
        assert_allclose(J.T, -J, atol=0)

    def test_riemannian_operator_is_skew(self):
        u = np.arange(1.0, 8.0)
        A = a_of_u(octonion(0), u)
        assert_array_equal(A, j_of_u(octonion(0), u))
        assert_allclose(A.T, -A, atol=0)

    def test_heisenberg_operator(self):
        assert_array_equal(a_of_u(heisenberg(), [1.0]), [[0, -1], [-1, 0]])


class BracketTests(unittest.TestCase):
    def test_octonion_basis_bracket(self):
        e = np.eye(8)
        assert_array_equal(bracket(octonion(1), e[0], e[1]), [-1, 0, 0, 0, 0, 0, 0])

    def test_heisenberg_basis_bracket(self):
        assert_array_equal(bracket(heisenberg(), [1, 0], [0, 1]), [-1])

    def test_bilinear_and_skew(self):
        alg = octonion(2)
        rng = np.random.default_rng(7)
        for _ in range(20):
            v, w, z = rng.standard_normal((3, 8))
            a, b = rng.standard_normal(2)
            assert_allclose(bracket(alg, v, v), 0.0, atol=1e-12)
            assert_allclose(bracket(alg, v, w), -bracket(alg, w, v), atol=1e-12)
            assert_allclose(
                bracket(alg, a * v + b * w, z), a * bracket(alg, v, z) + b * bracket(alg, w, z), atol=1e-12
            )

    def test_duality_with_operator(self):
        alg = octonion(3)
        rng = np.random.default_rng(13)
        for _ in range(100):
            u = rng.standard_normal(7)
            v, w = rng.standard_normal((2, 8))
            self.assertAlmostEqual(u @ bracket(alg, v, w), inner_v(alg.sig, a_of_u(alg, u) @ v, w), delta=1e-10)


class GroupTests(unittest.TestCase):
    def test_identity_and_inverse(self):
        alg = octonion(1)
        rng = np.random.default_rng(17)
        a = random_element(rng, alg)
        right = group_multiply(alg, a, identity(alg))
        assert_array_equal(right.as_array(), a.as_array())
        back = group_multiply(alg, a, group_inverse(alg, a))
        assert_allclose(back.as_array(), 0.0, atol=1e-12)

    def test_line_through_origin(self):
        alg = heisenberg()
        v = np.array([0.3, -1.2])
        product = group_multiply(alg, GroupElement.of(v, [0.0]), GroupElement.of(-v, [0.0]))
        assert_allclose(product.as_array(), 0.0, atol=0)

    def test_associative(self):
        alg = octonion(2)
        rng = np.random.default_rng(19)
        for _ in range(10):
            a, b, c = (random_element(rng, alg) for _ in range(3))
            left = group_multiply(alg, group_multiply(alg, a, b), c)
            right = group_multiply(alg, a, group_multiply(alg, b, c))
            assert_allclose(left.as_array(), right.as_array(), atol=1e-12)

    def test_translated_velocity_is_derivative_of_translated_line(self):
        alg = octonion(3)
        rng = np.random.default_rng(23)
        g = random_element(rng, alg)
        w = random_element(rng, alg)
        pushed = left_translate_velocity(alg, g, Velocity(w.v, w.u))
        start = group_multiply(alg, g, identity(alg))
        step = group_multiply(alg, g, GroupElement(0.5 * w.v, 0.5 * w.u))
        # s -> g * (s w) is affine in s
        assert_allclose((step.as_array() - start.as_array()) / 0.5, pushed.as_array(), atol=1e-12)


class FrameTests(unittest.TestCase):
    def test_identity_frame(self):
        alg = octonion(1)
        assert_array_equal(left_invariant_frame(alg, identity(alg)), np.eye(15))

    def test_heisenberg_frame_correction(self):
        alg = heisenberg()
        frame = left_invariant_frame(alg, GroupElement.of([1.0, 0.0], [0.0]))
        self.assertAlmostEqual(frame[2, 1], 0.5 * alg.structure[0, 0, 1])

    def test_unit_determinant_and_orthonormality(self):
        alg = octonion(2)
        rng = np.random.default_rng(23)
        expected = np.diag(np.concatenate([alg.sig.epsilon, np.ones(alg.m)]))
        for _ in range(5):
            at = random_element(rng, alg)
            frame = left_invariant_frame(alg, at)
            self.assertAlmostEqual(np.linalg.det(frame), 1.0, delta=1e-12)
            assert_allclose(frame.T @ metric_at(alg, at) @ frame, expected, atol=1e-10)

    def test_bracket_generating(self):
        rng = np.random.default_rng(29)
        for alg in (heisenberg(), octonion(2), make_algebra(quaternion_generators(), Signature(1, 3))):
            for _ in range(10):
                values = bracket_generating_singular_values(alg, random_element(rng, alg))
                self.assertGreater(values[alg.n + alg.m - 1], 1e-8)


class ConnectionTests(unittest.TestCase):
    def test_vertical_pair_vanishes(self):
        alg = octonion(1)
        assert_array_equal(connection_on_frame(alg, 8, 9), np.zeros(15))

    def test_diagonal_horizontal_vanishes(self):
        alg = octonion(1)
        for i in range(8):
            assert_array_equal(connection_on_frame(alg, i, i), np.zeros(15))

    def test_horizontal_pair_is_half_bracket(self):
        alg = octonion(2)
        e = np.eye(8)
        result = connection_on_frame(alg, 0, 1)
        assert_allclose(result[8:], 0.5 * bracket(alg, e[0], e[1]), atol=0)
        assert_array_equal(result[:8], np.zeros(8))

    def test_heisenberg_mixed_term(self):
        alg = heisenberg()
        expected = -0.5 * a_of_u(alg, [1.0]) @ np.array([1.0, 0.0])
        for x, y in ((2, 0), (0, 2)):
            result = connection_on_frame(alg, x, y)
            assert_allclose(result[:2], expected, atol=0)
            self.assertEqual(result[2], 0.0)

    def test_index_out_of_range(self):
        with self.assertRaises(IndexOutOfRangeError):
            connection_on_frame(heisenberg(), 3, 0)
        with self.assertRaises(IndexError):
            connection_on_frame(heisenberg(), 0, -1)


class J2ConditionTests(unittest.TestCase):
    def test_octonion_satisfied(self):
        report = check_j2_condition(octonion(1), trials=20, seed=1)
        self.assertTrue(report.satisfied)
        self.assertFalse(report.vacuous)

    def test_octonion_satisfied_at_every_index(self):
        reports = [check_j2_condition(octonion(p), trials=10, seed=5) for p in range(5)]
        for p, report in enumerate(reports):
            self.assertTrue(report.satisfied, f"p={p}")
        # the condition only involves the generators, not the metric
        self.assertEqual({report.max_residual for report in reports}, {reports[0].max_residual})

    def test_heisenberg_vacuous(self):
        report = check_j2_condition(heisenberg())
        self.assertTrue(report.satisfied)
        self.assertTrue(report.vacuous)

    def test_quaternion_satisfied(self):
        alg = make_algebra(quaternion_generators(), Signature(2, 2))
        self.assertTrue(check_j2_condition(alg, seed=2).satisfied)

    def test_two_generators_on_four_dimensions_fail(self):
        alg = make_algebra(build_generators(4, 2), Signature(0, 4))
        report = check_j2_condition(alg, seed=3)
        self.assertFalse(report.satisfied)
        self.assertAlmostEqual(report.max_residual, 1.0, places=8)

    def test_seed_recorded(self):
        self.assertEqual(check_j2_condition(octonion(1), trials=2, seed=99).to_dict()["seed"], 99)

    def test_trials_must_be_positive(self):
        with self.assertRaises(ValueError):
            check_j2_condition(octonion(1), trials=0)


if __name__ == "__main__":
    unittest.main()
