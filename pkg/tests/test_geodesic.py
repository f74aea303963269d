import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from subsemi.algebra import CausalType, GroupElement, Signature, Velocity, make_algebra
from subsemi.clifford import build_generators, octonion_generators, quaternion_generators
from subsemi.errors import DimensionMismatchError, InvalidRangeError, ZeroCenterVelocityError
from subsemi.geodesic import (
    Trajectory,
    block_projections,
    drift_summary,
    evaluate,
    momentum,
    projection_residuals,
    reference_curve,
    sample,
    solve_geodesic,
    speed_squared,
    translate_trajectory,
)
from subsemi.spectral import CIRCULAR, HYPERBOLIC


def heisenberg(p=1):
    return make_algebra(build_generators(2, 1), Signature.for_dimension(2, p))


def octonion(p):
    return make_algebra(octonion_generators(), Signature.for_dimension(8, p))


class StraightLineTests(unittest.TestCase):
    def test_zero_vertical_velocity(self):
        alg = octonion(2)
        v0dot = np.arange(1.0, 9.0)
        sol = solve_geodesic(alg, v0dot, np.zeros(7))
        self.assertTrue(sol.is_straight)
        state, vel = evaluate(sol, 0.6)
        assert_allclose(state.v, 0.6 * v0dot, atol=0)
        assert_array_equal(state.u, np.zeros(7))
        assert_array_equal(vel.dv, v0dot)
        assert_array_equal(vel.du, np.zeros(7))
        for velocity in sample(sol, 0.0, 2.0, 9).velocities:
            assert_array_equal(velocity.du, np.zeros(7))

    def test_no_projections(self):
        sol = solve_geodesic(heisenberg(), [1.0, 0.0], [0.0])
        with self.assertRaises(ZeroCenterVelocityError):
            projection_residuals(sol, 0.5)
        with self.assertRaises(ZeroCenterVelocityError):
            block_projections(sol, 0.5)


class HeisenbergTests(unittest.TestCase):
    def test_hyperbolic_solution(self):
        sol = solve_geodesic(heisenberg(), [1.0, 0.0], [1.0])
        for t in np.linspace(0.1, 1.0, 10):
            assert_allclose(block_projections(sol, t)[0], [np.sinh(t), np.cosh(t) - 1.0], atol=1e-12)
            state, vel = evaluate(sol, t)
            assert_allclose(state.v, [np.sinh(t), 1.0 - np.cosh(t)], atol=1e-12)
            assert_allclose(vel.dv, [np.cosh(t), -np.sinh(t)], atol=1e-12)

    def test_hyperbola_residual(self):
        sol = solve_geodesic(heisenberg(), [0.0, 1.0], [1.0])
        self.assertEqual(sol.spec.blocks[0].kind, HYPERBOLIC)
        for t in np.linspace(0.1, 1.0, 10):
            (residual,) = projection_residuals(sol, t)
            self.assertLessEqual(residual.residual, 1e-10)

    def test_riemannian_limit_traces_circle(self):
        # with the bracket [v, w] = w^T j v the center is (v0dot_2, -v0dot_1) / |u|
        v0dot = np.array([0.8, -0.3])
        norm = 2.0
        sol = solve_geodesic(heisenberg(p=0), v0dot, [norm])
        self.assertEqual(sol.spec.blocks[0].kind, CIRCULAR)
        center = np.array([v0dot[1], -v0dot[0]]) / norm
        radius = np.linalg.norm(v0dot) / norm
        for t in np.linspace(0.0, 3.0, 13):
            state, _ = evaluate(sol, t)
            self.assertAlmostEqual(np.linalg.norm(state.v - center), radius, delta=1e-12)

    def test_vertical_component_closed_form(self):
        # Lorentzian Heisenberg: u(t) = t + (sinh t - t) / 2 for v0dot = (1, 0), u0dot = 1
        sol = solve_geodesic(heisenberg(), [1.0, 0.0], [1.0])
        for t in (0.25, 0.5, 1.0):
            state, _ = evaluate(sol, t)
            self.assertAlmostEqual(state.u[0], t + 0.5 * (np.sinh(t) - t), delta=1e-10)


class EvaluateTests(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(59)
        self.alg = octonion(2)
        self.v0dot = rng.standard_normal(8)
        self.u0dot = rng.standard_normal(7)
        self.sol = solve_geodesic(self.alg, self.v0dot, self.u0dot)

    def test_initial_conditions(self):
        state, vel = evaluate(self.sol, 0.0)
        assert_allclose(state.as_array(), 0.0, atol=1e-15)
        assert_allclose(vel.dv, self.v0dot, atol=1e-9)
        assert_allclose(vel.du, self.u0dot, atol=1e-9)

    def test_velocity_matches_difference_quotient(self):
        h = 1e-4
        for t in (0.3, 0.9):
            ahead, _ = evaluate(self.sol, t + h)
            behind, _ = evaluate(self.sol, t - h)
            _, vel = evaluate(self.sol, t)
            assert_allclose((ahead.as_array() - behind.as_array()) / (2 * h), vel.as_array(), atol=1e-5)

    def test_momentum_conserved(self):
        state, vel = evaluate(self.sol, 0.7)
        assert_allclose(momentum(self.alg, state, vel), self.u0dot, atol=1e-8)

    def test_sample_matches_evaluate(self):
        traj = sample(self.sol, 0.0, 1.0, 11)
        state, _ = evaluate(self.sol, 0.8)
        assert_allclose(traj.states[8].as_array(), state.as_array(), atol=1e-8)

    def test_dimension_check(self):
        with self.assertRaises(DimensionMismatchError):
            solve_geodesic(self.alg, np.zeros(7), self.u0dot)


class SampleTests(unittest.TestCase):
    def setUp(self):
        self.alg = heisenberg()
        self.sol = solve_geodesic(self.alg, [1.0, 0.0], [1.0])

    def test_two_samples(self):
        traj = sample(self.sol, 0.0, 1.0, 2)
        self.assertEqual(len(traj), 2)
        assert_allclose(traj.states[0].as_array(), 0.0, atol=0)

    def test_grid(self):
        traj = sample(self.sol, 0.0, 1.0, 101)
        self.assertEqual(len(traj), 101)
        assert_allclose(traj.times, np.arange(101) / 100, atol=1e-15)
        self.assertIs(traj.causal, CausalType.TIMELIKE)

    def test_drift_bounds(self):
        traj = sample(self.sol, 0.0, 1.0, 101)
        drifts = drift_summary(self.alg, traj, [1.0])
        self.assertLessEqual(drifts["momentum_drift"], 1e-8)
        self.assertLessEqual(drifts["speed_drift"], 1e-9)

    def test_drift_bounds_across_fixtures(self):
        rng = np.random.default_rng(61)
        for gens in (quaternion_generators(), octonion_generators()):
            for p in range(gens.n // 2 + 1):
                alg = make_algebra(gens, Signature.for_dimension(gens.n, p))
                u0dot = rng.standard_normal(alg.m)
                traj = sample(solve_geodesic(alg, rng.standard_normal(alg.n), u0dot), 0.0, 1.0, 21)
                drifts = drift_summary(alg, traj, u0dot)
                self.assertLessEqual(drifts["momentum_drift"], 1e-8)
                self.assertLessEqual(drifts["speed_drift"], 1e-9)

    def test_invalid_ranges(self):
        with self.assertRaises(InvalidRangeError):
            sample(self.sol, 0.0, 1.0, 1)
        with self.assertRaises(InvalidRangeError):
            sample(self.sol, 1.0, 1.0, 5)

    def test_trajectory_validates_columns(self):
        state = GroupElement.of([0.0, 0.0], [0.0])
        vel = Velocity.of([1.0, 0.0], [0.0])
        with self.assertRaises(DimensionMismatchError):
            Trajectory(np.array([0.0, 1.0]), (state,), (vel, vel), CausalType.TIMELIKE)
        with self.assertRaises(InvalidRangeError):
            Trajectory(np.array([1.0, 0.0]), (state, state), (vel, vel), CausalType.TIMELIKE)


class SpeedTests(unittest.TestCase):
    def test_lightlike(self):
        self.assertEqual(speed_squared(heisenberg(), Velocity.of([1.0, 1.0], [0.0])), 0.0)

    def test_timelike_unit(self):
        alg = octonion(2)
        self.assertEqual(speed_squared(alg, Velocity.of(np.eye(8)[0], np.zeros(7))), -1.0)

    def test_left_invariant_form(self):
        alg = heisenberg()
        vel = Velocity.of([0.0, 1.0], [0.5])
        at = GroupElement.of([2.0, 0.0], [0.0])
        # [dv, v] = v^T j dv = 2, so the vertical part becomes 0.5 + 1
        self.assertAlmostEqual(speed_squared(alg, vel, at=at), 1.0 + 2.25)


class ProjectionTests(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(67)

    def _worst(self, alg):
        sol = solve_geodesic(alg, self.rng.standard_normal(alg.n), self.rng.standard_normal(alg.m))
        worst = 0.0
        for t in np.linspace(0.05, 1.0, 20):
            for residual in projection_residuals(sol, t):
                worst = max(worst, residual.residual)
        return sol, worst

    def test_circles(self):
        sol, worst = self._worst(octonion(1))
        self.assertEqual(sum(block.kind == CIRCULAR for block in sol.spec.blocks), 3)
        self.assertLessEqual(worst, 1e-10)

    def test_spirals(self):
        sol, worst = self._worst(octonion(4))
        self.assertEqual(sol.spec.k, 2)
        self.assertLessEqual(worst, 1e-9)

    def test_mixed_blocks(self):
        _, worst = self._worst(octonion(3))
        self.assertLessEqual(worst, 1e-9)

    def test_reference_curve_passes_through_samples(self):
        for p in (1, 4):
            sol = solve_geodesic(octonion(p), self.rng.standard_normal(8), self.rng.standard_normal(7))
            for index, block in enumerate(sol.spec.blocks):
                curve = reference_curve(sol, index, 0.0, 1.0, points=13)
                if block.kind == CIRCULAR:
                    pole = curve[:-1].mean(axis=0)
                    radius = np.linalg.norm(curve[0] - pole)
                    point = block_projections(sol, 0.5)[index]
                    self.assertAlmostEqual(np.linalg.norm(point - pole), radius, delta=1e-9)
                    continue
                for k in range(1, 12):
                    tau = -0.1 + 0.1 * k
                    assert_allclose(curve[k], block_projections(sol, tau)[index], atol=1e-9)


class LeftTranslationTests(unittest.TestCase):
    def test_translated_start(self):
        alg = octonion(1)
        rng = np.random.default_rng(71)
        traj = sample(solve_geodesic(alg, rng.standard_normal(8), rng.standard_normal(7)), 0.0, 1.0, 5)
        g = GroupElement(rng.standard_normal(8), rng.standard_normal(7))
        moved = translate_trajectory(alg, g, traj)
        assert_allclose(moved.states[0].as_array(), g.as_array(), atol=1e-15)
        assert_allclose(moved.velocities[0].dv, traj.velocities[0].dv, atol=0)
        drifts = drift_summary(alg, moved, np.zeros(7))
        self.assertLessEqual(drifts["speed_drift"], 1e-9)


if __name__ == "__main__":
    unittest.main()
