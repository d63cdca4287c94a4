# Copyright 2023 The pseudowarp Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import unittest

import numpy as np
from parameterized import parameterized

from pseudowarp.circles import (
    CircleState,
    circle_center,
    circle_closed_form,
    circle_integrate,
    circle_residual,
    closed_form_trajectory,
    evaluate_circle,
    geodesic_time_span,
    sphere_geodesic_is_circle,
)
from pseudowarp.pseudo_linear import Space, Subspace, inner
from pseudowarp.spheres import SphereInitialData, classify_sphere
from pseudowarp.test_utils import assert_vectors_close
from pseudowarp.utils import CircleClass


# (name, dim, index, X axis, Y axis, time span): trigonometric circles run a full turn, hyperbolic ones stay short
CIRCLE_SETTINGS = [
    ("euclidean", 2, 0, 0, 1, 2 * np.pi),
    ("euclidean_3d", 3, 0, 2, 0, 2 * np.pi),
    ("hyperbola", 2, 1, 1, 0, 3.0),
    ("timelike_hyperbola", 2, 1, 0, 1, 3.0),
    ("lorentzian_circle", 3, 1, 1, 2, 2 * np.pi),
    ("timelike_circle", 3, 2, 0, 1, 2 * np.pi),
]


def make_state(dim, index, x_axis, y_axis, k, p=None):
    space = Space(dim, index)
    e = np.eye(dim)
    p = np.linspace(-1.0, 1.0, dim) if p is None else p
    return CircleState(space, p, e[x_axis], k * e[y_axis])


class CircleStateTester(unittest.TestCase):
    def test_velocity_must_be_unit(self):
        with self.assertRaisesRegex(ValueError, "unit length"):
            CircleState(Space(2), [0, 0], [2, 0], [0, 1])

    def test_acceleration_must_be_orthogonal(self):
        with self.assertRaisesRegex(ValueError, "orthogonal"):
            CircleState(Space(2), [0, 0], [1, 0], [1, 1])

    def test_classes(self):
        space = Space(3, 1)
        proper = CircleState(space, [0, 0, 0], [0, 0, 1], [2, 0, 0])
        self.assertEqual(proper.circle_class, CircleClass.PROPER)
        self.assertEqual((proper.eps0, proper.eps1, proper.k), (1, -1, 2.0))

        null = CircleState(space, [0, 0, 0], [0, 0, 1], [1, 1, 0])
        self.assertEqual(null.circle_class, CircleClass.NULL_CIRCLE)
        self.assertEqual((null.eps1, null.k), (0, 0.0))

        geodesic = CircleState(space, [0, 0, 0], [1, 0, 0], [0, 0, 0])
        self.assertEqual(geodesic.circle_class, CircleClass.GEODESIC)
        self.assertEqual(geodesic.eps0, -1)

    def test_to_dict(self):
        state = make_state(2, 0, 0, 1, 2.0)
        summary = state.to_dict()
        self.assertEqual(summary["class"], CircleClass.PROPER)
        self.assertEqual(summary["k"], 2.0)
        self.assertEqual((summary["eps0"], summary["eps1"]), (1, 1))


class ClosedFormTester(unittest.TestCase):
    def test_unit_circle(self):
        state = CircleState(Space(2), [0.0, 0.0], [1.0, 0.0], [0.0, 1.0])
        assert_vectors_close(self, circle_center(state), [0.0, 1.0])
        assert_vectors_close(self, circle_closed_form(state, np.pi / 2), [1.0, 1.0], atol=1e-12)
        assert_vectors_close(self, circle_closed_form(state, np.pi), [0.0, 2.0], atol=1e-12)

    def test_hyperbola_center(self):
        # X spacelike, Y timelike: the center lies on the far side of Y
        state = CircleState(Space(2, 1), [0.0, 0.0], [0.0, 1.0], [1.0, 0.0])
        assert_vectors_close(self, circle_center(state), [-1.0, 0.0])
        assert_vectors_close(self, circle_closed_form(state, 1.0), [np.cosh(1.0) - 1.0, np.sinh(1.0)], atol=1e-12)

    @parameterized.expand(CIRCLE_SETTINGS)
    def test_initial_conditions_and_radius(self, name, dim, index, x_axis, y_axis, t_max):
        for k in (0.5, 1.0, 2.0):
            state = make_state(dim, index, x_axis, y_axis, k)
            with self.subTest(k=k):
                trajectory = closed_form_trajectory(state, np.linspace(0.0, t_max, 50))
                assert_vectors_close(self, trajectory.positions[0], state.p, atol=1e-12)
                assert_vectors_close(self, trajectory.velocities[0], state.X, atol=1e-12)
                assert_vectors_close(self, trajectory.accelerations[0], state.Y, atol=1e-12)
                offsets = trajectory.positions - circle_center(state)
                radius = inner(state.space, offsets, offsets)
                scale = 1 + np.max(np.abs(offsets)) ** 2
                np.testing.assert_allclose(radius, state.eps1 / k**2, atol=1e-10 * scale)

    def test_vectorized_evaluation(self):
        state = make_state(3, 1, 1, 2, 1.0)
        times = np.linspace(-1.0, 1.0, 7)
        stacked = evaluate_circle(state, times)
        self.assertEqual(stacked.shape, (7, 3))
        for t, row in zip(times, stacked):
            assert_vectors_close(self, row, evaluate_circle(state, t), atol=1e-14)

    def test_degenerate_classes(self):
        space = Space(3, 1)
        null = CircleState(space, [1, 2, 3], [0, 0, 1], [1, 1, 0])
        assert_vectors_close(self, evaluate_circle(null, 2.0), [3.0, 4.0, 5.0])
        geodesic = CircleState(space, [1, 2, 3], [0, 1, 0], [0, 0, 0])
        assert_vectors_close(self, evaluate_circle(geodesic, 2.0), [1.0, 4.0, 3.0])
        for state in (null, geodesic):
            with self.assertRaises(ValueError):
                circle_center(state)
            with self.assertRaises(ValueError):
                circle_closed_form(state, 1.0)


class IntegrationTester(unittest.TestCase):
    @parameterized.expand(CIRCLE_SETTINGS)
    def test_agrees_with_closed_form(self, name, dim, index, x_axis, y_axis, t_max):
        grid = np.linspace(0.0, t_max, 40)
        for k in (0.5, 1.0, 2.0):
            state = make_state(dim, index, x_axis, y_axis, k)
            with self.subTest(k=k):
                trajectory = circle_integrate(state, grid)
                exact = closed_form_trajectory(state, grid)
                scale = 1 + np.linalg.norm(exact.positions, axis=-1)
                self.assertTrue(np.all(trajectory.deviation(exact.positions) <= 1e-6 * scale))
                assert_vectors_close(self, trajectory.velocities, exact.velocities, atol=1e-6 * scale.max())
                for quantity, drift in trajectory.drift().items():
                    self.assertLessEqual(drift, 1e-6 * scale.max(), msg=quantity)

    def test_null_circle_is_quadratic(self):
        state = CircleState(Space(3, 1), [0, 0, 0], [0, 0, 1], [1, 1, 0])
        grid = np.linspace(0.0, 5.0, 11)
        trajectory = circle_integrate(state, grid, step=0.1)
        assert_vectors_close(self, trajectory.positions, evaluate_circle(state, grid), atol=1e-10)
        assert_vectors_close(self, trajectory.accelerations, np.tile([1.0, 1.0, 0.0], (11, 1)), atol=1e-12)

    def test_backwards_in_time(self):
        state = make_state(2, 0, 0, 1, 1.0)
        grid = np.linspace(0.0, -2.0, 5)
        trajectory = circle_integrate(state, grid)
        assert_vectors_close(self, trajectory.positions, circle_closed_form(state, grid), atol=1e-9)

    def test_grid_and_step_checks(self):
        state = make_state(2, 0, 0, 1, 1.0)
        with self.assertRaises(ValueError):
            circle_integrate(state, [0.0, 1.0, 0.5])
        with self.assertRaises(ValueError):
            circle_integrate(state, [0.0, 1.0], step=0.0)

    def test_grid_points_are_recorded_exactly(self):
        state = make_state(2, 0, 0, 1, 1.0)
        grid = np.array([0.0, 0.25, 0.2501, 1.0])
        trajectory = circle_integrate(state, grid, step=0.1)
        np.testing.assert_array_equal(trajectory.times, grid)
        self.assertEqual(trajectory.positions.shape, (4, 2))


class ResidualTester(unittest.TestCase):
    @parameterized.expand(CIRCLE_SETTINGS)
    def test_circles_have_small_residual(self, name, dim, index, x_axis, y_axis, t_max):
        for k in (0.5, 1.0):
            state = make_state(dim, index, x_axis, y_axis, k)
            with self.subTest(k=k):
                for t in np.linspace(0.0, min(t_max, 2.0), 5):
                    residual = circle_residual(state.space, lambda s: evaluate_circle(state, s), t)
                    self.assertLessEqual(residual, 1e-5)

    def test_default_step_resolves_the_unit_circle(self):
        space = Space(2)
        for t in np.linspace(0.0, 2 * np.pi, 9):
            with self.subTest(t=t):
                residual = circle_residual(space, lambda s: np.array([np.cos(s), np.sin(s)]), t)
                self.assertLessEqual(residual, 1e-8)

    def test_non_circle(self):
        space = Space(2)
        self.assertGreater(circle_residual(space, lambda t: np.array([t, t**3]), 0.5), 1.0)


class SphereGeodesicTester(unittest.TestCase):
    def test_great_circles(self):
        space = Space(3)
        tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        sphere = classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [1.0, 0.0, 0.0]))
        for v in ([0.0, 1.0, 0.0], [0.0, 0.6, 0.8]):
            record = sphere_geodesic_is_circle(sphere, sphere.base_point, v, samples=16)
            with self.subTest(v=v):
                self.assertEqual(record.name, "geodesic_circle")
                self.assertTrue(record.passed, msg=record.max_error)

    def test_hyperbolic_plane(self):
        space = Space(3, 1)
        tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        sphere = classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [-1.0, 0.0, 0.0]))
        record = sphere_geodesic_is_circle(sphere, sphere.base_point, [0.0, 0.0, 1.0], t_max=2.0, samples=16)
        self.assertTrue(record.passed, msg=record.max_error)

    def test_hyperbolic_plane_default_span(self):
        space = Space(3, 1)
        tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        sphere = classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [-1.0, 0.0, 0.0]))
        for v in ([0.0, 0.0, 1.0], [0.0, 0.6, 0.8]):
            with self.subTest(v=v):
                self.assertTrue(sphere_geodesic_is_circle(sphere, sphere.base_point, v).passed)
        long_run = sphere_geodesic_is_circle(sphere, sphere.base_point, [0.0, 0.0, 1.0], t_max=4.0)
        self.assertLessEqual(long_run.max_error, 1e-5)

    def test_time_span(self):
        space = Space(3)
        tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        unit = classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [1.0, 0.0, 0.0]))
        self.assertAlmostEqual(geodesic_time_span(unit, [0.0, 1.0, 0.0]), 2 * np.pi)
        large = classify_sphere(SphereInitialData(space, [2.0, 0.0, 0.0], tangent, [0.5, 0.0, 0.0]))
        self.assertAlmostEqual(geodesic_time_span(large, [0.0, 1.0, 0.0]), 4 * np.pi)
        self.assertTrue(sphere_geodesic_is_circle(large, large.base_point, [0.0, 0.8, 0.6]).passed)
        plane = classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [0.0, 0.0, 0.0]))
        self.assertAlmostEqual(geodesic_time_span(plane, [0.0, 1.0, 0.0]), 2 * np.pi)

        hyperbolic = Space(3, 1)
        tangent = Subspace.span(hyperbolic, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        sheet = classify_sphere(SphereInitialData(hyperbolic, [1.0, 0.0, 0.0], tangent, [-1.0, 0.0, 0.0]))
        self.assertAlmostEqual(geodesic_time_span(sheet, [0.0, 0.0, 1.0]), 1.0)

    def test_speed_must_be_unit(self):
        space = Space(3)
        tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        sphere = classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [1.0, 0.0, 0.0]))
        with self.assertRaises(ValueError):
            sphere_geodesic_is_circle(sphere, sphere.base_point, [0.0, 2.0, 0.0])
