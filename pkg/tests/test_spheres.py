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

from pseudowarp import spheres
from pseudowarp.pseudo_linear import DegenerateSubspaceError, Space, Subspace, inner
from pseudowarp.spheres import SphereInitialData, UnsupportedGeodesicError, classify_sphere
from pseudowarp.test_utils import assert_vectors_close
from pseudowarp.utils import SphereKind


def unit_sphere(offset=(0.0, 0.0, 0.0)):
    space = Space(3)
    c = np.array(offset)
    tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    return classify_sphere(SphereInitialData(space, c + [1.0, 0.0, 0.0], tangent, [1.0, 0.0, 0.0]))


def paraboloid():
    space = Space(3, 1)
    return classify_sphere(SphereInitialData(space, np.zeros(3), Subspace.span(space, [[0.0, 0.0, 1.0]]), [1, 1, 0]))


def hyperbolic_plane():
    space = Space(3, 1)
    tangent = Subspace.span(space, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    return classify_sphere(SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [-1.0, 0.0, 0.0]))


def de_sitter_plane():
    space = Space(3, 1)
    tangent = Subspace.span(space, [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    return classify_sphere(SphereInitialData(space, [0.0, 1.0, 0.0], tangent, [0.0, 1.0, 0.0]))


class SphereInitialDataTester(unittest.TestCase):
    def test_a_must_be_orthogonal_to_the_tangent_space(self):
        space = Space(3)
        with self.assertRaises(ValueError):
            SphereInitialData(space, [1, 0, 0], Subspace.span(space, [[0, 1, 0]]), [1, 1, 0])

    def test_tangent_space_must_be_non_degenerate(self):
        space = Space(3, 1)
        with self.assertRaises(DegenerateSubspaceError):
            SphereInitialData(space, [0, 0, 1], Subspace.span(space, [[1, 1, 0]]), [0, 0, 1])

    def test_from_mean_curvature_in_a_hyperquadric(self):
        space = Space(3)
        z = np.array([0.0, 0.0, 0.5])
        data = SphereInitialData.from_mean_curvature(
            space, [1.0, 0.0, 0.0], Subspace.span(space, [[0.0, 1.0, 0.0]]), z, kappa=1.0
        )
        assert_vectors_close(self, data.a, [1.0, 0.0, -0.5])
        assert_vectors_close(self, data.mean_curvature, z)
        sphere = classify_sphere(data)
        self.assertEqual(sphere.kind, SphereKind.PSEUDO_SPHERE)
        self.assertAlmostEqual(sphere.curvature, 1.25)
        assert_vectors_close(self, spheres.mean_curvature(sphere, data.base_point), z, atol=1e-12)
        assert_vectors_close(self, spheres.mean_curvature(sphere, data.base_point, flat=True), z - data.base_point)

    def test_hyperquadric_conditions(self):
        space = Space(3)
        tangent = Subspace.span(space, [[0.0, 1.0, 0.0]])
        with self.assertRaises(ValueError):
            SphereInitialData(space, [2.0, 0.0, 0.0], tangent, [0.5, 0.0, 0.0], kappa=1.0)
        with self.assertRaises(ValueError):
            SphereInitialData(space, [1.0, 0.0, 0.0], tangent, [2.0, 0.0, 0.0], kappa=1.0)


class ClassifySphereTester(unittest.TestCase):
    def test_round_sphere(self):
        sphere = unit_sphere()
        self.assertEqual(sphere.kind, SphereKind.PSEUDO_SPHERE)
        self.assertEqual(sphere.curvature, 1.0)
        assert_vectors_close(self, sphere.center, np.zeros(3))
        self.assertTupleEqual(sphere.signature, (2, 0))
        self.assertFalse(sphere.disconnected)

    def test_pseudo_hyperbolic(self):
        space = Space(3, 1)
        sphere = classify_sphere(
            SphereInitialData(space, [0.0, 1.0, 0.0], Subspace.span(space, [[0.0, 0.0, 1.0]]), [1.0, 0.0, 0.0])
        )
        self.assertEqual(sphere.kind, SphereKind.PSEUDO_HYPERBOLIC)
        self.assertEqual(sphere.curvature, -1.0)
        assert_vectors_close(self, sphere.center, [1.0, 1.0, 0.0])
        self.assertTrue(sphere.disconnected)
        self.assertTrue(sphere.connected_component_restriction)

    def test_plane(self):
        space = Space(3)
        sphere = classify_sphere(SphereInitialData(space, [0, 0, 5], Subspace.span(space, np.eye(3)[:2]), [0, 0, 0]))
        self.assertEqual(sphere.kind, SphereKind.PLANE)
        self.assertIsNone(sphere.center)
        assert_vectors_close(self, spheres.parametrize(sphere, [1.0, 2.0]), [1.0, 2.0, 5.0])

    def test_paraboloid(self):
        sphere = paraboloid()
        self.assertEqual(sphere.kind, SphereKind.PARABOLOID)
        self.assertIsNone(sphere.center)
        self.assertEqual(sphere.carrier.dim, 2)

    def test_classification_is_deterministic(self):
        first, second = unit_sphere(), unit_sphere()
        self.assertEqual(first.summary().keys(), second.summary().keys())
        for key, value in first.summary().items():
            with self.subTest(key=key):
                if isinstance(value, np.ndarray):
                    assert_vectors_close(self, value, second.summary()[key], atol=0.0)
                else:
                    self.assertEqual(value, second.summary()[key])


class MembershipTester(unittest.TestCase):
    def test_sphere_membership(self):
        c = np.array([1.0, -2.0, 0.5])
        sphere = unit_sphere(c)
        self.assertTrue(spheres.contains(sphere, c + [0.0, 1.0, 0.0]))
        self.assertFalse(spheres.contains(sphere, c + [0.0, 0.0, 2.0]))

    def test_paraboloid_membership(self):
        sphere = paraboloid()
        self.assertTrue(spheres.contains(sphere, [-0.5, -0.5, 1.0]))
        self.assertFalse(spheres.contains(sphere, [0.5, 0.5, 1.0]))

    def test_connected_component_restriction(self):
        space = Space(2, 1)
        data = SphereInitialData(space, [-1.0, 0.0], Subspace.span(space, [[0.0, 1.0]]), [1.0, 0.0])
        kept, both = classify_sphere(data), classify_sphere(data, connected=False)
        far_branch = [np.cosh(0.3), np.sinh(0.3)]
        near_branch = [-np.cosh(0.3), np.sinh(0.3)]
        self.assertTrue(spheres.contains(kept, near_branch))
        self.assertFalse(spheres.contains(kept, far_branch))
        self.assertTrue(spheres.contains(both, far_branch))


class ChartTester(unittest.TestCase):
    def test_sphere_chart(self):
        sphere = unit_sphere()
        theta, phi = 0.7, 2.1
        point = spheres.parametrize(sphere, [theta * np.cos(phi), theta * np.sin(phi)])
        expected = [np.cos(theta), np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi)]
        assert_vectors_close(self, point, expected, atol=1e-12)
        self.assertTrue(spheres.contains(sphere, point))

    def test_sphere_chart_domain(self):
        with self.assertRaises(ValueError):
            spheres.parametrize(unit_sphere(), [np.pi, 0.0])

    def test_paraboloid_chart(self):
        sphere = paraboloid()
        assert_vectors_close(self, spheres.parametrize(sphere, [0.0]), np.zeros(3))
        assert_vectors_close(self, spheres.parametrize(sphere, [1.0]), [-0.5, -0.5, 1.0])

    def test_charts_land_on_the_submanifold(self):
        rng = np.random.default_rng(3)
        for sphere in [unit_sphere(), paraboloid(), hyperbolic_plane(), de_sitter_plane()]:
            for _ in range(10):
                u = rng.uniform(-0.8, 0.8, size=sphere.dim)
                with self.subTest(kind=sphere.kind.value, u=u):
                    self.assertTrue(spheres.contains(sphere, spheres.parametrize(sphere, u)))


class TangentTester(unittest.TestCase):
    def test_sphere_tangent_space(self):
        sphere = unit_sphere()
        self.assertTrue(spheres.is_tangent(sphere, [1.0, 0.0, 0.0], [0.0, 1.0, -2.0]))
        self.assertFalse(spheres.is_tangent(sphere, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]))
        self.assertEqual(spheres.tangent_space(sphere, [0.0, 1.0, 0.0]).dim, 2)

    def test_paraboloid_tangent_space(self):
        sphere = paraboloid()
        p = [-0.5, -0.5, 1.0]
        tangent = spheres.tangent_space(sphere, p)
        # derivative of x -> x - x^2/2 a at x = e_2
        self.assertTrue(tangent.contains([-1.0, -1.0, 1.0]))
        self.assertFalse(tangent.contains([0.0, 0.0, 1.0]))


class MeanCurvatureTester(unittest.TestCase):
    def test_sphere(self):
        c = np.array([0.0, 3.0, 0.0])
        assert_vectors_close(self, spheres.mean_curvature(unit_sphere(c), c + [1.0, 0.0, 0.0]), [-1.0, 0.0, 0.0])

    def test_paraboloid_is_constant(self):
        sphere = paraboloid()
        for p in [np.zeros(3), [-0.5, -0.5, 1.0]]:
            assert_vectors_close(self, spheres.mean_curvature(sphere, p), [-1.0, -1.0, 0.0])

    def test_plane(self):
        space = Space(2)
        sphere = classify_sphere(SphereInitialData(space, [0, 1], Subspace.span(space, [[1, 0]]), [0, 0]))
        assert_vectors_close(self, spheres.mean_curvature(sphere, [4.0, 1.0]), np.zeros(2))

    def test_off_the_submanifold(self):
        with self.assertRaises(ValueError):
            spheres.mean_curvature(unit_sphere(), [2.0, 0.0, 0.0])


class GeodesicTester(unittest.TestCase):
    def test_great_circle(self):
        point = spheres.quadric_geodesic(unit_sphere(), [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], np.pi / 2)
        assert_vectors_close(self, point, [0.0, 1.0, 0.0], atol=1e-12)

    def test_hyperbolic_geodesic(self):
        sphere = hyperbolic_plane()
        t = np.linspace(-2.0, 2.0, 9)
        curve = spheres.quadric_geodesic(sphere, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], t)
        expected = np.stack([np.cosh(t), np.sinh(t), np.zeros_like(t)], axis=-1)
        assert_vectors_close(self, curve, expected, atol=1e-12)
        assert_vectors_close(self, inner(sphere.space, curve, curve), -np.ones_like(t), atol=1e-9)

    def test_paraboloid_geodesic_stays_on_paraboloid(self):
        sphere = paraboloid()
        curve = spheres.quadric_geodesic(sphere, np.zeros(3), [0.0, 0.0, 1.0], np.linspace(0.0, 3.0, 7))
        for point in curve:
            self.assertTrue(spheres.contains(sphere, point))

    def test_null_geodesic(self):
        sphere = de_sitter_plane()
        p, v = [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]
        with self.assertRaises(UnsupportedGeodesicError):
            spheres.quadric_geodesic(sphere, p, v, 1.0)
        point = spheres.quadric_geodesic(sphere, p, v, 2.0, allow_null=True)
        assert_vectors_close(self, point, [2.0, 1.0, 2.0])
        self.assertTrue(spheres.contains(sphere, point))

    def test_velocity_must_be_tangent(self):
        with self.assertRaises(ValueError):
            spheres.quadric_geodesic(unit_sphere(), [1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1.0)
