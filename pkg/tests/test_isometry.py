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

from pseudowarp.isometry import (
    ParaboloidEmbedding,
    ParaboloidIsometry,
    ParaboloidMotion,
    QuadricRotation,
    check_equivariance,
    check_lifted_isometry,
    compose_isometries,
    decode_isometry,
    lift_factor_isometry,
    sample_factor_isometry,
)
from pseudowarp.pseudo_linear import Space, inner, is_pseudo_orthogonal
from pseudowarp.test_utils import assert_vectors_close, decomposition
from pseudowarp.utils import CaseTag, SphereKind, make_generator
from pseudowarp.warp import WarpedPoint, psi_forward, restrict_to_quadric


SIGNATURES = [(1, 0), (2, 0), (3, 1), (4, 2)]


def rotation(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])


class ParaboloidEmbeddingTester(unittest.TestCase):
    def test_standard_pair(self):
        embedding = ParaboloidEmbedding.standard(3, 1)
        self.assertEqual(embedding.ambient, Space(5, 2))
        self.assertEqual(embedding.space, Space(3, 1))
        self.assertEqual(float(inner(embedding.ambient, embedding.a, embedding.b)), 1.0)

    def test_embedding_is_isometric(self):
        for n, nu in SIGNATURES:
            embedding = ParaboloidEmbedding.standard(n, nu)
            x = make_generator(n).normal(size=(10, n))
            q = embedding.embed(x)
            with self.subTest(n=n, nu=nu):
                np.testing.assert_allclose(inner(embedding.ambient, q, q), 0.0, atol=1e-10)
                np.testing.assert_allclose(inner(embedding.ambient, embedding.a, q), 1.0, atol=1e-12)
                assert_vectors_close(self, embedding.coordinates(q), x, atol=1e-12)
                gaps, flat_gaps = q[1:] - q[:-1], x[1:] - x[:-1]
                np.testing.assert_allclose(
                    inner(embedding.ambient, gaps, gaps), inner(embedding.space, flat_gaps, flat_gaps), atol=1e-10
                )

    def test_pair_checks(self):
        ambient = Space(4, 1)
        with self.assertRaisesRegex(ValueError, "lightlike"):
            ParaboloidEmbedding.from_pair(ambient, [1, 0, 0, 0], [0, 1, 0, 0])
        with self.assertRaisesRegex(ValueError, "<a, b> = 1"):
            ParaboloidEmbedding.from_pair(ambient, [1, 0, 0, 1], [1, 0, 0, 1])

    def test_null_decomposition(self):
        embedding = ParaboloidEmbedding.standard(2)
        W = embedding.decomposition()
        self.assertEqual(W.case, CaseTag.NULL)
        self.assertEqual(W.spherical_factors[0].kind, SphereKind.PARABOLOID)
        x = np.array([0.3, -1.2])
        q = psi_forward(W, WarpedPoint((embedding.b, embedding.embed(x))))
        assert_vectors_close(self, q, embedding.embed(x), atol=1e-12)


class ParaboloidIsometryTester(unittest.TestCase):
    def test_equivariance(self):
        for n, nu in SIGNATURES:
            embedding = ParaboloidEmbedding.standard(n, nu)
            for seed in range(5):
                iso = ParaboloidIsometry.sample(embedding, seed)
                with self.subTest(n=n, nu=nu, seed=seed):
                    record = check_equivariance(iso, seed=seed)
                    self.assertEqual(record.name, "equivariance")
                    self.assertTrue(record.passed, msg=record.max_error)

    def test_realized_map_fixes_a(self):
        embedding = ParaboloidEmbedding.standard(3, 1)
        matrix = ParaboloidIsometry.sample(embedding, 3).realize()
        self.assertTrue(is_pseudo_orthogonal(embedding.ambient, matrix))
        assert_vectors_close(self, matrix @ embedding.a, embedding.a, atol=1e-12)

    def test_composition_law(self):
        embedding = ParaboloidEmbedding.standard(3, 1)
        first, second = ParaboloidIsometry.sample(embedding, 1), ParaboloidIsometry.sample(embedding, 2)
        product = compose_isometries(first, second)
        assert_vectors_close(self, product.realize(), first.realize() @ second.realize(), atol=1e-10)
        x = make_generator(0).normal(size=(5, 3))
        assert_vectors_close(self, product.apply_fiber(x), first.apply_fiber(second.apply_fiber(x)), atol=1e-12)

    def test_translations_add(self):
        embedding = ParaboloidEmbedding.standard(2)
        moved = compose_isometries(
            ParaboloidIsometry.translation(embedding, [1.0, 2.0]), ParaboloidIsometry.translation(embedding, [0.5, -1.0])
        )
        assert_vectors_close(self, moved.B, np.eye(2))
        assert_vectors_close(self, moved.v, [1.5, 1.0])
        assert_vectors_close(self, ParaboloidIsometry.identity(embedding).realize(), np.eye(4), atol=1e-14)

    def test_decode_round_trip(self):
        for n, nu in SIGNATURES:
            embedding = ParaboloidEmbedding.standard(n, nu)
            iso = ParaboloidIsometry.sample(embedding, n + nu)
            decoded = decode_isometry(embedding, iso.realize())
            with self.subTest(n=n, nu=nu):
                assert_vectors_close(self, decoded.B, iso.B, atol=1e-10)
                assert_vectors_close(self, decoded.v, iso.v, atol=1e-10)

    def test_decode_rejects_maps_off_the_group(self):
        embedding = ParaboloidEmbedding.standard(2)
        with self.assertRaisesRegex(ValueError, "linear isometry"):
            decode_isometry(embedding, 2 * np.eye(4))
        with self.assertRaisesRegex(ValueError, "does not fix a"):
            decode_isometry(embedding, np.diag([-1.0, 1.0, 1.0, 1.0]))

    def test_b_must_be_pseudo_orthogonal(self):
        embedding = ParaboloidEmbedding.standard(2)
        with self.assertRaises(ValueError):
            ParaboloidIsometry(embedding, [[1.0, 1.0], [0.0, 1.0]], [0.0, 0.0])

    def test_other_embedding_is_rejected(self):
        first = ParaboloidIsometry.identity(ParaboloidEmbedding.standard(2))
        second = ParaboloidIsometry.identity(ParaboloidEmbedding.standard(2, 1))
        with self.assertRaises(ValueError):
            compose_isometries(first, second)


class LiftedIsometryTester(unittest.TestCase):
    def assert_records_pass(self, records):
        for record in records:
            self.assertTrue(record.passed, msg=f"{record.name}: {record.max_error}")

    def test_polar_rotation(self):
        W = decomposition("polar")
        theta = 0.7
        lifted = lift_factor_isometry(W, 1, QuadricRotation.from_carrier_map(W.spherical_factors[0], rotation(theta)))
        assert_vectors_close(self, lifted([3.0, 4.0]), rotation(theta) @ [3.0, 4.0], atol=1e-12)
        records = check_lifted_isometry(lifted)
        self.assertEqual([r.name for r in records], ["lift_pairwise", "lift_leaf_preservation", "lift_pullback_metric"])
        self.assert_records_pass(records)

    def test_sampled_quadric_rotations(self):
        for name in ["minkowski_spacelike", "hyperbolic_branch"]:
            W = decomposition(name)
            for seed in range(3):
                lifted = lift_factor_isometry(W, 1, QuadricRotation.sample(W.spherical_factors[0], seed))
                with self.subTest(seed_name=name, seed=seed):
                    self.assert_records_pass(check_lifted_isometry(lifted, samples=10, seed=seed))

    def test_restricted_decomposition(self):
        for W in [decomposition("cylindrical_sphere"), restrict_to_quadric(decomposition("minkowski_spacelike"))]:
            lifted = lift_factor_isometry(W, 1, QuadricRotation.sample(W.spherical_factors[0], 4))
            records = check_lifted_isometry(lifted, samples=10)
            with self.subTest(kappa=W.kappa):
                self.assertEqual([r.name for r in records], ["lift_pairwise", "lift_leaf_preservation"])
                self.assert_records_pass(records)

    def test_paraboloid_motion(self):
        W = decomposition("null")
        sphere = W.spherical_factors[0]
        for B, t in [([[1.0]], [0.7]), ([[-1.0]], [-1.3])]:
            motion = ParaboloidMotion(sphere, B, t)
            lifted = lift_factor_isometry(W, 1, motion)
            with self.subTest(B=B, t=t):
                self.assert_records_pass(check_lifted_isometry(lifted, samples=10))

    def test_motion_differential(self):
        W = decomposition("null")
        sphere = W.spherical_factors[0]
        motion = ParaboloidMotion(sphere, [[-1.0]], [0.4])
        x = sphere.base_point + np.array([0.0, 0.0, 0.5]) - 0.125 * sphere.a
        v = np.array([0.0, 0.0, 1.0]) - 0.5 * sphere.a
        h = 1e-6
        numeric = (motion(x + h * v) - motion(x - h * v)) / (2 * h)
        assert_vectors_close(self, motion.differential(x, v), numeric, atol=1e-8)

    def test_lifted_motion_is_the_realized_map(self):
        embedding = ParaboloidEmbedding.standard(3, 1)
        W = embedding.decomposition()
        iso = ParaboloidIsometry.sample(embedding, 7)
        lifted = lift_factor_isometry(W, 1, ParaboloidMotion(W.spherical_factors[0], iso.B, iso.v))
        matrix = iso.realize()
        for q in make_generator(1).normal(size=(10, embedding.ambient.dim)):
            if inner(embedding.ambient, embedding.a, q) > 0.1:
                assert_vectors_close(self, lifted(q), matrix @ q, atol=1e-9 * (1 + np.linalg.norm(q)) ** 2)

    def test_sampled_factor_isometries(self):
        expected_types = {"polar": QuadricRotation, "hyperbolic_branch": QuadricRotation, "null": ParaboloidMotion}
        for name, expected in expected_types.items():
            W = decomposition(name)
            factor_map = sample_factor_isometry(W.spherical_factors[0], 5)
            with self.subTest(seed_name=name):
                self.assertIsInstance(factor_map, expected)
                self.assert_records_pass(check_lifted_isometry(lift_factor_isometry(W, 1, factor_map), samples=10))

    def test_lift_checks(self):
        W = decomposition("null")
        with self.assertRaisesRegex(ValueError, "numbered"):
            lift_factor_isometry(W, 2, ParaboloidMotion(W.spherical_factors[0], [[1.0]], [0.0]))
        with self.assertRaisesRegex(ValueError, "quadric"):
            QuadricRotation.from_carrier_map(W.spherical_factors[0], np.eye(2))
        polar = decomposition("polar")
        with self.assertRaisesRegex(ValueError, "pseudo-orthogonal"):
            QuadricRotation.from_carrier_map(polar.spherical_factors[0], 2 * np.eye(2))
        with self.assertRaisesRegex(ValueError, "centered"):
            lift_factor_isometry(polar, 1, QuadricRotation(np.array([1.0, 0.0]), np.eye(2)))
