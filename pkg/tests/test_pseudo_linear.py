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

from pseudowarp.pseudo_linear import (
    DegenerateSubspaceError,
    Space,
    Subspace,
    classify,
    dual_lightlike_basis,
    inner,
    is_pseudo_orthogonal,
    orthogonal_complement,
    orthonormal_basis,
    project,
    pseudo_orthogonal_exp,
    pseudo_orthogonal_sample,
    subspace_signature,
)
from pseudowarp.test_utils import assert_vectors_close
from pseudowarp.utils import CausalClass


class SpaceTester(unittest.TestCase):
    def test_signs_put_negative_directions_first(self):
        space = Space(4, 2)
        self.assertListEqual(space.signs.tolist(), [-1.0, -1.0, 1.0, 1.0])
        self.assertEqual(str(space), "E^4_2")

    def test_invalid_spaces(self):
        for dim, index in [(0, 0), (2, 3), (3, -1)]:
            with self.subTest(dim=dim, index=index):
                with self.assertRaises(ValueError):
                    Space(dim, index)

    def test_vector_checks_shape_and_finiteness(self):
        space = Space(3, 1)
        with self.assertRaises(ValueError):
            space.vector([1.0, 2.0])
        with self.assertRaises(ValueError):
            space.vector([1.0, np.nan, 0.0])

    def test_inner(self):
        space = Space(3, 1)
        self.assertEqual(inner(space, [1, 2, 3], [4, 5, 6]), 24.0)
        stacked = inner(space, np.eye(3), np.eye(3))
        self.assertListEqual(stacked.tolist(), [-1.0, 1.0, 1.0])

    def test_inner_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            inner(Space(3), [1, 0], [0, 1])


class ClassifyTester(unittest.TestCase):
    @parameterized.expand(
        [
            ("zero", [0.0, 0.0], CausalClass.ZERO),
            ("timelike", [1.0, 0.0], CausalClass.TIMELIKE),
            ("spacelike", [0.0, 1.0], CausalClass.SPACELIKE),
            ("lightlike", [1.0, 1.0], CausalClass.LIGHTLIKE),
            ("nearly_lightlike", [1.0, 1.0 + 1e-12], CausalClass.LIGHTLIKE),
        ]
    )
    def test_classify(self, _, v, expected):
        self.assertEqual(classify(Space(2, 1), v), expected)

    def test_lightlike_threshold_is_scale_free(self):
        space = Space(2, 1)
        self.assertEqual(classify(space, [1e6, 1e6]), CausalClass.LIGHTLIKE)
        self.assertEqual(classify(space, [1e-3, 2e-3]), CausalClass.SPACELIKE)


class SubspaceTester(unittest.TestCase):
    def test_signature(self):
        space = Space(3, 1)
        self.assertTupleEqual(subspace_signature(Subspace.span(space, np.eye(3)[:2])), (2, 1, False))
        self.assertTupleEqual(subspace_signature(Subspace.span(space, [[0, 1, 0], [0, 0, 2]])), (2, 0, False))
        self.assertTupleEqual(subspace_signature(Subspace.span(space, [[1, 1, 0]])), (1, 0, True))
        self.assertTrue(Subspace.span(space, [[1, 1, 0], [0, 0, 1]]).degenerate)

    def test_dependent_vectors_are_rejected(self):
        with self.assertRaises(ValueError):
            Subspace.span(Space(3), [[1, 0, 0], [2, 0, 0]])

    def test_contains_and_same_as(self):
        space = Space(3, 1)
        plane = Subspace.span(space, [[1, 1, 0], [0, 0, 1]])
        self.assertTrue(plane.contains([2, 2, -3]))
        self.assertFalse(plane.contains([1, 0, 0]))
        self.assertTrue(plane.same_as(Subspace.span(space, [[1, 1, 1], [1, 1, -1]])))
        self.assertFalse(plane.same_as(Subspace.span(space, [[1, 1, 1]])))

    def test_projection(self):
        space = Space(3, 1)
        subspace = Subspace.span(space, [[1, 0, 0], [1, 2, 0]])
        v = np.array([0.3, -1.2, 4.0])
        projected = project(subspace, v)
        assert_vectors_close(self, project(subspace, projected), projected, atol=1e-12)
        residual = v - projected
        assert_vectors_close(self, inner(space, subspace.basis, residual), np.zeros(2), atol=1e-12)

    def test_projection_onto_degenerate_subspace_fails(self):
        with self.assertRaises(DegenerateSubspaceError):
            project(Subspace.span(Space(2, 1), [[1, 1]]), [1.0, 0.0])

    def test_orthogonal_complement(self):
        space = Space(4, 1)
        subspace = Subspace.span(space, [[2, 1, 0, 0], [0, 0, 1, 1]])
        complement = orthogonal_complement(subspace)
        self.assertEqual(complement.dim, 2)
        assert_vectors_close(self, subspace.basis @ (space.signs * complement.basis).T, np.zeros((2, 2)), atol=1e-12)
        self.assertEqual(subspace.index + complement.index, space.index)

    def test_orthogonal_complement_within_carrier(self):
        space = Space(3, 1)
        carrier = Subspace.span(space, np.eye(3)[:2])
        complement = orthogonal_complement(Subspace.span(space, [[2, 1, 0]]), within=carrier)
        self.assertEqual(complement.dim, 1)
        self.assertTrue(carrier.contains_subspace(complement))
        self.assertAlmostEqual(float(inner(space, complement.basis[0], [2, 1, 0])), 0.0, places=12)

    def test_orthogonal_complement_of_degenerate_subspace_fails(self):
        with self.assertRaises(DegenerateSubspaceError):
            orthogonal_complement(Subspace.span(Space(3, 1), [[1, 1, 0]]))


class OrthonormalBasisTester(unittest.TestCase):
    def test_orthonormal_basis_is_kept(self):
        space = Space(3, 1)
        frame, signs = orthonormal_basis(Subspace.whole(space))
        assert_vectors_close(self, frame, np.eye(3), atol=0.0)
        self.assertListEqual(signs.tolist(), [-1.0, 1.0, 1.0])

    def test_null_residual_falls_back_to_eigenvectors(self):
        space = Space(3, 1)
        frame, signs = orthonormal_basis(Subspace.span(space, [[1, 1, 0], [1, -1, 0]]))
        self.assertListEqual(signs.tolist(), [-1.0, 1.0])
        assert_vectors_close(self, frame @ (space.signs * frame).T, np.diag(signs), atol=1e-12)

    def test_random_subspaces(self):
        rng = np.random.default_rng(0)
        for dim, index in [(3, 0), (4, 1), (5, 2), (6, 3)]:
            space = Space(dim, index)
            subspace = Subspace.span(space, rng.normal(size=(dim - 1, dim)))
            with self.subTest(space=str(space)):
                frame, signs = orthonormal_basis(subspace)
                self.assertEqual(len(frame), subspace.dim)
                self.assertEqual(int(np.sum(signs < 0)), subspace.index)
                assert_vectors_close(self, frame @ (space.signs * frame).T, np.diag(signs), atol=1e-9)
                self.assertTrue(subspace.same_as(Subspace.span(space, frame), tol=1e-9))


class DualLightlikeBasisTester(unittest.TestCase):
    def test_single_pair(self):
        space = Space(3, 1)
        a = np.array([1.0, 1.0, 0.0])
        b = dual_lightlike_basis(space, [a])[0]
        self.assertAlmostEqual(float(inner(space, a, b)), 1.0, places=12)
        self.assertAlmostEqual(float(inner(space, b, b)), 0.0, places=12)

    def test_two_pairs(self):
        space = Space(4, 2)
        a = np.array([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]])
        b = dual_lightlike_basis(space, a)
        assert_vectors_close(self, a @ (space.signs * b).T, np.eye(2), atol=1e-12)
        assert_vectors_close(self, b @ (space.signs * b).T, np.zeros((2, 2)), atol=1e-12)

    def test_within_carrier(self):
        space = Space(4, 1)
        carrier = Subspace.span(space, np.eye(4)[:3])
        b = dual_lightlike_basis(space, [[1.0, 0.0, 1.0, 0.0]], within=carrier)[0]
        self.assertTrue(carrier.contains(b))
        self.assertAlmostEqual(float(inner(space, [1.0, 0.0, 1.0, 0.0], b)), 1.0, places=12)

    def test_rejects_non_lightlike_vectors(self):
        with self.assertRaises(ValueError):
            dual_lightlike_basis(Space(3, 1), [[0.0, 1.0, 0.0]])

    def test_rejects_carrier_without_partner(self):
        space = Space(3, 1)
        carrier = Subspace.span(space, [[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        with self.assertRaises(ValueError):
            dual_lightlike_basis(space, [[1.0, 1.0, 0.0]], within=carrier)


class PseudoOrthogonalTester(unittest.TestCase):
    def test_samples_are_pseudo_orthogonal(self):
        for dim, index in [(2, 0), (3, 1), (4, 1), (5, 2)]:
            space = Space(dim, index)
            for seed in range(3):
                with self.subTest(space=str(space), seed=seed):
                    self.assertTrue(is_pseudo_orthogonal(space, pseudo_orthogonal_sample(space, seed)))

    def test_samples_are_deterministic(self):
        space = Space(4, 1)
        assert_vectors_close(self, pseudo_orthogonal_sample(space, 7), pseudo_orthogonal_sample(space, 7), atol=0.0)

    def test_boost(self):
        space = Space(2, 1)
        generator = np.array([[0.0, 0.5], [0.5, 0.0]])
        boost = pseudo_orthogonal_exp(space, generator)
        expected = np.array([[np.cosh(0.5), np.sinh(0.5)], [np.sinh(0.5), np.cosh(0.5)]])
        assert_vectors_close(self, boost, expected, atol=1e-12)

    def test_exp_rejects_non_generators(self):
        with self.assertRaises(ValueError):
            pseudo_orthogonal_exp(Space(2, 1), [[0.0, 1.0], [-1.0, 0.0]])

    def test_is_pseudo_orthogonal_checks_shape(self):
        self.assertFalse(is_pseudo_orthogonal(Space(3), np.eye(2)))
