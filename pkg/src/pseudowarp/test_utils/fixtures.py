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

"""
Named seeds and random initial data used across the test suite.
"""

import copy
from typing import Optional

import numpy as np

from ..commands.seed_args import SeedDocument
from ..pseudo_linear import Space, Subspace, pseudo_orthogonal_sample
from ..utils.random import make_generator
from ..warp import InitialData, WarpedDecomposition, build, compose


SEEDS = {
    # E^2 = R_+ x_rho S^1, polar coordinates
    "polar": {
        "schema": 1,
        "space": {"dim": 2, "index": 0},
        "base_point": [1.0, 0.0],
        "factors": [{"basis": [[1.0, 0.0]]}, {"basis": [[0.0, 1.0]]}],
        "a_vectors": [[1.0, 0.0]],
        "flags": {"canonical": True},
    },
    # E^3_1 with a lightlike warping direction and a paraboloid factor
    "null": {
        "schema": 1,
        "space": {"dim": 3, "index": 1},
        "base_point": [-0.5, 0.5, 0.0],
        "factors": [{"basis": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]}, {"basis": [[0.0, 0.0, 1.0]]}],
        "a_vectors": [[1.0, 1.0, 0.0]],
        "flags": {"canonical": True},
    },
    # S^2 minus two poles, warped over a half circle
    "cylindrical_sphere": {
        "schema": 1,
        "space": {"dim": 3, "index": 0},
        "kappa": 1.0,
        "base_point": [1.0, 0.0, 0.0],
        "factors": [{"basis": [[0.0, 0.0, 1.0]]}, {"basis": [[0.0, 1.0, 0.0]]}],
        "a_vectors": [[1.0, 0.0, 0.0]],
        "flags": {"canonical": True},
    },
    # E^2_1 with a hyperbola factor; `connected` keeps the branch through the base point
    "hyperbolic_branch": {
        "schema": 1,
        "space": {"dim": 2, "index": 1},
        "base_point": [-1.0, 0.0],
        "factors": [{"basis": [[1.0, 0.0]]}, {"basis": [[0.0, 1.0]]}],
        "a_vectors": [[1.0, 0.0]],
        "flags": {"connected": True},
    },
    # E^3_1 with a spacelike warping direction, canonical so that it restricts to H^2
    "minkowski_spacelike": {
        "schema": 1,
        "space": {"dim": 3, "index": 1},
        "base_point": [2.0, 1.0, 0.0],
        "factors": [{"basis": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]}, {"basis": [[0.0, 0.0, 1.0]]}],
        "a_vectors": [[0.0, 1.0, 0.0]],
        "flags": {"canonical": True},
    },
    # invalid: one lightlike and one timelike a-vector
    "mixed": {
        "schema": 1,
        "space": {"dim": 4, "index": 1},
        "base_point": [0.0, 1.0, 0.0, 0.0],
        "factors": [
            {"basis": [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]},
            {"basis": [[0.0, 0.0, 1.0, 0.0]]},
            {"basis": [[0.0, 0.0, 0.0, 1.0]]},
        ],
        "a_vectors": [[1.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]],
    },
    # invalid: a is not in V_0 (it is not orthogonal to V_1)
    "corrupted_a": {
        "schema": 1,
        "space": {"dim": 2, "index": 0},
        "base_point": [1.0, 0.0],
        "factors": [{"basis": [[1.0, 0.0]]}, {"basis": [[0.0, 1.0]]}],
        "a_vectors": [[1.0, 0.5]],
    },
    # invalid: no factors at all
    "empty_factors": {
        "schema": 1,
        "space": {"dim": 2, "index": 0},
        "base_point": [1.0, 0.0],
        "factors": [],
        "a_vectors": [],
    },
}


def seed_dict(name: str) -> dict:
    "A fresh copy of a named seed, safe to modify."
    return copy.deepcopy(SEEDS[name])


def seed_document(name: str) -> SeedDocument:
    return SeedDocument.from_dict(seed_dict(name))


def initial_data(name: str) -> InitialData:
    return seed_document(name).to_initial_data()


def decomposition(name: str) -> WarpedDecomposition:
    return seed_document(name).build()


def double_polar_parts():
    """
    The two flat decompositions of E^4 composed into `E^2 x S^1 x S^1`: the outer one warps `e_3` around `e_0`, the
    inner one decomposes its geodesic carrier `span{e_0, e_1, e_2}` by warping `e_2` around `e_1`.
    """
    space = Space(4)
    e = np.eye(4)
    p = e[0] + e[1]
    outer = build(
        InitialData(space, p, (Subspace.span(space, e[:3]), Subspace.span(space, e[3:])), a_vectors=[e[0]])
    )
    inner_part = build(
        InitialData(
            space,
            p,
            (Subspace.span(space, e[:2]), Subspace.span(space, e[2:3])),
            a_vectors=[e[1]],
            carrier=Subspace.span(space, e[:3]),
        )
    )
    return outer, inner_part


def double_polar() -> WarpedDecomposition:
    return compose(*double_polar_parts())


def random_canonical_data(
    seed: int, dim: int, index: int = 0, k: Optional[int] = None, null: bool = False, transform: bool = True
) -> InitialData:
    """
    Random canonical initial data of `E^dim_index`: coordinate blocks for the factors, a-vectors along coordinate
    axes of `V_0` (or one lightlike `e_i + e_j` when `null` is set), moved by a random pseudo-orthogonal map.

    Args:
        seed (`int`):
            Seed of every random draw.
        dim (`int`):
            Ambient dimension, at least 2 (at least 3 for `null`).
        index (`int`, *optional*, defaults to 0):
            Ambient index. `null` needs `0 < index < dim`.
        k (`int`, *optional*):
            Number of spherical factors; random when omitted, always 1 for `null`.
        null (`bool`, *optional*, defaults to `False`):
            Draw null initial data.
        transform (`bool`, *optional*, defaults to `True`):
            Apply a random pseudo-orthogonal map to the coordinate data.
    """
    space = Space(dim, index)
    rng = make_generator(seed)
    negative = list(rng.permutation(index))
    positive = list(index + rng.permutation(dim - index))
    e = np.eye(dim)

    if null:
        if not 0 < index < dim or dim < 3:
            raise ValueError("Null initial data need an indefinite space of dimension at least 3.")
        i, j = negative.pop(), positive.pop()
        scale = rng.uniform(0.5, 2.0)
        a = scale * (e[i] + e[j])
        b = (e[j] - e[i]) / (2 * scale)
        rest = negative + positive
        rng.shuffle(rest)
        extra = int(rng.integers(0, len(rest)))
        geodesic = [e[i], e[j]] + [e[r] for r in rest[:extra]]
        spherical = [e[r] for r in rest[extra:]]
        w = sum((rng.normal() * e[r] for r in rest[:extra]), np.zeros(dim))
        data = InitialData(
            space,
            b + w,
            (Subspace.span(space, geodesic), Subspace.span(space, spherical)),
            a_vectors=[a],
        )
    else:
        axes = negative + positive
        rng.shuffle(axes)
        if k is None:
            k = int(rng.integers(1, dim // 2 + 1))
        if dim < 2 * k:
            raise ValueError(f"{dim} dimensions cannot hold {k} spherical factors and their warping directions.")
        warped_axes, rest = axes[:k], axes[k:]
        # each spherical factor gets at least one axis, the rest are split at random
        cuts = np.sort(rng.choice(len(rest), size=k, replace=False))
        blocks = np.split(np.array(rest, dtype=int), cuts)
        geodesic_axes = list(warped_axes) + list(blocks[0])
        spherical_blocks = blocks[1:]
        p = np.zeros(dim)
        a_vectors = []
        for axis in warped_axes:
            s = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
            p = p + s * e[axis]
            a_vectors.append(space.signs[axis] / s * e[axis])
        for axis in blocks[0]:
            p = p + rng.normal() * e[axis]
        data = InitialData(
            space,
            p,
            (Subspace.span(space, e[geodesic_axes]),)
            + tuple(Subspace.span(space, e[list(block)]) for block in spherical_blocks),
            a_vectors=a_vectors,
        )
    if transform:
        data = data.transformed(pseudo_orthogonal_sample(space, seed))
    return data
