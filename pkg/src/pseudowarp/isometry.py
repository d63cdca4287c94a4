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
Isometries of the paraboloid model `P^n_nu` and lifts of factor isometries through warped products.

`P^n_nu = {b + x - x^2/2 a : x in V}` sits in `E^{n+2}_{nu+1}`, where `a`, `b` are lightlike with `<a, b> = 1` and
`V = span{a, b}^perp`. Its isometries are the linear isometries of the big space fixing `a`; they are parametrized
by pairs `(B, v)`, `B` pseudo-orthogonal on `V` and `v` in `V`, acting on `V` as `x -> Bx + v`.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from . import spheres
from .pseudo_linear import (
    Space,
    Subspace,
    classify,
    euclidean_scale,
    inner,
    is_pseudo_orthogonal,
    orthogonal_complement,
    orthonormal_basis,
    pseudo_orthogonal_sample,
)
from .spheres import SphericalSubmanifold
from .utils.constants import MEMBERSHIP_TOLERANCE, PUSHFORWARD_FD_STEP
from .utils.dataclasses import CausalClass, CheckRecord, SphereKind
from .utils.random import make_generator
from .warp import (
    InitialData,
    WarpedDecomposition,
    build,
    psi_forward,
    psi_inverse,
    sample_domain,
)


def ordered_frame(subspace: Subspace):
    "An orthonormal frame of a non-degenerate subspace with its timelike vectors first."
    frame, signs = orthonormal_basis(subspace)
    order = np.argsort(signs, kind="stable")
    return frame[order], signs[order]


@dataclass(frozen=True, eq=False)
class ParaboloidEmbedding:
    """
    The isometric embedding `x -> b + x - x^2/2 a` of `E^n_nu` onto `P^n_nu` inside `E^{n+2}_{nu+1}`.

    `frame` holds an orthonormal basis of `V` (timelike vectors first); coordinates of `x` in that frame are the
    coordinates of the point of `E^n_nu`.
    """

    ambient: Space
    a: np.ndarray
    b: np.ndarray
    fiber: Subspace
    frame: np.ndarray

    @classmethod
    def standard(cls, n: int, nu: int = 0) -> "ParaboloidEmbedding":
        "`a = e_0 + e_{n+1}`, `b = (e_{n+1} - e_0)/2` and `V = span{e_1, ..., e_n}`."
        ambient = Space(n + 2, nu + 1)
        a = ambient.basis_vector(0) + ambient.basis_vector(n + 1)
        b = 0.5 * (ambient.basis_vector(n + 1) - ambient.basis_vector(0))
        return cls.from_pair(ambient, a, b, fiber=Subspace.span(ambient, np.eye(n + 2)[1 : n + 1]))

    @classmethod
    def from_pair(cls, ambient: Space, a, b, fiber: Optional[Subspace] = None) -> "ParaboloidEmbedding":
        "Embedding for a lightlike pair; `V` defaults to `span{a, b}^perp`."
        a, b = ambient.vector(a), ambient.vector(b)
        if classify(ambient, a) != CausalClass.LIGHTLIKE or classify(ambient, b) != CausalClass.LIGHTLIKE:
            raise ValueError("Both vectors of the pair must be lightlike.")
        if abs(inner(ambient, a, b) - 1.0) > MEMBERSHIP_TOLERANCE * euclidean_scale(a, b) ** 2:
            raise ValueError("The pair must satisfy <a, b> = 1.")
        if fiber is None:
            fiber = orthogonal_complement(Subspace.span(ambient, [a, b]))
        elif fiber.dim != ambient.dim - 2 or not np.allclose(fiber.basis @ (ambient.signs * np.stack([a, b])).T, 0):
            raise ValueError("The fiber must be the orthogonal complement of span{a, b}.")
        frame, _ = ordered_frame(fiber)
        return cls(ambient, a, b, fiber, frame)

    @property
    def space(self) -> Space:
        "The embedded space `E^n_nu`."
        return Space(self.fiber.dim, self.fiber.index)

    def lift(self, x) -> np.ndarray:
        "The vector of `V` with coordinates `x`."
        return np.asarray(x, dtype=float) @ self.frame

    def coordinates(self, q) -> np.ndarray:
        "Coordinates of the `V` component of `q`."
        signs = self.space.signs
        return inner(self.ambient, np.asarray(q, dtype=float)[..., None, :], self.frame) * signs

    def embed(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.b + self.lift(x) - 0.5 * inner(self.space, x, x)[..., None] * self.a

    def decomposition(self) -> WarpedDecomposition:
        """
        The null warped decomposition of `E^{n+2}_{nu+1}` with base point `b`, geodesic factor `span{a, b}` and
        spherical factor `P^n_nu`.
        """
        data = InitialData(
            space=self.ambient,
            base_point=self.b,
            factors=(Subspace.span(self.ambient, [self.a, self.b]), self.fiber),
            a_vectors=[self.a],
            b_vector=self.b,
        )
        return build(data)

    def same_as(self, other: "ParaboloidEmbedding") -> bool:
        return (
            self.ambient == other.ambient
            and np.allclose(self.a, other.a)
            and np.allclose(self.b, other.b)
            and np.allclose(self.frame, other.frame)
        )


@dataclass(frozen=True, eq=False)
class ParaboloidIsometry:
    """
    The isometry `phi(B, v)` of `P^n_nu`.

    Args:
        embedding ([`ParaboloidEmbedding`]):
            Fixes `a`, `b` and the coordinates of `V`.
        B (`np.ndarray`):
            An `n x n` pseudo-orthogonal matrix acting on `V` coordinates.
        v (`np.ndarray`):
            The translation part, in `V` coordinates.
    """

    embedding: ParaboloidEmbedding
    B: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        space = self.embedding.space
        object.__setattr__(self, "B", np.array(self.B, dtype=float))
        object.__setattr__(self, "v", space.vector(self.v))
        if not is_pseudo_orthogonal(space, self.B):
            raise ValueError("B must be a pseudo-orthogonal map of V.")

    @classmethod
    def identity(cls, embedding: ParaboloidEmbedding) -> "ParaboloidIsometry":
        return cls(embedding, np.eye(embedding.space.dim), np.zeros(embedding.space.dim))

    @classmethod
    def translation(cls, embedding: ParaboloidEmbedding, v) -> "ParaboloidIsometry":
        return cls(embedding, np.eye(embedding.space.dim), v)

    @classmethod
    def sample(cls, embedding: ParaboloidEmbedding, seed: int) -> "ParaboloidIsometry":
        space = embedding.space
        B = pseudo_orthogonal_sample(space, seed)
        return cls(embedding, B, make_generator(seed).normal(size=space.dim))

    def apply_fiber(self, x) -> np.ndarray:
        "`x -> Bx + v` on `E^n_nu`."
        return np.asarray(x, dtype=float) @ self.B.T + self.v

    def realize(self) -> np.ndarray:
        """
        The linear map of `E^{n+2}_{nu+1}` given by

            phi(B, v)(p + p~) = p~ + Bp + <a, p~> v - (<Bp, v> + <a, p~> v^2/2) a

        for `p` in `V` and `p~` orthogonal to it, as an `(n+2) x (n+2)` matrix.
        """
        embedding = self.embedding
        fiber_space = embedding.space
        columns = np.eye(embedding.ambient.dim)
        y = embedding.coordinates(columns)
        rest = columns - embedding.lift(y)
        By = y @ self.B.T
        s = inner(embedding.ambient, embedding.a, rest)[:, None]
        images = (
            rest
            + embedding.lift(By)
            + s * embedding.lift(self.v)
            - (inner(fiber_space, By, self.v)[:, None] + 0.5 * s * inner(fiber_space, self.v, self.v)) * embedding.a
        )
        return images.T


def compose_isometries(first: ParaboloidIsometry, second: ParaboloidIsometry) -> ParaboloidIsometry:
    "`phi(B_1, v_1) phi(B_2, v_2) = phi(B_1 B_2, v_1 + B_1 v_2)`."
    if not first.embedding.same_as(second.embedding):
        raise ValueError("Both isometries must act on the same paraboloid embedding.")
    return ParaboloidIsometry(first.embedding, first.B @ second.B, first.v + first.B @ second.v)


def decode_isometry(embedding: ParaboloidEmbedding, matrix) -> ParaboloidIsometry:
    """
    Recovers `(B, v) = (P T|_V, P T b)` from a linear isometry `T` of `E^{n+2}_{nu+1}` fixing `a`, `P` being the
    projection onto `V`. Only maps on the group are accepted.
    """
    matrix = np.asarray(matrix, dtype=float)
    if not is_pseudo_orthogonal(embedding.ambient, matrix):
        raise ValueError("The map is not a linear isometry of the ambient space.")
    if np.max(np.abs(matrix @ embedding.a - embedding.a)) > MEMBERSHIP_TOLERANCE * euclidean_scale(embedding.a):
        raise ValueError("The map does not fix a, so it does not preserve the paraboloid.")
    B = embedding.coordinates((matrix @ embedding.frame.T).T).T
    v = embedding.coordinates(matrix @ embedding.b)
    return ParaboloidIsometry(embedding, B, v)


def check_equivariance(
    iso: ParaboloidIsometry, samples: int = 20, seed: int = 0, tolerance: float = 1e-9
) -> CheckRecord:
    "Largest relative Euclidean gap between `embed(Bx + v)` and `T embed(x)` over random `x`."
    embedding = iso.embedding
    matrix = iso.realize()
    x = make_generator(seed).normal(size=(samples, embedding.space.dim))
    expected = embedding.embed(iso.apply_fiber(x))
    actual = embedding.embed(x) @ matrix.T
    scale = 1.0 + np.max(np.linalg.norm(expected, axis=-1))
    error = float(np.max(np.linalg.norm(expected - actual, axis=-1))) / scale
    return CheckRecord("equivariance", samples, error, tolerance)


class FactorIsometry:
    "An isometry of a spherical factor onto itself, applied to ambient points and tangent vectors."

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def differential(self, x, v) -> np.ndarray:
        raise NotImplementedError

    def validate(self, sphere: SphericalSubmanifold):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class QuadricRotation(FactorIsometry):
    """
    `x -> c + L(x - c)` for a pseudo-orthogonal `L` preserving the carrier of a quadric centered at `c`.
    """

    center: np.ndarray
    linear: np.ndarray

    @classmethod
    def from_carrier_map(cls, sphere: SphericalSubmanifold, matrix) -> "QuadricRotation":
        """
        Extends `matrix`, written in an orthonormal frame of the carrier (timelike vectors first), by the identity on
        the orthogonal complement of the carrier.
        """
        if not sphere.is_quadric:
            raise ValueError(f"Expected a quadric, got a {sphere.kind.value}.")
        frame, signs = ordered_frame(sphere.carrier)
        matrix = np.asarray(matrix, dtype=float)
        if not is_pseudo_orthogonal(Space(sphere.carrier.dim, sphere.carrier.index), matrix):
            raise ValueError("The carrier map must be pseudo-orthogonal.")
        g = sphere.space.metric
        linear = np.eye(sphere.space.dim) + frame.T @ (matrix - np.eye(len(frame))) @ (signs[:, None] * frame @ g)
        return cls(sphere.center, linear)

    @classmethod
    def sample(cls, sphere: SphericalSubmanifold, seed: int) -> "QuadricRotation":
        "A random map from the identity component, which keeps every connected component in place."
        carrier = sphere.carrier
        return cls.from_carrier_map(sphere, pseudo_orthogonal_sample(Space(carrier.dim, carrier.index), seed))

    def __call__(self, x) -> np.ndarray:
        return self.center + (np.asarray(x, dtype=float) - self.center) @ self.linear.T

    def differential(self, x, v) -> np.ndarray:
        return np.asarray(v, dtype=float) @ self.linear.T

    def validate(self, sphere: SphericalSubmanifold):
        if not sphere.is_quadric or not np.allclose(self.center, sphere.center):
            raise ValueError("The rotation must be centered at the center of the quadric.")
        if not is_pseudo_orthogonal(sphere.space, self.linear):
            raise ValueError("The linear part of the rotation is not pseudo-orthogonal.")
        if not sphere.carrier.contains_subspace(Subspace.span(sphere.space, sphere.carrier.basis @ self.linear.T)):
            raise ValueError("The rotation does not preserve the carrier of the quadric.")
        if not spheres.contains(sphere, self(sphere.base_point)):
            raise ValueError("The rotation moves the base point off the connected quadric.")


@dataclass(frozen=True, eq=False)
class ParaboloidMotion(FactorIsometry):
    """
    The motion `x -> Bx + t` of a paraboloid factor `p + {x - x^2/2 a}`, in coordinates of an ordered orthonormal
    frame of its tangent space. On the affine span it reads `p + x + s a -> p + Bx + t + (s - <Bx, t> - t^2/2) a`.
    """

    sphere: SphericalSubmanifold
    B: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        if self.sphere.kind != SphereKind.PARABOLOID:
            raise ValueError(f"Expected a paraboloid, got a {self.sphere.kind.value}.")
        object.__setattr__(self, "B", np.array(self.B, dtype=float))
        object.__setattr__(self, "t", np.array(self.t, dtype=float))

    @property
    def _frame(self) -> np.ndarray:
        return ordered_frame(self.sphere.tangent)[0]

    @property
    def _fiber_space(self) -> Space:
        return Space(self.sphere.dim, self.sphere.index)

    def _split(self, x):
        frame, fiber_space = self._frame, self._fiber_space
        y = inner(self.sphere.space, np.asarray(x, dtype=float)[..., None, :], frame) * fiber_space.signs
        return frame, fiber_space, y

    def __call__(self, x) -> np.ndarray:
        frame, fiber_space, y = self._split(np.asarray(x, dtype=float) - self.sphere.base_point)
        d = np.asarray(x, dtype=float) - self.sphere.base_point - y @ frame
        By = y @ self.B.T
        shift = (inner(fiber_space, By, self.t) + 0.5 * inner(fiber_space, self.t, self.t))[..., None]
        return self.sphere.base_point + By @ frame + self.t @ frame + d - shift * self.sphere.a

    def differential(self, x, v) -> np.ndarray:
        frame, fiber_space, y = self._split(v)
        d = np.asarray(v, dtype=float) - y @ frame
        By = y @ self.B.T
        return By @ frame + d - inner(fiber_space, By, self.t)[..., None] * self.sphere.a

    def validate(self, sphere: SphericalSubmanifold):
        if sphere is not self.sphere and not np.allclose(sphere.base_point, self.sphere.base_point):
            raise ValueError("The motion belongs to another paraboloid.")
        if not is_pseudo_orthogonal(self._fiber_space, self.B):
            raise ValueError("The linear part of the motion is not pseudo-orthogonal.")


def sample_factor_isometry(sphere: SphericalSubmanifold, seed: int) -> Optional[FactorIsometry]:
    """
    A random isometry of a spherical factor onto itself: a [`QuadricRotation`] from the identity component for
    quadrics, a [`ParaboloidMotion`] for paraboloids. Planes get `None`.
    """
    if sphere.is_quadric:
        return QuadricRotation.sample(sphere, seed)
    if sphere.kind == SphereKind.PARABOLOID:
        B = pseudo_orthogonal_sample(Space(sphere.dim, sphere.index), seed)
        return ParaboloidMotion(sphere, B, make_generator(seed).normal(size=sphere.dim))
    return None


@dataclass(frozen=True, eq=False)
class LiftedIsometry:
    "`q -> psi(p_0, ..., f(p_i), ..., p_k)` with `(p_0, ..., p_k) = psi^-1(q)`."

    decomposition: WarpedDecomposition
    index: int
    factor_map: FactorIsometry

    def __call__(self, q) -> np.ndarray:
        point = psi_inverse(self.decomposition, q)
        moved = point.replace(self.index, self.factor_map(point[self.index]))
        return psi_forward(self.decomposition, moved)


def lift_factor_isometry(decomposition: WarpedDecomposition, i: int, factor_map: FactorIsometry) -> LiftedIsometry:
    """
    Lifts an isometry of the spherical factor `N_i` (`1 <= i <= k`) to an isometry of `Im(psi)` that preserves every
    leaf of the `i`-th spherical foliation.
    """
    if not 1 <= i <= decomposition.k:
        raise ValueError(f"Spherical factors are numbered 1 to {decomposition.k}, got {i}.")
    sphere = decomposition.spherical_factors[i - 1]
    factor_map.validate(sphere)
    if not spheres.contains(sphere, factor_map(sphere.base_point)):
        raise ValueError(f"The map does not send N_{i} to itself.")
    return LiftedIsometry(decomposition, i, factor_map)


def _finite_difference_jacobian(f: Callable, q: np.ndarray, step: float) -> np.ndarray:
    columns = [(f(q + step * e) - f(q - step * e)) / (2 * step) for e in np.eye(len(q))]
    return np.array(columns).T


def check_lifted_isometry(
    lifted: LiftedIsometry, samples: int = 20, seed: int = 0, tolerance: float = 1e-7
) -> List[CheckRecord]:
    """
    Checks a lifted factor isometry on sampled image points: it preserves the squared length of differences, keeps
    every point on its leaf, and (for decompositions of the flat space) its finite-difference Jacobian `J` satisfies
    `J^T g J = g`. Errors are relative to the size of the points, or of `J` for the metric.
    """
    decomposition = lifted.decomposition
    space = decomposition.space
    rng = make_generator(seed)
    points = sample_domain(decomposition, rng, samples)
    images = np.array([psi_forward(decomposition, point) for point in points])
    moved = np.array([lifted(q) for q in images])

    differences = images[1:] - images[:-1]
    moved_differences = moved[1:] - moved[:-1]
    scale = 1.0 + np.max(np.abs(images)) ** 2
    pairwise = np.abs(inner(space, moved_differences, moved_differences) - inner(space, differences, differences))
    records = [CheckRecord("lift_pairwise", len(differences), float(np.max(pairwise, initial=0.0)) / scale, tolerance)]

    leaf_error = 0.0
    for point, q in zip(points, moved):
        moved_point = psi_inverse(decomposition, q)
        for j, (before, after) in enumerate(zip(point, moved_point)):
            if j != lifted.index:
                size = 1.0 + float(np.max(np.abs(before)))
                leaf_error = max(leaf_error, float(np.max(np.abs(before - after))) / size)
    records.append(CheckRecord("lift_leaf_preservation", samples, leaf_error, tolerance))

    if not decomposition.is_restricted:
        metric = space.metric
        metric_error = 0.0
        for q in images:
            jacobian = _finite_difference_jacobian(lifted, q, PUSHFORWARD_FD_STEP * euclidean_scale(q))
            size = max(1.0, float(np.max(np.abs(jacobian)))) ** 2
            metric_error = max(metric_error, float(np.max(np.abs(jacobian.T @ metric @ jacobian - metric))) / size)
        records.append(CheckRecord("lift_pullback_metric", samples, metric_error, tolerance))
    return records

