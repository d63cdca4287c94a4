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
Indefinite inner-product linear algebra over the pseudo-Euclidean space `E^n_nu`.

Vectors are plain `numpy` float arrays of shape `(n,)` (or `(..., n)` where an operation broadcasts); the [`Space`]
they live in is passed explicitly and owns the metric. The metric has its `nu` negative directions first:
`diag(-1, ..., -1, +1, ..., +1)`.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm, null_space

from .utils.constants import CLASSIFICATION_TOLERANCE
from .utils.dataclasses import CausalClass
from .utils.random import make_generator


class DegenerateSubspaceError(ValueError):
    "Raised when an operation needs a non-degenerate subspace."


@dataclass(frozen=True)
class Space:
    """
    The pseudo-Euclidean space `E^n_nu`.

    Args:
        dim (`int`):
            The dimension `n`, at least 1.
        index (`int`, *optional*, defaults to 0):
            The number `nu` of negative metric directions, `0 <= nu <= n`.
    """

    dim: int
    index: int = 0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"The dimension of a space must be a positive integer, got {self.dim}.")
        if int(self.index) != self.index or not 0 <= self.index <= self.dim:
            raise ValueError(f"The index of a space must lie between 0 and {self.dim}, got {self.index}.")

    @property
    def signs(self) -> np.ndarray:
        return np.concatenate([-np.ones(self.index), np.ones(self.dim - self.index)])

    @property
    def metric(self) -> np.ndarray:
        return np.diag(self.signs)

    def vector(self, coords) -> np.ndarray:
        "Validates `coords` and returns them as a float array of shape `(dim,)`."
        v = np.asarray(coords, dtype=float)
        if v.shape != (self.dim,):
            raise ValueError(f"Expected a vector with {self.dim} coordinates, got shape {v.shape}.")
        if not np.all(np.isfinite(v)):
            raise ValueError("Vector coordinates must be finite.")
        return v

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def inner(self, x, y):
        return inner(self, x, y)

    def norm_squared(self, x):
        return inner(self, x, x)

    def __str__(self):
        return f"E^{self.dim}_{self.index}"


def _check_last_axis(space: Space, *arrays):
    for array in arrays:
        if np.shape(array)[-1:] != (space.dim,):
            raise ValueError(f"Dimension mismatch: expected vectors of {space}, got shape {np.shape(array)}.")


def inner(space: Space, x, y):
    """
    The pseudo-Euclidean inner product `<x, y> = -sum_{i<nu} x_i y_i + sum_{i>=nu} x_i y_i`. Broadcasts over
    leading axes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_last_axis(space, x, y)
    return np.sum(x * space.signs * y, axis=-1)


def euclidean_scale(*arrays) -> float:
    "`1 + ` the largest Euclidean norm among `arrays`, used to make tolerances relative."
    return 1.0 + max((float(np.linalg.norm(a)) for a in arrays), default=0.0)


def classify(space: Space, v, tol: float = CLASSIFICATION_TOLERANCE) -> CausalClass:
    """
    Returns the causal class of `v`: zero when `max |v_i| <= tol`, lightlike when `|<v, v>| <= tol * sum v_i^2`,
    otherwise the sign of `<v, v>` decides.
    """
    v = np.asarray(v, dtype=float)
    _check_last_axis(space, v)
    if np.max(np.abs(v)) <= tol:
        return CausalClass.ZERO
    norm_squared = inner(space, v, v)
    if abs(norm_squared) <= tol * float(v @ v):
        return CausalClass.LIGHTLIKE
    return CausalClass.SPACELIKE if norm_squared > 0 else CausalClass.TIMELIKE


def _signature(space: Space, basis: np.ndarray, tol: float) -> Tuple[int, bool]:
    if len(basis) == 0:
        return 0, False
    # Gram array of a Euclidean-orthonormal basis of the same subspace: its eigenvalues are scale free.
    q, _ = np.linalg.qr(basis.T)
    eigenvalues = np.linalg.eigvalsh(q.T @ (space.signs[:, None] * q))
    degenerate = bool(np.min(np.abs(eigenvalues)) <= tol)
    return int(np.sum(eigenvalues < -tol)), degenerate


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    A linear subspace of a [`Space`], given by a basis (the rows of `basis`).

    Build instances with [`Subspace.span`], [`Subspace.whole`] or [`Subspace.zero`]; they fill in the Gram array
    and the signature.
    """

    space: Space
    basis: np.ndarray
    gram: np.ndarray
    index: int
    degenerate: bool

    @classmethod
    def span(cls, space: Space, vectors, tol: float = CLASSIFICATION_TOLERANCE) -> "Subspace":
        basis = np.array(vectors, dtype=float).reshape(-1, space.dim)
        if not np.all(np.isfinite(basis)):
            raise ValueError("Subspace basis vectors must be finite.")
        if len(basis) and np.linalg.matrix_rank(basis) < len(basis):
            raise ValueError(f"The {len(basis)} vectors given for a subspace of {space} are linearly dependent.")
        gram = basis @ (space.signs * basis).T
        index, degenerate = _signature(space, basis, tol)
        basis.setflags(write=False)
        gram.setflags(write=False)
        return cls(space=space, basis=basis, gram=gram, index=index, degenerate=degenerate)

    @classmethod
    def whole(cls, space: Space) -> "Subspace":
        return cls.span(space, np.eye(space.dim))

    @classmethod
    def zero(cls, space: Space) -> "Subspace":
        return cls.span(space, np.zeros((0, space.dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def projector(self) -> np.ndarray:
        "The matrix `P` of the orthogonal projection, `project(S, v) == P @ v`."
        if self.degenerate:
            raise DegenerateSubspaceError("The orthogonal projection onto a degenerate subspace is undefined.")
        if self.dim == 0:
            return np.zeros((self.space.dim, self.space.dim))
        return self.basis.T @ np.linalg.solve(self.gram, self.basis * self.space.signs)

    def contains(self, v, tol: float = CLASSIFICATION_TOLERANCE) -> bool:
        "Euclidean membership test, valid for degenerate subspaces as well."
        v = np.asarray(v, dtype=float)
        if self.dim == 0:
            return bool(np.linalg.norm(v) <= tol * euclidean_scale(v))
        coeffs, *_ = np.linalg.lstsq(self.basis.T, v, rcond=None)
        return bool(np.linalg.norm(self.basis.T @ coeffs - v) <= tol * euclidean_scale(v))

    def contains_subspace(self, other: "Subspace", tol: float = CLASSIFICATION_TOLERANCE) -> bool:
        return all(self.contains(v, tol) for v in other.basis)

    def same_as(self, other: "Subspace", tol: float = CLASSIFICATION_TOLERANCE) -> bool:
        return self.dim == other.dim and self.contains_subspace(other, tol)

    def __repr__(self):
        flag = ", degenerate" if self.degenerate else ""
        return f"Subspace(dim={self.dim}, index={self.index}{flag}, space={self.space})"


def subspace_signature(subspace: Subspace) -> Tuple[int, int, bool]:
    "Returns `(m, mu, degenerate)`: dimension, number of negative Gram eigenvalues, degeneracy flag."
    return subspace.dim, subspace.index, subspace.degenerate


def project(subspace: Subspace, v) -> np.ndarray:
    """
    Orthogonal projection of `v` (or of every row of a stack of vectors) onto a non-degenerate subspace.
    """
    v = np.asarray(v, dtype=float)
    _check_last_axis(subspace.space, v)
    return v @ subspace.projector.T


def orthogonal_complement(subspace: Subspace, within: Optional[Subspace] = None) -> Subspace:
    """
    Returns the orthogonal complement of `subspace` inside `within` (the whole space by default).

    Args:
        subspace ([`Subspace`]):
            A non-degenerate subspace contained in `within`.
        within ([`Subspace`], *optional*):
            The carrier. It may be degenerate itself.
    """
    space = subspace.space
    carrier = Subspace.whole(space) if within is None else within
    if subspace.degenerate:
        raise DegenerateSubspaceError(
            f"Cannot take the orthogonal complement of a degenerate subspace ({subspace!r})."
        )
    if not carrier.contains_subspace(subspace):
        raise ValueError("The subspace is not contained in the carrier it should be complemented in.")
    if subspace.dim == 0:
        return carrier
    coeffs = null_space(subspace.basis @ (space.signs[:, None] * carrier.basis.T))
    return Subspace.span(space, (carrier.basis.T @ coeffs).T)


def orthonormal_basis(subspace: Subspace, tol: float = CLASSIFICATION_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns `(frame, signs)` where the rows of `frame` span `subspace` and `<frame[i], frame[j]> = signs[i] * delta_ij`.

    Gram-Schmidt is run on the basis in its given order so that a basis which is already orthonormal is returned
    unchanged. If an intermediate residual is null, the frame comes from the eigenvectors of the Gram array
    instead (negative directions first).
    """
    space = subspace.space
    if subspace.degenerate:
        raise DegenerateSubspaceError("A degenerate subspace has no orthonormal basis.")
    frame, signs = [], []
    for v in subspace.basis:
        w = v - sum(s * inner(space, v, e) * e for e, s in zip(frame, signs))
        norm_squared = inner(space, w, w)
        if abs(norm_squared) <= tol * float(w @ w):
            break
        frame.append(w / np.sqrt(abs(norm_squared)))
        signs.append(np.sign(norm_squared))
    else:
        return np.array(frame).reshape(-1, space.dim), np.array(signs, dtype=float)

    eigenvalues, eigenvectors = np.linalg.eigh(subspace.gram)
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]
    frame = (eigenvectors.T @ subspace.basis) / np.sqrt(np.abs(eigenvalues))[:, None]
    return frame, np.sign(eigenvalues)


def dual_lightlike_basis(
    space: Space, a_vectors, within: Optional[Subspace] = None, tol: float = CLASSIFICATION_TOLERANCE
) -> np.ndarray:
    """
    Completes pairwise orthogonal, independent lightlike vectors `a_1, ..., a_k` with lightlike `b_1, ..., b_k` such
    that `<a_i, b_j> = delta_ij` and `<b_i, b_j> = 0`.

    Inductively, `b_1` is the least-norm solution of `<a_1, b> = 1`, `<a_i, b> = 0` (`i >= 2`) inside the carrier,
    shifted along `a_1` to make it lightlike; the remaining vectors are found inside `span{a_1, b_1}^perp`.

    Args:
        space ([`Space`]):
            The ambient space.
        a_vectors (sequence of vectors):
            The `k` lightlike vectors, stacked as rows.
        within ([`Subspace`], *optional*):
            Carrier subspace containing every `a_i`; the `b_i` are taken inside it. Defaults to the whole space.

    Returns:
        `np.ndarray` of shape `(k, n)` holding the `b_i` as rows.
    """
    a = np.array(a_vectors, dtype=float).reshape(-1, space.dim)
    k = len(a)
    if k == 0:
        return np.zeros((0, space.dim))
    if np.linalg.matrix_rank(a) < k:
        raise ValueError("The vectors to complete into a lightlike dual basis are linearly dependent.")
    for i, a_i in enumerate(a):
        if classify(space, a_i, tol) != CausalClass.LIGHTLIKE:
            raise ValueError(f"a-vector {i} is {classify(space, a_i, tol).value}, a lightlike vector is required.")
    for i in range(k):
        for j in range(i + 1, k):
            if abs(inner(space, a[i], a[j])) > tol * euclidean_scale(a[i]) * euclidean_scale(a[j]):
                raise ValueError(f"a-vectors {i} and {j} are not orthogonal.")
    carrier = Subspace.whole(space) if within is None else within
    if not all(carrier.contains(a_i) for a_i in a):
        raise ValueError("Every a-vector must lie in the carrier of the dual basis.")

    b = []
    for j in range(k):
        rows = a[j:] * space.signs
        rhs = np.zeros(len(rows))
        rhs[0] = 1.0
        coeffs, *_ = np.linalg.lstsq(rows @ carrier.basis.T, rhs, rcond=None)
        b_j = carrier.basis.T @ coeffs
        if abs(inner(space, a[j], b_j) - 1.0) > np.sqrt(tol):
            raise ValueError(f"No vector of the carrier pairs with a-vector {j}; the carrier has too small an index.")
        b_j = b_j - 0.5 * inner(space, b_j, b_j) * a[j]
        b.append(b_j)
        if j + 1 < k:
            carrier = orthogonal_complement(Subspace.span(space, [a[j], b_j]), within=carrier)
    return np.array(b)


def is_pseudo_orthogonal(space: Space, matrix, tol: float = 1e-9) -> bool:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (space.dim, space.dim):
        return False
    return bool(np.max(np.abs(matrix.T @ space.metric @ matrix - space.metric)) <= tol)


def pseudo_orthogonal_exp(space: Space, generator) -> np.ndarray:
    """
    Returns `exp(A)` for an element `A` of the Lie algebra of the pseudo-orthogonal group, i.e. `A^T g + g A = 0`.
    The exponential is computed by scaling and squaring (`scipy.linalg.expm`).
    """
    generator = np.asarray(generator, dtype=float)
    if generator.shape != (space.dim, space.dim):
        raise ValueError(f"Expected a {space.dim}x{space.dim} generator, got shape {generator.shape}.")
    g = space.metric
    if np.max(np.abs(generator.T @ g + g @ generator), initial=0.0) > 1e-9 * euclidean_scale(generator):
        raise ValueError("The generator does not satisfy A^T g + g A = 0.")
    return expm(generator)


def pseudo_orthogonal_sample(space: Space, seed: int, scale: float = 0.5) -> np.ndarray:
    """
    Draws a pseudo-orthogonal map `B` (`<Bx, By> = <x, y>`) as `exp(g S)` with `S` a random antisymmetric matrix.

    Args:
        space ([`Space`]):
            The space `B` acts on.
        seed (`int`):
            Seed of the generator `S` is drawn from.
        scale (`float`, *optional*, defaults to 0.5):
            Standard deviation of the entries of `S`, before dividing by `sqrt(n)`. Keeps boosts moderate.
    """
    rng = make_generator(seed)
    s = rng.normal(scale=scale / np.sqrt(space.dim), size=(space.dim, space.dim))
    return pseudo_orthogonal_exp(space, space.metric @ (s - s.T) / 2)
