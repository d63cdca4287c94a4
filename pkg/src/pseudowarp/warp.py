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
Warped product decompositions of `E^n_nu` and of its central hyperquadrics `E^n_nu(kappa)`.

Initial data `(p; V_0, ..., V_k; a_1, ..., a_k)` determine the map

    psi(p_0, ..., p_k) = p_0 + sum_i rho_i(p_0) (p_i - p),    rho_i(p_0) = 1 + <a_i, p_0 - p>,

from `N_0 x_rho_1 N_1 x ... x_rho_k N_k` into the ambient space, where `N_0` is an open region of `p + V_0` and `N_i`
is the spherical submanifold through `p` with tangent space `V_i` and mean curvature `-a_i`.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import spheres
from .logging import get_logger
from .pseudo_linear import (
    Space,
    Subspace,
    classify,
    dual_lightlike_basis,
    euclidean_scale,
    inner,
    orthogonal_complement,
    orthonormal_basis,
    project,
)
from .spheres import SphereInitialData, SphericalSubmanifold, classify_sphere
from .utils.constants import (
    INVERSE_BOUNDARY_MARGIN,
    MEMBERSHIP_TOLERANCE,
    SAMPLING_BOX,
    SAMPLING_MAX_TRIES,
    SAMPLING_MIN_WARP,
)
from .utils.dataclasses import CaseTag, CausalClass, SphereKind, WarpFamily
from .utils.random import make_generator


logger = get_logger(__name__)


class InitialDataError(ValueError):
    "Raised when initial data do not determine a warped product decomposition."


class OutOfDomainError(ValueError):
    "Raised when a point is not in the domain `N_0 x N_1 x ... x N_k` of a decomposition."


class OutOfImageError(ValueError):
    """
    Raised when a point is not in the image of a decomposition. `predicate` names the violated condition.
    """

    def __init__(self, predicate: str, detail: str = ""):
        self.predicate = predicate
        super().__init__(f"{predicate}: {detail}" if detail else predicate)


SGN_CONDITION = "sgn condition violated"
CONNECTEDNESS_CONDITION = "connectedness condition violated"
NULL_CONDITION = "<a,q> > 0 condition violated"
QUADRIC_CONDITION = "quadric condition violated"
CARRIER_CONDITION = "carrier condition violated"
BOUNDARY_REFUSAL = "near-boundary refusal"


def _stack(space: Space, vectors) -> np.ndarray:
    return np.array(vectors, dtype=float).reshape(-1, space.dim)


@dataclass(frozen=True, eq=False)
class InitialData:
    """
    Initial data of a warped product decomposition.

    Args:
        space ([`Space`]):
            The ambient flat space `E^n_nu`.
        base_point (`np.ndarray`):
            The base point `p`.
        factors (sequence of [`Subspace`]):
            The orthogonal splitting `V_0, V_1, ..., V_k` (`k >= 1`) of the carrier, or of the tangent space of
            `E^n_nu(kappa)` at `p` when `kappa != 0`.
        a_vectors (`np.ndarray`):
            The `k` vectors `a_i`, as rows. They lie in `V_0` (in `R p + V_0` when `kappa != 0`), are pairwise
            orthogonal and independent, and either all non-null or a single lightlike one.
        kappa (`float`, *optional*, defaults to 0.0):
            Curvature of the hyperquadric the decomposition lives in, 0 for the flat space.
        b_vector (`np.ndarray`, *optional*):
            Null case only: a lightlike `b` in `V_0` with `<a, b> = 1`. Chosen automatically when omitted.
        carrier ([`Subspace`], *optional*):
            The subspace being decomposed; the whole space by default. Decompositions of the geodesic factor of
            another decomposition use its `V_0` here.
        connected (`bool`, *optional*, defaults to `False`):
            Keep only the component through `p` of disconnected spherical factors.
        composed (`bool`, *optional*, defaults to `False`):
            Set by [`compose`]: the union of the initial data of two compatible decompositions, which may mix
            lightlike and non-lightlike `a_i`.
    """

    space: Space
    base_point: np.ndarray
    factors: Tuple[Subspace, ...]
    a_vectors: np.ndarray
    kappa: float = 0.0
    b_vector: Optional[np.ndarray] = None
    carrier: Optional[Subspace] = None
    connected: bool = False
    composed: bool = False

    def __post_init__(self):
        space = self.space
        object.__setattr__(self, "base_point", space.vector(self.base_point))
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "a_vectors", _stack(space, self.a_vectors))
        object.__setattr__(self, "kappa", float(self.kappa))
        if self.b_vector is not None:
            object.__setattr__(self, "b_vector", space.vector(self.b_vector))
        if self.carrier is None:
            object.__setattr__(self, "carrier", Subspace.whole(space))
        self.validate()

    @property
    def k(self) -> int:
        return len(self.factors) - 1

    @property
    def causal_classes(self) -> List[CausalClass]:
        return [classify(self.space, a) for a in self.a_vectors]

    @property
    def is_null(self) -> bool:
        return not self.composed and self.causal_classes == [CausalClass.LIGHTLIKE]

    def validate(self):
        space, p = self.space, self.base_point
        tol = MEMBERSHIP_TOLERANCE
        if len(self.factors) < 2:
            raise InitialDataError(
                "A warped product needs a geodesic factor and at least one spherical factor, "
                f"got {len(self.factors)} factor(s)."
            )
        for i, factor in enumerate(self.factors):
            if factor.space != space:
                raise InitialDataError(f"Factor {i} lives in {factor.space}, not in {space}.")
            if factor.dim == 0:
                raise InitialDataError(f"Factor {i} is trivial; every factor needs dimension at least 1.")
            if factor.degenerate:
                raise InitialDataError(f"Factor {i} is degenerate.")
            if not self.carrier.contains_subspace(factor):
                raise InitialDataError(f"Factor {i} is not contained in the carrier.")
        for i in range(len(self.factors)):
            for j in range(i + 1, len(self.factors)):
                cross = self.factors[i].basis @ (space.signs * self.factors[j].basis).T
                if np.max(np.abs(cross)) > tol * euclidean_scale(self.factors[i].basis, self.factors[j].basis) ** 2:
                    raise InitialDataError(f"Factors {i} and {j} are not orthogonal.")
        expected = self.carrier.dim - (1 if self.kappa != 0.0 else 0)
        total = sum(factor.dim for factor in self.factors)
        if total != expected:
            raise InitialDataError(f"The factor dimensions add up to {total}, expected {expected}.")

        if len(self.a_vectors) != self.k:
            raise InitialDataError(f"Expected {self.k} a-vectors, got {len(self.a_vectors)}.")
        classes = self.causal_classes
        zero = [i for i, c in enumerate(classes) if c == CausalClass.ZERO]
        if zero:
            raise InitialDataError(f"a-vectors {zero} vanish; the decomposition would not be proper.")
        lightlike = [i for i, c in enumerate(classes) if c == CausalClass.LIGHTLIKE]
        if lightlike and not self.composed:
            if len(lightlike) != len(classes):
                others = [i for i in range(len(classes)) if i not in lightlike]
                raise InitialDataError(
                    f"Mixed initial data: a-vectors {lightlike} are lightlike while a-vectors {others} are not. "
                    "Build such decompositions by composing a null and a non-null decomposition."
                )
            if len(lightlike) > 1:
                raise InitialDataError(f"The null case takes a single lightlike a-vector, got {len(lightlike)}.")
        if np.linalg.matrix_rank(self.a_vectors) < self.k:
            raise InitialDataError("The a-vectors are linearly dependent.")
        scale = euclidean_scale(p, *self.a_vectors)
        for i in range(self.k):
            for j in range(i + 1, self.k):
                if abs(inner(space, self.a_vectors[i], self.a_vectors[j])) > tol * scale**2:
                    raise InitialDataError(f"a-vectors {i} and {j} are not orthogonal.")

        geodesic = self.factors[0]
        if self.kappa == 0.0:
            for i, a in enumerate(self.a_vectors):
                if not geodesic.contains(a, tol):
                    raise InitialDataError(f"a-vector {i} does not lie in the geodesic factor V_0.")
        else:
            if abs(inner(space, p, p) - 1.0 / self.kappa) > tol * scale**2:
                raise InitialDataError(f"The base point does not lie on the hyperquadric of curvature {self.kappa}.")
            for i, factor in enumerate(self.factors):
                if np.max(np.abs(inner(space, factor.basis, p))) > tol * scale**2:
                    raise InitialDataError(f"Factor {i} is not tangent to the hyperquadric at the base point.")
            extended = Subspace.span(space, np.vstack([p, geodesic.basis]))
            for i, a in enumerate(self.a_vectors):
                if not extended.contains(a, tol) or abs(inner(space, a, p) - 1.0) > tol * scale**2:
                    raise InitialDataError(
                        f"a-vector {i} is not of the form kappa p - z with z tangent to the geodesic factor."
                    )

        if self.b_vector is not None:
            b = self.b_vector
            if not self.is_null:
                raise InitialDataError("A b-vector is only used by null initial data.")
            carrier = geodesic if self.kappa == 0.0 else Subspace.span(space, np.vstack([p, geodesic.basis]))
            if classify(space, b) != CausalClass.LIGHTLIKE or not carrier.contains(b, tol):
                raise InitialDataError("The b-vector must be lightlike and lie in the geodesic factor.")
            if abs(inner(space, self.a_vectors[0], b) - 1.0) > tol * euclidean_scale(b, self.a_vectors[0]) ** 2:
                raise InitialDataError("The b-vector must satisfy <a, b> = 1.")

    def transformed(self, matrix) -> "InitialData":
        "The initial data moved by a linear map of the ambient space (typically a pseudo-orthogonal one)."
        matrix = np.asarray(matrix, dtype=float)
        space = self.space

        def move(subspace):
            return Subspace.span(space, subspace.basis @ matrix.T)

        return replace(
            self,
            base_point=matrix @ self.base_point,
            factors=tuple(move(factor) for factor in self.factors),
            a_vectors=self.a_vectors @ matrix.T,
            b_vector=None if self.b_vector is None else matrix @ self.b_vector,
            carrier=move(self.carrier),
        )


def transform_initial_data(data: InitialData, matrix) -> InitialData:
    return data.transformed(matrix)


def lift_initial_data(data: InitialData) -> InitialData:
    """
    Flat initial data `(p; (R p + V_0), V_1, ...; a_i)` whose decomposition restricts to the one of `data` on
    `E^n_nu(kappa)`. Returns `data` unchanged when it is already flat.
    """
    if data.kappa == 0.0:
        return data
    geodesic = Subspace.span(data.space, np.vstack([data.base_point, data.factors[0].basis]))
    return replace(data, factors=(geodesic,) + data.factors[1:], kappa=0.0)


@dataclass(frozen=True, eq=False)
class GeodesicFactor:
    """
    The geodesic factor `N_0 = {p_0 in p + V_0 : rho_i(p_0) > 0}`, intersected with `quadric` for decompositions of a
    hyperquadric. It is kept as a predicate and never materialized.
    """

    space: Space
    base_point: np.ndarray
    carrier: Subspace
    a_vectors: np.ndarray
    kappa: float = 0.0
    quadric: Optional[SphericalSubmanifold] = None

    @property
    def dim(self) -> int:
        return self.carrier.dim - (1 if self.quadric is not None else 0)

    @property
    def index(self) -> int:
        return self.quadric.index if self.quadric is not None else self.carrier.index

    def warping(self, p0) -> np.ndarray:
        "The warping functions `rho_i(p_0) = 1 + <a_i, p_0 - p>`, one per spherical factor (last axis)."
        d = np.asarray(p0, dtype=float) - self.base_point
        return 1.0 + d @ (self.a_vectors * self.space.signs).T

    def violation(self, p0, tol: float = MEMBERSHIP_TOLERANCE) -> Optional[str]:
        "Describes why `p0` is not in the factor, or returns `None` when it is."
        p0 = np.asarray(p0, dtype=float)
        if not self.carrier.contains(p0 - self.base_point, tol):
            return "p_0 - p does not lie in V_0"
        rho = self.warping(p0)
        if np.any(rho <= 0):
            return f"warping functions {np.flatnonzero(rho <= 0).tolist()} are not positive"
        if self.quadric is not None and not spheres.contains(self.quadric, p0, tol):
            return "p_0 is not on the connected hyperquadric region"
        return None

    def contains(self, p0, tol: float = MEMBERSHIP_TOLERANCE) -> bool:
        return self.violation(p0, tol) is None

    def tangent_space(self, p0) -> Subspace:
        if self.quadric is None:
            return self.carrier
        return spheres.tangent_space(self.quadric, p0)


@dataclass(frozen=True, eq=False)
class WarpedPoint:
    "A point `(p_0, p_1, ..., p_k)` of a warped product, one ambient vector per factor."

    components: Tuple[np.ndarray, ...]

    @classmethod
    def of(cls, space: Space, components) -> "WarpedPoint":
        return cls(tuple(space.vector(c) for c in components))

    @property
    def geodesic(self) -> np.ndarray:
        return self.components[0]

    @property
    def spherical(self) -> Tuple[np.ndarray, ...]:
        return self.components[1:]

    def replace(self, i: int, value) -> "WarpedPoint":
        components = list(self.components)
        components[i] = np.asarray(value, dtype=float)
        return WarpedPoint(tuple(components))

    def to_list(self) -> List[List[float]]:
        return [c.tolist() for c in self.components]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]


@dataclass(frozen=True, eq=False)
class WarpedDecomposition:
    """
    A realized warped product decomposition. Build it with [`build`], [`compose`] or [`restrict_to_quadric`].

    Attributes:
        data ([`InitialData`]):
            Flat initial data realizing `psi`.
        case ([`~utils.CaseTag`]):
            Standard form of `psi`.
        geodesic_factor ([`GeodesicFactor`]):
            The region `N_0`.
        spherical_factors (tuple of [`~spheres.SphericalSubmanifold`]):
            `N_1, ..., N_k`.
        center (`np.ndarray`):
            `c = p - sum a_i / kappa_i` (non-null) or `c = p - b` (null).
        factor_centers (tuple):
            `c_i = p - a_i / kappa_i` per factor, `None` for paraboloids.
        b_vector (`np.ndarray`, *optional*):
            The lightlike partner of `a` in the null case.
        w_subspaces (tuple of [`~pseudo_linear.Subspace`]):
            `W_0, ..., W_k`; `W_0` is the part of `V_0` along which `psi` is a translation.
        kappa (`float`):
            0 for a decomposition of the flat space, otherwise the curvature of the hyperquadric.
        parts (tuple, *optional*):
            `(outer, inner)` for decompositions obtained by [`compose`].
    """

    data: InitialData
    case: CaseTag
    geodesic_factor: GeodesicFactor
    spherical_factors: Tuple[SphericalSubmanifold, ...]
    center: np.ndarray
    factor_centers: Tuple[Optional[np.ndarray], ...]
    b_vector: Optional[np.ndarray]
    w_subspaces: Tuple[Subspace, ...]
    kappa: float = 0.0
    parts: Optional[Tuple["WarpedDecomposition", "WarpedDecomposition"]] = None

    @property
    def space(self) -> Space:
        return self.data.space

    @property
    def k(self) -> int:
        return len(self.spherical_factors)

    @property
    def base_point(self) -> np.ndarray:
        return self.data.base_point

    @property
    def a_vectors(self) -> np.ndarray:
        return self.data.a_vectors

    @property
    def curvatures(self) -> np.ndarray:
        "`kappa_i = a_i^2`."
        return inner(self.space, self.a_vectors, self.a_vectors)

    @property
    def signs(self) -> np.ndarray:
        "`epsilon_i = sgn kappa_i`."
        return np.array([_causal_sign(self.space, a) for a in self.a_vectors])

    @property
    def offset(self) -> np.ndarray:
        return self.base_point - self.center

    @property
    def warp_directions(self) -> np.ndarray:
        "A basis of `V_0 ∩ W_0^perp`: the a-vectors, together with `b` in the null case."
        if self.parts is not None:
            return np.vstack([part.warp_directions for part in self.parts])
        if self.case == CaseTag.NULL:
            return np.vstack([self.a_vectors, self.b_vector])
        return self.a_vectors

    @property
    def canonical(self) -> bool:
        p = self.base_point
        scale = euclidean_scale(p, *self.a_vectors) ** 2
        if not self.geodesic_factor.carrier.contains(p, MEMBERSHIP_TOLERANCE) and self.kappa == 0.0:
            return False
        return bool(np.all(np.abs(inner(self.space, self.a_vectors, p) - 1.0) <= MEMBERSHIP_TOLERANCE * scale))

    @property
    def is_restricted(self) -> bool:
        return self.kappa != 0.0

    def base_warped_point(self) -> WarpedPoint:
        "The point `(p, ..., p)`, mapped to `p` by `psi`."
        return WarpedPoint(tuple(self.base_point for _ in range(self.k + 1)))


def _causal_sign(space: Space, v) -> int:
    causal_class = classify(space, v)
    if causal_class == CausalClass.SPACELIKE:
        return 1
    if causal_class == CausalClass.TIMELIKE:
        return -1
    return 0


def build(data: InitialData) -> WarpedDecomposition:
    """
    Realizes the warped product decomposition determined by `data`.

    Initial data on a hyperquadric (`kappa != 0`) are lifted to flat initial data with geodesic factor
    `R p + V_0` and the flat decomposition is restricted with [`restrict_to_quadric`].
    """
    if data.kappa != 0.0:
        restricted = restrict_to_quadric(build(lift_initial_data(data)), connected=True)
        logger.debug(f"Restricted decomposition to the hyperquadric of curvature {restricted.kappa}")
        return restricted
    if data.composed:
        raise InitialDataError("Composed initial data can only be realized through `compose`.")

    space, p = data.space, data.base_point
    geodesic = data.factors[0]
    a = data.a_vectors
    spherical = tuple(
        classify_sphere(SphereInitialData(space, p, factor, a_i), connected=data.connected)
        for factor, a_i in zip(data.factors[1:], a)
    )
    if data.is_null:
        b = data.b_vector if data.b_vector is not None else dual_lightlike_basis(space, a, within=geodesic)[0]
        case = CaseTag.NULL
        center = p - b
        factor_centers = (None,)
        w0 = orthogonal_complement(Subspace.span(space, [a[0], b]), within=geodesic)
        w_spherical = (data.factors[1],)
    else:
        b = None
        case = CaseTag.NON_NULL
        curvatures = inner(space, a, a)
        center = p - np.sum(a / curvatures[:, None], axis=0)
        factor_centers = tuple(p - a_i / kappa_i for a_i, kappa_i in zip(a, curvatures))
        w0 = orthogonal_complement(Subspace.span(space, a), within=geodesic)
        w_spherical = tuple(sphere.carrier for sphere in spherical)

    logger.debug(f"Built {case.value} decomposition with k={data.k}, center {center}")
    return WarpedDecomposition(
        data=data,
        case=case,
        geodesic_factor=GeodesicFactor(space, p, geodesic, a),
        spherical_factors=spherical,
        center=center,
        factor_centers=factor_centers,
        b_vector=b,
        w_subspaces=(w0,) + w_spherical,
    )


def _check_domain(decomposition: WarpedDecomposition, point: WarpedPoint):
    if len(point) != decomposition.k + 1:
        raise OutOfDomainError(f"Expected {decomposition.k + 1} components, got {len(point)}.")
    reason = decomposition.geodesic_factor.violation(point.geodesic)
    if reason is not None:
        raise OutOfDomainError(f"The geodesic component is outside N_0: {reason}.")
    for i, (sphere, p_i) in enumerate(zip(decomposition.spherical_factors, point.spherical), start=1):
        if not spheres.contains(sphere, p_i):
            raise OutOfDomainError(f"Component {i} does not lie on the spherical factor N_{i}.")


def _master(decomposition: WarpedDecomposition, point: WarpedPoint) -> np.ndarray:
    rho = decomposition.geodesic_factor.warping(point.geodesic)
    offsets = np.array(point.spherical) - decomposition.base_point
    return point.geodesic + rho @ offsets


def psi_forward(decomposition: WarpedDecomposition, point: WarpedPoint) -> np.ndarray:
    "Evaluates `psi(p_0, ..., p_k) = p_0 + sum_i rho_i(p_0) (p_i - p)` on a point of the domain."
    _check_domain(decomposition, point)
    return _master(decomposition, point)


def psi_expanded(decomposition: WarpedDecomposition, point: WarpedPoint) -> np.ndarray:
    """
    Evaluates `psi` through its case-specific form: `c + P_0(p_0 - c) + sum <a_i, p_0 - c>(p_i - c_i)` for non-null
    decompositions, the quadratic form in `a` and `b` for null ones, and `phi_1(phi_2(p_0, ...), ...)` for composed
    ones. No domain check.
    """
    if decomposition.parts is not None:
        outer, inner_part = decomposition.parts
        p0 = point.geodesic
        outer_points = point.spherical[: outer.k]
        inner_points = point.spherical[outer.k :]
        p0_outer = psi_expanded(inner_part, WarpedPoint((p0,) + tuple(inner_points)))
        return psi_expanded(outer, WarpedPoint((p0_outer,) + tuple(outer_points)))

    space = decomposition.space
    c = decomposition.center
    r0 = point.geodesic - c
    w0 = decomposition.w_subspaces[0]
    if decomposition.case == CaseTag.NULL:
        a, b = decomposition.a_vectors[0], decomposition.b_vector
        x = project(decomposition.w_subspaces[1], point.spherical[0] - decomposition.base_point)
        s = inner(space, a, r0)
        return (
            c
            + project(w0, r0)
            + (inner(space, b, r0) - 0.5 * s * inner(space, x, x)) * a
            + s * b
            + s * x
        )
    result = c + project(w0, r0)
    for a_i, c_i, p_i in zip(decomposition.a_vectors, decomposition.factor_centers, point.spherical):
        result = result + inner(space, a_i, r0) * (p_i - c_i)
    return result


def _check_flat_image(decomposition: WarpedDecomposition, q: np.ndarray):
    space = decomposition.space
    if decomposition.parts is not None:
        outer, inner_part = decomposition.parts
        _check_flat_image(outer, q)
        _check_flat_image(inner_part, _invert(outer, q, guard=False).geodesic)
        return
    r = q - decomposition.center
    if not decomposition.data.carrier.contains(r):
        raise OutOfImageError(CARRIER_CONDITION, "q - c does not lie in the decomposed subspace")
    if decomposition.case == CaseTag.NULL:
        s = inner(space, decomposition.a_vectors[0], r)
        if s <= 0:
            raise OutOfImageError(NULL_CONDITION, f"<a, q - c> = {s}")
        return
    for i, (w_i, eps_i, sphere) in enumerate(
        zip(decomposition.w_subspaces[1:], decomposition.signs, decomposition.spherical_factors), start=1
    ):
        y = project(w_i, r)
        norm_squared = inner(space, y, y)
        if np.sign(norm_squared) != eps_i or norm_squared == 0:
            raise OutOfImageError(SGN_CONDITION, f"sgn <P_{i}(q - c), P_{i}(q - c)> must be {eps_i:+d}")
        if sphere.connected_component_restriction and inner(space, sphere.a, y) <= 0:
            raise OutOfImageError(CONNECTEDNESS_CONDITION, f"<a_{i}, P_{i}(q - c)> must be positive")


def _check_image(decomposition: WarpedDecomposition, q: np.ndarray):
    _check_flat_image(decomposition, q)
    if decomposition.kappa == 0.0:
        return
    space = decomposition.space
    scale = euclidean_scale(q) ** 2
    if abs(inner(space, q, q) - 1.0 / decomposition.kappa) > MEMBERSHIP_TOLERANCE * scale:
        raise OutOfImageError(QUADRIC_CONDITION, f"<q, q> must equal 1/kappa = {1.0 / decomposition.kappa}")
    quadric = decomposition.geodesic_factor.quadric
    if quadric.connected_component_restriction:
        q0 = _invert(decomposition, q, guard=False).geodesic
        if inner(space, quadric.a, q0) <= 0:
            raise OutOfImageError(CONNECTEDNESS_CONDITION, "the geodesic component is on the far sheet")


def image_contains(decomposition: WarpedDecomposition, q) -> bool:
    "Whether `q` lies in `Im(psi)`."
    try:
        _check_image(decomposition, decomposition.space.vector(q))
    except OutOfImageError:
        return False
    return True


def image_description(decomposition: WarpedDecomposition) -> List[str]:
    "Human readable list of the predicates that define `Im(psi)`."
    if decomposition.parts is not None:
        outer, inner_part = decomposition.parts
        lines = image_description(outer) + [f"inner: {line}" for line in image_description(inner_part)]
    elif decomposition.case == CaseTag.NULL:
        lines = ["<a, q - c> > 0"]
    else:
        lines = []
        for i, (eps_i, sphere) in enumerate(zip(decomposition.signs, decomposition.spherical_factors), start=1):
            lines.append(f"sgn <P_{i}(q - c), P_{i}(q - c)> = {eps_i:+d}")
            if sphere.connected_component_restriction:
                lines.append(f"<a_{i}, P_{i}(q - c)> > 0")
    if decomposition.kappa != 0.0:
        lines.append(f"<q, q> = {1.0 / decomposition.kappa!r}")
        if decomposition.geodesic_factor.quadric.connected_component_restriction:
            lines.append("<kappa p, q_0> > 0 on the geodesic component")
    return lines


def _invert(decomposition: WarpedDecomposition, q: np.ndarray, guard: bool = True) -> WarpedPoint:
    space = decomposition.space
    if decomposition.parts is not None:
        outer, inner_part = decomposition.parts
        outer_point = _invert(outer, q, guard)
        inner_point = _invert(inner_part, outer_point.geodesic, guard)
        return WarpedPoint((inner_point.geodesic,) + outer_point.spherical + inner_point.spherical)

    c, p = decomposition.center, decomposition.base_point
    r = q - c
    w0 = decomposition.w_subspaces[0]
    scale = euclidean_scale(q, c)
    if decomposition.case == CaseTag.NULL:
        a, b = decomposition.a_vectors[0], decomposition.b_vector
        x = project(decomposition.w_subspaces[1], r)
        s = inner(space, a, r)
        if guard and s < INVERSE_BOUNDARY_MARGIN:
            raise OutOfImageError(BOUNDARY_REFUSAL, f"<a, q - c> = {s} is too close to 0")
        x2 = inner(space, x, x)
        q0 = c + project(w0, r) + (inner(space, b, r) + x2 / (2 * s)) * a + s * b
        q1 = p + x / s - x2 / (2 * s**2) * a
        return WarpedPoint((q0, q1))

    q0 = c + project(w0, r)
    spherical = []
    for i, (a_i, c_i, w_i, eps_i, kappa_i) in enumerate(
        zip(
            decomposition.a_vectors,
            decomposition.factor_centers,
            decomposition.w_subspaces[1:],
            decomposition.signs,
            decomposition.curvatures,
        ),
        start=1,
    ):
        y = project(w_i, r)
        norm = np.sqrt(abs(inner(space, y, y)))
        if guard and norm < INVERSE_BOUNDARY_MARGIN * scale:
            raise OutOfImageError(BOUNDARY_REFUSAL, f"|P_{i}(q - c)| = {norm} is too close to 0")
        root = np.sqrt(abs(kappa_i))
        q0 = q0 + eps_i / root * norm * a_i
        spherical.append(c_i + y / (root * norm))
    return WarpedPoint((q0,) + tuple(spherical))


def psi_inverse(decomposition: WarpedDecomposition, q) -> WarpedPoint:
    """
    Returns the unique point of the domain mapped to `q`.

    Raises:
        [`OutOfImageError`]: when `q` is not in `Im(psi)`, or so close to its boundary that the inverse is
        ill-conditioned. The error's `predicate` names the violated condition.
    """
    q = decomposition.space.vector(q)
    _check_image(decomposition, q)
    return _invert(decomposition, q)


def _check_tangent(decomposition: WarpedDecomposition, point: WarpedPoint, tangent: Sequence[np.ndarray]):
    if len(tangent) != decomposition.k + 1:
        raise ValueError(f"Expected {decomposition.k + 1} tangent components, got {len(tangent)}.")
    tol = MEMBERSHIP_TOLERANCE * euclidean_scale(*point.components)
    if not decomposition.geodesic_factor.tangent_space(point.geodesic).contains(tangent[0], tol):
        raise ValueError("Tangent component 0 is not tangent to the geodesic factor.")
    for i, (sphere, p_i, v_i) in enumerate(zip(decomposition.spherical_factors, point.spherical, tangent[1:]), 1):
        if not spheres.is_tangent(sphere, p_i, v_i):
            raise ValueError(f"Tangent component {i} is not tangent to N_{i}.")


def psi_pushforward(decomposition: WarpedDecomposition, point: WarpedPoint, tangent) -> np.ndarray:
    """
    The differential of `psi` at `point` applied to `(v_0, ..., v_k)`:
    `v_0 + sum_i <a_i, v_0> (p_i - p) + sum_i rho_i(p_0) v_i`.
    """
    space = decomposition.space
    tangent = [space.vector(v) for v in tangent]
    _check_domain(decomposition, point)
    _check_tangent(decomposition, point, tangent)
    rho = decomposition.geodesic_factor.warping(point.geodesic)
    v0 = tangent[0]
    result = v0.copy()
    for a_i, rho_i, p_i, v_i in zip(decomposition.a_vectors, rho, point.spherical, tangent[1:]):
        result = result + inner(space, a_i, v0) * (p_i - decomposition.base_point) + rho_i * v_i
    return result


def psi_pushforward_expanded(decomposition: WarpedDecomposition, point: WarpedPoint, tangent) -> np.ndarray:
    "The differential of the case-specific form of `psi` (see [`psi_expanded`]). No domain or tangency checks."
    space = decomposition.space
    tangent = [np.asarray(v, dtype=float) for v in tangent]
    if decomposition.parts is not None:
        outer, inner_part = decomposition.parts
        inner_point = WarpedPoint((point.geodesic,) + point.spherical[outer.k :])
        v0_outer = psi_pushforward_expanded(inner_part, inner_point, [tangent[0]] + tangent[1 + outer.k :])
        outer_point = WarpedPoint((psi_expanded(inner_part, inner_point),) + point.spherical[: outer.k])
        return psi_pushforward_expanded(outer, outer_point, [v0_outer] + tangent[1 : 1 + outer.k])

    c = decomposition.center
    v0 = tangent[0]
    r0 = point.geodesic - c
    w0 = decomposition.w_subspaces[0]
    if decomposition.case == CaseTag.NULL:
        a, b = decomposition.a_vectors[0], decomposition.b_vector
        w1 = decomposition.w_subspaces[1]
        x = project(w1, point.spherical[0] - decomposition.base_point)
        dx = project(w1, tangent[1])
        s, ds = inner(space, a, r0), inner(space, a, v0)
        return (
            project(w0, v0)
            + (inner(space, b, v0) - 0.5 * ds * inner(space, x, x) - s * inner(space, x, dx)) * a
            + ds * b
            + ds * x
            + s * dx
        )
    result = project(w0, v0)
    for a_i, c_i, p_i, v_i in zip(decomposition.a_vectors, decomposition.factor_centers, point.spherical, tangent[1:]):
        result = result + inner(space, a_i, v0) * (p_i - c_i) + inner(space, a_i, r0) * v_i
    return result


def warped_norm_squared(decomposition: WarpedDecomposition, point: WarpedPoint, tangent) -> float:
    "`v_0^2 + sum_i rho_i(p_0)^2 v_i^2`, the squared length of a tangent vector in the warped product metric."
    space = decomposition.space
    rho = decomposition.geodesic_factor.warping(point.geodesic)
    warped = sum(r**2 * inner(space, v, v) for r, v in zip(rho, tangent[1:]))
    return float(inner(space, tangent[0], tangent[0]) + warped)


def translate(decomposition: WarpedDecomposition, shift) -> WarpedDecomposition:
    "The decomposition with base point `p - shift`; its map is `psi - shift` on the translated factors."
    shift = decomposition.space.vector(shift)
    if decomposition.kappa != 0.0:
        if np.any(shift != 0):
            raise ValueError("A decomposition of a hyperquadric cannot be translated.")
        return decomposition
    if decomposition.parts is not None:
        outer, inner_part = decomposition.parts
        return compose(translate(outer, shift), translate(inner_part, shift))
    return build(replace(decomposition.data, base_point=decomposition.base_point - shift))


def canonicalize(decomposition: WarpedDecomposition) -> WarpedDecomposition:
    """
    Brings the decomposition into canonical form (`p in V_0`, `<p, a_i> = 1`) by the translation `psi -> psi - c`.
    A decomposition that is already canonical is returned as is.
    """
    if decomposition.canonical:
        return decomposition
    canonical = translate(decomposition, decomposition.center)
    logger.debug(f"Canonicalized decomposition by translating by {decomposition.center}")
    return canonical


def compose(outer: WarpedDecomposition, inner_part: WarpedDecomposition) -> WarpedDecomposition:
    """
    Multiply warped product `psi(p_0, p_outer, p_inner) = phi_1(phi_2(p_0, p_inner), p_outer)` where `inner_part`
    decomposes the geodesic carrier `V_0` of `outer`.

    The two decompositions must share their base point, and `V_0 ∩ W_0^perp` of `outer` must lie in the translation
    part `W~_0` of `inner_part`; then every warping function of `outer` is unchanged by `phi_2`.
    """
    space = outer.space
    if outer.is_restricted or inner_part.is_restricted:
        raise ValueError("Compose flat decompositions, then restrict the result.")
    if inner_part.space != space:
        raise InitialDataError("Both decompositions must live in the same space.")
    if not np.allclose(outer.base_point, inner_part.base_point, rtol=0, atol=MEMBERSHIP_TOLERANCE):
        raise InitialDataError("Both decompositions must share their base point.")
    outer_geodesic = outer.geodesic_factor.carrier
    if not outer_geodesic.same_as(inner_part.data.carrier):
        raise InitialDataError("The inner decomposition must decompose the geodesic carrier V_0 of the outer one.")
    inner_w0 = inner_part.w_subspaces[0]
    for i, direction in enumerate(outer.warp_directions):
        if not inner_w0.contains(direction):
            raise InitialDataError(
                f"Compatibility violated: warp direction {i} of the outer decomposition "
                "is not in W_0 of the inner one."
            )

    data = InitialData(
        space=space,
        base_point=outer.base_point,
        factors=(inner_part.data.factors[0],) + outer.data.factors[1:] + inner_part.data.factors[1:],
        a_vectors=np.vstack([outer.a_vectors, inner_part.a_vectors]),
        carrier=outer.data.carrier,
        connected=outer.data.connected,
        composed=True,
    )
    both_non_null = outer.case == inner_part.case == CaseTag.NON_NULL
    w0 = orthogonal_complement(Subspace.span(space, outer.warp_directions), within=inner_w0)
    offset = outer.offset + inner_part.offset
    logger.debug(f"Composed a {outer.k}-factor and a {inner_part.k}-factor decomposition")
    return WarpedDecomposition(
        data=data,
        case=CaseTag.NON_NULL if both_non_null else CaseTag.MIXED,
        geodesic_factor=GeodesicFactor(space, data.base_point, data.factors[0], data.a_vectors),
        spherical_factors=outer.spherical_factors + inner_part.spherical_factors,
        center=data.base_point - offset,
        factor_centers=outer.factor_centers + inner_part.factor_centers,
        b_vector=None,
        w_subspaces=(w0,) + outer.w_subspaces[1:] + inner_part.w_subspaces[1:],
        parts=(outer, inner_part),
    )


def restrict_to_quadric(decomposition: WarpedDecomposition, connected: bool = True) -> WarpedDecomposition:
    """
    Restricts a canonical decomposition to the hyperquadric `E^n_nu(kappa)` through its base point, `kappa = 1/p^2`.
    Every leaf `psi(p_0, ..., p_k)` with `p_0^2 = 1/kappa` lies on the hyperquadric.

    Args:
        decomposition ([`WarpedDecomposition`]):
            A canonical decomposition of the flat space.
        connected (`bool`, *optional*, defaults to `True`):
            When `N_0(kappa)` is disconnected, keep only its component through the base point (the cut
            `<kappa p, p_0> > 0`).
    """
    space = decomposition.space
    p = decomposition.base_point
    if decomposition.is_restricted:
        raise ValueError("The decomposition is already restricted to a hyperquadric.")
    if not decomposition.canonical:
        raise ValueError("Only canonical decompositions can be restricted; call `canonicalize` first.")
    if classify(space, p) in (CausalClass.ZERO, CausalClass.LIGHTLIKE):
        raise ValueError("The base point is null: the curvature 1/<p, p> of the hyperquadric is undefined.")
    kappa = 1.0 / float(inner(space, p, p))
    geodesic = decomposition.geodesic_factor
    if geodesic.carrier.dim < 2:
        raise ValueError("The geodesic carrier V_0 needs dimension at least 2 to meet the hyperquadric.")
    tangent = orthogonal_complement(Subspace.span(space, [p]), within=geodesic.carrier)
    quadric = classify_sphere(SphereInitialData(space, p, tangent, kappa * p, kappa=kappa), connected=connected)
    spherical = tuple(
        classify_sphere(
            SphereInitialData(space, p, sphere.tangent, sphere.a, kappa=kappa),
            connected=sphere.connected_component_restriction,
        )
        for sphere in decomposition.spherical_factors
    )
    logger.debug(f"Restricting to curvature {kappa}; geodesic factor disconnected: {quadric.disconnected}")
    return replace(
        decomposition,
        geodesic_factor=replace(geodesic, kappa=kappa, quadric=quadric),
        spherical_factors=spherical,
        kappa=kappa,
    )


def image_cut(decomposition: WarpedDecomposition) -> Optional[np.ndarray]:
    """
    For a Lorentzian decomposition of a hyperquadric whose a-vectors are all spacelike, the center `c` is timelike and
    the connected image is cut out by `<kappa c, q> > 0`; returns `kappa c` then, `None` otherwise.
    """
    if not decomposition.is_restricted or decomposition.space.index != 1:
        return None
    if not decomposition.geodesic_factor.quadric.connected_component_restriction:
        return None
    if decomposition.case != CaseTag.NON_NULL or np.any(decomposition.signs < 0):
        return None
    return decomposition.kappa * decomposition.center


def leaf_mean_curvature(decomposition: WarpedDecomposition, point: WarpedPoint, i: int) -> np.ndarray:
    """
    Mean curvature normal, in the flat space, of the leaf `{psi(p_0, ..., x, ..., p_k) : x in N_i}` through
    `psi(point)` (`i` counts spherical factors from 1). On leaves through `(p_0, p, ..., p)` it is `-a_i / rho_i`.
    """
    if not 1 <= i <= decomposition.k:
        raise ValueError(f"Spherical factors are numbered 1 to {decomposition.k}, got {i}.")
    rho = decomposition.geodesic_factor.warping(point.geodesic)[i - 1]
    sphere = decomposition.spherical_factors[i - 1]
    if sphere.kind == SphereKind.PARABOLOID:
        return -sphere.a / rho
    return -sphere.curvature * (point[i] - sphere.center) / rho


@dataclass
class WarpedProductType:
    family: WarpFamily
    descriptor: str

    def to_dict(self) -> Dict[str, str]:
        return {"family": self.family.value, "descriptor": self.descriptor}


_WARP_LETTERS = {CausalClass.SPACELIKE: "rho", CausalClass.TIMELIKE: "tau", CausalClass.LIGHTLIKE: "lambda"}


def _factor_symbol(sphere: SphericalSubmanifold, named: bool) -> str:
    if named and sphere.kind == SphereKind.PARABOLOID and sphere.index == 0:
        return f"E^{sphere.dim}"
    if named and sphere.kind == SphereKind.PSEUDO_SPHERE and sphere.index in (0, 1):
        return f"{'S' if sphere.index == 0 else 'dS'}^{sphere.dim}"
    if named and sphere.kind == SphereKind.PSEUDO_HYPERBOLIC and sphere.index == 0:
        return f"H^{sphere.dim}"
    return f"{sphere.kind.value}^{sphere.dim}_{sphere.index}"


def _geodesic_symbol(decomposition: WarpedDecomposition, named: bool) -> str:
    geodesic = decomposition.geodesic_factor
    m, mu = geodesic.dim, geodesic.index
    if not named:
        return f"N0^{m}_{mu}"
    if geodesic.quadric is None:
        return f"{'E' if mu == 0 else 'M'}^{m}"
    if geodesic.quadric.kind == SphereKind.PSEUDO_HYPERBOLIC:
        return f"H^{m}"
    return f"{'S' if mu == 0 else 'dS'}^{m}"


def enumerate_type(decomposition: WarpedDecomposition) -> WarpedProductType:
    """
    Names the isometry type of the warped product from the causal classes of the a-vectors and the signatures of the
    factors. Euclidean and Minkowski spaces and their round spheres, de Sitter and hyperbolic spaces get the named
    families; any other signature gets [`~utils.WarpFamily.GENERIC`] with a signature descriptor.
    """
    space = decomposition.space
    nu, kappa = space.index, decomposition.kappa
    classes = decomposition.data.causal_classes
    lightlike = CausalClass.LIGHTLIKE in classes
    timelike = CausalClass.TIMELIKE in classes
    riemannian_base = decomposition.geodesic_factor.index == 0
    if kappa == 0.0 and nu == 0:
        family = WarpFamily.EUCLIDEAN
    elif kappa == 0.0 and nu == 1:
        if lightlike:
            family = WarpFamily.MINKOWSKI_LIGHTLIKE
        elif timelike:
            family = WarpFamily.MINKOWSKI_TIMELIKE
        else:
            family = WarpFamily.MINKOWSKI_DE_SITTER if riemannian_base else WarpFamily.MINKOWSKI_SPACELIKE
    elif kappa > 0 and nu == 0:
        family = WarpFamily.SPHERE
    elif kappa > 0 and nu == 1:
        if lightlike:
            family = WarpFamily.DE_SITTER_LIGHTLIKE
        elif timelike:
            family = WarpFamily.DE_SITTER_TIMELIKE
        else:
            family = WarpFamily.DE_SITTER_SPHERICAL if riemannian_base else WarpFamily.DE_SITTER_SPACELIKE
    elif kappa < 0 and nu == 1:
        if lightlike:
            family = WarpFamily.HYPERBOLIC_LIGHTLIKE
        elif timelike:
            family = WarpFamily.HYPERBOLIC_TIMELIKE
        else:
            family = WarpFamily.HYPERBOLIC_SPACELIKE
    else:
        family = WarpFamily.GENERIC

    named = family != WarpFamily.GENERIC
    terms = [_geodesic_symbol(decomposition, named)]
    for causal_class, sphere in zip(classes, decomposition.spherical_factors):
        terms.append(f"x_{_WARP_LETTERS[causal_class]} {_factor_symbol(sphere, named)}")
    return WarpedProductType(family, " ".join(terms))


@dataclass
class ProductObstructionReport:
    """
    Whether every warping function of a decomposition of a hyperquadric is non-constant, which rules out a
    (non-warped) product decomposition. `vacuous` is set for flat decompositions, where the check does not apply.
    """

    holds: bool
    vacuous: bool
    samples: int
    min_gradient_norm: float = field(default=float("nan"))


def check_no_product_decomposition(
    decomposition: WarpedDecomposition, samples: int = 32, seed: int = 0, threshold: float = 1e-6
) -> ProductObstructionReport:
    "Samples `N_0(kappa)` and checks that the gradient of every `rho_i` stays away from zero."
    if not decomposition.is_restricted:
        return ProductObstructionReport(holds=True, vacuous=True, samples=0)
    rng = make_generator(seed)
    kappa = decomposition.kappa
    min_norm = np.inf
    for _ in range(samples):
        p0 = sample_geodesic_point(decomposition, rng)
        rho = decomposition.geodesic_factor.warping(p0)
        # gradient of <a_i, .> along the hyperquadric: a_i minus its component along p_0
        gradients = decomposition.a_vectors - kappa * rho[:, None] * p0
        min_norm = min(min_norm, float(np.min(np.linalg.norm(gradients, axis=1))))
    return ProductObstructionReport(
        holds=bool(min_norm > threshold), vacuous=False, samples=samples, min_gradient_norm=min_norm
    )


def sample_geodesic_point(decomposition: WarpedDecomposition, rng: np.random.Generator) -> np.ndarray:
    """
    Rejection sampling of `N_0`: a box of half-width 3 in orthonormal `V_0` coordinates around the base point, or a
    ball of normal coordinates on `N_0(kappa)`. Points whose warping functions fall below a small margin are rejected.
    """
    geodesic = decomposition.geodesic_factor
    if geodesic.quadric is None:
        frame, _ = orthonormal_basis(geodesic.carrier)
    for _ in range(SAMPLING_MAX_TRIES):
        if geodesic.quadric is None:
            p0 = geodesic.base_point + rng.uniform(-SAMPLING_BOX, SAMPLING_BOX, size=len(frame)) @ frame
        else:
            p0 = _sample_on_sphere(geodesic.quadric, rng)
        if geodesic.contains(p0) and np.all(geodesic.warping(p0) > SAMPLING_MIN_WARP):
            return p0
    raise RuntimeError(f"Could not sample the geodesic factor in {SAMPLING_MAX_TRIES} tries.")


def _sample_on_sphere(sphere: SphericalSubmanifold, rng: np.random.Generator) -> np.ndarray:
    if sphere.is_quadric:
        # keeps the normal chart angle below 1.5 < pi
        half_width = 1.5 / np.sqrt(abs(sphere.curvature) * sphere.dim)
    else:
        half_width = 1.0
    return spheres.parametrize(sphere, rng.uniform(-half_width, half_width, size=sphere.dim))


def sample_domain(decomposition: WarpedDecomposition, rng: np.random.Generator, count: int) -> List[WarpedPoint]:
    "Draws `count` points of the domain `N_0 x N_1 x ... x N_k`."
    points = []
    for _ in range(count):
        p0 = sample_geodesic_point(decomposition, rng)
        spherical = tuple(_sample_on_sphere(sphere, rng) for sphere in decomposition.spherical_factors)
        points.append(WarpedPoint((p0,) + spherical))
    return points


def sample_tangent(
    decomposition: WarpedDecomposition, point: WarpedPoint, rng: np.random.Generator
) -> List[np.ndarray]:
    "A random tangent vector `(v_0, ..., v_k)` at `point`, with standard normal coefficients in tangent bases."
    subspaces = [decomposition.geodesic_factor.tangent_space(point.geodesic)] + [
        spheres.tangent_space(sphere, p_i) for sphere, p_i in zip(decomposition.spherical_factors, point.spherical)
    ]
    return [rng.normal(size=s.dim) @ s.basis if s.dim else np.zeros(decomposition.space.dim) for s in subspaces]


def decomposition_summary(decomposition: WarpedDecomposition) -> dict:
    "Plain dictionary describing the decomposition, as written by `pseudowarp build`."
    geodesic = decomposition.geodesic_factor
    return {
        "case_tag": decomposition.case,
        "canonical": decomposition.canonical,
        "kappa": decomposition.kappa,
        "space": {"dim": decomposition.space.dim, "index": decomposition.space.index},
        "base_point": decomposition.base_point,
        "center": decomposition.center,
        "a_vectors": decomposition.a_vectors,
        "a_classes": decomposition.data.causal_classes,
        "b_vector": decomposition.b_vector,
        "geodesic_factor": {"dim": geodesic.dim, "index": geodesic.index},
        "spherical_factors": [sphere.summary() for sphere in decomposition.spherical_factors],
        "image": image_description(decomposition),
        "type": enumerate_type(decomposition).to_dict(),
    }
