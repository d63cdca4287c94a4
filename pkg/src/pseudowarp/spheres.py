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
Spherical submanifolds (extrinsic spheres) of `E^n_nu` and of its central hyperquadrics `E^n_nu(kappa)`.

A spherical submanifold through `base_point` is fixed by its tangent space `V` there and by the vector `a`, which is
minus its mean curvature normal at the base point as a submanifold of the flat space. The causal class of `a`
decides the kind: plane (`a = 0`), central quadric (`a` spacelike or timelike) or paraboloid (`a` lightlike).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .logging import get_logger
from .pseudo_linear import (
    DegenerateSubspaceError,
    Space,
    Subspace,
    classify,
    euclidean_scale,
    inner,
    orthogonal_complement,
    orthonormal_basis,
    project,
)
from .utils.constants import CLASSIFICATION_TOLERANCE, MEMBERSHIP_TOLERANCE
from .utils.dataclasses import CausalClass, SphereKind


logger = get_logger(__name__)


class UnsupportedGeodesicError(ValueError):
    "Raised for null tangent vectors of a central quadric, which the closed-form geodesic does not cover."


@dataclass(frozen=True, eq=False)
class SphereInitialData:
    """
    Initial data `(p, V, a)` of a spherical submanifold.

    Args:
        space ([`Space`]):
            The ambient flat space `E^n_nu`.
        base_point (`np.ndarray`):
            The point `p` the submanifold passes through.
        tangent ([`Subspace`]):
            Its tangent space `V` at `p`; non-degenerate, of dimension at least 1.
        a (`np.ndarray`):
            A vector orthogonal to `V`.
        kappa (`float`, *optional*, defaults to 0.0):
            When non-zero, the submanifold lives in the hyperquadric `E^n_nu(kappa)`: `p^2 = 1/kappa`, `V` is orthogonal
            to `p` and `<a, p> = 1`, so that `z = kappa p - a` is tangent to the hyperquadric.
    """

    space: Space
    base_point: np.ndarray
    tangent: Subspace
    a: np.ndarray
    kappa: float = 0.0

    def __post_init__(self):
        space = self.space
        object.__setattr__(self, "base_point", space.vector(self.base_point))
        object.__setattr__(self, "a", space.vector(self.a))
        object.__setattr__(self, "kappa", float(self.kappa))
        if self.tangent.space != space:
            raise ValueError(f"The tangent space lives in {self.tangent.space}, not in {space}.")
        if self.tangent.dim < 1:
            raise ValueError("A spherical submanifold needs a tangent space of dimension at least 1.")
        if self.tangent.degenerate:
            raise DegenerateSubspaceError("The tangent space of a spherical submanifold must be non-degenerate.")
        scale = euclidean_scale(self.a, self.base_point)
        for i, v in enumerate(self.tangent.basis):
            if abs(inner(space, self.a, v)) > MEMBERSHIP_TOLERANCE * scale * euclidean_scale(v):
                raise ValueError(f"`a` is not orthogonal to basis vector {i} of the tangent space.")
        if self.kappa != 0.0:
            p = self.base_point
            if abs(inner(space, p, p) - 1.0 / self.kappa) > MEMBERSHIP_TOLERANCE * scale**2:
                raise ValueError(f"The base point does not lie on the hyperquadric of curvature {self.kappa}.")
            if any(abs(inner(space, p, v)) > MEMBERSHIP_TOLERANCE * scale * euclidean_scale(v) for v in self.tangent.basis):
                raise ValueError("The tangent space is not tangent to the hyperquadric at the base point.")
            if abs(inner(space, self.a, p) - 1.0) > MEMBERSHIP_TOLERANCE * scale**2:
                raise ValueError("The mean curvature is not tangent to the hyperquadric: <a, p> must equal 1.")

    @classmethod
    def from_mean_curvature(cls, space: Space, base_point, tangent: Subspace, z, kappa: float = 0.0):
        """
        Builds the initial data from the mean curvature normal `z` at the base point, relative to `E^n_nu(kappa)`
        (the flat space when `kappa == 0`). Then `a = kappa p - z`.
        """
        base_point = space.vector(base_point)
        return cls(space, base_point, tangent, float(kappa) * base_point - space.vector(z), kappa)

    @property
    def mean_curvature(self) -> np.ndarray:
        return self.kappa * self.base_point - self.a


@dataclass(frozen=True, eq=False)
class SphericalSubmanifold:
    """
    A classified spherical submanifold.

    For quadrics, the submanifold is `center + {x in carrier : x^2 = 1/curvature}`; for paraboloids it is
    `base_point + {v - v^2/2 a : v in tangent}`; a plane is `base_point + tangent`. When `connected_component_restriction`
    is set, only the half-space `<a, p - center> > 0` is kept.
    """

    kind: SphereKind
    space: Space
    base_point: np.ndarray
    tangent: Subspace
    carrier: Subspace
    a: np.ndarray
    curvature: float
    center: Optional[np.ndarray]
    mean_curvature_at_base: np.ndarray
    dim: int
    index: int
    ambient_kappa: float = 0.0
    disconnected: bool = False
    connected_component_restriction: bool = False

    @property
    def signature(self) -> Tuple[int, int]:
        return self.dim, self.index

    @property
    def is_quadric(self) -> bool:
        return self.kind in (SphereKind.PSEUDO_SPHERE, SphereKind.PSEUDO_HYPERBOLIC)

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "index": self.index,
            "curvature": self.curvature,
            "center": self.center,
            "base_point": self.base_point,
            "mean_curvature_at_base": self.mean_curvature_at_base,
            "disconnected": self.disconnected,
            "connected_component_restriction": self.connected_component_restriction,
        }


def classify_sphere(data: SphereInitialData, connected: bool = True) -> SphericalSubmanifold:
    """
    Classifies the spherical submanifold determined by `data` and computes its center, carrier and curvature.

    Args:
        data ([`SphereInitialData`]):
            The initial data.
        connected (`bool`, *optional*, defaults to `True`):
            Whether to keep only the component through the base point when the submanifold is disconnected
            (anti-isometric to a round sphere: index 0 with negative curvature, or index `m` with positive
            curvature).
    """
    space, p, a = data.space, data.base_point, data.a
    causal_class = classify(space, a)
    center = None
    curvature = 0.0
    if causal_class == CausalClass.ZERO:
        kind = SphereKind.PLANE
        carrier = data.tangent
    else:
        carrier = Subspace.span(space, np.vstack([a, data.tangent.basis]))
        if causal_class == CausalClass.LIGHTLIKE:
            kind = SphereKind.PARABOLOID
        else:
            curvature = float(inner(space, a, a))
            center = p - a / curvature
            kind = SphereKind.PSEUDO_SPHERE if curvature > 0 else SphereKind.PSEUDO_HYPERBOLIC

    m, mu = data.tangent.dim, data.tangent.index
    disconnected = center is not None and ((mu == 0 and curvature < 0) or (mu == m and curvature > 0))
    logger.debug(f"Classified sphere through {p}: {kind.value} of signature ({m}, {mu}), curvature {curvature}")
    return SphericalSubmanifold(
        kind=kind,
        space=space,
        base_point=p,
        tangent=data.tangent,
        carrier=carrier,
        a=a,
        curvature=curvature,
        center=center,
        mean_curvature_at_base=data.mean_curvature,
        dim=m,
        index=mu,
        ambient_kappa=data.kappa,
        disconnected=disconnected,
        connected_component_restriction=disconnected and connected,
    )


def contains(sphere: SphericalSubmanifold, p, tol: float = MEMBERSHIP_TOLERANCE) -> bool:
    "Membership test, honoring the connected component restriction."
    space = sphere.space
    p = np.asarray(p, dtype=float)
    scale = euclidean_scale(p, sphere.base_point)
    if sphere.kind == SphereKind.PLANE:
        d = p - sphere.base_point
        return bool(np.linalg.norm(d - project(sphere.tangent, d)) <= tol * scale)
    if sphere.kind == SphereKind.PARABOLOID:
        x = project(sphere.tangent, p - sphere.base_point)
        reconstructed = sphere.base_point + x - 0.5 * inner(space, x, x) * sphere.a
        return bool(np.linalg.norm(p - reconstructed) <= tol * scale)
    r = p - sphere.center
    if np.linalg.norm(r - project(sphere.carrier, r)) > tol * scale:
        return False
    if abs(inner(space, r, r) - 1.0 / sphere.curvature) > tol * scale**2:
        return False
    return not sphere.connected_component_restriction or inner(space, sphere.a, r) > 0


def _check_on(sphere: SphericalSubmanifold, p):
    if not contains(sphere, p):
        raise ValueError(f"The point {p} does not lie on the {sphere.kind.value}.")


def tangent_space(sphere: SphericalSubmanifold, p) -> Subspace:
    "The tangent space of `sphere` at a point `p` on it."
    space = sphere.space
    p = space.vector(p)
    if sphere.kind == SphereKind.PLANE:
        return sphere.tangent
    if sphere.kind == SphereKind.PARABOLOID:
        x = project(sphere.tangent, p - sphere.base_point)
        w = sphere.tangent.basis
        return Subspace.span(space, w - np.outer(inner(space, w, x), sphere.a))
    return orthogonal_complement(Subspace.span(space, [p - sphere.center]), within=sphere.carrier)


def is_tangent(sphere: SphericalSubmanifold, p, v, tol: float = MEMBERSHIP_TOLERANCE) -> bool:
    v = np.asarray(v, dtype=float)
    return tangent_space(sphere, p).contains(v, tol * euclidean_scale(p))


def _quadric_point(sphere: SphericalSubmanifold, r, v, t):
    "Point at time `t` of the geodesic through `center + r` with velocity `v`; `v` must not be null."
    t = np.asarray(t, dtype=float)[..., None]
    lam = sphere.curvature * inner(sphere.space, v, v)
    omega = np.sqrt(abs(lam))
    if lam > 0:
        return sphere.center + np.cos(omega * t) * r + np.sin(omega * t) / omega * v
    return sphere.center + np.cosh(omega * t) * r + np.sinh(omega * t) / omega * v


def parametrize(sphere: SphericalSubmanifold, u) -> np.ndarray:
    """
    Evaluates the chart of `sphere` at `u` (one coordinate per tangent direction, `u = 0` at the base point).

    Planes and paraboloids use the global graph chart over the tangent basis. Quadrics use normal coordinates
    around the base point: `u` gives a tangent vector in an orthonormal frame of `V` and the chart follows the
    geodesic with that initial velocity for unit time. Along spacelike directions of a sphere (or timelike ones of a
    pseudo-hyperbolic space) this is the polar chart and only angles below pi are inside the domain.
    """
    space = sphere.space
    u = np.asarray(u, dtype=float)
    if u.shape != (sphere.dim,):
        raise ValueError(f"Expected {sphere.dim} chart coordinates, got shape {u.shape}.")
    if not np.all(np.isfinite(u)):
        raise ValueError("Chart coordinates must be finite.")
    if sphere.kind == SphereKind.PLANE:
        return sphere.base_point + u @ sphere.tangent.basis
    if sphere.kind == SphereKind.PARABOLOID:
        v = u @ sphere.tangent.basis
        return sphere.base_point + v - 0.5 * inner(space, v, v) * sphere.a
    frame, _ = orthonormal_basis(sphere.tangent)
    w = u @ frame
    r = sphere.base_point - sphere.center
    if classify(space, w) in (CausalClass.ZERO, CausalClass.LIGHTLIKE):
        return sphere.base_point + w
    lam = sphere.curvature * inner(space, w, w)
    if lam > 0 and np.sqrt(lam) >= np.pi:
        raise ValueError(f"Chart coordinates {u} are outside the chart domain (angle {np.sqrt(lam)} >= pi).")
    return _quadric_point(sphere, r, w, 1.0)


def mean_curvature(sphere: SphericalSubmanifold, p, flat: bool = False) -> np.ndarray:
    """
    Mean curvature normal of `sphere` at `p`.

    Args:
        sphere ([`SphericalSubmanifold`]):
            The submanifold.
        p (`np.ndarray`):
            A point on it.
        flat (`bool`, *optional*, defaults to `False`):
            For a sphere built inside `E^n_nu(kappa)`, return the mean curvature as a submanifold of the flat space
            instead of as a submanifold of the hyperquadric. The two differ by `kappa p`.
    """
    _check_on(sphere, p)
    p = np.asarray(p, dtype=float)
    if sphere.kind == SphereKind.PLANE:
        normal = np.zeros(sphere.space.dim)
    elif sphere.kind == SphereKind.PARABOLOID:
        normal = -sphere.a
    else:
        r = p - sphere.center
        normal = -r / inner(sphere.space, r, r)
    if not flat and sphere.ambient_kappa != 0.0:
        normal = normal + sphere.ambient_kappa * p
    return normal


def quadric_geodesic(sphere: SphericalSubmanifold, p, v, t, allow_null: bool = False) -> np.ndarray:
    """
    Closed-form geodesic `gamma` of `sphere` with `gamma(0) = p`, `gamma'(0) = v`, evaluated at `t` (a scalar or an
    array of times, in which case one point per row is returned).

    Args:
        sphere ([`SphericalSubmanifold`]):
            The submanifold.
        p (`np.ndarray`):
            Starting point, on `sphere`.
        v (`np.ndarray`):
            Initial velocity, tangent to `sphere` at `p`.
        t (`float` or `np.ndarray`):
            Time(s) to evaluate at.
        allow_null (`bool`, *optional*, defaults to `False`):
            Null geodesics of a quadric are straight lines. They are rejected with [`UnsupportedGeodesicError`]
            unless this is set.
    """
    space = sphere.space
    p, v = np.asarray(p, dtype=float), np.asarray(v, dtype=float)
    _check_on(sphere, p)
    if not is_tangent(sphere, p, v):
        raise ValueError("The initial velocity is not tangent to the submanifold.")
    t_col = np.asarray(t, dtype=float)[..., None]
    if sphere.kind == SphereKind.PLANE:
        return p + t_col * v
    if sphere.kind == SphereKind.PARABOLOID:
        y = project(sphere.tangent, p - sphere.base_point) + t_col * project(sphere.tangent, v)
        return sphere.base_point + y - 0.5 * inner(space, y, y)[..., None] * sphere.a
    if classify(space, v, CLASSIFICATION_TOLERANCE) in (CausalClass.ZERO, CausalClass.LIGHTLIKE):
        if not allow_null:
            raise UnsupportedGeodesicError("Null tangent vectors are not supported by the closed-form geodesic.")
        return p + t_col * v
    return _quadric_point(sphere, p - sphere.center, v, t)
