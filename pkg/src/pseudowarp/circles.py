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
Circles of the flat space `E^n_nu`: curves `gamma` with unit speed `X` and acceleration `Y` solving

    X' = Y,    Y' = -<Y, Y> <X, X> X.

Along a circle `<X, X>`, `<Y, Y>` and `<X, Y>` are constant.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import spheres
from .pseudo_linear import Space, classify, euclidean_scale, inner
from .spheres import SphericalSubmanifold
from .utils.constants import CLASSIFICATION_TOLERANCE, RESIDUAL_FD_STEP, RK4_STEP
from .utils.dataclasses import CausalClass, CheckRecord, CircleClass, SphereKind


@dataclass(frozen=True, eq=False)
class CircleState:
    """
    Initial state of a circle.

    Args:
        space ([`~pseudo_linear.Space`]):
            The flat ambient space.
        p (`np.ndarray`):
            Position at `t = 0`.
        X (`np.ndarray`):
            Unit velocity, `<X, X> = +-1`.
        Y (`np.ndarray`):
            Acceleration, orthogonal to `X`.
    """

    space: Space
    p: np.ndarray
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        for name in ("p", "X", "Y"):
            object.__setattr__(self, name, self.space.vector(getattr(self, name)))
        if abs(abs(inner(self.space, self.X, self.X)) - 1.0) > CLASSIFICATION_TOLERANCE:
            raise ValueError(f"The velocity must have unit length, got <X, X> = {inner(self.space, self.X, self.X)}.")
        if abs(inner(self.space, self.X, self.Y)) > CLASSIFICATION_TOLERANCE * euclidean_scale(self.Y):
            raise ValueError("The acceleration must be orthogonal to the velocity.")

    @property
    def eps0(self) -> int:
        return 1 if inner(self.space, self.X, self.X) > 0 else -1

    @property
    def y_squared(self) -> float:
        return float(inner(self.space, self.Y, self.Y))

    @property
    def circle_class(self) -> CircleClass:
        causal_class = classify(self.space, self.Y)
        if causal_class == CausalClass.ZERO:
            return CircleClass.GEODESIC
        if causal_class == CausalClass.LIGHTLIKE:
            return CircleClass.NULL_CIRCLE
        return CircleClass.PROPER

    @property
    def eps1(self) -> int:
        if self.circle_class != CircleClass.PROPER:
            return 0
        return 1 if self.y_squared > 0 else -1

    @property
    def k(self) -> float:
        "The geodesic curvature `sqrt(|<Y, Y>|)`; 0 for geodesics and null circles."
        if self.circle_class != CircleClass.PROPER:
            return 0.0
        return float(np.sqrt(abs(self.y_squared)))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "X": self.X,
            "Y": self.Y,
            "k": self.k,
            "class": self.circle_class,
            "eps0": self.eps0,
            "eps1": self.eps1,
        }


def circle_center(state: CircleState) -> np.ndarray:
    """
    Center `c = p + eps0 eps1 Y / k^2` of a proper circle, fixed by `gamma(0) = p`, `gamma'(0) = X` and
    `gamma''(0) = Y`.
    """
    if state.circle_class != CircleClass.PROPER:
        raise ValueError(f"Only proper circles have a center, this one is a {state.circle_class.value}.")
    k = state.k
    return state.p + state.eps0 * state.eps1 * (state.Y / k) / k


def circle_closed_form(state: CircleState, t) -> np.ndarray:
    """
    Closed form of a proper circle: `c + (sin(kt) X - cos(kt) Y/k) / k` when `eps0 eps1 = 1`, and
    `c + (sinh(kt) X - eps0 eps1 cosh(kt) Y/k) / k` otherwise. `t` may be an array of times.
    """
    if state.circle_class != CircleClass.PROPER:
        raise ValueError(f"The closed form covers proper circles only, this one is a {state.circle_class.value}.")
    k, sign = state.k, state.eps0 * state.eps1
    y_unit = state.Y / k
    t = np.asarray(t, dtype=float)[..., None]
    center = circle_center(state)
    if sign > 0:
        return center + (np.sin(k * t) * state.X - np.cos(k * t) * y_unit) / k
    return center + (np.sinh(k * t) * state.X - sign * np.cosh(k * t) * y_unit) / k


def evaluate_circle(state: CircleState, t) -> np.ndarray:
    "Evaluates the circle of any class: a line for geodesics, `p + tX + t^2/2 Y` for null circles."
    circle_class = state.circle_class
    if circle_class == CircleClass.PROPER:
        return circle_closed_form(state, t)
    t = np.asarray(t, dtype=float)[..., None]
    if circle_class == CircleClass.GEODESIC:
        return state.p + t * state.X
    return state.p + t * state.X + 0.5 * t**2 * state.Y


@dataclass
class CircleTrajectory:
    "States `(p, X, Y)` of an integrated circle on a time grid, one row per time."

    space: Space
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    accelerations: np.ndarray

    @property
    def x_squared(self) -> np.ndarray:
        return inner(self.space, self.velocities, self.velocities)

    @property
    def y_squared(self) -> np.ndarray:
        return inner(self.space, self.accelerations, self.accelerations)

    @property
    def x_dot_y(self) -> np.ndarray:
        return inner(self.space, self.velocities, self.accelerations)

    def drift(self) -> dict:
        "Largest change of each conserved quantity along the trajectory."
        return {
            "XX": float(np.max(np.abs(self.x_squared - self.x_squared[0]))),
            "YY": float(np.max(np.abs(self.y_squared - self.y_squared[0]))),
            "XY": float(np.max(np.abs(self.x_dot_y))),
        }

    def deviation(self, positions) -> np.ndarray:
        "Euclidean distance to `positions`, time by time."
        return np.linalg.norm(self.positions - np.asarray(positions, dtype=float), axis=-1)


def _circle_field(space: Space, y: np.ndarray) -> np.ndarray:
    _, x, acc = y
    return np.stack([x, acc, -inner(space, acc, acc) * inner(space, x, x) * x])


def _rk4_step(space: Space, y: np.ndarray, h: float) -> np.ndarray:
    k1 = _circle_field(space, y)
    k2 = _circle_field(space, y + 0.5 * h * k1)
    k3 = _circle_field(space, y + 0.5 * h * k2)
    k4 = _circle_field(space, y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def circle_integrate(state: CircleState, t_grid, step: float = RK4_STEP) -> CircleTrajectory:
    """
    Integrates the circle equation with classical fixed-step RK4, starting from `state` at `t = 0`.

    Args:
        state ([`CircleState`]):
            Initial state.
        t_grid (`np.ndarray`):
            Monotone times at which to record the state.
        step (`float`, *optional*, defaults to 1e-3):
            Largest RK4 step. Each grid interval is split into equal substeps no longer than this.
    """
    t_grid = np.asarray(t_grid, dtype=float).reshape(-1)
    if step <= 0:
        raise ValueError(f"The integration step must be positive, got {step}.")
    differences = np.diff(t_grid)
    if len(differences) and not (np.all(differences >= 0) or np.all(differences <= 0)):
        raise ValueError("The time grid must be monotone.")
    space = state.space
    y = np.stack([state.p, state.X, state.Y])
    t = 0.0
    records = []
    for target in t_grid:
        substeps = int(np.ceil(abs(target - t) / step))
        if substeps:
            h = (target - t) / substeps
            for _ in range(substeps):
                y = _rk4_step(space, y, h)
        t = target
        records.append(y)
    states = np.array(records).reshape(len(t_grid), 3, space.dim)
    return CircleTrajectory(space, t_grid, states[:, 0], states[:, 1], states[:, 2])


CurveSampler = Callable[[float], np.ndarray]


def _circle_terms(space: Space, curve: CurveSampler, t: float, step: float):
    "The two terms `gamma'''` and `<gamma'', gamma''> <gamma', gamma'> gamma'` of the circle equation at `t`."
    samples = {j: np.asarray(curve(t + j * step), dtype=float) for j in range(-3, 4)}
    h = step
    d1 = (-samples[2] + 8 * samples[1] - 8 * samples[-1] + samples[-2]) / (12 * h)
    d2 = (-samples[2] + 16 * samples[1] - 30 * samples[0] + 16 * samples[-1] - samples[-2]) / (12 * h**2)
    d3 = (
        -samples[3] + 8 * samples[2] - 13 * samples[1] + 13 * samples[-1] - 8 * samples[-2] + samples[-3]
    ) / (8 * h**3)
    return d3, inner(space, d2, d2) * inner(space, d1, d1) * d1


def circle_residual(space: Space, curve: CurveSampler, t: float, step: float = RESIDUAL_FD_STEP) -> float:
    """
    Euclidean magnitude of `gamma''' + <gamma'', gamma''> <gamma', gamma'> gamma'` at `t`, with derivatives from
    fourth order central differences of step `step`. Vanishes on unit speed circles.

    The stencils are accurate to `O(step^4)`, so the default step of `1e-2` keeps truncation near `1e-10` while the
    rounding error of the third derivative, which grows like `eps / step^3`, stays near `1e-9`.
    """
    jerk, restoring = _circle_terms(space, curve, t, step)
    return float(np.linalg.norm(jerk + restoring))


def geodesic_time_span(sphere: SphericalSubmanifold, v) -> float:
    """
    Parameter range sampled along the unit speed geodesic of `sphere` with velocity `v`: one full period on
    trigonometric branches, `1 / sqrt|kappa <v, v>|` on hyperbolic ones (the curve grows like `cosh`), and `2 pi` on
    planes, paraboloids and null directions.
    """
    lam = _geodesic_rate(sphere, v)
    if lam == 0.0:
        return 2 * np.pi
    if lam > 0:
        return 2 * np.pi / np.sqrt(lam)
    return 1.0 / np.sqrt(-lam)


def _geodesic_rate(sphere: SphericalSubmanifold, v) -> float:
    if sphere.kind in (SphereKind.PLANE, SphereKind.PARABOLOID):
        return 0.0
    lam = float(sphere.curvature * inner(sphere.space, v, v))
    return 0.0 if abs(lam) <= CLASSIFICATION_TOLERANCE else lam


def sphere_geodesic_is_circle(
    sphere: SphericalSubmanifold,
    p,
    v,
    t_max: Optional[float] = None,
    samples: int = 64,
    tolerance: float = 1e-5,
) -> CheckRecord:
    """
    Checks that the geodesic of `sphere` through `p` with unit velocity `v` solves the circle equation of the flat
    ambient space, sampling `t` in `[0, t_max]` (by default [`geodesic_time_span`]).

    The difference step shrinks with the angular rate of the geodesic, and each residual is measured relative to
    `1 + |gamma'''| + |<gamma'', gamma''> <gamma', gamma'> gamma'|`, so the check does not depend on the size of the
    submanifold or on how far from its center the curve runs.
    """
    space = sphere.space
    v = space.vector(v)
    if abs(abs(inner(space, v, v)) - 1.0) > CLASSIFICATION_TOLERANCE:
        raise ValueError("The geodesic must have unit speed.")
    if t_max is None:
        t_max = geodesic_time_span(sphere, v)
    step = RESIDUAL_FD_STEP / max(1.0, np.sqrt(abs(_geodesic_rate(sphere, v))))

    def curve(t):
        return spheres.quadric_geodesic(sphere, p, v, t)

    errors = []
    for t in np.linspace(0.0, t_max, samples):
        jerk, restoring = _circle_terms(space, curve, t, step)
        size = 1.0 + float(np.linalg.norm(jerk)) + float(np.linalg.norm(restoring))
        errors.append(float(np.linalg.norm(jerk + restoring)) / size)
    return CheckRecord("geodesic_circle", samples, float(np.max(errors)), tolerance)


def closed_form_trajectory(state: CircleState, t_grid) -> CircleTrajectory:
    "The exact states `(p, X, Y)` of the circle on `t_grid`, for every circle class."
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    col = t[:, None]
    circle_class = state.circle_class
    if circle_class == CircleClass.GEODESIC:
        velocities = np.broadcast_to(state.X, (len(t), state.space.dim))
        accelerations = np.zeros_like(velocities)
    elif circle_class == CircleClass.NULL_CIRCLE:
        velocities = state.X + col * state.Y
        accelerations = np.broadcast_to(state.Y, velocities.shape)
    else:
        k, sign = state.k, state.eps0 * state.eps1
        y_unit = state.Y / k
        if sign > 0:
            velocities = np.cos(k * col) * state.X + np.sin(k * col) * y_unit
            accelerations = k * (-np.sin(k * col) * state.X + np.cos(k * col) * y_unit)
        else:
            velocities = np.cosh(k * col) * state.X - sign * np.sinh(k * col) * y_unit
            accelerations = k * (np.sinh(k * col) * state.X - sign * np.cosh(k * col) * y_unit)
    positions = evaluate_circle(state, t).reshape(len(t), state.space.dim)
    return CircleTrajectory(state.space, t, positions, np.array(velocities), np.array(accelerations))
