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
The invariant suite run by `pseudowarp validate`: samples the domain of a decomposition and measures how far the
numerical maps are from the identities they should satisfy.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np

from . import spheres
from .circles import sphere_geodesic_is_circle
from .isometry import (
    ParaboloidEmbedding,
    ParaboloidIsometry,
    check_equivariance,
    check_lifted_isometry,
    lift_factor_isometry,
    sample_factor_isometry,
)
from .logging import get_logger
from .pseudo_linear import euclidean_scale, inner
from .utils.constants import PUSHFORWARD_FD_STEP, SECOND_FORM_FD_STEP
from .utils.dataclasses import CaseTag, CheckRecord, ValidationReport
from .utils.random import spawn_generators
from .warp import (
    WarpedDecomposition,
    WarpedPoint,
    check_no_product_decomposition,
    decomposition_summary,
    image_contains,
    leaf_mean_curvature,
    psi_expanded,
    psi_forward,
    psi_inverse,
    psi_pushforward,
    psi_pushforward_expanded,
    sample_domain,
    sample_tangent,
    warped_norm_squared,
)


logger = get_logger(__name__)

# samples handled by one task; fixed so that reports do not depend on the number of workers
CHUNK_SIZE = 50
GEODESIC_CIRCLE_SAMPLES = 16
LIFT_SAMPLES = 10

DEFAULT_TOLERANCES = {
    "isometry": 1e-8,
    "pushforward_finite_difference": 1e-6,
    "pushforward_expanded": 1e-9,
    "forward_expanded": 1e-10,
    "norm_identity": 1e-10,
    "round_trip_inverse": 1e-9,
    "round_trip_forward": 1e-9,
    "image_membership": 0.0,
    "leaf_mean_curvature": 1e-5,
    "factor_mean_curvature": 1e-5,
    "geodesic_circle": 1e-5,
    "quadric_residency": 1e-10,
    "lift_pairwise": 1e-7,
    "lift_leaf_preservation": 1e-7,
    "lift_pullback_metric": 1e-7,
    "equivariance": 1e-9,
}


def _factor_curve(decomposition: WarpedDecomposition, point: WarpedPoint, tangent, h: float) -> WarpedPoint:
    "Follows the geodesics of every factor from `point` with velocities `tangent` for time `h`."
    geodesic = decomposition.geodesic_factor
    if geodesic.quadric is None:
        p0 = point.geodesic + h * tangent[0]
    else:
        p0 = spheres.quadric_geodesic(geodesic.quadric, point.geodesic, tangent[0], h, allow_null=True)
    spherical = tuple(
        spheres.quadric_geodesic(sphere, p_i, v_i, h, allow_null=True)
        for sphere, p_i, v_i in zip(decomposition.spherical_factors, point.spherical, tangent[1:])
    )
    return WarpedPoint((p0,) + spherical)


def _unit_tangent(space, sphere, p, rng) -> Optional[np.ndarray]:
    basis = spheres.tangent_space(sphere, p).basis
    v = rng.normal(size=len(basis)) @ basis
    norm_squared = inner(space, v, v)
    if abs(norm_squared) < 1e-3 * float(v @ v):
        return None
    return v / np.sqrt(abs(norm_squared))


def _sample_errors(
    decomposition: WarpedDecomposition, point: WarpedPoint, rng: np.random.Generator
) -> Dict[str, float]:
    space = decomposition.space
    errors = {}
    q = psi_forward(decomposition, point)
    scale = euclidean_scale(q, *point.components)

    tangent = sample_tangent(decomposition, point, rng)
    pushed = psi_pushforward(decomposition, point, tangent)
    size = 1.0 + sum(float(v @ v) for v in tangent)
    errors["isometry"] = abs(inner(space, pushed, pushed) - warped_norm_squared(decomposition, point, tangent)) / size
    h = PUSHFORWARD_FD_STEP
    forward = psi_forward(decomposition, _factor_curve(decomposition, point, tangent, h))
    backward = psi_forward(decomposition, _factor_curve(decomposition, point, tangent, -h))
    difference = (forward - backward) / (2 * h)
    errors["pushforward_finite_difference"] = float(np.linalg.norm(difference - pushed)) / np.sqrt(size) / scale
    expanded = psi_pushforward_expanded(decomposition, point, tangent)
    errors["pushforward_expanded"] = float(np.linalg.norm(expanded - pushed)) / np.sqrt(size) / scale
    errors["forward_expanded"] = float(np.linalg.norm(psi_expanded(decomposition, point) - q)) / scale

    if decomposition.canonical:
        p0 = point.geodesic
        errors["norm_identity"] = abs(inner(space, q, q) - inner(space, p0, p0)) / scale**2

    errors["image_membership"] = 0.0 if image_contains(decomposition, q) else 1.0
    recovered = psi_inverse(decomposition, q)
    errors["round_trip_inverse"] = max(float(np.max(np.abs(x - y))) for x, y in zip(recovered, point)) / scale
    errors["round_trip_forward"] = float(np.max(np.abs(psi_forward(decomposition, recovered) - q))) / scale

    leaf_error, factor_error = 0.0, 0.0
    h = SECOND_FORM_FD_STEP
    for i, (sphere, p_i) in enumerate(zip(decomposition.spherical_factors, point.spherical), start=1):
        v = _unit_tangent(space, sphere, p_i, rng)
        if v is None:
            continue
        sign = np.sign(inner(space, v, v))
        curve = spheres.quadric_geodesic(sphere, p_i, v, np.array([-h, 0.0, h]))
        acceleration = (curve[2] - 2 * curve[1] + curve[0]) / h**2
        expected = spheres.mean_curvature(sphere, p_i, flat=True)
        error = float(np.linalg.norm(sign * acceleration - expected)) / (1 + np.linalg.norm(expected))
        factor_error = max(factor_error, error)

        leaf = [psi_forward(decomposition, point.replace(i, x)) for x in curve]
        rho = decomposition.geodesic_factor.warping(point.geodesic)[i - 1]
        estimate = sign * (leaf[2] - 2 * leaf[1] + leaf[0]) / h**2 / rho**2
        expected = leaf_mean_curvature(decomposition, point, i)
        leaf_error = max(leaf_error, float(np.linalg.norm(estimate - expected)) / (1 + np.linalg.norm(expected)))
    errors["leaf_mean_curvature"] = leaf_error
    errors["factor_mean_curvature"] = factor_error

    if decomposition.is_restricted:
        errors["quadric_residency"] = abs(inner(space, q, q) - 1.0 / decomposition.kappa) / scale**2
    return errors


def _geodesic_circle_error(decomposition: WarpedDecomposition, point: WarpedPoint, rng: np.random.Generator) -> float:
    space = decomposition.space
    worst = 0.0
    for sphere, p_i in zip(decomposition.spherical_factors, point.spherical):
        v = _unit_tangent(space, sphere, p_i, rng)
        if v is None:
            continue
        record = sphere_geodesic_is_circle(sphere, p_i, v, samples=GEODESIC_CIRCLE_SAMPLES)
        worst = max(worst, record.max_error)
    return worst


def _run_chunk(decomposition: WarpedDecomposition, count: int, rng: np.random.Generator) -> Dict[str, CheckRecord]:
    records: Dict[str, CheckRecord] = {}

    def record(name, error):
        new = CheckRecord(name, 1, float(error), DEFAULT_TOLERANCES[name])
        records[name] = records[name].merge(new) if name in records else new

    points = sample_domain(decomposition, rng, count)
    for point in points:
        for name, error in _sample_errors(decomposition, point, rng).items():
            record(name, error)
    if points:
        record("geodesic_circle", _geodesic_circle_error(decomposition, points[0], rng))
    logger.info(f"Checked {count} samples", main_thread_only=False)
    return records


def _isometry_checks(decomposition: WarpedDecomposition, seed: int) -> List[CheckRecord]:
    """
    Lifts a sampled isometry of every spherical factor and checks the lift; for null decompositions also checks the
    paraboloid model of `span{a, b}^perp` against its linear realization.
    """
    records = []
    for i, sphere in enumerate(decomposition.spherical_factors, start=1):
        factor_map = sample_factor_isometry(sphere, seed + i)
        if factor_map is None:
            continue
        lifted = lift_factor_isometry(decomposition, i, factor_map)
        records.extend(
            check_lifted_isometry(
                lifted, samples=LIFT_SAMPLES, seed=seed + i, tolerance=DEFAULT_TOLERANCES["lift_pairwise"]
            )
        )
    if decomposition.case == CaseTag.NULL:
        embedding = ParaboloidEmbedding.from_pair(
            decomposition.space, decomposition.a_vectors[0], decomposition.b_vector
        )
        iso = ParaboloidIsometry.sample(embedding, seed)
        records.append(check_equivariance(iso, seed=seed, tolerance=DEFAULT_TOLERANCES["equivariance"]))
    return records


def run_validation(
    decomposition: WarpedDecomposition,
    samples: int = 500,
    seed: int = 0,
    tol: Optional[float] = None,
    workers: int = 1,
) -> ValidationReport:
    """
    Runs the invariant suite on `samples` random points of the domain.

    Args:
        decomposition ([`~warp.WarpedDecomposition`]):
            The decomposition to check.
        samples (`int`, *optional*, defaults to 500):
            Number of domain points.
        seed (`int`, *optional*, defaults to 0):
            Seed of every random draw; the report only depends on `(decomposition, samples, seed, tol)`.
        tol (`float`, *optional*):
            Overrides the tolerance of the central isometry check.
        workers (`int`, *optional*, defaults to 1):
            Number of threads the sample chunks are spread over.
    """
    from . import __version__

    if samples < 1:
        raise ValueError(f"At least one sample is needed, got {samples}.")
    if workers < 1:
        raise ValueError(f"At least one worker is needed, got {workers}.")
    sizes = [min(CHUNK_SIZE, samples - start) for start in range(0, samples, CHUNK_SIZE)]
    generators = spawn_generators(seed, len(sizes))
    logger.info(f"Validating {samples} samples in {len(sizes)} chunks on {workers} worker(s)")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        chunks = list(executor.map(lambda job: _run_chunk(decomposition, *job), zip(sizes, generators)))

    merged: Dict[str, CheckRecord] = {}
    for chunk in chunks:
        for name, record in chunk.items():
            merged[name] = merged[name].merge(record) if name in merged else record
    for record in _isometry_checks(decomposition, seed):
        merged[record.name] = merged[record.name].merge(record) if record.name in merged else record
    if tol is not None and "isometry" in merged:
        merged["isometry"].tolerance = tol
    checks: List[CheckRecord] = [merged[name] for name in DEFAULT_TOLERANCES if name in merged]

    summary = decomposition_summary(decomposition)
    obstruction = check_no_product_decomposition(decomposition, seed=seed)
    summary["product_obstruction"] = {
        "holds": obstruction.holds,
        "vacuous": obstruction.vacuous,
        "min_gradient_norm": obstruction.min_gradient_norm,
    }
    report = ValidationReport(seed=seed, samples=samples, version=__version__, summary=summary, checks=checks)
    logger.info(f"Validation {'passed' if report.passed else 'failed'}")
    return report
