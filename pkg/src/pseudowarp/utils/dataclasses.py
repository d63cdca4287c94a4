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
General namespace and dataclass related classes
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

from .constants import SCHEMA_VERSION


class EnumWithContains(enum.EnumMeta):
    "A metaclass that adds the ability to check if `self` contains an item with the `in` operator"

    def __contains__(cls, item):
        try:
            cls(item)
        except ValueError:
            return False
        return True


class BaseEnum(str, enum.Enum, metaclass=EnumWithContains):
    "An enum class that can get the value of an item with `str(Enum.key)`"

    # Subclassing str as well as Enum allows the members to be JSON-serializable out of the box.
    def __str__(self):
        return self.value

    @classmethod
    def list(cls):
        "Method to list all the possible items in `cls`"
        return list(map(str, cls))


class CausalClass(BaseEnum):
    """
    Represents the causal character of a vector of a pseudo-Euclidean space.

    Values:

        - **ZERO** -- the zero vector (up to the classification tolerance).
        - **SPACELIKE** -- `<v, v> > 0`.
        - **TIMELIKE** -- `<v, v> < 0`.
        - **LIGHTLIKE** -- `<v, v> = 0` with `v != 0`.
    """

    ZERO = "zero"
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


class SphereKind(BaseEnum):
    """
    Represents the kind of a spherical submanifold, decided by the causal class of its `a` vector.

    Values:

        - **PLANE** -- `a = 0`, an affine subspace.
        - **PSEUDO_SPHERE** -- `a` spacelike, a central quadric of positive curvature.
        - **PSEUDO_HYPERBOLIC** -- `a` timelike, a central quadric of negative curvature.
        - **PARABOLOID** -- `a` lightlike, the flat paraboloid model.
    """

    PLANE = "Plane"
    PSEUDO_SPHERE = "PseudoSphere"
    PSEUDO_HYPERBOLIC = "PseudoHyperbolic"
    PARABOLOID = "Paraboloid"


class CaseTag(BaseEnum):
    """
    Represents which standard form a warped decomposition takes.

    Values:

        - **NON_NULL** -- every `a_i` is spacelike or timelike.
        - **NULL** -- a single lightlike `a`, paired with a lightlike `b`.
        - **MIXED** -- only produced by composing a null and a non-null decomposition.
    """

    NON_NULL = "non-null"
    NULL = "null"
    MIXED = "mixed"


class CircleClass(BaseEnum):
    GEODESIC = "geodesic"
    PROPER = "proper"
    NULL_CIRCLE = "null_circle"


class CircleMode(BaseEnum):
    CLOSED_FORM = "closed-form"
    INTEGRATE = "integrate"
    BOTH = "both"


class OutputFormat(BaseEnum):
    JSON = "json"
    CSV = "csv"


class WarpFamily(BaseEnum):
    """
    Represents the isometry type of a singly or multiply warped product of a flat space or of one of its central
    hyperquadrics, for ambient index at most one.

    Values:

        - **EUCLIDEAN** -- `E^m x S^n1 x ... x S^ns` in Euclidean space.
        - **MINKOWSKI_LIGHTLIKE** -- `M^m x_lambda E^n1 x S...`, one lightlike warping gradient.
        - **MINKOWSKI_TIMELIKE** -- `M^m x_tau H^n1 x S...`, one timelike warping gradient.
        - **MINKOWSKI_DE_SITTER** -- `E^m x dS^n1 x S...`, a Riemannian geodesic factor.
        - **MINKOWSKI_SPACELIKE** -- `M^m x S^n1 x S...`.
        - **SPHERE** -- `S^m x S^n1 x ... x S^ns` in a round sphere.
        - **DE_SITTER_LIGHTLIKE**, **DE_SITTER_TIMELIKE**, **DE_SITTER_SPHERICAL**, **DE_SITTER_SPACELIKE** -- the
          four families of de Sitter space.
        - **HYPERBOLIC_LIGHTLIKE**, **HYPERBOLIC_TIMELIKE**, **HYPERBOLIC_SPACELIKE** -- the three families of
          hyperbolic space.
        - **GENERIC** -- any other signature; only a descriptor is produced.
    """

    EUCLIDEAN = "euclidean"
    MINKOWSKI_LIGHTLIKE = "minkowski-lightlike"
    MINKOWSKI_TIMELIKE = "minkowski-timelike"
    MINKOWSKI_DE_SITTER = "minkowski-de-sitter"
    MINKOWSKI_SPACELIKE = "minkowski-spacelike"
    SPHERE = "sphere"
    DE_SITTER_LIGHTLIKE = "de-sitter-lightlike"
    DE_SITTER_TIMELIKE = "de-sitter-timelike"
    DE_SITTER_SPHERICAL = "de-sitter-spherical"
    DE_SITTER_SPACELIKE = "de-sitter-spacelike"
    HYPERBOLIC_LIGHTLIKE = "hyperbolic-lightlike"
    HYPERBOLIC_TIMELIKE = "hyperbolic-timelike"
    HYPERBOLIC_SPACELIKE = "hyperbolic-spacelike"
    GENERIC = "generic"


# data classes


@dataclass
class CheckRecord:
    """
    Outcome of one numerical invariant check.

    Args:
        name (`str`):
            Identifier of the check, such as `"isometry"` or `"round_trip_inverse"`.
        samples (`int`):
            How many samples contributed to `max_error`.
        max_error (`float`):
            Largest observed violation. `nan` counts as a failure.
        tolerance (`float`):
            The check passes when `max_error <= tolerance`.
    """

    name: str
    samples: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return not math.isnan(self.max_error) and self.max_error <= self.tolerance

    def merge(self, other: "CheckRecord") -> "CheckRecord":
        if other.name != self.name:
            raise ValueError(f"Cannot merge check `{other.name}` into `{self.name}`.")
        max_error = max(self.max_error, other.max_error)
        if math.isnan(self.max_error) or math.isnan(other.max_error):
            max_error = math.nan
        return CheckRecord(self.name, self.samples + other.samples, max_error, max(self.tolerance, other.tolerance))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class ValidationReport:
    """
    Machine readable result of running the invariant suite against one decomposition.
    """

    seed: int
    samples: int
    version: str
    summary: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> CheckRecord:
        for record in self.checks:
            if record.name == name:
                return record
        raise KeyError(f"No check named `{name}` in this report.")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "version": self.version,
            "seed": self.seed,
            "samples": self.samples,
            "summary": self.summary,
            "checks": [check.to_dict() for check in self.checks],
            "pass": self.passed,
        }
