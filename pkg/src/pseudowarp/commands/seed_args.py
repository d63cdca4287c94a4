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

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import yaml
from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from ..pseudo_linear import Space, Subspace
from ..utils.constants import SCHEMA_VERSION
from ..warp import InitialData, InitialDataError, WarpedDecomposition, build


class SeedDocumentError(ValueError):
    """
    Raised when a seed document cannot be parsed or does not follow the seed schema. `path` locates the offending
    field, such as `factors/0/basis`.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


_VECTOR = {"type": "array", "items": {"type": "number"}}

SEED_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "pseudowarp seed document",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema", "space", "base_point", "factors", "a_vectors"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "space": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dim", "index"],
            "properties": {"dim": {"type": "integer", "minimum": 1}, "index": {"type": "integer", "minimum": 0}},
        },
        "kappa": {"type": "number"},
        "base_point": _VECTOR,
        "factors": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["basis"],
                "properties": {"basis": {"type": "array", "items": _VECTOR}},
            },
        },
        "a_vectors": {"type": "array", "items": _VECTOR},
        "b_vector": _VECTOR,
        "flags": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"canonical": {"type": "boolean"}, "connected": {"type": "boolean"}},
        },
    },
}


def validate_seed_dict(seed_dict: Any):
    "Raises [`SeedDocumentError`] with the path of the most relevant schema violation, if any."
    error = best_match(Draft7Validator(SEED_SCHEMA).iter_errors(seed_dict))
    if error is not None:
        path = "/".join(str(part) for part in error.absolute_path)
        raise SeedDocumentError(error.message, path=path or "<root>")


def load_seed_from_file(seed_file: str) -> "SeedDocument":
    if not os.path.isfile(seed_file):
        raise SeedDocumentError(f"The seed document `{seed_file}` does not exist.")
    if seed_file.endswith((".yaml", ".yml")):
        return SeedDocument.from_yaml_file(seed_file)
    return SeedDocument.from_json_file(seed_file)


@dataclass
class SeedDocument:
    """
    The on-disk form of initial data. Vectors are plain lists of numbers; `flags.canonical` declares that the data
    are in canonical form (checked when building) and `flags.connected` keeps only the component through the base
    point of disconnected spherical factors.
    """

    space: Dict[str, int]
    base_point: List[float]
    factors: List[Dict[str, List[List[float]]]]
    a_vectors: List[List[float]]
    kappa: float = 0.0
    b_vector: Optional[List[float]] = None
    flags: Dict[str, bool] = field(default_factory=dict)
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        result = dict(self.__dict__)
        return {k: v for k, v in result.items() if v is not None}

    @classmethod
    def from_dict(cls, seed_dict: Any) -> "SeedDocument":
        validate_seed_dict(seed_dict)
        return cls(**seed_dict)

    @classmethod
    def from_json_file(cls, json_file: str) -> "SeedDocument":
        with open(json_file, "r", encoding="utf-8") as f:
            try:
                seed_dict = json.load(f)
            except json.JSONDecodeError as e:
                raise SeedDocumentError(f"Malformed JSON in `{json_file}`: {e}") from e
        return cls.from_dict(seed_dict)

    def to_json_file(self, json_file: str):
        with open(json_file, "w", encoding="utf-8") as f:
            content = json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
            f.write(content)

    @classmethod
    def from_yaml_file(cls, yaml_file: str) -> "SeedDocument":
        with open(yaml_file, "r", encoding="utf-8") as f:
            try:
                seed_dict = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise SeedDocumentError(f"Malformed YAML in `{yaml_file}`: {e}") from e
        return cls.from_dict(seed_dict)

    def to_yaml_file(self, yaml_file: str):
        with open(yaml_file, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f)

    @property
    def ambient(self) -> Space:
        return Space(self.space["dim"], self.space["index"])

    def to_initial_data(self) -> InitialData:
        space = self.ambient
        factors = []
        for i, factor in enumerate(self.factors):
            basis = np.array(factor["basis"], dtype=float)
            if basis.size and basis.shape[-1] != space.dim:
                raise InitialDataError(f"Basis vectors of factor {i} must have {space.dim} coordinates.")
            factors.append(Subspace.span(space, basis))
        return InitialData(
            space=space,
            base_point=self.base_point,
            factors=tuple(factors),
            a_vectors=np.array(self.a_vectors, dtype=float).reshape(-1, space.dim),
            kappa=self.kappa,
            b_vector=self.b_vector,
            connected=self.flags.get("connected", False),
        )

    def build(self) -> WarpedDecomposition:
        "Builds the decomposition, checking the `canonical` declaration."
        decomposition = build(self.to_initial_data())
        if self.flags.get("canonical", False) and not decomposition.canonical:
            raise InitialDataError("The seed declares `canonical: true` but its initial data are not canonical.")
        return decomposition
