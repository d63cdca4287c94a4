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
from .constants import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    MEMBERSHIP_TOLERANCE,
    RK4_STEP,
    SCHEMA_VERSION,
)
from .dataclasses import (
    BaseEnum,
    CaseTag,
    CausalClass,
    CheckRecord,
    CircleClass,
    CircleMode,
    OutputFormat,
    SphereKind,
    ValidationReport,
    WarpFamily,
)
from .imports import is_rich_available
from .random import make_generator, spawn_generators
from .serialization import dumps, format_float, to_serializable
