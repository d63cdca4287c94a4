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

CLASSIFICATION_TOLERANCE = 1e-9
MEMBERSHIP_TOLERANCE = 1e-9
# psi_inverse divides by these quantities
INVERSE_BOUNDARY_MARGIN = 1e-7

RK4_STEP = 1e-3
PUSHFORWARD_FD_STEP = 1e-6
RESIDUAL_FD_STEP = 1e-2
SECOND_FORM_FD_STEP = 1e-3

SAMPLING_BOX = 3.0
SAMPLING_MIN_WARP = 1e-2
SAMPLING_MAX_TRIES = 10000

SCHEMA_VERSION = 1
FLOAT_SIGNIFICANT_DIGITS = 17

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE_ERROR = 3

LOG_LEVEL_ENV_VAR = "PSEUDOWARP_LOG_LEVEL"
