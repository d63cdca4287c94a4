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
JSON output with a fixed float format, so that reports written twice from the same inputs are byte-identical.
"""

import enum
import json
import math
from typing import Any, Optional

import numpy as np

from .constants import FLOAT_SIGNIFICANT_DIGITS


def format_float(value: float) -> str:
    """
    Formats `value` with 17 significant digits, enough to round-trip any double. Integral values keep a trailing
    `.0` so they still read as floats; non-finite values become `null`.
    """
    value = float(value)
    if not math.isfinite(value):
        return "null"
    text = f"{value:.{FLOAT_SIGNIFICANT_DIGITS}g}"
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def to_serializable(obj: Any) -> Any:
    "Recursively converts numpy containers/scalars and enums to plain Python objects."
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return [to_serializable(x) for x in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(x) for x in obj]
    return obj


def _encode(obj: Any, indent: Optional[int], level: int) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = [f"{json.dumps(key)}: {_encode(obj[key], indent, level + 1)}" for key in sorted(obj)]
        return _join(items, "{", "}", indent, level)
    if isinstance(obj, list):
        return _join([_encode(x, indent, level + 1) for x in obj], "[", "]", indent, level)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def _join(items, opening, closing, indent, level):
    if not items:
        return opening + closing
    if indent is None:
        return opening + ", ".join(items) + closing
    pad = " " * (indent * (level + 1))
    return opening + "\n" + ",\n".join(pad + item for item in items) + "\n" + " " * (indent * level) + closing


def dumps(obj: Any, indent: Optional[int] = None) -> str:
    """
    Serializes `obj` to JSON with sorted keys and every float written by [`format_float`].

    Args:
        obj:
            Any nesting of dicts, lists, tuples, numpy arrays, numbers, strings, booleans, enums and `None`.
        indent (`int`, *optional*):
            Pretty-print with this indentation. `None` writes a single line.
    """
    return _encode(to_serializable(obj), indent, 0)
