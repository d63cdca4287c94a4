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

import argparse
import json
import sys
from typing import Any, Callable, Optional

import numpy as np

from ..utils.constants import EXIT_INVALID, EXIT_OK, EXIT_PARSE_ERROR
from ..utils.serialization import dumps
from .seed_args import SeedDocumentError


class SubcommandHelpFormatter(argparse.RawDescriptionHelpFormatter):
    """
    A custom formatter that will remove the usage line from the help message for subcommands.
    """

    def _format_usage(self, usage, actions, groups, prefix):
        usage = super()._format_usage(usage, actions, groups, prefix)
        usage = usage.replace("<command> [<args>] ", "")
        return usage


def make_parser(subparsers, name: str, description: str) -> argparse.ArgumentParser:
    if subparsers is not None:
        return subparsers.add_parser(
            name, description=description, help=description, formatter_class=SubcommandHelpFormatter
        )
    return argparse.ArgumentParser(f"pseudowarp {name} command", description=description)


def add_input_argument(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--input",
        required=True,
        help="Seed document (`.json`, `.yaml` or `.yml`) holding the initial data of the decomposition.",
    )


def parse_json_argument(text: str, name: str) -> Any:
    "Parses the JSON value of a command line flag; malformed JSON is a parse error."
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SeedDocumentError(f"`{name}` is not valid JSON: {e}", path=name) from e


def parse_vector_argument(text: str, name: str) -> np.ndarray:
    value = parse_json_argument(text, name)
    try:
        vector = np.array(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise ValueError(f"`{name}` must be an array of numbers.") from e
    if vector.ndim != 1:
        raise ValueError(f"`{name}` must be a flat array of numbers, got shape {vector.shape}.")
    return vector


def emit(text: str, output: Optional[str] = None):
    "Prints `text` on standard output, or writes it to `output`."
    if output is None:
        print(text)
    else:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text + "\n")


def emit_json(obj: Any, output: Optional[str] = None, indent: Optional[int] = None):
    emit(dumps(obj, indent=indent), output)


def run_command(func: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    """
    Runs a command function and maps errors to exit codes: parse errors give 3, every other domain or validation
    error gives 2, and so do files that cannot be read or written. Diagnostics go to standard error.
    """
    try:
        code = func(args)
    except SeedDocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if code is None else code
