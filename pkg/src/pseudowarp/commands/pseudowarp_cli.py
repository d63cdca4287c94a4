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

import sys
from argparse import ArgumentParser

from ..logging import get_logger
from ..utils.constants import EXIT_INVALID
from .build import build_command_parser
from .circle import circle_command_parser
from .command_utils import run_command
from .enumerate import enumerate_command_parser
from .eval import eval_command_parser
from .invert import invert_command_parser
from .validate import validate_command_parser


logger = get_logger(__name__)


def main():
    parser = ArgumentParser("pseudowarp CLI tool", usage="pseudowarp <command> [<args>]", allow_abbrev=False)
    subparsers = parser.add_subparsers(help="pseudowarp command helpers")

    # Register commands
    build_command_parser(subparsers=subparsers)
    eval_command_parser(subparsers=subparsers)
    invert_command_parser(subparsers=subparsers)
    validate_command_parser(subparsers=subparsers)
    circle_command_parser(subparsers=subparsers)
    enumerate_command_parser(subparsers=subparsers)

    # Let's go
    args = parser.parse_args()

    if not hasattr(args, "func"):
        parser.print_help()
        sys.exit(EXIT_INVALID)

    # Run
    logger.debug(f"Running `{args.func.__name__}`")
    sys.exit(run_command(args.func, args))


if __name__ == "__main__":
    main()
