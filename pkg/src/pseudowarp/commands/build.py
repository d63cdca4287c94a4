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

from ..warp import decomposition_summary
from .command_utils import add_input_argument, emit_json, make_parser, run_command
from .seed_args import load_seed_from_file


_description = "Builds the warped product decomposition of a seed document and writes its summary."


def build_command_parser(subparsers=None):
    parser = make_parser(subparsers, "build", _description)
    add_input_argument(parser)
    parser.add_argument(
        "--report", default=None, help="Where to write the summary JSON. Defaults to the standard output."
    )
    if subparsers is not None:
        parser.set_defaults(func=build_command)
    return parser


def build_command(args):
    decomposition = load_seed_from_file(args.input).build()
    emit_json(decomposition_summary(decomposition), args.report, indent=2)
    return 0


def main():
    parser = build_command_parser()
    args = parser.parse_args()
    raise SystemExit(run_command(build_command, args))


if __name__ == "__main__":
    main()
