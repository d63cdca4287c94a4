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

from ..warp import psi_inverse
from .command_utils import add_input_argument, emit_json, make_parser, parse_vector_argument, run_command
from .seed_args import load_seed_from_file


_description = "Inverts the warped product map: finds the point of the domain mapped to an ambient point."


def invert_command_parser(subparsers=None):
    parser = make_parser(subparsers, "invert", _description)
    add_input_argument(parser)
    parser.add_argument("--ambient-point", required=True, help="The ambient point as a JSON array of numbers.")
    if subparsers is not None:
        parser.set_defaults(func=invert_command)
    return parser


def invert_command(args):
    decomposition = load_seed_from_file(args.input).build()
    q = parse_vector_argument(args.ambient_point, "--ambient-point")
    emit_json(psi_inverse(decomposition, q).to_list())
    return 0


def main():
    parser = invert_command_parser()
    args = parser.parse_args()
    raise SystemExit(run_command(invert_command, args))


if __name__ == "__main__":
    main()
