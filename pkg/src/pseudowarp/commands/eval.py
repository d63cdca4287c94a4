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

import numpy as np

from ..warp import WarpedPoint, psi_forward
from .command_utils import add_input_argument, emit_json, make_parser, parse_json_argument, run_command
from .seed_args import load_seed_from_file


_description = "Evaluates the warped product map at a point of its domain."


def eval_command_parser(subparsers=None):
    parser = make_parser(subparsers, "eval", _description)
    add_input_argument(parser)
    parser.add_argument(
        "--point",
        required=True,
        help="The point `[p_0, p_1, ..., p_k]` as a JSON array of arrays, one ambient vector per factor.",
    )
    if subparsers is not None:
        parser.set_defaults(func=eval_command)
    return parser


def parse_warped_point(space, text: str, name: str = "--point") -> WarpedPoint:
    components = parse_json_argument(text, name)
    if not isinstance(components, list) or not all(isinstance(c, list) for c in components):
        raise ValueError(f"`{name}` must be a JSON array of arrays.")
    return WarpedPoint.of(space, [np.array(c, dtype=float) for c in components])


def eval_command(args):
    decomposition = load_seed_from_file(args.input).build()
    point = parse_warped_point(decomposition.space, args.point)
    emit_json(psi_forward(decomposition, point))
    return 0


def main():
    parser = eval_command_parser()
    args = parser.parse_args()
    raise SystemExit(run_command(eval_command, args))


if __name__ == "__main__":
    main()
