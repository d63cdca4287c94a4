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

from ..utils.constants import EXIT_INVALID, EXIT_OK
from ..validation import run_validation
from .command_utils import add_input_argument, emit_json, make_parser, run_command
from .seed_args import load_seed_from_file


_description = "Runs the invariant suite on random samples of a decomposition and writes a validation report."


def validate_command_parser(subparsers=None):
    parser = make_parser(subparsers, "validate", _description)
    add_input_argument(parser)
    parser.add_argument("--samples", type=int, default=500, help="Number of random domain points to check.")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the random sampling.")
    parser.add_argument(
        "--tol", type=float, default=None, help="Tolerance of the warped metric isometry check (default 1e-8)."
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Number of threads to spread the samples over. The report does not depend on it.",
    )
    parser.add_argument(
        "--report", default=None, help="Where to write the report JSON. Defaults to the standard output."
    )
    if subparsers is not None:
        parser.set_defaults(func=validate_command)
    return parser


def validate_command(args):
    decomposition = load_seed_from_file(args.input).build()
    report = run_validation(decomposition, samples=args.samples, seed=args.seed, tol=args.tol, workers=args.workers)
    emit_json(report.to_dict(), args.report, indent=2)
    return EXIT_OK if report.passed else EXIT_INVALID


def main():
    parser = validate_command_parser()
    args = parser.parse_args()
    raise SystemExit(run_command(validate_command, args))


if __name__ == "__main__":
    main()
