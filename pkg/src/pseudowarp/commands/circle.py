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

import csv
import io

import numpy as np

from ..circles import CircleState, circle_integrate, closed_form_trajectory
from ..pseudo_linear import Space
from ..utils.constants import RK4_STEP
from ..utils.dataclasses import CircleMode, OutputFormat
from ..utils.serialization import format_float
from .command_utils import emit, emit_json, make_parser, parse_vector_argument, run_command


_description = "Samples a circle of a pseudo-Euclidean space, in closed form, by integrating the circle equation, or both."


def parse_space_argument(text: str) -> Space:
    "Parses `n,nu` into a [`~pseudo_linear.Space`]."
    try:
        dim, index = (int(part) for part in text.split(","))
    except ValueError as e:
        raise ValueError(f"`--space` must read `n,nu`, got {text!r}.") from e
    return Space(dim, index)


def circle_command_parser(subparsers=None):
    parser = make_parser(subparsers, "circle", _description)
    parser.add_argument("--space", required=True, help="Dimension and index of the ambient space as `n,nu`.")
    parser.add_argument("--p", required=True, help="Initial position as a JSON array.")
    parser.add_argument("--X", required=True, help="Initial unit velocity as a JSON array.")
    parser.add_argument("--Y", required=True, help="Initial acceleration as a JSON array, orthogonal to `--X`.")
    parser.add_argument("--t-max", type=float, default=2 * np.pi, help="Last sampled time (default 2 pi).")
    parser.add_argument("--dt", type=float, default=0.1, help="Sampling interval of the output rows.")
    parser.add_argument("--step", type=float, default=RK4_STEP, help="Largest RK4 step of the integrator.")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument(
        "--closed-form", dest="mode", action="store_const", const=CircleMode.CLOSED_FORM, help="Closed form only."
    )
    mode.add_argument(
        "--integrate", dest="mode", action="store_const", const=CircleMode.INTEGRATE, help="RK4 integration only."
    )
    mode.add_argument(
        "--both",
        dest="mode",
        action="store_const",
        const=CircleMode.BOTH,
        help="Integrate and report the pointwise deviation from the closed form (default).",
    )
    parser.add_argument("--format", default="json", choices=OutputFormat.list(), help="Output format.")
    parser.add_argument("--output", default=None, help="Where to write the trajectory. Defaults to standard output.")
    parser.set_defaults(mode=CircleMode.BOTH)
    if subparsers is not None:
        parser.set_defaults(func=circle_command)
    return parser


def time_grid(t_max: float, dt: float) -> np.ndarray:
    if dt <= 0:
        raise ValueError(f"`--dt` must be positive, got {dt}.")
    count = int(round(abs(t_max) / dt))
    return np.linspace(0.0, t_max, count + 1)


def trajectory_rows(state: CircleState, t_grid: np.ndarray, mode: CircleMode, step: float = RK4_STEP):
    """
    Samples the circle of `state` on `t_grid`. Returns the rows `{t, p, XX, YY, XY[, deviation]}` and the drift of the
    conserved quantities.
    """
    mode = CircleMode(mode)
    exact = closed_form_trajectory(state, t_grid)
    trajectory = exact if mode == CircleMode.CLOSED_FORM else circle_integrate(state, t_grid, step=step)
    deviation = trajectory.deviation(exact.positions) if mode == CircleMode.BOTH else None
    xx, yy, xy = trajectory.x_squared, trajectory.y_squared, trajectory.x_dot_y
    rows = []
    for i, t in enumerate(trajectory.times):
        row = {"t": t, "p": trajectory.positions[i], "XX": xx[i], "YY": yy[i], "XY": xy[i]}
        if deviation is not None:
            row["deviation"] = deviation[i]
        rows.append(row)
    return rows, trajectory.drift()


def rows_to_csv(rows, dim: int) -> str:
    columns = ["t"] + [f"p{i}" for i in range(dim)] + ["XX", "YY", "XY"]
    if rows and "deviation" in rows[0]:
        columns.append("deviation")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        values = [row["t"], *row["p"], row["XX"], row["YY"], row["XY"]]
        if "deviation" in row:
            values.append(row["deviation"])
        writer.writerow([format_float(v) for v in values])
    return buffer.getvalue().rstrip("\n")


def circle_command(args):
    space = parse_space_argument(args.space)
    state = CircleState(
        space,
        parse_vector_argument(args.p, "--p"),
        parse_vector_argument(args.X, "--X"),
        parse_vector_argument(args.Y, "--Y"),
    )
    rows, drift = trajectory_rows(state, time_grid(args.t_max, args.dt), args.mode, step=args.step)
    if OutputFormat(args.format) == OutputFormat.CSV:
        emit(rows_to_csv(rows, space.dim), args.output)
    else:
        document = {"state": state.to_dict(), "mode": CircleMode(args.mode), "drift": drift, "rows": rows}
        emit_json(document, args.output, indent=2)
    return 0


def main():
    parser = circle_command_parser()
    args = parser.parse_args()
    raise SystemExit(run_command(circle_command, args))


if __name__ == "__main__":
    main()
