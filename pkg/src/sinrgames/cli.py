"""Command-line front end.

Every subcommand writes comma-separated text: a ``# sinrgames ...`` comment
line holding the full configuration (paste it back as arguments to rerun),
one header line, then data rows with 9 significant digits.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import shlex
import sys

import numpy as np

from .assoc_single import cell_thresholds, equilibrium_partition_single
from .assoc_two_freq import (bracket_constants, equilibrium_partition_two_freq,
                             ratio_map_F, solve_fixed_point)
from .errors import DegenerateInput, NumericalFailure
from .fluid_oracle import convergence_table
from .geometry2d import disc_cell_2d
from .hierarchical import (Mode, association, PlacementPair, best_response, best_response_dynamics,
                           cooperative_optimum, placement_utilities, received_power_sic_two_freq,
                           sum_utility, sweep_utility, symmetric_equilibrium)
from .pathloss import ScenarioParams
from .sic import DecodingBelief, sic_association_single_freq

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

MODES = {
    "cdma-single": Mode.CDMA_SINGLE,
    "cdma-two": Mode.CDMA_TWO,
    "sic-single": Mode.SIC_SINGLE,
    "sic-two": Mode.SIC_TWO,
}
TABLE1_SIGMAS = (0.1, 0.4, 1.0, 2.0, 40.0)
TABLE2_PLACEMENTS = ((15.0, 10.0), (10.0, 5.0), (5.0, 10.0), (0.0, 5.0))
FIGURES = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 15, 16)


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


class Table:
    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width does not match header")
        self.rows.append(values)

    def render(self, config_line: str) -> str:
        lines = [f"# {config_line}", ",".join(self.columns)]
        lines += [",".join(fmt(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


# --- subcommands --------------------------------------------------------

def cmd_cells(args, params):
    mode = MODES[args.mode]
    if mode is Mode.SIC_SINGLE and args.belief == "optimistic":
        found = sic_association_single_freq(args.x1, args.x2, params, DecodingBelief.OPTIMISTIC)
        parts = [(p, "numerical" if num else "exact")
                 for p, num in zip(found.partitions, found.numerical)]
        parts += [(p, "capture") for p in found.capture_partitions(params.L)]
    else:
        parts = [(association(args.x1, args.x2, params, mode), "exact")]
    t = Table(["partition", "kind", "bs", "lo", "hi"])
    for k, (part, kind) in enumerate(parts):
        for bs in (1, 2):
            cell = part.cell(bs)
            if cell.is_empty:
                t.add(k, kind, bs, "nan", "nan")
            for lo, hi in cell:
                t.add(k, kind, bs, lo, hi)
    return t


def cmd_fixed_point(args, params):
    res = solve_fixed_point(args.x1, args.x2, params, tol=args.tol, method=args.method)
    t = Table(["iteration", "B", "F_B", "case", "gamma"])
    for k, B in enumerate(res.trace):
        t.add(k, B, ratio_map_F(B, args.x1, args.x2, params), res.case,
              res.gamma if res.gamma is not None else "nan")
    return t


def cmd_best_response(args, params):
    mode = MODES[args.mode]
    lo = -params.L if args.lo is None else args.lo
    hi = params.L if args.hi is None else args.hi
    br = best_response(args.which, args.other, params, mode, grid=args.points, bounds=(lo, hi))
    xs, us = sweep_utility(args.which, args.other, params, mode, args.points, lo, hi)
    t = Table(["location", "utility", "kind"])
    for x, u in zip(xs, us):
        t.add(x, u, "curve")
    for m in br.maximizers:
        t.add(m, br.value, "argmax")
    return t


def cmd_equilibrium(args, params):
    mode = MODES[args.mode]
    if args.kind == "cooperative":
        rep = cooperative_optimum(params, mode, full=args.full)
    else:
        rep = symmetric_equilibrium(params, mode, grid=args.points)
    t = Table(["kind", "mode", "x1", "x2", "u1", "u2", "method", "converged"])
    t.add(args.kind, args.mode, rep.placements.x1, rep.placements.x2,
          rep.utilities[0], rep.utilities[1], rep.method.value, rep.converged)
    return t


def cmd_dynamics(args, params):
    mode = MODES[args.mode]
    rep = best_response_dynamics(PlacementPair(args.x1, args.x2), params, mode,
                                 tol=args.tol, max_iter=args.max_iter, grid=args.points)
    t = Table(["iteration", "x1", "x2", "converged"])
    for k, pp in enumerate(rep.trace):
        t.add(k, pp.x1, pp.x2, rep.converged)
    return t


def cmd_table1(args, params):
    t = Table(["sigma", "cooperative", "noncooperative"])
    for s in args.at_sigma or TABLE1_SIGMAS:
        p = params.replace(sigma=s)
        coop = cooperative_optimum(p, Mode.CDMA_SINGLE, grid=args.points)
        comp = symmetric_equilibrium(p, Mode.CDMA_SINGLE, grid=args.points)
        t.add(s, coop.placements.x2, comp.placements.x2)
    return t


def cmd_table2(args, params):
    t = Table(["x1", "x2", "B_min", "B_max", "beta_min", "beta_max", "case", "b_star"])
    for x1, x2 in TABLE2_PLACEMENTS:
        br = bracket_constants(x1, x2, params)
        res = solve_fixed_point(x1, x2, params)
        t.add(x1, x2, br.B_min, br.B_max, br.beta_min, br.beta_max, res.case, res.b_star)
    return t


def cmd_oracle(args, params):
    ns = [args.n * 2 ** k for k in range(args.doublings + 1)]
    t = Table(["n", "E_n", "abs_error", "error_ratio"])
    for n, approx, err, ratio in convergence_table(args.x, params, ns):
        t.add(n, approx, err, ratio)
    return t


def cmd_disc2d(args, params):
    cell = disc_cell_2d((args.p1x, args.p1y), (args.p2x, args.p2y), args.B, params)
    t = Table(["center_x", "center_y", "radius", "tau", "nonempty", "owner"])
    t.add(cell.center[0], cell.center[1], cell.radius, cell.tau, cell.nonempty, cell.owner)
    return t


def cmd_sweep(args, params):
    fig = args.figure
    L = params.L
    n = args.points
    if fig in (1, 2, 9):
        t = Table(["alpha", "x1", "x2", "theta1", "theta2"])
        alphas = (2.0, 1.0) if fig == 1 else (params.alpha,)
        x1s = (-10.0, -8.0) if fig == 2 else (-10.0, -5.0, -2.0, 0.0)
        for a in alphas:
            p = params.replace(alpha=a)
            for x1 in x1s:
                for x2 in np.linspace(0.0, 30.0, n):
                    x2 = float(x2)
                    if fig == 9:
                        part = equilibrium_partition_two_freq(x1, x2, p)
                    else:
                        part = equilibrium_partition_single(x1, x2, p)
                    th1, th2 = cell_thresholds(part, L)
                    t.add(a, x1, x2, th1, th2)
        return t
    if fig in (3, 6, 10):
        mode = Mode.CDMA_TWO if fig == 10 else Mode.CDMA_SINGLE
        x1s = (-10.0,) if fig == 3 else (-2.0, -5.0, -8.0, -10.0)
        lo, hi = (-3 * L, 3 * L) if fig == 3 else (-L, L)
        t = Table(["x1", "x2", "utility"])
        for x1 in x1s:
            xs, us = sweep_utility(2, x1, params, mode, n, lo, hi)
            for x, u in zip(xs, us):
                t.add(x1, x, u)
        return t
    if fig == 4:
        t = Table(["sigma", "x", "utility_per_bs"])
        for s in (0.4, 1.0, 2.0):
            p = params.replace(sigma=s)
            for x in np.linspace(0.0, L, n):
                t.add(s, x, 0.5 * sum_utility(-float(x), float(x), p, Mode.CDMA_SINGLE))
        return t
    if fig == 5:
        t = Table(["sigma", "optimal_distance"])
        for s in np.geomspace(0.05, 40.0, max(n // 10, 2)):
            rep = cooperative_optimum(params.replace(sigma=float(s)), Mode.CDMA_SINGLE)
            t.add(s, rep.placements.x2)
        return t
    if fig in (7, 11):
        mode = Mode.CDMA_TWO if fig == 11 else Mode.CDMA_SINGLE
        t = Table(["distance", "best_response"])
        for d in np.linspace(0.0, L, max(n // 10, 2)):
            br = best_response(2, -float(d), params, mode)
            t.add(d, br.nearest(float(d)))
        return t
    if fig in (8, 15, 16):
        if fig == 16:
            res = solve_fixed_point(-20.0, -15.0, params)
            t = Table(["iteration", "B"])
            for k, B in enumerate(res.trace):
                t.add(k, B)
            return t
        pairs = ((0.0, 10.0), (10.0, 0.0)) if fig == 8 else TABLE2_PLACEMENTS
        t = Table(["x1", "x2", "B", "F_B"])
        for x1, x2 in pairs:
            br = bracket_constants(x1, x2, params)
            for B in np.linspace(br.B_min, br.B_max, n):
                t.add(x1, x2, B, ratio_map_F(float(B), x1, x2, params))
        return t
    if fig == 12:
        t = Table(["alpha", "x1", "x2", "r2"])
        for a in (1.0, 2.0):
            p = params.replace(alpha=a)
            for x1 in (-1.0, -5.0, -10.0):
                for x2 in np.linspace(-L, L, n):
                    t.add(a, x1, x2, received_power_sic_two_freq(x1, float(x2), p))
        return t
    if fig == 13:
        rep = best_response_dynamics(PlacementPair(-5.0, 5.0), params, Mode.SIC_TWO)
        t = Table(["iteration", "x1", "x2"])
        for k, pp in enumerate(rep.trace):
            t.add(k, pp.x1, pp.x2)
        return t
    raise UsageError(f"no sweep for figure {fig}")


# --- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--L", type=float, default=10.0, help="segment half-length")
    common.add_argument("--alpha", type=float, default=2.0, help="path-loss exponent")
    common.add_argument("--sigma", type=float, default=0.3, help="noise standard deviation")
    common.add_argument("--output", "-o", default=None, help="write CSV here instead of stdout")

    parser = argparse.ArgumentParser(prog="sinrgames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("cells", cmd_cells, "equilibrium cell partition for given placements")
    sp.add_argument("--mode", choices=MODES, default="cdma-single")
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--x2", type=float, required=True)
    sp.add_argument("--belief", choices=[b.value for b in DecodingBelief], default="pessimistic")

    sp = add("fixed-point", cmd_fixed_point, "two-band equilibrium ratio with iterate trace")
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--x2", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--method", choices=["relaxed", "bracket"], default="relaxed")

    sp = add("best-response", cmd_best_response, "utility curve and best response of one BS")
    sp.add_argument("--mode", choices=MODES, default="cdma-single")
    sp.add_argument("--which", type=int, choices=[1, 2], default=2)
    sp.add_argument("--other", type=float, required=True, help="location of the rival BS")
    sp.add_argument("--lo", type=float, default=None)
    sp.add_argument("--hi", type=float, default=None)
    sp.add_argument("--points", type=int, default=401)

    sp = add("equilibrium", cmd_equilibrium, "cooperative optimum or symmetric competitive equilibrium")
    sp.add_argument("--mode", choices=MODES, default="cdma-single")
    sp.add_argument("--kind", choices=["cooperative", "competitive"], default="competitive")
    sp.add_argument("--full", action="store_true", help="search general placement pairs")
    sp.add_argument("--points", type=int, default=401)

    sp = add("dynamics", cmd_dynamics, "best-response dynamics trajectory")
    sp.add_argument("--mode", choices=MODES, default="sic-two")
    sp.add_argument("--x1", type=float, default=-5.0)
    sp.add_argument("--x2", type=float, default=5.0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--max-iter", type=int, default=10_000)
    sp.add_argument("--points", type=int, default=401)

    sp = add("sweep", cmd_sweep, "data behind a figure (see README for numbering)")
    sp.add_argument("--figure", type=int, choices=FIGURES, required=True)
    sp.add_argument("--points", type=int, default=301)

    sp = add("table1", cmd_table1, "cooperative vs competitive symmetric distances")
    sp.add_argument("--at-sigma", type=float, action="append", default=None,
                    help="noise level (repeatable); default: the five table values")
    sp.add_argument("--points", type=int, default=401)

    add("table2", cmd_table2, "fixed-point brackets for the four starting-point cases")

    sp = add("oracle", cmd_oracle, "discrete-population convergence report")
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--doublings", type=int, default=4)

    sp = add("disc2d", cmd_disc2d, "planar disc cell for a given interference ratio")
    sp.add_argument("--p1x", type=float, required=True)
    sp.add_argument("--p1y", type=float, default=0.0)
    sp.add_argument("--p2x", type=float, required=True)
    sp.add_argument("--p2y", type=float, default=0.0)
    sp.add_argument("--B", type=float, required=True)
    return parser


def config_line(parser: argparse.ArgumentParser, args: argparse.Namespace) -> str:
    """Canonical argument string that reproduces ``args``."""
    parts = ["sinrgames", args.command]
    sub = next(a for a in parser._subparsers._group_actions
               if isinstance(a, argparse._SubParsersAction)).choices[args.command]
    for action in sub._actions:
        if not action.option_strings or action.dest in ("help", "output"):
            continue
        value = getattr(args, action.dest)
        flag = max(action.option_strings, key=len)
        if isinstance(action, argparse._StoreTrueAction):
            if value:
                parts.append(flag)
        elif isinstance(action, argparse._AppendAction):
            for v in value or ():
                parts += [flag, repr(v)]
        elif value is not None:
            parts += [flag, repr(value) if isinstance(value, float) else str(value)]
    return " ".join(shlex.quote(p) for p in parts)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = ScenarioParams(args.L, args.alpha, args.sigma)
        table = args.func(args, params)
    except NumericalFailure as exc:
        print(f"sinrgames: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, DegenerateInput, ValueError) as exc:
        print(f"sinrgames: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = table.render(config_line(parser, args))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
