"""Command-line front end: grids, slices, time series, validation, calibration.

Angles may be given in radians or in units of pi with a 'pi' suffix; note
that values starting with '-' must use the '--flag=value' form (e.g.
``--sigma-b=-1.1pi``) so they are not mistaken for options.

Exit codes: 0 success, 1 numeric or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .errors import FringeError
from .fock import TruncationPolicy
from .interference import ModeParams, calibrate_q
from .states import make_product, make_rho_ent, make_rho_sep, load_state
from .sweeps import (
    DEFAULT_OMEGA1,
    DEFAULT_OMEGA2,
    DEFAULT_Q,
    GRID_QUANTITIES,
    compute_grid,
    compute_slice,
    compute_timeseries,
    default_axis,
    parse_angle,
    write_grid_csv,
    write_series_csv,
)
from .validate import format_report, run_all

__all__ = ["build_parser", "main", "console"]


class _UsageError(Exception):
    """Bad flag combination or value; reported with exit code 2."""


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"dims must be comma-separated integers, got {text!r}"
        ) from exc
    if not dims:
        raise argparse.ArgumentTypeError("dims must not be empty")
    return dims


def _parse_angle_arg(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"bad angle {text!r} (use radians or a pi suffix, e.g. -1.1pi)"
        ) from exc


def _add_field_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("field parameters")
    group.add_argument("--q", type=float, default=None,
                       help=f"coupling q (default {DEFAULT_Q})")
    group.add_argument("--charge", type=float, default=None,
                       help="charge e; q is then xi*e/sqrt(2)")
    group.add_argument("--xi", type=float, default=1.0,
                       help="loop constant xi (default 1)")
    group.add_argument("--omega1", type=float, default=DEFAULT_OMEGA1,
                       help=f"mode-a frequency (default {DEFAULT_OMEGA1:g})")
    group.add_argument("--omega2", type=float, default=DEFAULT_OMEGA2,
                       help=f"mode-b frequency (default {DEFAULT_OMEGA2:g})")
    group.add_argument("--dims", type=_parse_dims, default=(16,),
                       help="comma-separated truncation cutoffs; sweeps start "
                            "from the first, validate compares all (default 16)")
    group.add_argument("--tol", type=float, default=1e-12,
                       help="truncation convergence tolerance (default 1e-12)")


def _add_out_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, metavar="FILE",
                        help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abfringe",
        description="Fringe correlations of two distant electron "
                    "interferometers coupled to a two-mode quantized field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    grid = sub.add_parser(
        "grid", help="sample a quantity over a (sigma_a, sigma_b) grid")
    grid.add_argument("--quantity", required=True, choices=GRID_QUANTITIES)
    grid.add_argument("--state", default="sep",
                      help="sep | ent | product | state-file path "
                           "(numeric quantities only; default sep)")
    grid.add_argument("--grid-n", type=int, default=101,
                      help="points per axis over [-2pi, 2pi] (default 101)")
    grid.add_argument("--time", type=float, default=None,
                      help="evaluation time (default 0; for r-ent the "
                           "half-beat time pi/(omega1-omega2))")
    _add_field_options(grid)
    _add_out_option(grid)
    grid.set_defaults(func=cmd_grid)

    slc = sub.add_parser(
        "slice", help="closed-form ratios along sigma_a at fixed sigma_b")
    slc.add_argument("--sigma-b", type=_parse_angle_arg, default="-1.1pi",
                     help="fixed sigma_b (default -1.1pi)")
    slc.add_argument("--grid-n", type=int, default=101,
                     help="sigma_a sample count over [-2pi, 2pi] (default 101)")
    slc.add_argument("--time", type=float, default=None,
                     help="evaluation time (default: pi/(omega1-omega2))")
    _add_field_options(slc)
    _add_out_option(slc)
    slc.set_defaults(func=cmd_slice)

    ts = sub.add_parser(
        "timeseries", help="closed-form ratios against time at a screen point")
    ts.add_argument("--sigma-a", type=_parse_angle_arg, default="0.98pi",
                    help="sigma_a (default 0.98pi)")
    ts.add_argument("--sigma-b", type=_parse_angle_arg, default="-1.1pi",
                    help="sigma_b (default -1.1pi)")
    ts.add_argument("--t-samples", type=int, default=1024,
                    help="number of samples (default 1024)")
    ts.add_argument("--time", type=float, default=None,
                    help="total duration; samples exclude the endpoint "
                         "(default: one beat period 2pi/|omega1-omega2|)")
    _add_field_options(ts)
    _add_out_option(ts)
    ts.set_defaults(func=cmd_timeseries)

    val = sub.add_parser("validate", help="run the library's invariant suite")
    val.add_argument("--perturb", action="store_true",
                     help="flip the reference entangled state's off-diagonal "
                          "sign pair (fault injection; the suite must fail)")
    _add_field_options(val)
    val.set_defaults(func=cmd_validate, dims=(16, 32, 64))

    cal = sub.add_parser(
        "calibrate", help="recover the coupling q from a target ratio bound")
    cal.add_argument("--which", required=True, choices=("min", "max"))
    cal.add_argument("--target", required=True, type=float,
                     help="target value of the chosen bound")
    cal.add_argument("--other-target", type=float, default=None,
                     help="value to compare the other bound against")
    cal.set_defaults(func=cmd_calibrate)

    return parser


# ---------------------------------------------------------------------------
# Shared resolution helpers
# ---------------------------------------------------------------------------

def _resolve_q(args: argparse.Namespace) -> float:
    if args.xi <= 0 or not math.isfinite(args.xi):
        raise _UsageError(f"--xi must be positive, got {args.xi}")
    if args.q is None and args.charge is None:
        return DEFAULT_Q
    if args.q is None:
        q = args.xi * args.charge / math.sqrt(2.0)
    elif args.charge is None:
        q = args.q
    else:
        implied = args.xi * args.charge / math.sqrt(2.0)
        if abs(args.q - implied) > 1e-12 * max(1.0, abs(args.q)):
            raise _UsageError(
                f"--q {args.q} and --charge {args.charge} disagree "
                f"(xi*charge/sqrt(2) = {implied})"
            )
        q = args.q
    if q < 0 or not math.isfinite(q):
        raise _UsageError(f"coupling q must be non-negative, got {q}")
    return q


def _resolve_modes(args: argparse.Namespace) -> tuple[ModeParams, ModeParams]:
    q = _resolve_q(args)
    for name, omega in (("--omega1", args.omega1), ("--omega2", args.omega2)):
        if omega <= 0 or not math.isfinite(omega):
            raise _UsageError(f"{name} must be positive, got {omega}")
    return (ModeParams(args.omega1, q, args.xi),
            ModeParams(args.omega2, q, args.xi))


def _resolve_policy(args: argparse.Namespace) -> TruncationPolicy:
    dims = args.dims
    if any(d < 2 for d in dims):
        raise _UsageError(f"--dims entries must be >= 2, got {dims}")
    if args.tol <= 0:
        raise _UsageError(f"--tol must be positive, got {args.tol}")
    initial = dims[0]
    return TruncationPolicy(initial_dim=initial,
                            max_dim=max(256, 4 * initial), tol=args.tol)


def _resolve_state(text: str):
    if text == "sep":
        return make_rho_sep()
    if text == "ent":
        return make_rho_ent()
    if text == "product":
        vacuum = np.zeros((2, 2), complex)
        vacuum[0, 0] = 1.0
        return make_product(vacuum, vacuum, label="product")
    path = Path(text)
    if not path.exists():
        raise FringeError(f"state file not found: {text}")
    return load_state(path.read_text(encoding="utf-8"), label=path.name)


def _default_beat_time(args: argparse.Namespace) -> float | None:
    if args.omega1 != args.omega2:
        return math.pi / (args.omega1 - args.omega2)
    return None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_grid(args: argparse.Namespace) -> int:
    mode_a, mode_b = _resolve_modes(args)
    policy = _resolve_policy(args)
    if args.grid_n < 2:
        raise _UsageError(f"--grid-n must be >= 2, got {args.grid_n}")
    if args.time is not None:
        time = args.time
    elif args.quantity == "r-ent":
        time = _default_beat_time(args) or 0.0
    else:
        time = 0.0
    state = None
    if args.quantity in ("i-numeric", "r-numeric"):
        state = _resolve_state(args.state)
    axis = default_axis(args.grid_n)
    grid = compute_grid(args.quantity, axis, axis, mode_a, mode_b,
                        time=time, state=state, policy=policy)
    _emit(write_grid_csv(grid), args.out)
    return 0


def cmd_slice(args: argparse.Namespace) -> int:
    mode_a, mode_b = _resolve_modes(args)
    policy = _resolve_policy(args)
    if args.grid_n < 2:
        raise _UsageError(f"--grid-n must be >= 2, got {args.grid_n}")
    if args.time is not None:
        time = args.time
    else:
        time = _default_beat_time(args) or 0.0
    axis = default_axis(args.grid_n)
    series = compute_slice(axis, args.sigma_b, mode_a, mode_b, time,
                           policy=policy)
    _emit(write_series_csv(series), args.out)
    return 0


def cmd_timeseries(args: argparse.Namespace) -> int:
    mode_a, mode_b = _resolve_modes(args)
    policy = _resolve_policy(args)
    if args.t_samples < 2:
        raise _UsageError(f"--t-samples must be >= 2, got {args.t_samples}")
    if args.time is not None:
        duration = args.time
    else:
        if args.omega1 == args.omega2:
            raise _UsageError(
                "beat period undefined for omega1 == omega2; give --time"
            )
        duration = 2.0 * math.pi / abs(args.omega1 - args.omega2)
    if duration <= 0:
        raise _UsageError(f"--time must be positive, got {duration}")
    times = duration * np.arange(args.t_samples) / args.t_samples
    series = compute_timeseries(times, args.sigma_a, args.sigma_b,
                                mode_a, mode_b, policy=policy)
    _emit(write_series_csv(series), args.out)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    q = _resolve_q(args)
    if any(d < 2 for d in args.dims):
        raise _UsageError(f"--dims entries must be >= 2, got {args.dims}")
    results = run_all(q=q, dims=tuple(args.dims), perturb=args.perturb)
    print(format_report(results))
    return 0 if all(r.passed for r in results) else 1


def cmd_calibrate(args: argparse.Namespace) -> int:
    result = calibrate_q(args.target, args.which)
    g = lambda x: format(x, ".17g")
    print(f"which bound:   {result.which}")
    print(f"target value:  {g(result.target)}")
    print(f"recovered q:   {g(result.q)}")
    print(f"bound min:     {g(result.bound_min)}")
    print(f"bound max:     {g(result.bound_max)}")
    if args.other_target is not None:
        other = result.bound_max if args.which == "min" else result.bound_min
        residual = abs(other - args.other_target)
        print(f"cross residual vs {g(args.other_target)}: {residual:.6e}")
    return 0


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"abfringe: usage error: {exc}", file=sys.stderr)
        return 2
    except FringeError as exc:
        print(f"abfringe: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"abfringe: error: {exc}", file=sys.stderr)
        return 1


def console() -> None:
    sys.exit(main())
