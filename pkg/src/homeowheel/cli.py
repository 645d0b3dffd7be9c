"""Command-line front end.

Subcommands: ``simulate`` (canonical even-turn routine), ``plan`` (arbitrary
rotation or distance), ``gait`` (periodic rectification gait), ``check``
(trajectory file verification), ``scale`` (size scaling report).

Summaries go to standard output as ``key=value`` lines with 9 fixed decimal
places, so identical invocations produce byte-identical output, files
included. Exit codes: 0 clean, 1 constraint or feasibility failure, 2 usage
error, 3 file parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import (
    InvalidParameter,
    RateInfeasible,
    TrajectoryParseError,
    ValidationFailure,
)
from .executor import (
    Policy,
    build_rotate_wheel_2n,
    read_trajectory_file,
    simulate,
    validate_trajectory,
    write_trace_file,
    write_trajectory_file,
)
from .mechanism import DEFAULT_GEOMETRY, DEFAULT_LIMITS, MechanismGeometry, ServoLimits
from .planner import count_engaged_sweeps, generate_gait, plan_distance, plan_rotation
from .scaling import ScalingModel, scale
from .tegument import check_integrity, ledger_history

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


def _fmt(value: float) -> str:
    return f"{value:.9f}"


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not (math.isfinite(value) and value > 0.0):
        raise argparse.ArgumentTypeError(f"{text!r} must be positive and finite")
    return value


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} must be finite")
    return value


def _length_list(text: str) -> list[float]:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of lengths")
    return [_positive_float(piece.strip()) for piece in items]


def _policy(text: str) -> Policy:
    return Policy(text)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameter(f"cannot read config {path!r}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidParameter(f"config {path!r} must be a JSON object")
    return doc


def _resolve_setup(args) -> tuple[MechanismGeometry, ServoLimits]:
    """Defaults, overridden by --config, overridden by explicit flags."""
    config = _load_config(getattr(args, "config", None))
    try:
        geometry = MechanismGeometry(
            wheel_radius=config.get("wheel_radius_m", DEFAULT_GEOMETRY.wheel_radius),
            gantry_offset=config.get("gantry_offset_m", DEFAULT_GEOMETRY.gantry_offset),
            upper_link_length=config.get("upper_link_length_m",
                                         DEFAULT_GEOMETRY.upper_link_length),
            lower_link_length=config.get("lower_link_length_m",
                                         DEFAULT_GEOMETRY.lower_link_length),
        )
        ranges = config.get("servo_ranges_deg", {})
        rates = config.get("max_rates_deg_per_s", {})
        limits = ServoLimits(
            s1_range=tuple(ranges.get("s1", DEFAULT_LIMITS.s1_range)),
            s2_range=tuple(ranges.get("s2", DEFAULT_LIMITS.s2_range)),
            s3_range=tuple(ranges.get("s3", DEFAULT_LIMITS.s3_range)),
            s1_max_rate=rates.get("s1", DEFAULT_LIMITS.s1_max_rate),
            s2_max_rate=rates.get("s2", DEFAULT_LIMITS.s2_max_rate),
            s3_max_rate=rates.get("s3", DEFAULT_LIMITS.s3_max_rate),
        )
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"invalid config: {exc}") from exc
    radius = getattr(args, "radius_m", None)
    if radius is not None:
        geometry = MechanismGeometry(
            wheel_radius=radius,
            gantry_offset=geometry.gantry_offset,
            upper_link_length=geometry.upper_link_length,
            lower_link_length=geometry.lower_link_length,
        )
    return geometry, limits


def _print_motion_summary(trace, limits) -> None:
    ledgers = ledger_history(trace.states())
    report = check_integrity(ledgers, limits, trace.times())
    print(f"theta_wheel_deg={_fmt(trace.final_theta_deg)}")
    print(f"x_m={_fmt(trace.final_x_m)}")
    print(f"max_twist_body_gantry_deg={_fmt(report.max_abs_twist[0])}")
    print(f"max_twist_shaft_axial_deg={_fmt(report.max_abs_twist[1])}")
    print(f"max_twist_wrist_deg={_fmt(report.max_abs_twist[2])}")
    print(f"integrity_ok={int(report.ok)}")
    print(f"events={len(trace.events)}")


def _report_violations(violations) -> None:
    print(f"violations={len(violations)}")
    for violation in violations:
        print(f"violation={violation}")


def cmd_simulate(args) -> int:
    geometry, limits = _resolve_setup(args)
    trajectory = build_rotate_wheel_2n(args.n, geometry=geometry, limits=limits)
    trace = simulate(trajectory, sample_rate=args.sample_rate_hz)
    violations = validate_trajectory(trajectory, policy=args.policy)
    if args.out:
        write_trace_file(trace, args.out)
    if args.out_traj:
        write_trajectory_file(trajectory, args.out_traj)
    _print_motion_summary(trace, limits)
    _report_violations(violations)
    return EXIT_OK if not violations else EXIT_VIOLATION


def cmd_plan(args) -> int:
    geometry, limits = _resolve_setup(args)
    if args.target_deg is not None:
        trajectory = plan_rotation(args.target_deg, limits=limits, geometry=geometry)
    else:
        trajectory = plan_distance(args.distance_m, geometry=geometry, limits=limits)
    violations = validate_trajectory(trajectory, policy=args.policy)
    trace = simulate(trajectory, sample_rate=args.sample_rate_hz)
    write_trajectory_file(trajectory, args.out)
    print(f"waypoints={len(trajectory.waypoints)}")
    print(f"segments={max(len(trajectory.waypoints) - 1, 0)}")
    print(f"engaged_sweeps={count_engaged_sweeps(trajectory)}")
    print(f"predicted_theta_wheel_deg={_fmt(trace.final_theta_deg)}")
    print(f"predicted_x_m={_fmt(trace.final_x_m)}")
    _report_violations(violations)
    return EXIT_OK if not violations else EXIT_VIOLATION


def cmd_gait(args) -> int:
    geometry, limits = _resolve_setup(args)
    trajectory = generate_gait(args.period_s, args.cycles, limits=limits, geometry=geometry)
    violations = validate_trajectory(trajectory, policy=args.policy)
    trace = simulate(trajectory, sample_rate=args.sample_rate_hz)
    write_trajectory_file(trajectory, args.out)
    print(f"waypoints={len(trajectory.waypoints)}")
    print(f"period_s={_fmt(args.period_s)}")
    print(f"cycles={args.cycles}")
    _print_motion_summary(trace, limits)
    _report_violations(violations)
    return EXIT_OK if not violations else EXIT_VIOLATION


def cmd_check(args) -> int:
    trajectory = read_trajectory_file(args.trajectory)
    violations = validate_trajectory(trajectory, policy=args.policy)
    trace = simulate(trajectory, sample_rate=args.sample_rate_hz, check=False)
    ledgers = ledger_history(trace.states())
    report = check_integrity(ledgers, trajectory.limits, trace.times())
    _report_violations(violations)
    print(f"integrity_ok={int(report.ok)}")
    for issue in report.violations:
        print(f"integrity_violation={issue}")
    print(f"max_twist_body_gantry_deg={_fmt(report.max_abs_twist[0])}")
    print(f"max_twist_shaft_axial_deg={_fmt(report.max_abs_twist[1])}")
    print(f"max_twist_wrist_deg={_fmt(report.max_abs_twist[2])}")
    print(f"theta_wheel_deg={_fmt(trace.final_theta_deg)}")
    print(f"events={len(trace.events)}")
    for event in trace.events:
        print(f"event={event.kind} t={event.t:.9g} {event.detail}")
    clean = not violations and report.ok
    print(f"ok={int(clean)}")
    return EXIT_OK if clean else EXIT_VIOLATION


def cmd_scale(args) -> int:
    model = ScalingModel(length_ref=args.ref_length_m, mass_ref=args.ref_mass_kg,
                         force_ref=args.ref_force_n)
    rows = [(length, scale(model, length)) for length in args.lengths_m]
    for length, row in rows:
        print(f"L_m={_fmt(length)} mass_kg={_fmt(row.mass_kg)} "
              f"force_n={_fmt(row.force_n)} accel_m_s2={_fmt(row.accel_m_s2)}")
    if len(rows) >= 2:
        ratio = rows[-1][1].accel_m_s2 / rows[0][1].accel_m_s2
        print(f"accel_ratio={_fmt(ratio)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homeowheel",
        description="Simulate, plan, and verify motions of the homeostatic wheel mechanism.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_radius=True):
        p.add_argument("--sample-rate-hz", type=_positive_float, default=50.0,
                       help="trace sampling rate (default 50)")
        p.add_argument("--policy", type=_policy, choices=list(Policy), default=Policy.STRICT,
                       metavar="strict|lenient",
                       help="strict rejects disengaged shaft motion (default strict)")
        p.add_argument("--config", default=None,
                       help="JSON file overriding geometry and servo limits")
        if with_radius:
            p.add_argument("--radius-m", type=_positive_float, default=None,
                           help="wheel radius in meters (default 0.10)")

    p_sim = sub.add_parser("simulate", help="run the canonical 2n-revolution routine")
    p_sim.add_argument("--n", type=_positive_int, required=True,
                       help="number of loop iterations (wheel turns 720 deg each)")
    p_sim.add_argument("--out", default=None, help="trace CSV output path")
    p_sim.add_argument("--out-traj", default=None, help="also write the trajectory file here")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_plan = sub.add_parser("plan", help="plan a wheel rotation or rolling distance")
    goal = p_plan.add_mutually_exclusive_group(required=True)
    goal.add_argument("--target-deg", type=_finite_float, default=None,
                      help="signed net wheel rotation in degrees")
    goal.add_argument("--distance-m", type=_finite_float, default=None,
                      help="signed rolling distance in meters")
    p_plan.add_argument("--out", required=True, help="trajectory file output path")
    add_common(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_gait = sub.add_parser("gait", help="generate the periodic rectification gait")
    p_gait.add_argument("--period-s", type=_positive_float, required=True,
                        help="gait period in seconds")
    p_gait.add_argument("--cycles", type=_positive_int, required=True,
                        help="number of periods")
    p_gait.add_argument("--out", required=True, help="trajectory file output path")
    add_common(p_gait)
    p_gait.set_defaults(func=cmd_gait)

    p_check = sub.add_parser("check", help="verify a trajectory file")
    p_check.add_argument("trajectory", help="trajectory file to check")
    add_common(p_check, with_radius=False)
    p_check.set_defaults(func=cmd_check)

    p_scale = sub.add_parser("scale", help="report the size scaling laws")
    p_scale.add_argument("--lengths-m", type=_length_list, required=True,
                         help="comma-separated sizes in meters, e.g. 1,0.1")
    p_scale.add_argument("--ref-length-m", type=_positive_float, default=1.0)
    p_scale.add_argument("--ref-mass-kg", type=_positive_float, default=1.0)
    p_scale.add_argument("--ref-force-n", type=_positive_float, default=1.0)
    p_scale.set_defaults(func=cmd_scale)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrajectoryParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RateInfeasible as exc:
        print(f"error=RateInfeasible detail={exc}")
        return EXIT_VIOLATION
    except ValidationFailure as exc:
        print("error=ValidationFailure")
        for violation in exc.violations:
            print(f"violation={violation}")
        return EXIT_VIOLATION
    except InvalidParameter as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
