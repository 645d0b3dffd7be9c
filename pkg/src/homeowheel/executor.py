"""Trajectory construction, simulation, validation, and file exchange.

A trajectory is an ordered list of timed waypoints with piecewise-linear
interpolation per servo. Simulation integrates the wheel analytically per
segment: a segment turns the wheel iff both endpoints sit in the same
driving configuration, and then by exactly ``drive_sign * delta_s1``. The
per-segment accounting keeps the canonical even-turn routine exact (720 deg
per loop iteration) instead of tolerance-dependent. While disengaged the
wheel is held, not freewheeling: the reconfiguration steps must not move it
or the whole bookkeeping collapses.

File formats (versioned, deterministic byte output):

* Trajectory file: JSON with a header (format_version, wheel radius, link
  lengths, servo ranges, max rates) and a ``waypoints`` array of
  ``{t, s1, s2, s3}`` objects. Angles in degrees, time in seconds, exact
  decimal text.
* Trace export: comma-delimited text, one row per sample
  ``t,s1,s2,s3,theta_wheel_deg,x_m,engaged,event_flags`` with a mandatory
  header row and values printed to 9 significant digits.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Union

from .errors import InvalidParameter, TrajectoryParseError, ValidationFailure
from .mechanism import (
    DEFAULT_GEOMETRY,
    DEFAULT_LIMITS,
    ENGAGE_TOL,
    GIMBAL_TOL,
    MechanismGeometry,
    ServoLimits,
    ServoState,
    drive_sign,
    engaged,
    gimbal_lock_risk,
    validate_state,
)

TRAJECTORY_FORMAT_VERSION = 1

EVENT_GIMBAL_LOCK_RISK = "GimbalLockRisk"
EVENT_DISENGAGED_SHAFT_MOTION = "DisengagedShaftMotion"
EVENT_RANGE_VIOLATION = "RangeViolation"

FLAG_GIMBAL_LOCK_RISK = 1
FLAG_DISENGAGED_SHAFT_MOTION = 2
FLAG_RANGE_VIOLATION = 4

# Relative guard on rate checks: durations derived as angle / max_rate can
# round so that angle / duration lands one ulp above max_rate.
_RATE_GUARD = 1e-12

# Interpolated samples never step the shaft by more than this, so unwrapped
# angles stay continuous regardless of the requested sample rate.
_MAX_SHAFT_STEP = 90.0


class Policy(enum.Enum):
    """Validation policy: strict rejects disengaged shaft motion, lenient
    downgrades it to a trace warning."""

    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True, slots=True)
class Waypoint:
    t: float
    state: ServoState


@dataclass(frozen=True)
class Trajectory:
    """Timed servo waypoints plus the geometry and limits they assume."""

    geometry: MechanismGeometry = DEFAULT_GEOMETRY
    limits: ServoLimits = DEFAULT_LIMITS
    waypoints: tuple[Waypoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(self.waypoints))

    @classmethod
    def from_states(cls, states: Iterable[ServoState], segment_duration: float = 1.0,
                    geometry: MechanismGeometry = DEFAULT_GEOMETRY,
                    limits: ServoLimits = DEFAULT_LIMITS) -> "Trajectory":
        """Equal-duration waypoints at t = k * segment_duration."""
        if not (math.isfinite(segment_duration) and segment_duration > 0.0):
            raise InvalidParameter(f"segment_duration must be positive, got {segment_duration!r}")
        waypoints = tuple(Waypoint(k * segment_duration, s) for k, s in enumerate(states))
        return cls(geometry=geometry, limits=limits, waypoints=waypoints)

    def segments(self) -> Iterator[tuple[int, Waypoint, Waypoint]]:
        for i in range(len(self.waypoints) - 1):
            yield i, self.waypoints[i], self.waypoints[i + 1]

    @property
    def final_state(self) -> ServoState:
        return self.waypoints[-1].state


@dataclass(frozen=True, slots=True)
class TraceSample:
    t: float
    state: ServoState
    theta_wheel_deg: float
    x_m: float
    engaged: bool
    event_flags: int


@dataclass(frozen=True, slots=True)
class TraceEvent:
    t: float
    kind: str
    detail: str


@dataclass(frozen=True)
class SimTrace:
    """Time-sampled simulation output plus recorded events."""

    samples: tuple[TraceSample, ...]
    events: tuple[TraceEvent, ...]

    @property
    def final_theta_deg(self) -> float:
        return self.samples[-1].theta_wheel_deg

    @property
    def final_x_m(self) -> float:
        return self.samples[-1].x_m

    @property
    def distance_m(self) -> float:
        return self.samples[-1].x_m - self.samples[0].x_m

    def states(self) -> list[ServoState]:
        return [s.state for s in self.samples]

    def times(self) -> list[float]:
        return [s.t for s in self.samples]


# --------------------------------------------------------------------------
# Violations


@dataclass(frozen=True, slots=True)
class EmptyTrajectory:
    def __str__(self) -> str:
        return "EmptyTrajectory: trajectory has no waypoints"


@dataclass(frozen=True, slots=True)
class TimeOrderViolation:
    index: int
    t: float

    def __str__(self) -> str:
        return f"TimeOrderViolation at waypoint {self.index}: t={self.t!r} does not increase"


@dataclass(frozen=True, slots=True)
class WaypointRangeViolation:
    index: int
    servo: str
    value: float
    lo: float
    hi: float

    def __str__(self) -> str:
        return (f"RangeViolation {self.servo} at waypoint {self.index}: "
                f"{self.value!r} outside [{self.lo}, {self.hi}]")


@dataclass(frozen=True, slots=True)
class RateViolation:
    segment: int
    servo: str
    rate: float
    max_rate: float

    def __str__(self) -> str:
        return (f"RateViolation {self.servo} on segment {self.segment}: "
                f"{self.rate!r} deg/s exceeds {self.max_rate!r} deg/s")


@dataclass(frozen=True, slots=True)
class DisengagedShaftMotion:
    segment: int
    t_start: float
    t_end: float
    shaft_delta: float

    def __str__(self) -> str:
        return (f"DisengagedShaftMotion on segment {self.segment} "
                f"[{self.t_start!r}, {self.t_end!r}]: shaft moves "
                f"{self.shaft_delta!r} deg with the clutch open")


Violation = Union[EmptyTrajectory, TimeOrderViolation, WaypointRangeViolation,
                  RateViolation, DisengagedShaftMotion]


# --------------------------------------------------------------------------
# Construction


def segment_drive(start: ServoState, end: ServoState, tol: float = ENGAGE_TOL) -> int:
    """Wheel coupling over a linear segment: the common drive sign of both
    endpoints, or 0.

    Endpoints engaged in opposite configurations also yield 0: the clutch
    opens mid-segment, so any shaft motion there leaves the wheel held.
    """
    sign = drive_sign(start, tol)
    if sign != 0 and sign == drive_sign(end, tol):
        return sign
    return 0


def build_rotate_wheel_2n(n: int, segment_duration: float = 1.0,
                          geometry: MechanismGeometry = DEFAULT_GEOMETRY,
                          limits: ServoLimits = DEFAULT_LIMITS) -> Trajectory:
    """The canonical even-turn routine: 2n forward wheel revolutions.

    From rest, engage (s3 to -90, then s2 to +90); each of the n loop
    iterations sweeps the shaft up (wheel +360), swaps sides (s3, then s2),
    sweeps the shaft back down (wheel +360 again), and swaps back; finally
    return s3 and s2 to rest. One waypoint per servo move, in that exact
    order: 6n + 4 segments, ending at the home state with every twist back
    at zero.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    states = [
        ServoState(0.0, 0.0, 0.0),
        ServoState(0.0, 0.0, -90.0),
        ServoState(0.0, 90.0, -90.0),
    ]
    for _ in range(n):
        states += [
            ServoState(360.0, 90.0, -90.0),   # shaft up: wheel +360
            ServoState(360.0, 90.0, 90.0),
            ServoState(360.0, -90.0, 90.0),
            ServoState(0.0, -90.0, 90.0),     # shaft down: wheel +360 again
            ServoState(0.0, -90.0, -90.0),
            ServoState(0.0, 90.0, -90.0),
        ]
    states += [
        ServoState(0.0, 90.0, 0.0),
        ServoState(0.0, 0.0, 0.0),
    ]
    return Trajectory.from_states(states, segment_duration, geometry, limits)


# --------------------------------------------------------------------------
# Validation


def validate_trajectory(trajectory: Trajectory, policy: Policy = Policy.STRICT,
                        engage_tol: float = ENGAGE_TOL) -> list[Violation]:
    """Report every constraint violation in the trajectory.

    Checks time monotonicity, per-waypoint ranges, and per-segment rates.
    Interpolation is linear on the authored values, so the shaft's lifted
    angle along a segment stays between its in-range endpoints by convexity;
    in particular a 350 -> 10 segment is the -340 sweep, never a +20
    wraparound, and is legal only if the rate limit admits it. Under the
    strict policy, segments that move the shaft with the clutch open are
    violations; the lenient policy leaves them as trace warnings.
    """
    waypoints = trajectory.waypoints
    if not waypoints:
        return [EmptyTrajectory()]
    violations: list[Violation] = []
    for index, wp in enumerate(waypoints):
        for v in validate_state(wp.state, trajectory.limits):
            violations.append(WaypointRangeViolation(index, v.servo, v.value, v.lo, v.hi))
    for i, a, b in trajectory.segments():
        if not b.t > a.t:
            violations.append(TimeOrderViolation(i + 1, b.t))
            continue
        dt = b.t - a.t
        for servo, delta in (("s1", b.state.s1 - a.state.s1),
                             ("s2", b.state.s2 - a.state.s2),
                             ("s3", b.state.s3 - a.state.s3)):
            rate = abs(delta) / dt
            max_rate = trajectory.limits.rate_of(servo)
            if rate > max_rate * (1.0 + _RATE_GUARD):
                violations.append(RateViolation(i, f"servo{servo[-1]}", rate, max_rate))
        if policy is Policy.STRICT:
            d_s1 = b.state.s1 - a.state.s1
            if d_s1 != 0.0 and segment_drive(a.state, b.state, engage_tol) == 0:
                violations.append(DisengagedShaftMotion(i, a.t, b.t, d_s1))
    return violations


# --------------------------------------------------------------------------
# Simulation


def simulate(trajectory: Trajectory, sample_rate: float = 50.0, *,
             check: bool = True, engage_tol: float = ENGAGE_TOL,
             gimbal_tol: float = GIMBAL_TOL) -> SimTrace:
    """Integrate the wheel through the clutch model and sample the motion.

    The wheel increment of each segment is computed analytically from its
    endpoints (``segment_drive * delta_s1``), so results are exact at
    waypoints; dense samples between waypoints serve the exported trace.
    Odometry is the rolling relation x = radius * theta in radians at every
    sample. Events record gimbal-lock risk (one per offending segment) and
    disengaged shaft motion.

    With ``check`` (the default), range/rate/time violations raise
    :class:`ValidationFailure`. With ``check=False`` the trajectory is
    simulated as-is and out-of-range waypoints become trace events, which
    lets diagnostic tools report on broken files.
    """
    if not (math.isfinite(sample_rate) and sample_rate > 0.0):
        raise InvalidParameter(f"sample_rate must be positive, got {sample_rate!r}")
    waypoints = trajectory.waypoints
    if not waypoints:
        raise ValidationFailure([EmptyTrajectory()])
    if check:
        hard = validate_trajectory(trajectory, policy=Policy.LENIENT)
        if hard:
            raise ValidationFailure(hard)

    radius = trajectory.geometry.wheel_radius
    limits = trajectory.limits
    samples: list[TraceSample] = []
    events: list[TraceEvent] = []
    theta = 0.0

    if not check:
        for index, wp in enumerate(waypoints):
            for v in validate_state(wp.state, limits):
                events.append(TraceEvent(wp.t, EVENT_RANGE_VIOLATION,
                                         f"waypoint {index}: {v}"))

    def out_of_range(state: ServoState) -> bool:
        return bool(validate_state(state, limits)) if not check else False

    def emit(t: float, state: ServoState, theta_now: float, flags: int) -> None:
        if out_of_range(state):
            flags |= FLAG_RANGE_VIOLATION
        samples.append(TraceSample(t, state, theta_now,
                                   radius * math.radians(theta_now),
                                   engaged(state, engage_tol), flags))

    for i, a, b in trajectory.segments():
        seg_dt = b.t - a.t
        d_s1 = b.state.s1 - a.state.s1
        drive = segment_drive(a.state, b.state, engage_tol)
        base_flags = 0
        if drive == 0 and d_s1 != 0.0:
            base_flags |= FLAG_DISENGAGED_SHAFT_MOTION
            events.append(TraceEvent(a.t, EVENT_DISENGAGED_SHAFT_MOTION,
                                     f"segment {i}: shaft delta {d_s1!r} deg with the clutch open"))
        s1_rate = d_s1 / seg_dt if seg_dt > 0.0 else 0.0
        if seg_dt > 0.0:
            subdivisions = max(int(math.ceil(seg_dt * sample_rate)),
                               int(math.ceil(abs(d_s1) / _MAX_SHAFT_STEP)), 1)
        else:
            subdivisions = 1
        gimbal_seen = False
        for j in range(subdivisions):
            if j == 0:
                t, state = a.t, a.state
            else:
                alpha = j / subdivisions
                t = a.t + seg_dt * alpha
                state = ServoState(
                    a.state.s1 + d_s1 * alpha,
                    a.state.s2 + (b.state.s2 - a.state.s2) * alpha,
                    a.state.s3 + (b.state.s3 - a.state.s3) * alpha,
                )
            flags = base_flags
            if gimbal_lock_risk(state, s1_rate, gimbal_tol):
                flags |= FLAG_GIMBAL_LOCK_RISK
                if not gimbal_seen:
                    gimbal_seen = True
                    events.append(TraceEvent(
                        t, EVENT_GIMBAL_LOCK_RISK,
                        f"segment {i}: shaft turning at {s1_rate!r} deg/s through s2=s3=0"))
            theta_now = theta + drive * (state.s1 - a.state.s1) if drive else theta
            emit(t, state, theta_now, flags)
        theta += drive * d_s1

    last = waypoints[-1]
    emit(last.t, last.state, theta, 0)
    events.sort(key=lambda e: (e.t, e.kind, e.detail))
    return SimTrace(tuple(samples), tuple(events))


# --------------------------------------------------------------------------
# Trajectory file format


def trajectory_to_json(trajectory: Trajectory) -> str:
    """Serialize to the versioned trajectory file format (deterministic bytes)."""
    g, l = trajectory.geometry, trajectory.limits
    doc = {
        "format_version": TRAJECTORY_FORMAT_VERSION,
        "wheel_radius_m": g.wheel_radius,
        "gantry_offset_m": g.gantry_offset,
        "upper_link_length_m": g.upper_link_length,
        "lower_link_length_m": g.lower_link_length,
        "servo_ranges_deg": {
            "s1": list(l.s1_range), "s2": list(l.s2_range), "s3": list(l.s3_range),
        },
        "max_rates_deg_per_s": {
            "s1": l.s1_max_rate, "s2": l.s2_max_rate, "s3": l.s3_max_rate,
        },
        "waypoints": [
            {"t": wp.t, "s1": wp.state.s1, "s2": wp.state.s2, "s3": wp.state.s3}
            for wp in trajectory.waypoints
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_trajectory_file(trajectory: Trajectory, path) -> None:
    Path(path).write_text(trajectory_to_json(trajectory), encoding="utf-8")


def _require(obj: dict, key: str, kind, location: str):
    if key not in obj:
        raise TrajectoryParseError(f"missing required field {key!r}", location=location)
    value = obj[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TrajectoryParseError(f"field {key!r} must be a number",
                                       location=f"{location}.{key}")
        return float(value)
    if not isinstance(value, kind):
        raise TrajectoryParseError(f"field {key!r} has the wrong type",
                                   location=f"{location}.{key}")
    return value


def _pair(obj: dict, key: str, location: str) -> tuple[float, float]:
    value = _require(obj, key, list, location)
    if len(value) != 2 or any(isinstance(v, bool) or not isinstance(v, (int, float))
                              for v in value):
        raise TrajectoryParseError(f"field {key!r} must be a [min, max] pair",
                                   location=f"{location}.{key}")
    return (float(value[0]), float(value[1]))


def parse_trajectory(text: str) -> Trajectory:
    """Parse the trajectory file format; raises :class:`TrajectoryParseError`
    with line/column (lexical) or location (schema) diagnostics."""
    def reject_constant(name: str):
        raise TrajectoryParseError(f"non-finite number {name!r} is not allowed")

    try:
        doc = json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise TrajectoryParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise TrajectoryParseError("top level must be an object", location="$")
    version = _require(doc, "format_version", int, "$")
    if version != TRAJECTORY_FORMAT_VERSION:
        raise TrajectoryParseError(
            f"unsupported format_version {version!r} "
            f"(expected {TRAJECTORY_FORMAT_VERSION})", location="$.format_version")
    try:
        geometry = MechanismGeometry(
            wheel_radius=_require(doc, "wheel_radius_m", float, "$"),
            gantry_offset=_require(doc, "gantry_offset_m", float, "$"),
            upper_link_length=_require(doc, "upper_link_length_m", float, "$"),
            lower_link_length=_require(doc, "lower_link_length_m", float, "$"),
        )
        ranges = _require(doc, "servo_ranges_deg", dict, "$")
        rates = _require(doc, "max_rates_deg_per_s", dict, "$")
        limits = ServoLimits(
            s1_range=_pair(ranges, "s1", "$.servo_ranges_deg"),
            s2_range=_pair(ranges, "s2", "$.servo_ranges_deg"),
            s3_range=_pair(ranges, "s3", "$.servo_ranges_deg"),
            s1_max_rate=_require(rates, "s1", float, "$.max_rates_deg_per_s"),
            s2_max_rate=_require(rates, "s2", float, "$.max_rates_deg_per_s"),
            s3_max_rate=_require(rates, "s3", float, "$.max_rates_deg_per_s"),
        )
    except InvalidParameter as exc:
        raise TrajectoryParseError(f"invalid header value: {exc}", location="$") from exc
    raw_waypoints = _require(doc, "waypoints", list, "$")
    if not raw_waypoints:
        raise TrajectoryParseError("waypoints must be non-empty", location="$.waypoints")
    waypoints = []
    for idx, entry in enumerate(raw_waypoints):
        location = f"$.waypoints[{idx}]"
        if not isinstance(entry, dict):
            raise TrajectoryParseError("waypoint must be an object", location=location)
        waypoints.append(Waypoint(
            _require(entry, "t", float, location),
            ServoState(_require(entry, "s1", float, location),
                       _require(entry, "s2", float, location),
                       _require(entry, "s3", float, location)),
        ))
    return Trajectory(geometry=geometry, limits=limits, waypoints=tuple(waypoints))


def read_trajectory_file(path) -> Trajectory:
    return parse_trajectory(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# Trace export

TRACE_HEADER = "t,s1,s2,s3,theta_wheel_deg,x_m,engaged,event_flags"


def trace_to_csv(trace: SimTrace) -> str:
    """Delimited trace text: mandatory header, 9 significant digits."""
    lines = [TRACE_HEADER]
    for s in trace.samples:
        lines.append(f"{s.t:.9g},{s.state.s1:.9g},{s.state.s2:.9g},{s.state.s3:.9g},"
                     f"{s.theta_wheel_deg:.9g},{s.x_m:.9g},{int(s.engaged)},{s.event_flags}")
    return "\n".join(lines) + "\n"


def write_trace_file(trace: SimTrace, path) -> None:
    Path(path).write_text(trace_to_csv(trace), encoding="utf-8")
