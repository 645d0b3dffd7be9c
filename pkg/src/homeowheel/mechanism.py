"""Kinematic model of the three-servo homeostatic wheel.

The mechanism is a serial chain: the body carries a gantry swung by Servo 2,
the gantry carries the center shaft twisted by Servo 1, and Servo 3 pivots
the wheel assembly at the wrist. The wheel is driven through a clutch-like
engagement: only in the two mirror configurations (s2, s3) = (+90, -90) and
(-90, +90) does Servo 1 torque reach the wheel, and the sign of the coupling
flips with the side of the gantry, which is what rectifies back-and-forth
shaft twists into one-directional rolling.

Frame conventions (nothing about the mechanism pins the axes down, so these
are package conventions; swap them here if a physical build requires it):

* body: x = travel direction, y = lateral toward the engaged axle, z = up.
* Servo 2 swings the gantry about body x, carrying the shaft from one side
  of the wheel, over the top, to the other side.
* Servo 1 twists the center shaft about its own gantry-fixed axis (gantry
  local z), which is vertical at s2 = 0 and aligns with -+y at s2 = +-90.
* The elbow is a fixed bend: the lower link leaves the center-shaft tip
  along the shaft frame's local x, so it sweeps like a crank as s1 turns.
  The elbow frame coincides with the center-shaft tip frame.
* Servo 3 pivots the wheel about the lower-link axis (shaft-frame local x).
  The wheel hub frame coincides with the wrist frame; the wheel spins about
  the hub frame's y axis via the clutch, not via a fourth servo.

Link lengths are display constants only: wheel angle, odometry, and twist
accounting never depend on them.

All types are immutable values and all functions are pure, so everything
here is safe to share across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, ValidationFailure
from .rotations import (
    IDENTITY_QUATERNION,
    UnitQuaternion,
    quat_compose,
    quat_to_matrix,
    rot_x,
    rot_z,
)

#: Default tolerance for the engagement predicate, degrees.
ENGAGE_TOL = 1e-9

#: Default tolerance for the gimbal-lock predicate, degrees.
GIMBAL_TOL = 1e-6


@dataclass(frozen=True, slots=True)
class ServoState:
    """The three joint angles (degrees) defining a mechanism configuration."""

    s1: float  # center-shaft twist; [0, 360], no wraparound
    s2: float  # gantry swing; [-90, +90]
    s3: float  # wrist pivot; [-90, +90]


HOME_STATE = ServoState(0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class ServoLimits:
    """Closed angle ranges (degrees) and rate limits (degrees/second)."""

    s1_range: tuple[float, float] = (0.0, 360.0)
    s2_range: tuple[float, float] = (-90.0, 90.0)
    s3_range: tuple[float, float] = (-90.0, 90.0)
    s1_max_rate: float = 360.0
    s2_max_rate: float = 360.0
    s3_max_rate: float = 360.0

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            lo, hi = getattr(self, f"{name}_range")
            if not lo < hi:
                raise InvalidParameter(f"{name}_range must have min < max, got ({lo}, {hi})")
            if not getattr(self, f"{name}_max_rate") > 0.0:
                raise InvalidParameter(f"{name}_max_rate must be positive")

    def range_of(self, servo: str) -> tuple[float, float]:
        return getattr(self, f"{servo}_range")

    def rate_of(self, servo: str) -> float:
        return getattr(self, f"{servo}_max_rate")


DEFAULT_LIMITS = ServoLimits()


@dataclass(frozen=True, slots=True)
class MechanismGeometry:
    """Wheel radius (drives odometry) plus display-only link lengths, meters."""

    wheel_radius: float = 0.10
    gantry_offset: float = 0.10
    upper_link_length: float = 0.20
    lower_link_length: float = 0.15

    def __post_init__(self):
        if not self.wheel_radius > 0.0:
            raise InvalidParameter(f"wheel_radius must be positive, got {self.wheel_radius!r}")
        for name in ("gantry_offset", "upper_link_length", "lower_link_length"):
            if not getattr(self, name) >= 0.0:
                raise InvalidParameter(f"{name} must be non-negative")


DEFAULT_GEOMETRY = MechanismGeometry()


@dataclass(frozen=True, slots=True)
class Pose:
    """Rigid pose: unit-quaternion rotation plus translation in meters."""

    rotation: UnitQuaternion
    translation: tuple[float, float, float]


@dataclass(frozen=True, slots=True)
class FramePoses:
    """Poses of the named frames along the chain, in body coordinates."""

    body: Pose
    gantry: Pose
    center_shaft_tip: Pose
    elbow: Pose
    wrist: Pose
    wheel_hub: Pose


@dataclass(frozen=True, slots=True)
class RangeViolation:
    """A servo angle outside its closed range."""

    servo: str
    value: float
    lo: float
    hi: float

    def __str__(self) -> str:
        return (f"RangeViolation {self.servo}: {self.value!r} "
                f"outside [{self.lo}, {self.hi}]")


def validate_state(state: ServoState, limits: ServoLimits = DEFAULT_LIMITS) -> list[RangeViolation]:
    """Check each angle against its closed range; empty list means valid.

    Comparisons are exact (no tolerance): waypoints are authored values, and
    the range endpoints are exact binary floats.
    """
    violations = []
    for servo, value in (("servo1", state.s1), ("servo2", state.s2), ("servo3", state.s3)):
        lo, hi = limits.range_of("s" + servo[-1])
        if not lo <= value <= hi:
            violations.append(RangeViolation(servo, value, lo, hi))
    return violations


def engaged(state: ServoState, tol: float = ENGAGE_TOL) -> bool:
    """True iff the shaft is clutched to the wheel.

    The two driving configurations are (s2, s3) = (+90, -90) and (-90, +90),
    compared within ``tol`` because interpolated samples may sit near +-90.
    """
    if tol < 0.0:
        raise InvalidParameter("tol must be non-negative")
    return ((abs(state.s2 - 90.0) <= tol and abs(state.s3 + 90.0) <= tol)
            or (abs(state.s2 + 90.0) <= tol and abs(state.s3 - 90.0) <= tol))


def drive_sign(state: ServoState, tol: float = ENGAGE_TOL) -> int:
    """Sign coupling shaft motion to wheel rotation: dTheta_wheel = sign * ds1.

    +1 in the (s2, s3) = (+90, -90) configuration, -1 in (-90, +90), 0 when
    disengaged. Either configuration therefore turns the wheel forward for
    the s1 travel direction it allows, which is the rectification rule.
    """
    if not engaged(state, tol):
        return 0
    return 1 if state.s2 > 0.0 else -1


def gimbal_lock_risk(state: ServoState, s1_rate: float, tol: float = GIMBAL_TOL) -> bool:
    """True iff the shaft is turning through the degenerate s2 = s3 = 0 pose.

    This is a warning condition, not an error: the clutch model already
    yields zero wheel motion there, but a physical build would need extra
    articulation to avoid the lock.
    """
    return abs(state.s2) <= tol and abs(state.s3) <= tol and abs(s1_rate) > 0.0


def forward_kinematics(geometry: MechanismGeometry, state: ServoState,
                       limits: ServoLimits = DEFAULT_LIMITS) -> FramePoses:
    """Evaluate the rigid chain at ``state`` using the module conventions.

    Raises :class:`ValidationFailure` carrying the range violations when the
    state is out of range. At the zero state every frame equals its
    reference pose (identity rotations, links stacked along +z then +x).
    """
    violations = validate_state(state, limits)
    if violations:
        raise ValidationFailure(violations)

    body = Pose(IDENTITY_QUATERNION, (0.0, 0.0, 0.0))
    q_gantry = rot_x(state.s2)
    p_gantry = np.array([0.0, 0.0, geometry.gantry_offset])
    q_shaft = quat_compose(q_gantry, rot_z(state.s1))
    p_tip = p_gantry + quat_to_matrix(q_gantry) @ np.array(
        [0.0, 0.0, geometry.upper_link_length])
    q_wrist = quat_compose(q_shaft, rot_x(state.s3))
    p_wrist = p_tip + quat_to_matrix(q_shaft) @ np.array(
        [geometry.lower_link_length, 0.0, 0.0])

    tip = Pose(q_shaft, _as_tuple(p_tip))
    wrist = Pose(q_wrist, _as_tuple(p_wrist))
    return FramePoses(
        body=body,
        gantry=Pose(q_gantry, _as_tuple(p_gantry)),
        center_shaft_tip=tip,
        elbow=tip,      # fixed bend: same frame, redirects the lower link
        wrist=wrist,
        wheel_hub=wrist,  # hub sits on the wrist; wheel spin is the clutch DOF
    )


def _as_tuple(vec: np.ndarray) -> tuple[float, float, float]:
    return (float(vec[0]), float(vec[1]), float(vec[2]))
