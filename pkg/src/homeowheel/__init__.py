"""Kinematic simulator, constraint verifier, and motion planner for the
homeostatic wheel: a three-servo articulated wheel that turns without bound
while the twist of its continuous tegument stays bounded, by rectifying
bounded servo oscillations through a side-swapping clutch."""

from .errors import (
    InvalidAxis,
    InvalidParameter,
    RateInfeasible,
    TrajectoryParseError,
    ValidationFailure,
    ZeroDistance,
)
from .executor import (
    Policy,
    SimTrace,
    TraceEvent,
    TraceSample,
    Trajectory,
    Waypoint,
    build_rotate_wheel_2n,
    parse_trajectory,
    read_trajectory_file,
    segment_drive,
    simulate,
    trace_to_csv,
    trajectory_to_json,
    validate_trajectory,
    write_trace_file,
    write_trajectory_file,
)
from .mechanism import (
    DEFAULT_GEOMETRY,
    DEFAULT_LIMITS,
    FramePoses,
    HOME_STATE,
    MechanismGeometry,
    Pose,
    RangeViolation,
    ServoLimits,
    ServoState,
    drive_sign,
    engaged,
    forward_kinematics,
    gimbal_lock_risk,
    validate_state,
)
from .planner import (
    count_engaged_sweeps,
    generate_gait,
    plan_distance,
    plan_rotation,
)
from .rotations import (
    IDENTITY_QUATERNION,
    UnitQuaternion,
    is_rotation_matrix,
    quat_compose,
    quat_conjugate,
    quat_from_axis_angle,
    quat_to_matrix,
    rot_x,
    rot_y,
    rot_z,
    unwrap_angle,
    wrap_degrees,
)
from .scaling import ScalingModel, ScaledQuantities, cost_of_transport, scale
from .tegument import (
    IntegrityReport,
    IntegrityViolation,
    TwistLedger,
    ZERO_LEDGER,
    check_integrity,
    ledger_from_state,
    ledger_history,
    update_ledger,
)

__version__ = "0.1.0"
