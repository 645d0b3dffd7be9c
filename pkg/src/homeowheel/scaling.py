"""Size scaling laws and a quasi-static cost-of-transport proxy.

Shrinking the mechanism helps it: mass grows with volume (length cubed)
while actuator strength grows with cross section (length squared), so the
achievable acceleration force/mass scales like 1/length.

The transport cost proxy charges constant torque against unsigned joint
travel, E = sum |tau_i * delta_theta_i| in radians, normalized by weight
times distance. It is quasi-static by construction: it depends on the joint
angles only, never on timing, and grants no regeneration credit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidParameter, ZeroDistance
from .executor import SimTrace

STANDARD_GRAVITY = 9.81  # m/s^2


@dataclass(frozen=True, slots=True)
class ScalingModel:
    """Reference design point: length (m), mass (kg), actuator force (N)."""

    length_ref: float = 1.0
    mass_ref: float = 1.0
    force_ref: float = 1.0

    def __post_init__(self):
        for name in ("length_ref", "mass_ref", "force_ref"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidParameter(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class ScaledQuantities:
    mass_kg: float
    force_n: float
    accel_m_s2: float


def scale(model: ScalingModel, length_m: float) -> ScaledQuantities:
    """Evaluate the power laws at size ``length_m``:
    mass ~ L^3, force ~ L^2, accel = force/mass ~ 1/L."""
    if not (math.isfinite(length_m) and length_m > 0.0):
        raise InvalidParameter(f"length must be positive and finite, got {length_m!r}")
    ratio = length_m / model.length_ref
    mass = model.mass_ref * ratio ** 3
    force = model.force_ref * ratio ** 2
    return ScaledQuantities(mass_kg=mass, force_n=force, accel_m_s2=force / mass)


def cost_of_transport(trace: SimTrace, torques_nm: Sequence[float],
                      mass_kg: float, gravity: float = STANDARD_GRAVITY) -> float:
    """Quasi-static transport cost E / (m * g * |dx|) of a simulated motion.

    ``torques_nm`` holds the constant torque magnitudes of servos 1..3.
    Raises :class:`ZeroDistance` when the trace covers no distance.
    """
    if len(torques_nm) != 3:
        raise InvalidParameter(f"expected 3 servo torques, got {len(torques_nm)}")
    if not (math.isfinite(mass_kg) and mass_kg > 0.0):
        raise InvalidParameter(f"mass must be positive and finite, got {mass_kg!r}")
    if not (math.isfinite(gravity) and gravity > 0.0):
        raise InvalidParameter(f"gravity must be positive and finite, got {gravity!r}")
    distance = trace.distance_m
    if distance == 0.0:
        raise ZeroDistance("trace covers zero distance")
    tau1, tau2, tau3 = (float(t) for t in torques_nm)
    energy = 0.0
    for prev, cur in zip(trace.samples, trace.samples[1:]):
        energy += abs(tau1 * math.radians(cur.state.s1 - prev.state.s1))
        energy += abs(tau2 * math.radians(cur.state.s2 - prev.state.s2))
        energy += abs(tau3 * math.radians(cur.state.s3 - prev.state.s3))
    return energy / (mass_kg * gravity * abs(distance))
