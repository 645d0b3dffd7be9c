"""Rotation algebra: unit quaternions, rotation matrices, continuous angle lifts.

Conventions used throughout the package:

* Angles are degrees everywhere; radians appear only inside trig calls.
  Values like +-90 and 360 are exact binary floats, which keeps the joint
  limit checks exact.
* Quaternions are Hamilton (w, x, y, z), right-handed.
* Quaternion sign is never canonicalized. Rotating 360 deg about any axis
  lands on (-1, 0, 0, 0): the antipode of the identity, mapping to the
  identity matrix. That sign distinction is exactly the double-cover
  information the twist bookkeeping relies on, so composition and
  normalization must preserve it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidAxis

#: Squared-norm drift beyond which a quaternion is renormalized.
UNIT_NORM_DRIFT = 1e-12

#: Tolerance on |axis| - 1 accepted by :func:`quat_from_axis_angle`.
AXIS_NORM_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class UnitQuaternion:
    """Hamilton quaternion of unit norm. Immutable value type."""

    w: float
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x
                         + self.y * self.y + self.z * self.z)


IDENTITY_QUATERNION = UnitQuaternion(1.0, 0.0, 0.0, 0.0)


def _unit(w: float, x: float, y: float, z: float) -> UnitQuaternion:
    # Renormalize only when drift is measurable; an unconditional division
    # would perturb exactly-representable components such as (-1, 0, 0, 0).
    norm_sq = w * w + x * x + y * y + z * z
    if abs(norm_sq - 1.0) > UNIT_NORM_DRIFT:
        inv = 1.0 / math.sqrt(norm_sq)
        return UnitQuaternion(w * inv, x * inv, y * inv, z * inv)
    return UnitQuaternion(w, x, y, z)


def quat_from_axis_angle(axis: Sequence[float], angle_deg: float) -> UnitQuaternion:
    """Quaternion for a rotation of ``angle_deg`` degrees about a unit axis.

    Raises :class:`InvalidAxis` unless |axis| = 1 within ``AXIS_NORM_TOL``.
    Note the half-angle: 360 deg yields (-1, 0, 0, 0), not the identity.
    """
    ax = np.asarray(axis, dtype=float)
    if ax.shape != (3,):
        raise InvalidAxis(f"axis must be a 3-vector, got shape {ax.shape}")
    norm = float(np.sqrt(ax[0] * ax[0] + ax[1] * ax[1] + ax[2] * ax[2]))
    if not abs(norm - 1.0) <= AXIS_NORM_TOL:
        raise InvalidAxis(f"axis must be unit length, |axis| = {norm!r}")
    half = math.radians(angle_deg) / 2.0
    s = math.sin(half)
    return _unit(math.cos(half), s * float(ax[0]), s * float(ax[1]), s * float(ax[2]))


def quat_compose(a: UnitQuaternion, b: UnitQuaternion) -> UnitQuaternion:
    """Hamilton product a*b (apply b first, then a), renormalized on drift."""
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    return _unit(w, x, y, z)


def quat_conjugate(q: UnitQuaternion) -> UnitQuaternion:
    """Conjugate; for unit quaternions this is the inverse rotation."""
    return UnitQuaternion(q.w, -q.x, -q.y, -q.z)


def quat_to_matrix(q: UnitQuaternion) -> np.ndarray:
    """3x3 rotation matrix for ``q``.

    The formula uses only pairwise products, so q and -q produce bitwise
    identical matrices.
    """
    w, x, y, z = q.w, q.x, q.y, q.z
    xx, yy, zz = x * x, y * y, z * z
    wx, wy, wz = w * x, w * y, w * z
    xy, xz, yz = x * y, x * z, y * z
    return np.array([
        [1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)],
        [2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)],
        [2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)],
    ])


def is_rotation_matrix(mat, tol: float = 1e-10) -> bool:
    """True iff ``mat`` is 3x3, orthonormal within ``tol`` and det = +1 within ``tol``."""
    m = np.asarray(mat, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    ortho_err = float(np.abs(m.T @ m - np.eye(3)).max())
    return ortho_err <= tol and abs(float(np.linalg.det(m)) - 1.0) <= tol


def rot_x(angle_deg: float) -> UnitQuaternion:
    """Rotation about the +x axis."""
    half = math.radians(angle_deg) / 2.0
    return _unit(math.cos(half), math.sin(half), 0.0, 0.0)


def rot_y(angle_deg: float) -> UnitQuaternion:
    """Rotation about the +y axis."""
    half = math.radians(angle_deg) / 2.0
    return _unit(math.cos(half), 0.0, math.sin(half), 0.0)


def rot_z(angle_deg: float) -> UnitQuaternion:
    """Rotation about the +z axis."""
    half = math.radians(angle_deg) / 2.0
    return _unit(math.cos(half), 0.0, 0.0, math.sin(half))


def wrap_degrees(angle_deg: float) -> float:
    """Wrap an angle into the principal range [-180, 180)."""
    return ((angle_deg + 180.0) % 360.0) - 180.0


def unwrap_angle(previous: float, new_wrapped: float) -> float:
    """Lift ``new_wrapped`` onto the continuous angle branch nearest ``previous``.

    ``new_wrapped`` may be any 360-degree representative of the new angle,
    not necessarily in [-180, 180); the result is ``new_wrapped`` shifted by
    the whole number of turns that lands closest to ``previous``. Anchoring
    on the representative keeps the lift exact (no drift accumulates across
    updates, and in-range inputs lift to themselves bit for bit).

    The caller must guarantee that the true increment since ``previous`` is
    below 180 deg in magnitude; at exactly 180 deg the nearest branch is
    ambiguous and round-half-to-even decides.
    """
    turns = round((previous - new_wrapped) / 360.0)
    return new_wrapped + 360.0 * turns
