"""Attitude-math primitives: the skew (cross-product) operator and
reduced-quaternion kinematics.

The attitude of the body frame relative to the inertial frame is carried as
the vector part q = [q1, q2, q3] of a unit quaternion; the scalar part is
recovered as q0 = sqrt(1 - ||q||^2), which requires ||q|| <= 1.
"""

import numpy as np

from .errors import DomainError

# A norm overshoot of at most this much is treated as integration round-off
# and clamped back to the unit sphere; anything larger is rejected.
QUAT_NORM_SLACK = 1e-12


def skew(a):
    """Return the 3x3 skew-symmetric matrix a^x with a^x @ b == cross(a, b).

    Parameters
    ----------
    a : array_like, shape (3,)

    Returns
    -------
    ndarray, shape (3, 3)
    """
    a1, a2, a3 = a
    return np.array([
        [0.0, -a3, a2],
        [a3, 0.0, -a1],
        [-a2, a1, 0.0],
    ])


def clamp_reduced_quaternion(q):
    """Project q back onto the closed unit ball if round-off pushed it out.

    Overshoots up to QUAT_NORM_SLACK are rescaled onto the unit sphere so a
    long integration does not die on the last bit of drift; larger
    violations indicate a real bug and raise DomainError.
    """
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n <= 1.0:
        return q
    if n <= 1.0 + QUAT_NORM_SLACK:
        return q / n
    raise DomainError(f"reduced quaternion norm {n} exceeds 1 beyond round-off slack")


def q0_of(q):
    """Scalar part q0 = sqrt(1 - ||q||^2) of the unit quaternion implied by q.

    Raises
    ------
    DomainError
        If ||q|| > 1 beyond the round-off slack.
    """
    q = clamp_reduced_quaternion(q)
    return np.sqrt(max(0.0, 1.0 - q @ q))


def quat_rate(q, omega):
    """Reduced-quaternion kinematics: qdot = 0.5 * (q0*I + q^x) @ omega.

    Parameters
    ----------
    q : array_like, shape (3,)
        Vector part of the attitude quaternion, ||q|| <= 1.
    omega : array_like, shape (3,)
        Body angular rate [rad/s].

    Returns
    -------
    ndarray, shape (3,)
        Time derivative of q.

    Raises
    ------
    DomainError
        If ||q|| > 1 beyond the round-off slack.
    """
    q = clamp_reduced_quaternion(q)
    omega = np.asarray(omega, dtype=float)
    q0 = np.sqrt(max(0.0, 1.0 - q @ q))
    return 0.5 * (q0 * omega + np.cross(q, omega))
