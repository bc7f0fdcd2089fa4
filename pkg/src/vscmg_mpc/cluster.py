"""Geometry and momentum bookkeeping for a cluster of N variable-speed CMGs.

Each unit carries a right-handed triad of unit axes in the body frame:

* gimbal axis g_i   -- fixed,
* spin axis s_i     -- wheel rotation axis, rotates with gimbal angle,
* transverse axis t_i = g_i x s_i -- torque direction, rotates likewise.

Stacked column-wise these give the 3xN matrices A_g (constant) and
A_s(gamma), A_t(gamma).  Gimbal angles are kept unwrapped for integration;
wrap_gimbal_angles reduces them to [0, 2*pi) for reporting.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAxis, ValidationError

TRIAD_TOL = 1e-12


def wrap_gimbal_angles(gamma):
    """Reduce angles mod 2*pi into [0, 2*pi) for reporting."""
    return np.mod(np.asarray(gamma, dtype=float), 2.0 * np.pi)


def _check_triads(a_g, a_s, a_t, tol, what):
    for i in range(a_g.shape[1]):
        g, s, t = a_g[:, i], a_s[:, i], a_t[:, i]
        for name, v in (("gimbal", g), ("spin", s), ("transverse", t)):
            if abs(np.linalg.norm(v) - 1.0) > tol:
                raise ValidationError(f"{what}: {name} axis {i} is not unit length")
        if abs(g @ s) > tol or abs(g @ t) > tol or abs(s @ t) > tol:
            raise ValidationError(f"{what}: axes of unit {i} are not mutually orthogonal")
        if np.linalg.norm(np.cross(g, s) - t) > tol:
            raise ValidationError(f"{what}: triad {i} is not right-handed (t != g x s)")


@dataclass(frozen=True)
class ClusterParams:
    """Fixed geometry and inertias of a VSCMG cluster.

    Attributes
    ----------
    a_g : ndarray, shape (3, N)
        Unit gimbal axes (constant in the body frame).
    a_s0, a_t0 : ndarray, shape (3, N)
        Spin and transverse axes at gamma = 0.
    j_s, j_g, j_t : ndarray, shape (N,)
        Spin-, gimbal- and transverse-axis inertias [kg*m^2].
    """

    a_g: np.ndarray
    a_s0: np.ndarray
    a_t0: np.ndarray
    j_s: np.ndarray
    j_g: np.ndarray
    j_t: np.ndarray

    def __post_init__(self):
        for name in ("a_g", "a_s0", "a_t0"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        for name in ("j_s", "j_g", "j_t"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        n = self.count
        if self.a_g.shape != (3, n) or self.a_s0.shape != (3, n) or self.a_t0.shape != (3, n):
            raise ValidationError("axis matrices must be 3xN with a common N")
        if self.j_s.shape != (n,) or self.j_g.shape != (n,) or self.j_t.shape != (n,):
            raise ValidationError("inertia vectors must have length N")
        if not (np.all(self.j_s > 0) and np.all(self.j_g > 0) and np.all(self.j_t > 0)):
            raise ValidationError("all cluster inertias must be positive")
        _check_triads(self.a_g, self.a_s0, self.a_t0, TRIAD_TOL, "ClusterParams")

    @property
    def count(self):
        """Number of VSCMG units N."""
        return self.a_g.shape[1] if self.a_g.ndim == 2 else 0


@dataclass(frozen=True)
class ClusterState:
    """Gimbal angles and the axis matrices they imply."""

    gamma: np.ndarray
    a_s: np.ndarray
    a_t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gamma", np.atleast_1d(np.asarray(self.gamma, dtype=float)))
        object.__setattr__(self, "a_s", np.asarray(self.a_s, dtype=float))
        object.__setattr__(self, "a_t", np.asarray(self.a_t, dtype=float))


def axes_of(params: ClusterParams, gamma) -> ClusterState:
    """Axis matrices at the given gimbal angles.

    A_s = A_s0 diag(cos g) + A_t0 diag(sin g) and the transverse matrix is
    then re-derived column-wise as t_i = g_i x s_i, which keeps the triads
    orthogonal no matter how gamma was obtained.
    """
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    c, s = np.cos(gamma), np.sin(gamma)
    a_s = params.a_s0 * c + params.a_t0 * s
    a_t = np.cross(params.a_g.T, a_s.T).T
    return ClusterState(gamma=gamma, a_s=a_s, a_t=a_t)


def retarget_transverse(state: ClusterState, a_g) -> ClusterState:
    """Restore the spin/transverse triads after numerical drift.

    Each spin axis loses any component it picked up along its (exactly
    known) gimbal axis, is renormalized to unit length, and the transverse
    axis is rebuilt as t_i = g_i x s_i. The output satisfies every triad
    invariant to machine precision.

    Raises
    ------
    DegenerateAxis
        If a spin-axis column has collapsed below half its unit length.
    """
    a_g = np.asarray(a_g, dtype=float)
    a_s = state.a_s - a_g * np.sum(a_g * state.a_s, axis=0)
    norms = np.linalg.norm(a_s, axis=0)
    if np.any(norms < 0.5):
        bad = int(np.argmin(norms))
        raise DegenerateAxis(f"spin axis column {bad} has norm {norms[bad]:.3g}")
    a_s = a_s / norms
    a_t = np.cross(a_g.T, a_s.T).T
    return ClusterState(gamma=state.gamma, a_s=a_s, a_t=a_t)


def total_inertia(j_b, params: ClusterParams, state: ClusterState):
    """Total inertia of body plus cluster:
    J = J_b + A_s J_s A_s^T + A_g J_g A_g^T + A_t J_t A_t^T.

    Diagnostic only; the rotational dynamics keeps J_b on the left side
    under the constant-inertia assumption.
    """
    j_b = np.asarray(j_b, dtype=float)
    a_s, a_t, a_g = state.a_s, state.a_t, params.a_g
    j = (j_b
         + (a_s * params.j_s) @ a_s.T
         + (a_g * params.j_g) @ a_g.T
         + (a_t * params.j_t) @ a_t.T)
    return 0.5 * (j + j.T)   # exact symmetry regardless of BLAS rounding order


def total_momentum(j_b, params: ClusterParams, state: ClusterState, omega, omega_s, omega_g):
    """Total angular momentum in the body frame:
    h = J_b w + A_s J_s w_s + A_g J_g w_g.

    With zero external torque, hdot = -w x h, so ||h|| is conserved along
    any trajectory regardless of the (internal) control torques.
    """
    j_b = np.asarray(j_b, dtype=float)
    return (j_b @ np.asarray(omega, dtype=float)
            + state.a_s @ (params.j_s * np.asarray(omega_s, dtype=float))
            + params.a_g @ (params.j_g * np.asarray(omega_g, dtype=float)))


def pyramid_config(theta, j_s=None, j_g=None, j_t=None) -> ClusterParams:
    """Four-unit pyramid cluster at side angle theta [rad].

    Gimbal axes sit on the four faces of a pyramid whose sides make angle
    theta with the base; spin axes at gamma = 0 lie in the base plane.
    Inertia defaults: j_s = 0.7, j_g = 0.1 kg*m^2 per unit. The transverse
    inertia never enters the reduced dynamics, so j_t defaults to j_s as a
    placeholder and only affects the total-inertia diagnostic.
    """
    if not 0.0 < theta < np.pi / 2:
        raise ValidationError("pyramid side angle must lie in (0, pi/2)")
    st, ct = np.sin(theta), np.cos(theta)
    a_g = np.array([
        [st, 0.0, -st, 0.0],
        [0.0, st, 0.0, -st],
        [ct, ct, ct, ct],
    ])
    a_s0 = np.array([
        [0.0, -1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ])
    a_t0 = np.cross(a_g.T, a_s0.T).T
    j_s = np.full(4, 0.7) if j_s is None else np.asarray(j_s, dtype=float)
    j_g = np.full(4, 0.1) if j_g is None else np.asarray(j_g, dtype=float)
    j_t = j_s.copy() if j_t is None else np.asarray(j_t, dtype=float)
    return ClusterParams(a_g=a_g, a_s0=a_s0, a_t0=a_t0, j_s=j_s, j_g=j_g, j_t=j_t)
