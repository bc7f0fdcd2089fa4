"""Nonlinear plant: rigid body with a VSCMG cluster, plus a fixed-step RK4
propagator.

State:  body rate w (3), wheel speeds w_s (N), gimbal speeds w_g (N),
reduced quaternion q (3), and the gimbal angles gamma (N) carried alongside
because the axis matrices depend on them.

Dynamics (body frame, constant total inertia assumed):

    J_b wdot = -A_t J_s diag(w_s) w_g - w x (J_b w + A_s J_s w_s + A_g J_g w_g)
               + A_s t_s + A_g t_g + t_e
    wdot_s   = -J_s^-1 t_s
    wdot_g   = -J_g^-1 t_g
    qdot     = 0.5 (q0 I + q^x) w
    gammadot = w_g

The wheel and gimbal torques t_s, t_g are the control inputs; t_e is an
external torque. With t_e = 0 the total momentum satisfies hdot = -w x h,
so ||h|| is an exact invariant of the continuous flow.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .cluster import ClusterParams, ClusterState, axes_of, total_momentum
from .errors import DivergenceError, DomainError, ValidationError
from .so3 import clamp_reduced_quaternion, quat_rate

SYM_TOL = 1e-9


@dataclass(frozen=True)
class SpacecraftParams:
    """Body inertia plus cluster geometry; J_b^-1 is factored once here."""

    j_b: np.ndarray
    cluster: ClusterParams

    def __post_init__(self):
        j_b = np.asarray(self.j_b, dtype=float)
        object.__setattr__(self, "j_b", j_b)
        if j_b.shape != (3, 3):
            raise ValidationError("body inertia must be 3x3")
        if np.abs(j_b - j_b.T).max() > SYM_TOL * max(1.0, np.abs(j_b).max()):
            raise ValidationError("body inertia must be symmetric")
        try:
            cho = scipy.linalg.cho_factor(j_b)
        except scipy.linalg.LinAlgError as exc:
            raise ValidationError("body inertia must be positive definite") from exc
        object.__setattr__(self, "j_b_inv", scipy.linalg.cho_solve(cho, np.eye(3)))

    @property
    def count(self):
        return self.cluster.count


@dataclass(frozen=True)
class PlantState:
    """Propagated truth of the simulator."""

    omega: np.ndarray
    omega_s: np.ndarray
    omega_g: np.ndarray
    q: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        for name in ("omega", "omega_s", "omega_g", "q", "gamma"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        object.__setattr__(self, "q", clamp_reduced_quaternion(self.q))
        for name in ("omega", "omega_s", "omega_g", "q", "gamma"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValidationError(f"non-finite entries in {name}")

    @classmethod
    def zero(cls, n):
        return cls(omega=np.zeros(3), omega_s=np.zeros(n), omega_g=np.zeros(n),
                   q=np.zeros(3), gamma=np.zeros(n))

    def feedback_vector(self):
        """State vector x = [w, w_s, w_g, q] seen by the controller."""
        return np.concatenate([self.omega, self.omega_s, self.omega_g, self.q])


@dataclass(frozen=True)
class ControlInput:
    """Wheel torques t_s and gimbal torques t_g [N*m]."""

    t_s: np.ndarray
    t_g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t_s", np.atleast_1d(np.asarray(self.t_s, dtype=float)))
        object.__setattr__(self, "t_g", np.atleast_1d(np.asarray(self.t_g, dtype=float)))

    @classmethod
    def zero(cls, n):
        return cls(t_s=np.zeros(n), t_g=np.zeros(n))

    @classmethod
    def from_vector(cls, u, n):
        """Split the stacked input u = [t_s, t_g]."""
        u = np.asarray(u, dtype=float)
        return cls(t_s=u[:n], t_g=u[n:2 * n])

    def as_vector(self):
        return np.concatenate([self.t_s, self.t_g])


# dense state layout used by the integrator: [w(3), w_s(N), w_g(N), q(3), gamma(N)]

def pack_state(x: PlantState):
    return np.concatenate([x.omega, x.omega_s, x.omega_g, x.q, x.gamma])


def unpack_state(z, n) -> PlantState:
    return PlantState(omega=z[:3], omega_s=z[3:3 + n], omega_g=z[3 + n:3 + 2 * n],
                      q=z[3 + 2 * n:6 + 2 * n], gamma=z[6 + 2 * n:6 + 3 * n])


def cluster_state_of(p: SpacecraftParams, x: PlantState) -> ClusterState:
    return axes_of(p.cluster, x.gamma)


def momentum_of(p: SpacecraftParams, x: PlantState):
    """Total angular momentum of the current plant state (body frame)."""
    return total_momentum(p.j_b, p.cluster, cluster_state_of(p, x),
                          x.omega, x.omega_s, x.omega_g)


def _deriv(p: SpacecraftParams, z, t_s, t_g, t_e, n):
    w = z[:3]
    w_s = z[3:3 + n]
    w_g = z[3 + n:3 + 2 * n]
    q = z[3 + 2 * n:6 + 2 * n]
    gamma = z[6 + 2 * n:6 + 3 * n]
    cl = axes_of(p.cluster, gamma)
    j_s, j_g = p.cluster.j_s, p.cluster.j_g
    h = p.j_b @ w + cl.a_s @ (j_s * w_s) + p.cluster.a_g @ (j_g * w_g)
    wdot = p.j_b_inv @ (-cl.a_t @ (j_s * w_s * w_g) - np.cross(w, h)
                        + cl.a_s @ t_s + p.cluster.a_g @ t_g + t_e)
    out = np.empty_like(z)
    out[:3] = wdot
    out[3:3 + n] = -t_s / j_s
    out[3 + n:3 + 2 * n] = -t_g / j_g
    out[3 + 2 * n:6 + 2 * n] = quat_rate(q, w)
    out[6 + 2 * n:] = w_g
    return out


def state_derivative(p: SpacecraftParams, x: PlantState, u: ControlInput, t_e=None) -> PlantState:
    """Time derivative of every plant state, returned in PlantState layout."""
    n = p.count
    t_e = np.zeros(3) if t_e is None else np.asarray(t_e, dtype=float)
    dz = _deriv(p, pack_state(x), u.t_s, u.t_g, t_e, n)
    return PlantState(omega=dz[:3], omega_s=dz[3:3 + n], omega_g=dz[3 + n:3 + 2 * n],
                      q=dz[3 + 2 * n:6 + 2 * n], gamma=dz[6 + 2 * n:])


def rk4_step(p: SpacecraftParams, x: PlantState, u: ControlInput, t_e, dt) -> PlantState:
    """One classical Runge-Kutta step with u and t_e held constant (ZOH)."""
    if dt <= 0:
        raise ValidationError("dt must be positive")
    n = p.count
    t_e = np.zeros(3) if t_e is None else np.asarray(t_e, dtype=float)
    z = pack_state(x)
    k1 = _deriv(p, z, u.t_s, u.t_g, t_e, n)
    k2 = _deriv(p, z + 0.5 * dt * k1, u.t_s, u.t_g, t_e, n)
    k3 = _deriv(p, z + 0.5 * dt * k2, u.t_s, u.t_g, t_e, n)
    k4 = _deriv(p, z + dt * k3, u.t_s, u.t_g, t_e, n)
    return unpack_state(z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), n)


def propagate(p: SpacecraftParams, x0: PlantState, control_policy, t_e_policy, dt, t_end):
    """Fixed-step propagation under caller-supplied policies.

    Parameters
    ----------
    control_policy : callable (t, PlantState) -> ControlInput, or None for zero input.
    t_e_policy : callable (t) -> ndarray (3,), or None for zero torque.
    dt, t_end : step size and final time [s].

    Returns
    -------
    list of (t, PlantState, ControlInput)
        One row per step, starting at t = 0; the input row k is the input
        held over [t_k, t_k + dt).

    Raises
    ------
    DivergenceError
        If the state becomes non-finite, with the offending time attached.
    """
    if dt <= 0:
        raise ValidationError("dt must be positive")
    if t_end < 0:
        raise ValidationError("t_end must be non-negative")
    n = p.count
    n_steps = int(round(t_end / dt))
    x = x0
    rows = []
    t = 0.0
    for k in range(n_steps):
        u = control_policy(t, x) if control_policy is not None else ControlInput.zero(n)
        t_e = t_e_policy(t) if t_e_policy is not None else np.zeros(3)
        rows.append((t, x, u))
        try:
            x = rk4_step(p, x, u, t_e, dt)
        except (ValidationError, DomainError) as exc:
            raise DivergenceError(f"state left its domain at t = {t + dt:.6g} s: {exc}",
                                  t=t + dt) from exc
        if not np.all(np.isfinite(pack_state(x))):
            raise DivergenceError(f"state became non-finite at t = {t + dt:.6g} s", t=t + dt)
        t = (k + 1) * dt
    rows.append((t, x, ControlInput.zero(n)))
    return rows
