"""Linear time-varying model of the plant about the rest concept.

At each sampling instant the Jacobian blocks of the rate equation and the
quaternion kinematics are evaluated at the current state, giving

    xdot = A(t) x + B(t) u + C t_e,    x = [w, w_s, w_g, q],  u = [t_s, t_g]

with n = 2N + 6 states and m = 2N inputs. Rows for w_s and w_g in A are
exactly zero (those subsystems are pure integrators of the inputs), and C
is constant. The model is controllable whenever the state is away from the
exact rest point; at the rest point itself the three "pure body rate"
directions drop out of the reachable set.
"""

from dataclasses import dataclass

import numpy as np

from .cluster import axes_of
from .dynamics import PlantState, SpacecraftParams
from .so3 import skew


@dataclass(frozen=True)
class LtvModel:
    """State-space matrices frozen at one sampling instant."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    t: float = 0.0

    @property
    def n(self):
        return self.a.shape[0]

    @property
    def m(self):
        return self.b.shape[1]


def jac_blocks(p: SpacecraftParams, x: PlantState):
    """Jacobian blocks (F11, F12, F13, F41, F44) at the current state.

    F11 = J_b^-1 [ (A_s J_s w_s)^x + (A_g J_g w_g)^x - w^x J_b + (J_b w)^x ]
    F12 = -J_b^-1 [ A_t J_s diag(w_g) + w^x A_s J_s ]
    F13 = -J_b^-1 [ A_t J_s diag(w_s) + w^x A_g J_g ]
    F41 = 0.5 (I + q^x)          (small-attitude form, exact at the origin)
    F44 = -0.5 w^x
    """
    cl = axes_of(p.cluster, x.gamma)
    a_s, a_t, a_g = cl.a_s, cl.a_t, p.cluster.a_g
    j_s, j_g = p.cluster.j_s, p.cluster.j_g
    w = x.omega
    f11 = p.j_b_inv @ (skew(a_s @ (j_s * x.omega_s)) + skew(a_g @ (j_g * x.omega_g))
                       - skew(w) @ p.j_b + skew(p.j_b @ w))
    f12 = -p.j_b_inv @ (a_t @ np.diag(j_s * x.omega_g) + skew(w) @ (a_s * j_s))
    f13 = -p.j_b_inv @ (a_t @ np.diag(j_s * x.omega_s) + skew(w) @ (a_g * j_g))
    f41 = 0.5 * (np.eye(3) + skew(x.q))
    f44 = -0.5 * skew(w)
    return f11, f12, f13, f41, f44


def build_ltv(p: SpacecraftParams, x: PlantState, t: float = 0.0) -> LtvModel:
    """Assemble (A, B, C) from the Jacobian blocks and the input map.

    B and C depend on the state only through the gimbal angles (via A_s);
    the attitude-row block of the input map is zero.
    """
    n_units = p.count
    n = 2 * n_units + 6
    f11, f12, f13, f41, f44 = jac_blocks(p, x)
    a = np.zeros((n, n))
    a[:3, :3] = f11
    a[:3, 3:3 + n_units] = f12
    a[:3, 3 + n_units:3 + 2 * n_units] = f13
    a[3 + 2 * n_units:, :3] = f41
    a[3 + 2 * n_units:, 3 + 2 * n_units:] = f44

    cl = axes_of(p.cluster, x.gamma)
    b = np.zeros((n, 2 * n_units))
    b[:3, :n_units] = p.j_b_inv @ cl.a_s
    b[:3, n_units:] = p.j_b_inv @ p.cluster.a_g
    b[3:3 + n_units, :n_units] = -np.diag(1.0 / p.cluster.j_s)
    b[3 + n_units:3 + 2 * n_units, n_units:] = -np.diag(1.0 / p.cluster.j_g)

    c = np.zeros((n, 3))
    c[:3, :] = p.j_b_inv
    return LtvModel(a=a, b=b, c=c, t=t)


def controllability_matrix(a, b):
    """Kalman controllability matrix [B, AB, ..., A^(n-1) B]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    blocks = [b]
    m = b
    for _ in range(a.shape[0] - 1):
        m = a @ m
        blocks.append(m)
    return np.hstack(blocks)


def controllability_rank(model_or_a, b=None):
    """Numeric rank of the controllability matrix.

    Accepts either an LtvModel or an (A, B) pair. Rank uses the singular
    value cutoff n * eps * sigma_max.
    """
    if b is None:
        a, b = model_or_a.a, model_or_a.b
    else:
        a = model_or_a
    ctrb = controllability_matrix(a, b)
    sv = np.linalg.svd(ctrb, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    tol = a.shape[0] * np.finfo(float).eps * sv[0]
    return int(np.count_nonzero(sv > tol))
