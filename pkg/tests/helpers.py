"""Shared oracles for the test suite: finite-difference Jacobians and the
full four-component quaternion kinematics."""

import numpy as np

from vscmg_mpc.dynamics import ControlInput, PlantState, state_derivative


def omega_dot(p, x):
    """Body-rate derivative with zero inputs (the block the model linearizes)."""
    u = ControlInput.zero(p.count)
    return state_derivative(p, x, u).omega


def fd_omega_jacobian(p, x, h=1e-6):
    """Central-difference Jacobian of omega_dot w.r.t. [w, w_s, w_g].

    The rate equation is quadratic in the state, so the central difference
    is exact up to round-off.
    """
    n = p.count
    cols = []

    def shifted(field, j, delta):
        vals = {name: getattr(x, name).copy() for name in
                ("omega", "omega_s", "omega_g", "q", "gamma")}
        vals[field][j] += delta
        return PlantState(**vals)

    for field, size in (("omega", 3), ("omega_s", n), ("omega_g", n)):
        for j in range(size):
            fp = omega_dot(p, shifted(field, j, h))
            fm = omega_dot(p, shifted(field, j, -h))
            cols.append((fp - fm) / (2.0 * h))
    return np.array(cols).T  # 3 x (3 + 2N)


def full_quat_rate(qbar, w):
    """Four-component quaternion kinematics (scalar-first), the oracle for
    the reduced form: qbar_dot = 0.5 * qbar (x) [0, w]."""
    q0, qv = qbar[0], qbar[1:]
    return 0.5 * np.concatenate([[-(qv @ w)], q0 * w + np.cross(qv, w)])


def rk4(f, y, t, dt):
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def random_controllable(rng, n, m):
    """Random dense controllable pair."""
    from vscmg_mpc.linearization import controllability_rank
    while True:
        a = rng.normal(size=(n, n))
        b = rng.normal(size=(n, m))
        if controllability_rank(a, b) == n:
            return a, b


def random_stable_poles(rng, a, n, min_sep_frac=0.05):
    """Stable self-conjugate pole set scaled to the open-loop spectrum.

    Keeping the targets near the plant's own eigenvalue footprint keeps the
    closed-loop eigenproblem conditioned well enough that a 1e-6 check is
    meaningful in double precision.
    """
    scale = max(1.0, np.abs(np.linalg.eigvals(a)).max())
    while True:
        n_pairs = int(rng.integers(0, n // 2 + 1))
        n_real = n - 2 * n_pairs
        reals = -rng.uniform(0.2, 1.2, n_real) * scale
        re = -rng.uniform(0.2, 1.2, n_pairs) * scale
        im = rng.uniform(0.1, 0.9, n_pairs) * scale
        poles = list(reals.astype(complex))
        for x, y in zip(re, im):
            poles += [x + 1j * y, x - 1j * y]
        poles = np.array(poles)
        vals = sorted(poles, key=lambda z: (z.real, z.imag))
        if all(abs(vals[i] - vals[j]) > min_sep_frac * scale
               for i in range(len(vals)) for j in range(i + 1, len(vals))):
            return poles
