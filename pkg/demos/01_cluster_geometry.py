"""Pyramid cluster geometry: axis triads, their gimbal-angle dependence,
and the inertia/momentum bookkeeping they feed."""

import numpy as np

from vscmg_mpc import axes_of, pyramid_config, total_inertia, total_momentum

np.set_printoptions(precision=5, suppress=True)

theta = np.deg2rad(54.75)
cluster = pyramid_config(theta)

print("Four-unit pyramid, side angle 54.75 deg")
print("gimbal axes A_g:\n", cluster.a_g)
print("spin axes at gamma=0, A_s0:\n", cluster.a_s0)
print("transverse axes A_t0 = g x s:\n", cluster.a_t0)

# Axis matrices rotate with the gimbal angles but stay orthonormal triads.
gamma = np.array([0.3, 1.1, 2.0, 4.5])
state = axes_of(cluster, gamma)
print("\nat gamma =", gamma)
print("A_s(gamma):\n", state.a_s)
worst = max(abs(cluster.a_g[:, i] @ state.a_s[:, i]) for i in range(4))
print(f"max |g_i . s_i| = {worst:.2e}  (gimbal axes stay perpendicular)")

# Momentum bookkeeping: equal wheel speeds at gamma=0 cancel pairwise.
j_b = np.array([[15053.0, 3000, -1000], [3000, 6510, 2000], [-1000, 2000, 11122]])
h = total_momentum(j_b, cluster, axes_of(cluster, np.zeros(4)),
                   np.zeros(3), np.full(4, 2 * np.pi), np.zeros(4))
print("\nwheel momentum at gamma=0, equal speeds:", h, "(cancels)")

j = total_inertia(j_b, cluster, state)
print("total inertia eigenvalues [kg m^2]:", np.linalg.eigvalsh(j))
print("cluster adds", np.trace(j - j_b), "kg m^2 of trace, as expected from",
      cluster.j_s.sum() + cluster.j_g.sum() + cluster.j_t.sum())
