"""Open-loop plant checks: momentum-norm conservation under zero external
torque (for any internal control history) and the RK4 convergence order."""

import numpy as np

from vscmg_mpc import (ControlInput, PlantState, SpacecraftParams, momentum_of,
                       propagate, pyramid_config, rk4_step)
from vscmg_mpc.dynamics import pack_state

params = SpacecraftParams(
    j_b=np.array([[15053.0, 3000, -1000], [3000, 6510, 2000], [-1000, 2000, 11122]]),
    cluster=pyramid_config(np.deg2rad(54.75)))

x0 = PlantState(omega=[5e-4, -3e-4, 8e-4], omega_s=[2 * np.pi, 3.0, -2.0, 5.0],
                omega_g=[0.1, -0.2, 0.05, 0.3], q=[0.05, 0.1, -0.02],
                gamma=[0.3, 1.0, -0.5, 2.0])

h0 = np.linalg.norm(momentum_of(params, x0))
print(f"initial |h| = {h0:.6f} N m s")


def wobble(t, x):
    i = np.arange(4)
    return ControlInput(t_s=0.5 * np.sin(0.7 * t + i), t_g=0.3 * np.cos(1.3 * t + i))


rows = propagate(params, x0, wobble, None, dt=0.01, t_end=60.0)
h_end = np.linalg.norm(momentum_of(params, rows[-1][1]))
print(f"after 60 s of arbitrary internal torques: |h| = {h_end:.6f}, "
      f"relative drift {abs(h_end - h0) / h0:.2e}")
print("(internal torques cannot change the momentum norm; only the")
print(" integrator's truncation error shows up here)")

# Order check: halving the step cuts the terminal error ~16x.
fast = PlantState(omega=[0.1, -0.07, 0.08], omega_s=[2 * np.pi, 3.0, -2.0, 5.0],
                  omega_g=[0.5, -0.8, 0.3, 0.6], q=[0.02, 0.05, -0.01],
                  gamma=[0.3, 1.0, -0.5, 2.0])


def terminal(dt):
    x = fast
    for _ in range(int(round(10.0 / dt))):
        x = rk4_step(params, x, ControlInput.zero(4), np.zeros(3), dt)
    return pack_state(x)


ref = terminal(0.01)
e_coarse = np.linalg.norm(terminal(0.08) - ref)
e_half = np.linalg.norm(terminal(0.04) - ref)
print(f"\nRK4 terminal error: dt=0.08 -> {e_coarse:.3e}, dt=0.04 -> {e_half:.3e}, "
      f"ratio {e_coarse / e_half:.1f} (fourth order gives ~16)")
