"""Robust pole assignment: textbook cases, the conditioning objective, and
the demonstration scenario's 14-state model."""

import numpy as np

from vscmg_mpc import (assign_poles, build_ltv, closed_loop_eigs,
                       draw_initial_state, eig_match_error, preset_scenario,
                       robustness_measure)

# Double integrator: hand-checkable gain.
a = np.array([[0.0, 1.0], [0.0, 0.0]])
b = np.array([[0.0], [1.0]])
res = assign_poles(a, b, [-1.0, -2.0])
print("double integrator, poles {-1, -2}: K =", res.gain, "(exactly [-2, -3])")
print("closed-loop eigenvalues:", closed_loop_eigs(a, b, res.gain))

# A random multi-input problem: the sweeps improve the eigenvector basis
# conditioning monotonically.
rng = np.random.default_rng(5)
a = rng.normal(size=(8, 8))
b = rng.normal(size=(8, 3))
poles = np.array([-1.0, -2.2, -3.1, -0.7,
                  -1.5 + 1j, -1.5 - 1j, -2.5 + 0.5j, -2.5 - 0.5j]) * 1.5
res = assign_poles(a, b, poles)
print(f"\nrandom 8-state, 3-input problem:")
print(f"  eigenvalue error {eig_match_error(res.achieved, poles):.2e}")
print(f"  objective across sweeps: "
      + " -> ".join(f"{v:.4f}" for v in res.sweep_objectives))
print(f"  basis measure {robustness_measure(res.eigenvectors):.4f} (1.0 = orthonormal)")

# The demonstration scenario's model at its drawn initial state.
cfg = preset_scenario("paper-s4")
x0 = draw_initial_state(cfg, seed=1)
model = build_ltv(cfg.params, x0)
res = assign_poles(model.a, model.b, cfg.mpc.poles)
print(f"\nscenario model (n=14, m=8):")
print(f"  eigenvalue error {eig_match_error(res.achieved, cfg.mpc.poles):.2e}")
print(f"  slowest closed-loop mode at {res.achieved.real.max():+.6f} (target -0.2)")
print(f"  basis measure {res.robustness:.3e}: the wheel-heavy inertia ratio makes")
print("  a well-conditioned eigenbasis impossible here, yet the placement itself")
print("  stays accurate to round-off")
