"""Closed-loop behavior at two scales.

Small initial disturbances: the per-sample pole-assignment loop regulates
the attitude cleanly and the stability audit is quiet.

The bundled demonstration scenario's published-size disturbances: the body
carries ~17 N m s of momentum that the wheels must absorb, the full-state
feedback keeps fighting the momentum-storing wheel speeds, and the attitude
never reaches the idealized target. Both behaviors are shown honestly;
see the README for the analysis.
"""

import numpy as np

from vscmg_mpc import (MpcConfig, PlantState, draw_initial_state, momentum_of,
                       preset_scenario, run_closed_loop, theorem1_audit)

cfg = preset_scenario("paper-s4")


def report(tag, x0, t_end):
    result = run_closed_loop(cfg.params, x0, cfg.mpc, cfg.dt, t_end)
    audit = theorem1_audit(result.records, cfg.mpc.mu, cfg.mpc.sample_period)
    h0 = np.linalg.norm(momentum_of(cfg.params, x0))
    hf = np.linalg.norm(momentum_of(cfg.params, result.final_state))
    xf = result.final_state
    print(f"\n--- {tag} ---")
    print(f"|q|: {np.linalg.norm(x0.q):.3e} -> {np.linalg.norm(xf.q):.3e}")
    print(f"|omega|: {np.linalg.norm(x0.omega):.3e} -> {np.linalg.norm(xf.omega):.3e} rad/s")
    print(f"wheel speeds: {np.linalg.norm(x0.omega_s):.2f} -> {np.linalg.norm(xf.omega_s):.2f} rad/s")
    print(f"|h|: {h0:.4f} N m s, relative drift {abs(hf - h0) / max(h0, 1e-12):.1e}")
    print(f"audit: worst margin {audit.worst_margin:+.4f} (mu = {audit.mu}), "
          f"{audit.margin_violations} violations, {audit.fallback_steps} fallbacks")


small = PlantState(omega=np.array([4.0, 7.0, 9.0]) * 1e-6,
                   omega_s=np.full(4, 2 * np.pi), omega_g=np.zeros(4),
                   q=np.array([5.0, 4.0, 8.0]) * 1e-4, gamma=np.zeros(4))
report("small disturbance, 30 s", small, 30.0)

x0 = draw_initial_state(cfg, seed=1)
report("demonstration scenario (seed 1), 30 s", x0, 30.0)

print("\nThe point-wise closed-loop eigenvalues sit on the requested set at")
print("every sample in both runs. At the demonstration scale the stored")
print("momentum (|h| above) exceeds what the 0.7 kg m^2 wheels can park at")
print("modest speeds, the gains keep churning wheel and gimbal states, and")
print("the attitude stalls around its initial size: point-wise pole")
print("placement alone does not certify a fast time-varying loop.")
