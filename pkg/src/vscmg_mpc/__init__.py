"""Spacecraft attitude control with variable-speed control moment gyros.

Library layout:

* so3            -- skew operator and reduced-quaternion kinematics
* cluster        -- VSCMG cluster geometry, inertia and momentum bookkeeping
* dynamics       -- nonlinear plant and fixed-step RK4 propagation
* linearization  -- per-instant LTV model (A, B, C) and controllability
* pole_placement -- robust pole assignment by eigenstructure selection
* mpc            -- per-sample gain recomputation loop and stability audit
* harness        -- scenario files, initial-condition draws, CSV/summary logs
"""

from .cluster import (ClusterParams, ClusterState, axes_of, pyramid_config,
                      retarget_transverse, total_inertia, total_momentum,
                      wrap_gimbal_angles)
from .dynamics import (ControlInput, PlantState, SpacecraftParams, momentum_of,
                       propagate, rk4_step, state_derivative)
from .errors import (DegenerateAxis, DivergenceError, DomainError, ParseError,
                     PlacementFailure, SingularBasis, UncontrollableError,
                     ValidationError, VscmgError)
from .harness import (ScenarioConfig, draw_initial_state, grid_design_count,
                      load_scenario, preset_scenario, run)
from .linearization import (LtvModel, build_ltv, controllability_matrix,
                            controllability_rank, jac_blocks)
from .mpc import (ClosedLoopResult, MpcConfig, StepRecord, Theorem1Report,
                  mpc_step, run_closed_loop, theorem1_audit)
from .pole_placement import (GainResult, PlacementOptions, assign_poles,
                             closed_loop_eigs, eig_match_error,
                             robustness_measure, validate_pole_set)
from .rng import SplitMix64
from .so3 import q0_of, quat_rate, skew

__version__ = "0.1.0"
