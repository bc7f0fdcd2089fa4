"""Scenario configuration, run orchestration, and log emission.

Scenario files are JSON with the sections "spacecraft", "cluster",
"initial", "mpc", "integrator" and "t_end"; any file may set "preset" to
start from a named bundle of defaults and override selectively. The
`paper-s4` preset is the four-unit pyramid demonstration scenario used by
the acceptance suite.

Run artifacts: a trajectory CSV (one row per sampling instant, fixed column
order, 17-significant-digit floats) and a plain-text run summary with the
terminal norms and the stability audit.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cluster import ClusterParams, pyramid_config, wrap_gimbal_angles
from .dynamics import PlantState, SpacecraftParams, momentum_of
from .errors import (DivergenceError, ParseError, PlacementFailure,
                     UncontrollableError, ValidationError)
from .mpc import MpcConfig, run_closed_loop, theorem1_audit
from .pole_placement import PlacementOptions, validate_pole_set
from .rng import SplitMix64

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_PLACEMENT = 4

PLACEMENT_OBJECTIVES = ("normalized-det",)

PAPER_S4_POLES = [
    [-0.2, 0.0], [-0.8, 0.0],
    [-0.2, 0.1], [-0.2, -0.1],
    [-0.6, 0.1], [-0.6, -0.1],
    [-1.5, 1.0], [-1.5, -1.0],
    [-1.6, 1.0], [-1.6, -1.0],
    [-1.7, 1.0], [-1.7, -1.0],
    [-1.8, 1.0], [-1.8, -1.0],
]


def paper_s4_dict():
    """The pyramid demonstration scenario as a plain config dict."""
    return {
        "spacecraft": {
            "j_b": [[15053.0, 3000.0, -1000.0],
                    [3000.0, 6510.0, 2000.0],
                    [-1000.0, 2000.0, 11122.0]],
        },
        "cluster": {
            "theta_deg": 54.75,
            "j_s": [0.7, 0.7, 0.7, 0.7],
            "j_g": [0.1, 0.1, 0.1, 0.1],
        },
        "initial": {
            "seed": 1,
            "omega_scale": 1e-3,
            "q_scale": 1e-1,
            "wheel_speed": 2.0 * math.pi,
        },
        "mpc": {
            "sample_period": 0.1,
            "poles": [list(p) for p in PAPER_S4_POLES],
            "torque_limit": None,
            "fallback": "hold-last-gain",
        },
        "integrator": {"dt": 0.01},
        "t_end": 100.0,
    }


PRESETS = {"paper-s4": paper_s4_dict}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario: everything a run needs."""

    params: SpacecraftParams
    mpc: MpcConfig
    dt: float
    t_end: float
    seed: int
    omega_scale: float
    q_scale: float
    wheel_speed: float
    explicit_initial: dict


def _merge(base, override):
    if not isinstance(base, dict) or not isinstance(override, dict):
        return override
    out = dict(base)
    for key, val in override.items():
        out[key] = _merge(base[key], val) if key in base else val
    return out


def _require(section, key, where):
    if key not in section:
        raise ValidationError(f"missing required field '{key}' in {where}")
    return section[key]


def _cluster_from_dict(sec) -> ClusterParams:
    if "theta_deg" in sec or "theta_rad" in sec:
        theta = (math.radians(float(sec["theta_deg"])) if "theta_deg" in sec
                 else float(sec["theta_rad"]))
        return pyramid_config(theta,
                              j_s=sec.get("j_s"), j_g=sec.get("j_g"), j_t=sec.get("j_t"))
    a_g = np.asarray(_require(sec, "a_g", "cluster"), dtype=float)
    a_s0 = np.asarray(_require(sec, "a_s0", "cluster"), dtype=float)
    a_t0 = (np.asarray(sec["a_t0"], dtype=float) if "a_t0" in sec
            else np.cross(a_g.T, a_s0.T).T)
    n = a_g.shape[1]
    j_s = np.asarray(_require(sec, "j_s", "cluster"), dtype=float)
    j_g = np.asarray(_require(sec, "j_g", "cluster"), dtype=float)
    j_t = np.asarray(sec.get("j_t", j_s), dtype=float)
    del n
    return ClusterParams(a_g=a_g, a_s0=a_s0, a_t0=a_t0, j_s=j_s, j_g=j_g, j_t=j_t)


def cluster_to_dict(params: ClusterParams) -> dict:
    """Explicit-axes form that _cluster_from_dict accepts back."""
    return {
        "a_g": params.a_g.tolist(),
        "a_s0": params.a_s0.tolist(),
        "a_t0": params.a_t0.tolist(),
        "j_s": params.j_s.tolist(),
        "j_g": params.j_g.tolist(),
        "j_t": params.j_t.tolist(),
    }


def config_from_dict(raw: dict) -> ScenarioConfig:
    """Validate a config dict (after preset merging) into a ScenarioConfig."""
    if "preset" in raw:
        name = raw["preset"]
        if name not in PRESETS:
            raise ValidationError(f"unknown preset '{name}'")
        raw = _merge(PRESETS[name](), {k: v for k, v in raw.items() if k != "preset"})

    spacecraft = _require(raw, "spacecraft", "config")
    j_b = np.asarray(_require(spacecraft, "j_b", "spacecraft"), dtype=float)
    cluster = _cluster_from_dict(_require(raw, "cluster", "config"))
    params = SpacecraftParams(j_b=j_b, cluster=cluster)

    mpc_sec = _require(raw, "mpc", "config")
    pole_rows = _require(mpc_sec, "poles", "mpc")
    try:
        poles = np.array([complex(re, im) for re, im in pole_rows])
    except (TypeError, ValueError) as exc:
        raise ValidationError("mpc.poles must be a list of [re, im] pairs") from exc
    validate_pole_set(poles, n=2 * params.count + 6, require_stable=True)

    placement_sec = mpc_sec.get("placement", {})
    objective = placement_sec.get("objective", PLACEMENT_OBJECTIVES[0])
    if objective not in PLACEMENT_OBJECTIVES:
        raise ValidationError(f"placement.objective must be one of {PLACEMENT_OBJECTIVES}")
    placement = PlacementOptions(
        tol_place=float(placement_sec.get("tol_place", 1e-6)),
        max_sweeps=int(placement_sec.get("max_sweeps", 20)),
    )
    mpc_cfg = MpcConfig(
        poles=poles,
        sample_period=float(mpc_sec.get("sample_period", 0.1)),
        torque_limit=(None if mpc_sec.get("torque_limit") is None
                      else float(mpc_sec["torque_limit"])),
        stability_margin=(None if mpc_sec.get("stability_margin") is None
                          else float(mpc_sec["stability_margin"])),
        fallback=mpc_sec.get("fallback", "hold-last-gain"),
        placement=placement,
    )

    initial = raw.get("initial", {})
    explicit = {key: np.asarray(initial[key], dtype=float)
                for key in ("omega", "q", "omega_s", "omega_g", "gamma")
                if key in initial}
    dt = float(raw.get("integrator", {}).get("dt", 0.01))
    t_end = float(raw.get("t_end", 100.0))
    if dt <= 0 or t_end < 0:
        raise ValidationError("integrator.dt must be > 0 and t_end >= 0")
    return ScenarioConfig(
        params=params,
        mpc=mpc_cfg,
        dt=dt,
        t_end=t_end,
        seed=int(initial.get("seed", 0)),
        omega_scale=float(initial.get("omega_scale", 1e-3)),
        q_scale=float(initial.get("q_scale", 1e-1)),
        wheel_speed=float(initial.get("wheel_speed", 2.0 * math.pi)),
        explicit_initial=explicit,
    )


def load_scenario(path) -> ScenarioConfig:
    """Parse and validate a JSON scenario file.

    Raises ParseError with line/column on malformed JSON and
    ValidationError naming the offending field otherwise.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: top level must be a JSON object")
    return config_from_dict(raw)


def preset_scenario(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset '{name}'")
    return config_from_dict(PRESETS[name]())


def draw_initial_state(cfg: ScenarioConfig, seed: int | None = None) -> PlantState:
    """Initial plant state for a scenario.

    Unless overridden explicitly, body rate and attitude come from
    SplitMix64(seed): three uniform [0,1) draws scaled by omega_scale, then
    three scaled by q_scale. Wheels start at the configured nominal speed,
    gimbals at rest with zero angles.
    """
    n = cfg.params.count
    gen = SplitMix64(cfg.seed if seed is None else seed)
    omega = np.array(gen.floats(3)) * cfg.omega_scale
    q = np.array(gen.floats(3)) * cfg.q_scale
    state = {
        "omega": omega,
        "q": q,
        "omega_s": np.full(n, cfg.wheel_speed),
        "omega_g": np.zeros(n),
        "gamma": np.zeros(n),
    }
    state.update(cfg.explicit_initial)
    return PlantState(**state)


def grid_design_count(p_gamma, p_w, p_ws, p_wg, p_q, n_units):
    """Number of frozen design points a gain-scheduling grid would need:
    p_gamma^N * p_w^3 * p_ws^N * p_wg^N * p_q^3, exactly.
    """
    args = [int(v) for v in (p_gamma, p_w, p_ws, p_wg, p_q, n_units)]
    if any(v < 1 for v in args):
        raise ValidationError("all grid parameters must be >= 1")
    p_gamma, p_w, p_ws, p_wg, p_q, n_units = args
    return (p_gamma ** n_units) * (p_w ** 3) * (p_ws ** n_units) * (p_wg ** n_units) * (p_q ** 3)


def _fmt(value):
    return f"{value:.17g}"


def csv_header(n):
    cols = ["t"]
    cols += [f"omega{i}" for i in (1, 2, 3)]
    cols += [f"omega_s{i}" for i in range(1, n + 1)]
    cols += [f"omega_g{i}" for i in range(1, n + 1)]
    cols += [f"q{i}" for i in (1, 2, 3)]
    cols += [f"gamma{i}" for i in range(1, n + 1)]
    cols += [f"t_s{i}" for i in range(1, n + 1)]
    cols += [f"t_g{i}" for i in range(1, n + 1)]
    cols += ["eigen_margin", "robustness", "fallback"]
    return cols


def write_trajectory_csv(path, records, n):
    """Trajectory log: one row per sampling instant, gamma wrapped to [0, 2*pi)."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(csv_header(n)) + "\n")
        for rec in records:
            row = [rec.t]
            row += list(rec.x.omega)
            row += list(rec.x.omega_s)
            row += list(rec.x.omega_g)
            row += list(rec.x.q)
            row += list(wrap_gimbal_angles(rec.x.gamma))
            row += list(rec.u.t_s)
            row += list(rec.u.t_g)
            row += [rec.eigen_margin, rec.robustness]
            fh.write(",".join(_fmt(v) for v in row) + f",{int(rec.fallback_used)}\n")


@dataclass(frozen=True)
class RunArtifacts:
    exit_code: int
    csv_path: Path
    summary_path: Path
    result: object          # ClosedLoopResult or None on divergence


def run(cfg: ScenarioConfig, out_dir, seed: int | None = None, dump_ltv=False) -> RunArtifacts:
    """Execute a scenario and write trajectory.csv plus summary.txt."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "trajectory.csv"
    summary_path = out_dir / "summary.txt"
    x0 = draw_initial_state(cfg, seed=seed)

    model_hook = None
    if dump_ltv:
        ltv_dir = out_dir / "ltv"
        ltv_dir.mkdir(exist_ok=True)

        def model_hook(t, model):
            stamp = f"{int(round(t / cfg.mpc.sample_period)):06d}"
            np.savetxt(ltv_dir / f"ltv_{stamp}_A.csv", model.a, delimiter=",", fmt="%.17g")
            np.savetxt(ltv_dir / f"ltv_{stamp}_B.csv", model.b, delimiter=",", fmt="%.17g")

    h0 = momentum_of(cfg.params, x0)
    try:
        result = run_closed_loop(cfg.params, x0, cfg.mpc, cfg.dt, cfg.t_end,
                                 model_hook=model_hook)
    except DivergenceError as exc:
        write_trajectory_csv(csv_path, [], cfg.params.count)
        summary_path.write_text(f"status: diverged\nreason: {exc}\nt: {exc.t}\n")
        return RunArtifacts(EXIT_DIVERGED, csv_path, summary_path, None)
    except (PlacementFailure, UncontrollableError) as exc:
        summary_path.write_text(f"status: placement failed without viable fallback\nreason: {exc}\n")
        return RunArtifacts(EXIT_PLACEMENT, csv_path, summary_path, None)

    write_trajectory_csv(csv_path, result.records, cfg.params.count)
    audit = theorem1_audit(result.records, cfg.mpc.mu, cfg.mpc.sample_period)
    xf = result.final_state
    h_norms = [np.linalg.norm(momentum_of(cfg.params, rec.x)) for rec in result.records]
    h_norms.append(float(np.linalg.norm(momentum_of(cfg.params, xf))))
    h_ref = max(np.linalg.norm(h0), 1e-300)
    h_drift = float(max(abs(h - h_ref) for h in h_norms) / h_ref)
    lines = [
        "status: ok",
        f"t_end: {_fmt(result.final_time)}",
        f"terminal |omega|: {_fmt(np.linalg.norm(xf.omega))}",
        f"terminal |q|: {_fmt(np.linalg.norm(xf.q))}",
        f"terminal |omega_s|: {_fmt(np.linalg.norm(xf.omega_s))}",
        f"terminal |omega_g|: {_fmt(np.linalg.norm(xf.omega_g))}",
        f"momentum norm drift (relative): {_fmt(h_drift)}",
        f"audit sup ||A_cl||: {_fmt(audit.sup_closed_loop_norm)}",
        f"audit worst margin: {_fmt(audit.worst_margin)}",
        f"audit max gain rate: {_fmt(audit.max_gain_rate)}",
        f"audit margin violations: {audit.margin_violations}",
        f"audit fallback steps: {audit.fallback_steps}",
        f"audit steps: {audit.steps}",
        f"audit mu: {_fmt(audit.mu)}",
    ]
    summary_path.write_text("\n".join(lines) + "\n")
    return RunArtifacts(EXIT_OK, csv_path, summary_path, result)
