"""Receding-horizon attitude control: at every sampling instant the LTV
model is rebuilt at the current state, a fresh gain is computed by robust
pole assignment, and u = K x is held over the sample period while the
nonlinear plant advances underneath.

The point-wise closed-loop eigenvalues sit on the requested pole set at
every non-fallback sample; whether that makes the time-varying loop stable
additionally needs the closed-loop matrix to be bounded and slowly varying,
which is what theorem1_audit reports on (empirical proxies for the bound
and rate constants, plus the hard eigenvalue-margin check).
"""

from dataclasses import dataclass, field

import numpy as np

from .dynamics import (ControlInput, PlantState, SpacecraftParams, pack_state,
                       rk4_step)
from .errors import (DivergenceError, DomainError, PlacementFailure,
                     UncontrollableError, ValidationError)
from .linearization import build_ltv
from .pole_placement import (GainResult, PlacementOptions, assign_poles,
                             validate_pole_set)

FALLBACK_POLICIES = ("hold-last-gain", "zero-input")


@dataclass(frozen=True)
class MpcConfig:
    """Loop configuration.

    stability_margin is the mu of the eigenvalue condition Re(lam) <= -mu;
    by default it is the slowest requested pole's decay rate. The pole set
    is only required to be self-conjugate here so that deliberately
    unstable studies can run; scenario loading enforces stability.
    """

    poles: np.ndarray
    sample_period: float = 0.1
    torque_limit: float | None = None
    stability_margin: float | None = None
    fallback: str = "hold-last-gain"
    placement: PlacementOptions = field(default_factory=PlacementOptions)
    warm_start: bool = True

    def __post_init__(self):
        object.__setattr__(self, "poles", validate_pole_set(self.poles, require_stable=False))
        if self.sample_period <= 0:
            raise ValidationError("sample_period must be positive")
        if self.torque_limit is not None and self.torque_limit <= 0:
            raise ValidationError("torque_limit must be positive when set")
        if self.fallback not in FALLBACK_POLICIES:
            raise ValidationError(f"fallback must be one of {FALLBACK_POLICIES}")
        if self.stability_margin is None:
            mu = float(-self.poles.real.max())
            if mu <= 0:
                raise ValidationError(
                    "stability_margin must be given explicitly for non-stable pole sets")
            object.__setattr__(self, "stability_margin", mu)
        elif self.stability_margin <= 0:
            raise ValidationError("stability_margin must be positive")

    @property
    def mu(self):
        return self.stability_margin


@dataclass(frozen=True)
class StepRecord:
    """Telemetry for one sampling instant."""

    t: float
    x: PlantState
    u: ControlInput
    eigen_margin: float        # max Re eig(A + B K_applied)
    robustness: float          # conditioning objective of the applied gain
    gain_delta: float          # ||K_k - K_{k-1}||_F
    closed_loop_norm: float    # ||A + B K_applied||_2
    fallback_used: bool


@dataclass(frozen=True)
class ClosedLoopResult:
    records: list
    final_state: PlantState
    final_time: float


@dataclass(frozen=True)
class Theorem1Report:
    """Empirical proxies for the slowly-varying-systems stability test."""

    sup_closed_loop_norm: float   # alpha proxy: sup_t ||A(t) + B(t) K(t)||
    worst_margin: float           # max_t max Re eig(A + B K)
    max_gain_rate: float          # beta proxy: max ||K_k - K_{k-1}|| / Ts
    margin_violations: int        # non-fallback steps with margin > -mu + tol
    fallback_steps: int
    steps: int
    mu: float


def _clamp(u_vec, limit):
    if limit is None:
        return u_vec
    return np.clip(u_vec, -limit, limit)


def mpc_step(p: SpacecraftParams, x: PlantState, cfg: MpcConfig,
             prev: GainResult | None = None, t: float = 0.0, model_hook=None):
    """One controller update: rebuild the model, re-place the poles, form u.

    Returns (ControlInput, GainResult or None, StepRecord). On a placement
    or controllability failure the configured fallback is applied and the
    record's fallback_used flag is set; the returned GainResult is then the
    held previous gain (or None for zero input).
    """
    model = build_ltv(p, x, t=t)
    if model_hook is not None:
        model_hook(t, model)
    gain = None
    fallback_used = False
    try:
        warm = prev.eigenvectors if (prev is not None and cfg.warm_start) else None
        gain = assign_poles(model.a, model.b, cfg.poles, opts=cfg.placement,
                            warm_start=warm)
    except (UncontrollableError, PlacementFailure):
        fallback_used = True
        if cfg.fallback == "hold-last-gain" and prev is not None:
            gain = prev

    n = p.count
    if gain is None:
        u = ControlInput.zero(n)
        margin = float(np.linalg.eigvals(model.a).real.max())
        robustness = 0.0
        cl_norm = float(np.linalg.norm(model.a, 2))
        gain_delta = 0.0
    else:
        u_vec = _clamp(gain.gain @ x.feedback_vector(), cfg.torque_limit)
        u = ControlInput.from_vector(u_vec, n)
        if fallback_used:
            cl = model.a + model.b @ gain.gain
            margin = float(np.linalg.eigvals(cl).real.max())
            cl_norm = float(np.linalg.norm(cl, 2))
        else:
            margin = float(gain.achieved.real.max())
            cl_norm = float(np.linalg.norm(model.a + model.b @ gain.gain, 2))
        robustness = gain.robustness
        gain_delta = 0.0 if prev is None else float(np.linalg.norm(gain.gain - prev.gain))
    record = StepRecord(t=t, x=x, u=u, eigen_margin=margin, robustness=robustness,
                        gain_delta=gain_delta, closed_loop_norm=cl_norm,
                        fallback_used=fallback_used)
    return u, gain, record


def _linear_substeps(p, x, u, model, dt, n_sub):
    """Advance the frozen sampled model instead of the true plant (debug aid).

    Integrates xdot = A x + B u with gamma driven by the model's gimbal-rate
    states, so the next sample re-linearizes at the propagated fiction.
    """
    n = p.count
    xv = x.feedback_vector()
    gamma = x.gamma.copy()
    uv = u.as_vector()
    gsl = slice(3 + n, 3 + 2 * n)
    for _ in range(n_sub):
        k1 = model.a @ xv + model.b @ uv
        g1 = xv[gsl]
        x2 = xv + 0.5 * dt * k1
        k2 = model.a @ x2 + model.b @ uv
        g2 = x2[gsl]
        x3 = xv + 0.5 * dt * k2
        k3 = model.a @ x3 + model.b @ uv
        g3 = x3[gsl]
        x4 = xv + dt * k3
        k4 = model.a @ x4 + model.b @ uv
        g4 = x4[gsl]
        xv = xv + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        gamma = gamma + (dt / 6.0) * (g1 + 2 * g2 + 2 * g3 + g4)
    return PlantState(omega=xv[:3], omega_s=xv[3:3 + n], omega_g=xv[gsl],
                      q=xv[3 + 2 * n:], gamma=gamma)


def run_closed_loop(p: SpacecraftParams, x0: PlantState, cfg: MpcConfig,
                    dt_integrator: float, t_end: float, t_e_policy=None,
                    model_hook=None, plant: str = "nonlinear") -> ClosedLoopResult:
    """Run the sampled-data loop.

    The plant propagated between samples is the nonlinear model; pass
    plant="linear" to apply the feedback to the sampled linear model
    instead (debugging aid). dt_integrator must divide the sample period;
    the control is held constant between samples (zero-order hold). Raises
    DivergenceError if the state leaves its domain or becomes non-finite.
    """
    if plant not in ("nonlinear", "linear"):
        raise ValidationError("plant must be 'nonlinear' or 'linear'")
    if dt_integrator <= 0:
        raise ValidationError("dt_integrator must be positive")
    n_sub = int(round(cfg.sample_period / dt_integrator))
    if n_sub < 1 or abs(n_sub * dt_integrator - cfg.sample_period) > 1e-9 * cfg.sample_period:
        raise ValidationError("dt_integrator must divide the sample period")
    n_samples = int(round(t_end / cfg.sample_period))

    x = x0
    gain = None
    records = []
    t = 0.0
    for k in range(n_samples):
        captured = []
        hook = model_hook
        if plant == "linear":
            def hook(tk, model, _cap=captured):
                _cap.append(model)
                if model_hook is not None:
                    model_hook(tk, model)
        u, gain, record = mpc_step(p, x, cfg, prev=gain, t=t, model_hook=hook)
        records.append(record)
        t_e = np.zeros(3) if t_e_policy is None else np.asarray(t_e_policy(t), dtype=float)
        try:
            if plant == "linear":
                x = _linear_substeps(p, x, u, captured[0], dt_integrator, n_sub)
            else:
                for _ in range(n_sub):
                    x = rk4_step(p, x, u, t_e, dt_integrator)
        except (ValidationError, DomainError) as exc:
            raise DivergenceError(f"state left its domain near t = {t:.6g} s: {exc}",
                                  t=t) from exc
        if not np.all(np.isfinite(pack_state(x))):
            raise DivergenceError(f"state became non-finite near t = {t:.6g} s", t=t)
        t = (k + 1) * cfg.sample_period
    return ClosedLoopResult(records=records, final_state=x, final_time=t)


def theorem1_audit(records, mu, sample_period, margin_tol=1e-6) -> Theorem1Report:
    """Report the empirical stability proxies of a finished run.

    Margin violations count the non-fallback samples whose point-wise
    closed-loop spectrum fails Re(lam) <= -mu + margin_tol.
    """
    if not records:
        raise ValidationError("audit needs at least one record")
    active = [r for r in records if not r.fallback_used]
    violations = sum(1 for r in active if r.eigen_margin > -mu + margin_tol)
    worst = max((r.eigen_margin for r in active), default=float("nan"))
    return Theorem1Report(
        sup_closed_loop_norm=max(r.closed_loop_norm for r in records),
        worst_margin=worst,
        max_gain_rate=max(r.gain_delta for r in records) / sample_period,
        margin_violations=violations,
        fallback_steps=sum(1 for r in records if r.fallback_used),
        steps=len(records),
        mu=mu,
    )
