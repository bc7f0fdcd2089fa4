import numpy as np
import pytest

from vscmg_mpc.errors import (PlacementFailure, SingularBasis,
                              UncontrollableError, ValidationError)
from vscmg_mpc.linearization import build_ltv
from vscmg_mpc.pole_placement import (PlacementOptions, assign_poles,
                                      closed_loop_eigs, eig_match_error,
                                      robustness_measure, validate_pole_set)

from helpers import random_controllable, random_stable_poles


def test_scalar_case():
    res = assign_poles(np.array([[0.0]]), np.array([[1.0]]), [-1.0])
    assert np.allclose(res.gain, [[-1.0]], atol=1e-12)
    assert np.allclose(res.achieved, [-1.0], atol=1e-12)


def test_double_integrator_hand_computed():
    # closed loop [[0, 1], [k1, k2]] has characteristic s^2 - k2 s - k1;
    # poles {-1, -2} need s^2 + 3 s + 2, so K = [-2, -3].
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[0.0], [1.0]])
    res = assign_poles(a, b, [-1.0, -2.0])
    assert np.allclose(res.gain, [[-2.0, -3.0]], atol=1e-9)
    assert eig_match_error(res.achieved, [-2.0, -1.0]) <= 1e-9


def test_closed_loop_eigs_helper():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[0.0], [1.0]])
    assert np.allclose(closed_loop_eigs(a, b, np.zeros((1, 2))), [0.0, 0.0], atol=0)
    vals = closed_loop_eigs(a, b, np.array([[-2.0, -3.0]]))
    assert np.allclose(vals, [-2.0, -1.0], atol=1e-12)


def test_complex_pair_and_realness():
    rng = np.random.default_rng(12)
    a, b = random_controllable(rng, 6, 3)
    poles = np.array([-1.0, -2.0, -0.5 + 0.8j, -0.5 - 0.8j, -1.5 + 2j, -1.5 - 2j])
    res = assign_poles(a, b, poles)
    assert res.gain.dtype.kind == "f"
    assert eig_match_error(res.achieved, poles) <= 1e-8


def test_repeated_real_pole_within_input_rank():
    rng = np.random.default_rng(13)
    a, b = random_controllable(rng, 4, 2)
    poles = [-1.0, -1.0, -2.0, -3.0]
    res = assign_poles(a, b, poles)
    assert eig_match_error(res.achieved, poles) <= 1e-6


def test_multiplicity_beyond_input_rank_fails():
    rng = np.random.default_rng(14)
    a, b = random_controllable(rng, 3, 1)
    with pytest.raises(PlacementFailure):
        assign_poles(a, b, [-1.0, -1.0, -2.0])


def test_uncontrollable_pair_raises():
    a = np.diag([-1.0, -2.0, 3.0])
    b = np.array([[1.0], [1.0], [0.0]])   # third mode unreachable
    with pytest.raises(UncontrollableError):
        assign_poles(a, b, [-1.0, -2.0, -3.0])


def test_pole_set_validation():
    with pytest.raises(ValidationError):
        validate_pole_set([-1.0, -2.0 + 1j])                  # not self-conjugate
    with pytest.raises(ValidationError):
        validate_pole_set([-1.0, 2.0], require_stable=True)   # unstable
    with pytest.raises(ValidationError):
        validate_pole_set([-1.0], n=2)                        # wrong count
    out = validate_pole_set([-1.0, -0.5 + 0.1j, -0.5 - 0.1j])
    assert out.shape == (3,)


def test_random_battery_placement():
    rng = np.random.default_rng(15)
    for _ in range(60):
        n = int(rng.integers(2, 15))
        m = int(rng.integers(2, min(8, n) + 1)) if n > 8 else int(rng.integers(1, min(8, n) + 1))
        a, b = random_controllable(rng, n, m)
        poles = random_stable_poles(rng, a, n)
        res = assign_poles(a, b, poles)
        assert eig_match_error(res.achieved, poles) <= 1e-6
        assert res.gain.dtype.kind == "f"
        assert res.residual <= 1e-8 * max(1.0, np.linalg.norm(a))


def test_determinism_bitwise():
    rng = np.random.default_rng(16)
    a, b = random_controllable(rng, 9, 4)
    poles = random_stable_poles(rng, a, 9)
    r1 = assign_poles(a, b, poles)
    r2 = assign_poles(a, b, poles)
    assert np.array_equal(r1.gain, r2.gain)
    assert np.array_equal(r1.achieved, r2.achieved)


def test_objective_monotone_across_sweeps():
    rng = np.random.default_rng(17)
    for _ in range(10):
        n = int(rng.integers(4, 13))
        m = int(rng.integers(2, min(8, n) + 1))
        a, b = random_controllable(rng, n, m)
        poles = random_stable_poles(rng, a, n)
        res = assign_poles(a, b, poles)
        trail = res.sweep_objectives
        assert all(b2 >= a2 for a2, b2 in zip(trail, trail[1:]))
        assert res.robustness == trail[-1]


def test_warm_start_consistency():
    rng = np.random.default_rng(18)
    a, b = random_controllable(rng, 8, 3)
    poles = random_stable_poles(rng, a, 8)
    cold = assign_poles(a, b, poles)
    a2 = a + 1e-4 * rng.normal(size=a.shape)
    warm = assign_poles(a2, b, poles, warm_start=cold.eigenvectors)
    assert eig_match_error(warm.achieved, poles) <= 1e-6


def test_paper_model_placement(paper_params, paper_poles, paper_x0):
    model = build_ltv(paper_params, paper_x0)
    res = assign_poles(model.a, model.b, paper_poles)
    assert eig_match_error(res.achieved, paper_poles) <= 1e-6
    assert res.gain.dtype.kind == "f"
    assert res.achieved.real.max() <= -0.2 + 1e-6


def test_robustness_measure_properties():
    assert robustness_measure(np.eye(5)) == pytest.approx(1.0, abs=1e-14)
    nearly_parallel = np.array([[1.0, 1.0], [0.0, 1e-9]])
    assert robustness_measure(nearly_parallel) < 1e-8
    rng = np.random.default_rng(19)
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    d = np.diag(rng.uniform(0.2, 5.0, 6) * np.exp(1j * rng.uniform(0, 2 * np.pi, 6)))
    assert abs(robustness_measure(x) - robustness_measure(x @ d)) <= 1e-12
    with pytest.raises(SingularBasis):
        robustness_measure(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(SingularBasis):
        robustness_measure(np.array([[1.0, 0.0], [0.0, 0.0]]))
