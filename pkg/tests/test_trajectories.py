import math

import numpy as np
import pytest

from sqbath.errors import InvariantError, StepSizeError
from sqbath.liouville import build_liouvillian, evolve
from sqbath.models import DriveParams, LindbladModel, SqueezedBathParams, squeezed_bath_master
from sqbath.operators import DensityMatrix, HilbertSpace, Operator, basis_operator
from sqbath.trajectories import TrajectoryConfig, simulate


def decay_model(gamma=1.0):
    space = HilbertSpace(("g", "e"))
    return LindbladModel(space, space.zero(), ((gamma, basis_operator(space, "g", "e")),))


def test_no_jump_channels_stay_pure():
    space = HilbertSpace(("g", "e"))
    h = Operator(space, np.array([[0.0, 0.7], [0.7, 0.3]]), hermitian=True)
    model = LindbladModel(space, h, ())
    psi0 = np.array([1.0, 1j]) / math.sqrt(2)
    res = simulate(model, psi0, TrajectoryConfig(7, 0.01, 3.0, seed=5), [0.0, 1.0, 3.0])
    ref = evolve(build_liouvillian(model), DensityMatrix.pure(space, psi0), [0.0, 1.0, 3.0])
    for rho, r in zip(res.density_matrices(), ref):
        assert rho.purity() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(rho.matrix, r.matrix, atol=1e-10)


def test_pure_decay_law():
    model = decay_model()
    t = np.linspace(0, 3, 7)
    res = simulate(model, np.array([0, 1.0]), TrajectoryConfig(2000, 0.005, 3.0, seed=11), t)
    pe, se = res.expectation(basis_operator(model.space, "e", "e"))
    inside = np.abs(pe.real - np.exp(-t)) <= 3 * np.maximum(se, 1e-12)
    assert inside.all()


def squeezed_case():
    p = SqueezedBathParams.maximal(1.0)
    return squeezed_bath_master(p, DriveParams(2.0))


def test_bitwise_determinism_and_worker_independence():
    model = squeezed_case()
    cfg = TrajectoryConfig(1100, 0.001, 0.5, seed=42)
    t = [0.0, 0.25, 0.5]
    psi0 = np.array([1.0, 0.0])
    a = simulate(model, psi0, cfg, t)
    b = simulate(model, psi0, cfg, t, workers=3)
    assert a.psi.tobytes() == b.psi.tobytes()
    # trajectory i depends only on (seed, i)
    small = simulate(model, psi0, TrajectoryConfig(5, 0.001, 0.5, seed=42), t)
    assert small.psi.tobytes() == a.psi[:5].tobytes()
    other = simulate(model, psi0, TrajectoryConfig(5, 0.001, 0.5, seed=43), t)
    assert other.psi.tobytes() != small.psi.tobytes()


def test_states_stay_normalized():
    res = simulate(squeezed_case(), np.array([0.6, 0.8]), TrajectoryConfig(50, 0.002, 1.0, seed=3),
                   np.linspace(0, 1, 5))
    assert np.allclose(np.linalg.norm(res.psi, axis=2), 1.0, atol=1e-12)


def test_step_size_invariant():
    model = squeezed_case()
    rate = model.total_jump_rate()
    with pytest.raises(InvariantError, match="dt"):
        simulate(model, np.array([1.0, 0.0]), TrajectoryConfig(1, 0.02 / rate, 1.0), [0.0])


def test_large_jump_probability_is_a_step_error(monkeypatch):
    import sqbath.trajectories as tr
    monkeypatch.setattr(tr, "DT_RATE_LIMIT", 10.0)
    model = decay_model(100.0)
    with pytest.raises(StepSizeError):
        simulate(model, np.array([0, 1.0]), TrajectoryConfig(4, 0.05, 1.0), [1.0])


def test_input_validation():
    model = decay_model()
    with pytest.raises(InvariantError, match="normalized"):
        simulate(model, np.array([1.0, 1.0]), TrajectoryConfig(1, 0.001, 1.0), [0.0])
    with pytest.raises(InvariantError):
        simulate(model, np.array([1.0, 0.0]), TrajectoryConfig(1, 0.001, 1.0), [2.0])
    with pytest.raises(InvariantError):
        TrajectoryConfig(0, 0.001, 1.0)
    with pytest.raises(InvariantError):
        TrajectoryConfig(1, 0.001, 1.0, scheme="rk4")
