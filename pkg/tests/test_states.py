import numpy as np
import pytest

from paulitomo import (
    PureState,
    RandomCircuitSpec,
    density_of,
    ghz,
    ghz_minus,
    hadamard_all,
    random_state,
)

SQ2 = 1 / np.sqrt(2)


def test_ghz3_amplitudes():
    state = ghz(3)
    assert state.amplitudes[0] == pytest.approx(SQ2)
    assert state.amplitudes[7] == pytest.approx(SQ2)
    assert np.all(state.amplitudes[1:7] == 0)


def test_ghz_norm_and_support():
    for n in (3, 4, 5, 6):
        state = ghz(n)
        assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-10)
        assert np.count_nonzero(state.amplitudes) == 2


def test_ghz_rejects_small_n():
    for n in (0, 1, 2):
        with pytest.raises(ValueError):
            ghz(n)
        with pytest.raises(ValueError):
            ghz_minus(n)


def test_ghz_minus_amplitudes_and_orthogonality():
    state = ghz_minus(3)
    assert state.amplitudes[0] == pytest.approx(SQ2)
    assert state.amplitudes[7] == pytest.approx(-SQ2)
    assert np.vdot(ghz(3).amplitudes, state.amplitudes) == pytest.approx(0.0)
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-10)


def test_hadamard_all_uniform():
    state = hadamard_all(2)
    assert np.allclose(state.amplitudes, 0.5)
    state1 = hadamard_all(1)
    assert np.allclose(state1.amplitudes, [SQ2, SQ2])
    for n in (1, 3, 5):
        assert np.linalg.norm(hadamard_all(n).amplitudes) == pytest.approx(1.0, abs=1e-10)


def test_random_state_depth_zero_is_ground_state():
    state = random_state(RandomCircuitSpec(n=3, depth=0, seed=5))
    expected = np.zeros(8)
    expected[0] = 1.0
    assert np.allclose(state.amplitudes, expected)


def test_random_state_deterministic_per_seed():
    spec = RandomCircuitSpec(n=4, depth=25, seed=123)
    a = random_state(spec).amplitudes
    b = random_state(spec).amplitudes
    assert np.array_equal(a, b)
    other = random_state(RandomCircuitSpec(n=4, depth=25, seed=124)).amplitudes
    assert not np.allclose(a, other)


def test_random_state_unit_norm():
    for seed in range(5):
        state = random_state(RandomCircuitSpec(n=3, depth=30, seed=seed))
        assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10


def test_random_state_single_qubit():
    state = random_state(RandomCircuitSpec(n=1, depth=10, seed=2))
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10


def test_density_of_ghz3():
    rho = density_of(ghz(3))
    expected = np.zeros((8, 8), dtype=complex)
    for i in (0, 7):
        for j in (0, 7):
            expected[i, j] = 0.5
    assert np.allclose(rho, expected)


def test_density_is_rank1_projector():
    state = random_state(RandomCircuitSpec(n=3, depth=20, seed=9))
    rho = density_of(state)
    assert np.trace(rho) == pytest.approx(1.0)
    assert np.allclose(rho, rho.conj().T)
    assert np.allclose(rho @ rho, rho, atol=1e-10)
    assert np.allclose(rho, np.outer(state.amplitudes, state.amplitudes.conj()))


def test_purestate_validation():
    with pytest.raises(ValueError):
        PureState(2, np.array([1.0, 0.0]))  # wrong length
    with pytest.raises(ValueError):
        PureState(1, np.array([1.0, 1.0]))  # not normalized
    with pytest.raises(ValueError):
        RandomCircuitSpec(n=2, depth=-1, seed=0)
