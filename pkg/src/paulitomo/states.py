"""Target pure states and a minimal state-vector simulator.

Bit convention, fixed across the whole package: a basis index i of a
length-2^n amplitude vector is read as an n-bit string with qubit 0 as the
most significant bit.
"""

from dataclasses import dataclass

import numpy as np

from .seeding import substream

NORM_ATOL = 1e-10

_SQRT2_INV = 1.0 / np.sqrt(2.0)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV


@dataclass
class PureState:
    """Pure n-qubit state as a unit-norm complex amplitude vector."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size != 2**self.n:
            raise ValueError(f"expected {2**self.n} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"amplitudes are not unit norm: |psi| = {norm}")
        self.amplitudes = amps

    @property
    def dim(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class RandomCircuitSpec:
    """Parameters of the random-circuit state constructor."""

    n: int
    depth: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        if self.depth < 0:
            raise ValueError(f"depth must be nonnegative, got {self.depth}")


def ghz(n: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2); defined for n > 2."""
    if n <= 2:
        raise ValueError(f"ghz is defined for n > 2, got n={n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = _SQRT2_INV
    amps[-1] = _SQRT2_INV
    return PureState(n, amps)


def ghz_minus(n: int) -> PureState:
    """(|0...0> - |1...1>)/sqrt(2); defined for n > 2."""
    if n <= 2:
        raise ValueError(f"ghz_minus is defined for n > 2, got n={n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = _SQRT2_INV
    amps[-1] = -_SQRT2_INV
    return PureState(n, amps)


def hadamard_all(n: int) -> PureState:
    """((|0> + |1>)/sqrt(2))^{tensor n}: the uniform superposition."""
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    amps = np.full(2**n, 2.0 ** (-n / 2.0), dtype=complex)
    return PureState(n, amps)


def euler_rotation(theta: float, phi: float, lam: float) -> np.ndarray:
    """Standard 3-Euler-angle single-qubit unitary U(theta, phi, lambda)."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def apply_single_qubit(amps: np.ndarray, gate: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply a 2x2 gate to one qubit of a length-2^n amplitude vector."""
    psi = amps.reshape((2,) * n)
    psi = np.moveaxis(psi, qubit, -1)
    psi = psi @ gate.T
    return np.moveaxis(psi, -1, qubit).reshape(-1)


def apply_cx(amps: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    """Apply a controlled-X gate; flips `target` where `control` is 1."""
    psi = amps.reshape((2,) * n).copy()
    sel0 = [slice(None)] * n
    sel1 = [slice(None)] * n
    sel0[control] = 1
    sel1[control] = 1
    sel0[target] = 0
    sel1[target] = 1
    a, b = psi[tuple(sel0)].copy(), psi[tuple(sel1)].copy()
    psi[tuple(sel0)], psi[tuple(sel1)] = b, a
    return psi.reshape(-1)


def random_state(spec: RandomCircuitSpec) -> PureState:
    """State prepared by `depth` uniformly chosen gates from |0...0>.

    Each step is either a 3-Euler-angle rotation on a uniformly chosen qubit
    (angles drawn uniformly from [0, 1], used directly as radians) or a
    controlled-X between a uniformly chosen pair of distinct qubits.  Draw
    order per step is fixed (gate kind, then wires, then angles), so a fixed
    seed reproduces the state bit for bit.
    """
    rng = substream(spec.seed, "state")
    n = spec.n
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    for _ in range(spec.depth):
        kind = 0 if n == 1 else int(rng.integers(2))
        if kind == 0:
            qubit = int(rng.integers(n))
            theta, phi, lam = rng.random(3)
            amps = apply_single_qubit(amps, euler_rotation(theta, phi, lam), qubit, n)
        else:
            control = int(rng.integers(n))
            t = int(rng.integers(n - 1))
            target = t + 1 if t >= control else t
            amps = apply_cx(amps, control, target, n)
    return PureState(n, amps)


def density_of(state: PureState) -> np.ndarray:
    """Rank-1 density matrix |psi><psi| of a pure state."""
    return np.outer(state.amplitudes, state.amplitudes.conj())
