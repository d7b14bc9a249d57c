"""Shared independent oracles: dense Pauli matrices built by Kronecker
products, dense measurement projectors, and dense sensing operators.
These never touch the package's signed-permutation fast paths, so they
can certify them.
"""

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA = {0: I2, 1: SX, 2: SY, 3: SZ}

# Measurement-basis vectors: AXIS_VECTORS[axis][outcome_bit]
AXIS_VECTORS = {
    "x": (np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)),
    "y": (np.array([1, 1j]) / np.sqrt(2), np.array([1, -1j]) / np.sqrt(2)),
    "z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
}


def dense_monomial(labels) -> np.ndarray:
    """P as an explicit 2^n x 2^n matrix via Kronecker products."""
    mat = np.eye(1, dtype=complex)
    for label in labels:
        mat = np.kron(mat, SIGMA[label])
    return mat


def dense_basis_vector(axes: str, outcome: int) -> np.ndarray:
    """|v_l> for a setting and an outcome index (qubit 0 = MSB)."""
    n = len(axes)
    vec = np.eye(1, dtype=complex).ravel()
    for k, axis in enumerate(axes):
        bit = (outcome >> (n - 1 - k)) & 1
        vec = np.kron(vec, AXIS_VECTORS[axis][bit])
    return vec


def dense_forward(monomials, rho: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """A(rho) computed entirely through dense matrices."""
    return np.array(
        [scale * np.trace(dense_monomial(p.labels) @ rho).real for p in monomials]
    )


def dense_adjoint(monomials, x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """A^dagger(x) as an explicit d x d matrix."""
    d = 2 ** len(monomials[0].labels)
    out = np.zeros((d, d), dtype=complex)
    for xi, p in zip(x, monomials):
        out += scale * xi * dense_monomial(p.labels)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_factor(rng, d, r, real=False):
    u = rng.standard_normal((d, r))
    if not real:
        u = u + 1j * rng.standard_normal((d, r))
    return u


def random_pure_state_vector(rng, n):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)
