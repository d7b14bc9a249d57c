"""Reconstruction metrics on factors, computed from r x r Gram matrices.

All distances treat a d x r factor U as the matrix rho = U U^dagger it
represents, so nothing here allocates a d x d array.
"""

import numpy as np

from .states import PureState


def _as_factor(u) -> np.ndarray:
    u = np.asarray(u)
    if u.ndim == 1:
        u = u[:, None]
    if u.ndim != 2:
        raise ValueError(f"factor must be a d x r matrix, got shape {u.shape}")
    return u


def _state_vector(psi) -> np.ndarray:
    if isinstance(psi, PureState):
        return psi.amplitudes
    psi = np.asarray(psi).ravel()
    return psi


def procrustes_distance(u, v) -> float:
    """min over unitary R of ||u - v R||_F.

    Equals sqrt(||u||_F^2 + ||v||_F^2 - 2 sum_j sigma_j(u^dagger v)), but is
    evaluated as the explicit difference at the minimizing rotation: the
    trace form loses half the working precision to cancellation near zero.
    """
    u, v = _as_factor(u), _as_factor(v)
    if u.shape != v.shape:
        raise ValueError(f"factor shapes differ: {u.shape} vs {v.shape}")
    return float(np.linalg.norm(u - v @ _procrustes_rotation(v, u)))


def _procrustes_rotation(a, b) -> np.ndarray:
    """Unitary R maximizing Re Tr(R^dagger a^dagger b): rotates a toward b."""
    w, _, vh = np.linalg.svd(a.conj().T @ b)
    return w @ vh


def align_factor(u, v) -> np.ndarray:
    """Rotate u by the Procrustes-minimizing unitary toward v."""
    u, v = _as_factor(u), _as_factor(v)
    return u @ _procrustes_rotation(u, v)


def frobenius_error(u, v) -> float:
    """||u u^dagger - v v^dagger||_F from Gram matrices only.

    Row dimensions must match; the number of columns may differ.
    """
    u, v = _as_factor(u), _as_factor(v)
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"row dimensions differ: {u.shape[0]} vs {v.shape[0]}")
    gu = np.linalg.norm(u.conj().T @ u) ** 2
    gv = np.linalg.norm(v.conj().T @ v) ** 2
    cross = np.linalg.norm(u.conj().T @ v) ** 2
    return float(np.sqrt(max(gu + gv - 2.0 * cross, 0.0)))


def fidelity_rank1(u, psi) -> float:
    """Tr(|psi><psi| u u^dagger) = ||u^dagger psi||^2 for a pure target."""
    u = _as_factor(u)
    vec = _state_vector(psi)
    if u.shape[0] != vec.size:
        raise ValueError(f"factor has {u.shape[0]} rows, state has {vec.size}")
    return float(np.linalg.norm(u.conj().T @ vec) ** 2)


def fidelity_density(rho: np.ndarray, psi) -> float:
    """Tr(|psi><psi| rho) = <psi| rho |psi> for a dense density matrix."""
    vec = _state_vector(psi)
    rho = np.asarray(rho)
    if rho.shape != (vec.size, vec.size):
        raise ValueError(f"density matrix shape {rho.shape} does not match state")
    return float(np.vdot(vec, rho @ vec).real)
