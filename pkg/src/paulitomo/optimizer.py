"""Momentum-accelerated factored gradient descent for low-rank recovery.

The optimization variable is a d x r factor U with rho = U U^dagger, so
positivity and the rank bound hold by construction.  Iterates follow the
two-step recursion

    U_{i+1} = Z_i - eta * A^dagger(A(Z_i Z_i^dagger) - y) Z_i
    Z_{i+1} = U_{i+1} + mu * (U_{i+1} - U_i)

with Z_0 = U_0; mu = 0 recovers plain factored gradient descent.  The
step size, when not supplied, is fixed from two top-eigenvalue
computations at Z_0 and held constant.  Successive-iterate change is
measured in rho space through r x r Gram identities, never via a d x d
matrix.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import operator_norm, top_eigen
from .metrics import fidelity_rank1, frobenius_error
from .seeding import substream
from .sensing import ObservationVector
from .states import PureState


class DivergenceError(RuntimeError):
    """Iterates left the finite range; carries the failing iteration."""

    def __init__(self, iteration: int):
        super().__init__(f"non-finite iterate at iteration {iteration}")
        self.iteration = iteration


@dataclass
class OptimizerConfig:
    """Hyperparameters of the factored-gradient run.

    eta None means the two-eigenvalue step rule evaluated at Z_0.  mu is a
    float in [0, 1), or a string "theory:EPS" for the momentum value that
    the convergence analysis permits (pure-state sensing constants).
    """

    rank: int = 1
    eta: float | None = None
    mu: float | str = 0.0
    maxiters: int = 1000
    reltol: float = 5e-4
    seed: int = 0
    init: str = "spectral"
    L_hat: float = 1.1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if self.maxiters < 1:
            raise ValueError(f"maxiters must be >= 1, got {self.maxiters}")
        if self.reltol <= 0:
            raise ValueError(f"reltol must be positive, got {self.reltol}")
        if self.eta is not None and self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if isinstance(self.mu, str):
            parse_theory_mu(self.mu)  # validates the format
        elif not 0.0 <= float(self.mu) < 1.0:
            raise ValueError(f"mu must satisfy 0 <= mu < 1, got {self.mu}")
        if self.init not in ("spectral", "random"):
            raise ValueError(f"init must be 'spectral' or 'random', got {self.init!r}")
        if not 1.0 < self.L_hat <= 1.1:
            raise ValueError(f"L_hat must lie in (1, 1.1], got {self.L_hat}")


@dataclass
class MomentumParams:
    """Quantities entering the theoretically safe momentum value."""

    r: int
    tau: float = 1.0
    kappa: float = 1.223
    epsilon: float = 1.0

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"rank must be >= 1, got {self.r}")
        if self.tau < 1.0:
            raise ValueError(f"condition number tau must be >= 1, got {self.tau}")
        if self.kappa < 1.0:
            raise ValueError(f"sensing condition number must be >= 1, got {self.kappa}")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")


@dataclass
class TraceRecord:
    iteration: int
    change: float
    error: float | None
    fidelity: float | None
    time_s: float
    grad_time_s: float | None = None


@dataclass
class ConvergenceTrace:
    """Per-iteration diagnostics, append-only; remembers the resolved eta/mu."""

    records: list = field(default_factory=list)
    eta: float | None = None
    mu: float | None = None

    def append(self, record: TraceRecord):
        self.records.append(record)

    @property
    def iterations(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def final(self) -> TraceRecord:
        return self.records[-1]


def theoretical_mu(params: MomentumParams) -> float:
    """Momentum value epsilon / (2000 r tau sqrt(kappa)).

    With pure-state constants (r=1, tau=1, kappa ~ 1.223) this evaluates
    to roughly epsilon / 2212.
    """
    return params.epsilon / (2000.0 * params.r * params.tau * np.sqrt(params.kappa))


def parse_theory_mu(text: str) -> float:
    """Parse "theory:EPS" into its epsilon."""
    head, sep, tail = text.partition(":")
    if head != "theory" or not sep:
        raise ValueError(f"mu string must look like 'theory:EPS', got {text!r}")
    eps = float(tail)
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def resolve_mu(config: OptimizerConfig, tau: float = 1.0, kappa: float = 1.223) -> float:
    """Numeric momentum for a config (pure-state constants by default)."""
    if isinstance(config.mu, str):
        eps = parse_theory_mu(config.mu)
        return theoretical_mu(MomentumParams(r=config.rank, tau=tau, kappa=kappa, epsilon=eps))
    return float(config.mu)


def observation_values(y) -> np.ndarray:
    if isinstance(y, ObservationVector):
        return y.values
    return np.asarray(y, dtype=float).ravel()


def random_init(d: int, r: int, seed: int = 0, real: bool = False) -> np.ndarray:
    """i.i.d. Gaussian factor scaled to unit Frobenius norm."""
    rng = substream(seed, "init")
    u = rng.standard_normal((d, r))
    if not real:
        u = u + 1j * rng.standard_normal((d, r))
    return u / np.linalg.norm(u)


def _fixed_adjoint_matvec(sensing_map, coeffs: np.ndarray):
    """Matvec closure for the Hermitian operator w -> A^dagger(coeffs) w.

    Maps that expose adjoint_dense (dense-storage ensembles) get the fixed
    matrix materialized once; Pauli maps stay matrix-free.
    """
    if hasattr(sensing_map, "adjoint_dense"):
        mat = sensing_map.adjoint_dense(coeffs)
        return lambda w: mat @ w
    return lambda w: sensing_map.adjoint_times(coeffs, w.reshape(-1, 1)).ravel()


def spectral_init(sensing_map, y, r: int, L_hat: float = 1.1, seed: int = 0) -> np.ndarray:
    """Factor of the rank-r PSD part of A^dagger(y), scaled by 1/L_hat.

    Runs deflated power iteration on the matrix-free Hermitian operator
    w -> s * sum_i y_i P_i w; column j is v_j * sqrt(max(lambda_j, 0) / L_hat).
    """
    y = observation_values(y)
    matvec = _fixed_adjoint_matvec(sensing_map, y)
    values, vectors = top_eigen(matvec, sensing_map.d, r, tol=1e-9, seed=seed)
    cols = np.sqrt(np.maximum(values, 0.0) / L_hat)
    return vectors * cols[None, :]


def compute_step_size(sensing_map, y, z0: np.ndarray, L_hat: float = 1.1) -> float:
    """Constant step 1 / (4 (L_hat ||Z0 Z0*||_2 + ||A^dagger(A(Z0 Z0*) - y)||_2)).

    The first spectral norm comes from the r x r Gram eigenproblem, the
    second from power iteration on the matrix-free gradient operator.
    """
    y = observation_values(y)
    z0 = np.asarray(z0)
    if z0.ndim == 1:
        z0 = z0[:, None]
    if not np.any(z0):
        raise ValueError("step-size rule needs a nonzero Z0")
    gram = z0.conj().T @ z0
    top_sq = float(np.linalg.eigvalsh(gram).max())
    residual = sensing_map.forward_factored(z0) - y
    grad_op = _fixed_adjoint_matvec(sensing_map, residual)
    grad_norm = operator_norm(grad_op, sensing_map.d, tol=1e-8)
    return 1.0 / (4.0 * (L_hat * top_sq + grad_norm))


def _gram_change(u_new: np.ndarray, u_old: np.ndarray) -> float:
    """Relative rho-space change between consecutive factors."""
    denom = max(float(np.linalg.norm(u_old.conj().T @ u_old)), 1e-15)
    return frobenius_error(u_new, u_old) / denom


def _target_metrics(u: np.ndarray, target):
    if target is None:
        return None, None
    if isinstance(target, PureState):
        error = frobenius_error(u, target.amplitudes[:, None])
        return error, fidelity_rank1(u, target)
    target = np.asarray(target)
    if target.ndim == 1:
        target = target[:, None]
    error = frobenius_error(u, target)
    fidelity = fidelity_rank1(u, target[:, 0]) if target.shape[1] == 1 else None
    return error, fidelity


def run(sensing_map, y, config: OptimizerConfig, target=None, gradient_fn=None):
    """Iterate the momentum recursion until reltol or maxiters.

    target (a PureState or a d x r factor) is consumed only for trace
    metrics.  gradient_fn overrides the serial gradient evaluation; it
    must return A^dagger(A(zz*) - y) z for the same map and data.

    Returns (factor, ConvergenceTrace).
    """
    y = observation_values(y)
    d, r = sensing_map.d, config.rank
    if config.init == "spectral":
        u = spectral_init(sensing_map, y, r, config.L_hat, seed=config.seed)
    else:
        u = random_init(d, r, seed=config.seed, real=getattr(sensing_map, "real_factors", False))
    eta = config.eta if config.eta is not None else compute_step_size(sensing_map, y, u, config.L_hat)
    mu = resolve_mu(config)
    if gradient_fn is None:
        gradient_fn = lambda z: sensing_map.residual_gradient(y, z)

    trace = ConvergenceTrace(eta=eta, mu=mu)
    z = u
    start = time.perf_counter()
    for i in range(1, config.maxiters + 1):
        grad_start = time.perf_counter()
        grad = gradient_fn(z)
        grad_time = time.perf_counter() - grad_start
        u_next = z - eta * grad
        if not np.all(np.isfinite(u_next)):
            raise DivergenceError(i)
        z = u_next + mu * (u_next - u)
        change = _gram_change(u_next, u)
        error, fidelity = _target_metrics(u_next, target)
        trace.append(
            TraceRecord(
                iteration=i,
                change=change,
                error=error,
                fidelity=fidelity,
                time_s=time.perf_counter() - start,
                grad_time_s=grad_time,
            )
        )
        u = u_next
        if change <= config.reltol:
            break
    return u, trace
