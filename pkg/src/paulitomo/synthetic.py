"""Generic low-rank matrix-sensing benchmark with a Gaussian ensemble.

The sensing operator applies m independent real linear functionals
X -> Tr(A_i X) with A_i real symmetric and i.i.d. Gaussian entries of
variance 1/m.  Functionals are stored compactly as rows over the
scaled upper-triangle coordinates of the symmetric matrix space
(diagonal plus sqrt(2) times the strict upper triangle), which makes
forward and adjoint two GEMV calls against an (m, d(d+1)/2) array
instead of m dense d x d matrices.

Ground truth is rho* = U* U*^T with Gaussian U*, rescaled to unit
Frobenius norm; the observations are y = A(rho*) + w with w rescaled to
an exact noise norm.  The ground truth is consumed only by metrics,
never by the optimizer.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import optimizer
from .metrics import frobenius_error
from .seeding import substream


@dataclass
class SyntheticProblem:
    """Dimensions and noise level of one benchmark instance (m = c d r)."""

    d: int = 256
    r: int = 5
    c: int = 5
    noise_norm: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.r < 1 or self.c < 1:
            raise ValueError("d, r, c must all be positive")
        if self.noise_norm < 0:
            raise ValueError(f"noise norm must be nonnegative, got {self.noise_norm}")
        if self.m > self.d**2:
            raise ValueError(f"m = c*d*r = {self.m} exceeds d^2 = {self.d**2}")

    @property
    def m(self) -> int:
        return self.c * self.d * self.r


class GaussianSensingMap:
    """m real symmetric Gaussian functionals on Hermitian d x d matrices."""

    real_factors = True  # random factor initialization may stay real

    def __init__(self, d: int, rows: np.ndarray):
        self.d = d
        hdim = d * (d + 1) // 2
        if rows.ndim != 2 or rows.shape[1] != hdim:
            raise ValueError(f"rows must have shape (m, {hdim}), got {rows.shape}")
        self.rows = rows
        self._iu = np.triu_indices(d, k=1)
        self._sqrt2 = np.sqrt(2.0)

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    def _hvec(self, x: np.ndarray) -> np.ndarray:
        # Isometric coordinates of the real symmetric part.
        return np.concatenate([np.diagonal(x), self._sqrt2 * x[self._iu]])

    def _unhvec(self, h: np.ndarray) -> np.ndarray:
        x = np.zeros((self.d, self.d))
        np.fill_diagonal(x, h[: self.d])
        off = h[self.d :] / self._sqrt2
        x[self._iu] = off
        x[(self._iu[1], self._iu[0])] = off
        return x

    def _check_factor(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z)
        if z.ndim == 1:
            z = z[:, None]
        if z.ndim != 2 or z.shape[0] != self.d:
            raise ValueError(f"factor must be ({self.d}, r), got shape {z.shape}")
        return z

    def forward_range(self, u: np.ndarray, lo: int, hi: int) -> np.ndarray:
        u = self._check_factor(u)
        x = (u @ u.conj().T).real  # imaginary part is antisymmetric: annihilated
        return self.rows[lo:hi] @ self._hvec(x)

    def forward_factored(self, u: np.ndarray) -> np.ndarray:
        return self.forward_range(u, 0, self.m)

    def adjoint_range(self, x: np.ndarray, z: np.ndarray, lo: int, hi: int) -> np.ndarray:
        z = self._check_factor(z)
        mat = self._unhvec(self.rows[lo:hi].T @ np.asarray(x, dtype=float))
        return mat @ z

    def adjoint_times(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return self.adjoint_range(x, z, 0, self.m)

    def adjoint_dense(self, x: np.ndarray) -> np.ndarray:
        """A^dagger(x) as an explicit symmetric d x d matrix.

        One GEMV against the stored rows; lets fixed-coefficient operators
        (spectral initialization, step-size rule) run power iteration on a
        cached d x d matvec instead of re-reading the row array.
        """
        return self._unhvec(self.rows.T @ np.asarray(x, dtype=float))

    def residual_gradient_range(self, y, z, lo: int, hi: int) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        residual = self.forward_range(z, lo, hi) - y[lo:hi]
        return self.adjoint_range(residual, z, lo, hi)

    def residual_gradient(self, y, z) -> np.ndarray:
        return self.residual_gradient_range(y, z, 0, self.m)


def generate_synthetic(problem: SyntheticProblem):
    """Build (sensing map, observations y, ground-truth factor U*)."""
    d, r, m = problem.d, problem.r, problem.m
    hdim = d * (d + 1) // 2
    rng = substream(problem.seed, "sensing")
    rows = rng.standard_normal((m, hdim))
    rows[:, :d] *= np.sqrt(1.0 / m)
    rows[:, d:] *= np.sqrt(2.0 / m)  # sqrt(2) coordinate times N(0, 1/m) entry
    sensing_map = GaussianSensingMap(d, rows)

    u_star = substream(problem.seed, "state").standard_normal((d, r))
    u_star /= np.sqrt(np.linalg.norm(u_star.T @ u_star))  # ||rho*||_F = 1

    y = sensing_map.forward_factored(u_star)
    if problem.noise_norm > 0:
        w = substream(problem.seed, "noise").standard_normal(m)
        y = y + w * (problem.noise_norm / np.linalg.norm(w))
    return sensing_map, y, u_star


def theory_step_interval(sigma_r: float, delta: float = 0.1):
    """Step-size interval the convergence analysis permits, at RIP level delta."""
    hi = 10.0 / (4.0 * sigma_r * (1.0 - delta))
    contraction = (np.sqrt(1 + delta) - np.sqrt(1 - delta)) / ((np.sqrt(2) + 1) * np.sqrt(1 + delta))
    lo = (1.0 - contraction**4) * hi
    return lo, hi


def run_synthetic_comparison(
    problem: SyntheticProblem,
    mu_values=(0.0, 2.0 / 3.0, "theory"),
    tol: float = 1e-3,
    maxiters: int = 4000,
) -> dict:
    """Head-to-head momentum comparison on one synthetic instance.

    Each entry of mu_values is a float or the string "theory" (momentum
    from the known spectrum of rho*).  All runs share the problem, the
    random initialization seed, and the step-size rule; reported per run
    are iterations, final relative error, and wall time.
    """
    sensing_map, y, u_star = generate_synthetic(problem)
    spectrum = np.linalg.eigvalsh(u_star.T @ u_star)
    sigma_1, sigma_r = float(spectrum[-1]), float(spectrum[0])
    tau = sigma_1 / sigma_r
    interval = theory_step_interval(sigma_r)

    runs = []
    for mu_spec in mu_values:
        if mu_spec == "theory":
            mu = optimizer.theoretical_mu(optimizer.MomentumParams(r=problem.r, tau=tau))
        else:
            mu = float(mu_spec)
        config = optimizer.OptimizerConfig(
            rank=problem.r,
            eta=None,
            mu=mu,
            maxiters=maxiters,
            reltol=tol,
            seed=problem.seed,
            init="random",
        )
        start = time.perf_counter()
        factor, trace = optimizer.run(sensing_map, y, config, target=u_star)
        elapsed = time.perf_counter() - start
        runs.append(
            {
                "mu": mu,
                "mu_spec": str(mu_spec),
                "iterations": trace.iterations,
                "converged": trace.final().change <= tol,
                "final_relative_error": frobenius_error(factor, u_star),
                "wall_time_s": elapsed,
                "eta": trace.eta,
                "eta_in_theory_interval": bool(interval[0] <= trace.eta <= interval[1]),
            }
        )
    return {
        "problem": {
            "d": problem.d,
            "r": problem.r,
            "c": problem.c,
            "m": problem.m,
            "noise_norm": problem.noise_norm,
            "seed": problem.seed,
        },
        "tau": tau,
        "sigma_r": sigma_r,
        "theory_step_interval": list(interval),
        "runs": runs,
    }
