"""Matrix-free sensing operator over a set of Pauli monomials.

The map sends a factor U (d x r, representing rho = U U^dagger) to the m
real values s * Tr(P_i U U^dagger), where s = d / sqrt(m) when the map is
normalized and 1 otherwise.  The adjoint sends a coefficient vector x to
s * sum_i x_i P_i Z without ever materializing a d x d matrix.

Both directions cost O(m * d * r): each monomial acts as a signed index
permutation (see measurements.apply_monomial), and the per-monomial
permutations and signs are cached as (m, d) arrays so the hot loops are
single numpy gathers.  Work on monomial subranges is exposed for the
parallel engine; the full-range call is the serial path, so a one-worker
partition reproduces it exactly.
"""

from dataclasses import dataclass

import numpy as np

from .measurements import (
    _bit_parity,
    exact_expectation,
    expectation_from_record,
    monomial_action,
    sample_record,
    setting_of,
    born_probabilities,
)
from .seeding import substream
from .states import PureState

# Cap on transient gather-buffer entries per chunk of the hot loops.
_CHUNK_ENTRIES = 4_000_000


class SensingMap:
    """Ordered Pauli monomials defining A and its adjoint."""

    def __init__(self, n: int, monomials, normalized: bool = True):
        monomials = list(monomials)
        if not monomials:
            raise ValueError("sensing map needs at least one monomial")
        if any(p.n != n for p in monomials):
            raise ValueError("all monomials must cover n qubits")
        self.n = n
        self.monomials = monomials
        self.normalized = normalized
        self._src = None
        self._sign = None
        self._iphase = None

    @property
    def m(self) -> int:
        return len(self.monomials)

    @property
    def d(self) -> int:
        return 2**self.n

    @property
    def scale(self) -> float:
        return self.d / np.sqrt(self.m) if self.normalized else 1.0

    def _ensure_cache(self):
        if self._src is not None:
            return
        d, m = self.d, self.m
        flips = np.empty(m, dtype=np.int64)
        masks = np.empty(m, dtype=np.int64)
        nys = np.empty(m, dtype=np.int64)
        for i, p in enumerate(self.monomials):
            flips[i], masks[i], nys[i] = monomial_action(p)
        idx = np.arange(d, dtype=np.int64)
        src = idx[None, :] ^ flips[:, None]
        parity = _bit_parity(src & masks[:, None])
        self._sign = (1 - 2 * parity).astype(np.int8)
        self._iphase = 1j ** (nys % 4)
        # Assigned last: concurrent callers gate on _src being present.
        self._src = src.astype(np.int32)

    def _check_factor(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z)
        if z.ndim == 1:
            z = z[:, None]
        if z.ndim != 2 or z.shape[0] != self.d or z.shape[1] < 1:
            raise ValueError(f"factor must be ({self.d}, r >= 1), got shape {z.shape}")
        return z

    def forward_range(self, u: np.ndarray, lo: int, hi: int) -> np.ndarray:
        """Entries lo..hi of A(u u^dagger), with the full-map scale."""
        u = self._check_factor(u)
        self._ensure_cache()
        uc = u.conj()
        out = np.empty(hi - lo)
        step = max(1, _CHUNK_ENTRIES // (self.d * u.shape[1]))
        for a in range(lo, hi, step):
            b = min(a + step, hi)
            gathered = u[self._src[a:b]]  # (b-a, d, r)
            vals = np.einsum("ij,jc,ijc->i", self._sign[a:b], uc, gathered)
            out[a - lo : b - lo] = (self._iphase[a:b] * vals).real
        return self.scale * out

    def forward_factored(self, u: np.ndarray) -> np.ndarray:
        """Observation vector A(u u^dagger): s * Tr(P_i u u^dagger) per entry."""
        return self.forward_range(u, 0, self.m)

    def adjoint_range(self, x: np.ndarray, z: np.ndarray, lo: int, hi: int) -> np.ndarray:
        """Partial adjoint product s * sum_{i in [lo,hi)} x_i P_i z."""
        z = self._check_factor(z)
        x = np.asarray(x, dtype=float)
        if x.shape != (hi - lo,):
            raise ValueError(f"coefficient slice has shape {x.shape}, expected ({hi - lo},)")
        self._ensure_cache()
        out = np.zeros(z.shape, dtype=complex)
        xs = self.scale * x * self._iphase[lo:hi]
        step = max(1, _CHUNK_ENTRIES // (self.d * z.shape[1]))
        for a in range(lo, hi, step):
            b = min(a + step, hi)
            gathered = z[self._src[a:b]]  # (b-a, d, r)
            out += np.einsum("i,ij,ijc->jc", xs[a - lo : b - lo], self._sign[a:b], gathered)
        return out

    def adjoint_times(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        """A^dagger(x) @ z = s * sum_i x_i P_i z, column-wise and matrix-free."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.m,):
            raise ValueError(f"coefficient vector has shape {x.shape}, expected ({self.m},)")
        return self.adjoint_range(x, z, 0, self.m)

    def residual_gradient_range(
        self, y: np.ndarray, z: np.ndarray, lo: int, hi: int
    ) -> np.ndarray:
        """Gradient contribution of monomials [lo, hi): A^dagger(A(zz*)-y) z."""
        y = np.asarray(y, dtype=float)
        if y.shape != (self.m,):
            raise ValueError(f"observation vector has shape {y.shape}, expected ({self.m},)")
        residual = self.forward_range(z, lo, hi) - y[lo:hi]
        return self.adjoint_range(residual, z, lo, hi)

    def residual_gradient(self, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Full gradient of 1/2 ||A(zz*) - y||^2 with respect to rho, times z."""
        return self.residual_gradient_range(y, z, 0, self.m)


@dataclass
class ObservationVector:
    """Measured data aligned with a sensing map's monomial order."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size < 1:
            raise ValueError("observation vector must be nonempty")
        self.values = values

    def __len__(self) -> int:
        return self.values.size


def observe_with_records(
    state: PureState,
    sensing_map: SensingMap,
    shots: int | None = None,
    seed: int = 0,
):
    """Simulate the data vector y; returns (ObservationVector, records).

    Exact mode (shots None) evaluates <psi|P_i|psi> directly and returns an
    empty record list.  Sampled mode groups monomials by measurement
    setting, simulates one record per distinct setting (stream id = setting
    index in first-occurrence order, so records are shared by every
    monomial mapped to that setting), and converts counts to expectation
    values.  The map's normalization is applied either way.
    """
    if state.n != sensing_map.n:
        raise ValueError(f"state has {state.n} qubits, map has {sensing_map.n}")
    values = np.empty(sensing_map.m)
    records = []
    if shots is None:
        for i, p in enumerate(sensing_map.monomials):
            values[i] = exact_expectation(state, p)
    else:
        setting_index = {}
        for p in sensing_map.monomials:
            setting = setting_of(p)
            if setting not in setting_index:
                probs = born_probabilities(state, setting)
                rng = substream(seed, "shots", len(records))
                setting_index[setting] = len(records)
                records.append(sample_record(setting, probs, shots, rng))
        for i, p in enumerate(sensing_map.monomials):
            record = records[setting_index[setting_of(p)]]
            values[i] = expectation_from_record(record, p).value
    return ObservationVector(sensing_map.scale * values), records


def observe(
    state: PureState,
    sensing_map: SensingMap,
    shots: int | None = None,
    seed: int = 0,
) -> ObservationVector:
    """Simulate the data vector y for a state under a sensing map."""
    obs, _ = observe_with_records(state, sensing_map, shots=shots, seed=seed)
    return obs


def simulate_records(state: PureState, settings, shots: int, seed: int = 0) -> list:
    """One measurement record per setting, with per-setting seed streams."""
    records = []
    for idx, setting in enumerate(settings):
        probs = born_probabilities(state, setting)
        rng = substream(seed, "shots", idx)
        records.append(sample_record(setting, probs, shots, rng))
    return records
