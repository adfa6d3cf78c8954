"""
Complex amplitude state vectors.

Index convention: for a qubit register of n qubits, bit b of the state index
is the state of qubit b (qubit 0 is the least-significant bit).
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractError, DomainError

MEASURE_NORM_TOL = 1e-6


def _qubits_for(num_sites: int) -> Optional[int]:
    if num_sites >= 1 and num_sites & (num_sites - 1) == 0:
        return num_sites.bit_length() - 1
    return None


@dataclass
class StateVector:
    amps: np.ndarray
    qubit_count: Optional[int] = None

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if self.amps.size == 0:
            raise DomainError("a state vector needs at least one site")
        if not np.all(np.isfinite(self.amps)):
            raise DomainError("state vector amplitudes must be finite")
        inferred = _qubits_for(self.amps.size)
        if self.qubit_count is None:
            self.qubit_count = inferred
        elif inferred != self.qubit_count:
            raise DomainError(f"{self.amps.size} sites is not a {self.qubit_count}-qubit register")

    @property
    def num_sites(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.amps * factor, self.qubit_count)

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return StateVector(self.amps / nrm, self.qubit_count)

    def require_qubits(self) -> int:
        if self.qubit_count is None:
            raise DomainError(f"{self.num_sites} sites is not a power of two")
        return self.qubit_count

    def _check_index(self, index: int):
        if not 0 <= index < self.num_sites:
            raise DomainError(f"index {index} outside [0, {self.num_sites})")


@dataclass(frozen=True)
class MeasurementSample:
    index: int
    seed: int


def basis_state(num_sites: int, index: int) -> StateVector:
    if num_sites < 1:
        raise DomainError(f"num_sites must be positive, got {num_sites}")
    if not 0 <= index < num_sites:
        raise DomainError(f"index {index} outside [0, {num_sites})")
    amps = np.zeros(num_sites, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def uniform_state(num_sites: int) -> StateVector:
    if num_sites < 1:
        raise DomainError(f"num_sites must be positive, got {num_sites}")
    return StateVector(np.full(num_sites, 1.0 / np.sqrt(num_sites), dtype=np.complex128))


def random_state(num_sites: int, seed: int) -> StateVector:
    """Seeded complex Gaussian vector, normalized."""
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(num_sites) + 1j * rng.standard_normal(num_sites)
    return StateVector(amps).normalized()


def probability(psi: StateVector, index: int) -> float:
    psi._check_index(index)
    amp = psi.amps[index]
    return float(amp.real * amp.real + amp.imag * amp.imag)


def probabilities(psi: StateVector) -> np.ndarray:
    return np.abs(psi.amps) ** 2


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """amps[j * N_b + k] = a[j] * b[k]; b occupies the low-order qubits."""
    _require_normalized(a, "tensor")
    _require_normalized(b, "tensor")
    qubits = None
    if a.qubit_count is not None and b.qubit_count is not None:
        qubits = a.qubit_count + b.qubit_count
    return StateVector(np.kron(a.amps, b.amps), qubits)


def _inverse_cdf(psi: StateVector, uniforms: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probabilities(psi))
    idx = np.searchsorted(cdf, uniforms * cdf[-1], side="right")
    return np.minimum(idx, psi.num_sites - 1)


def _require_normalized(psi: StateVector, operation: str = "measure"):
    if abs(psi.norm() - 1.0) > MEASURE_NORM_TOL:
        raise ContractError(f"{operation} needs a unit-norm state, norm is {psi.norm():.9f}")


def measure(psi: StateVector, seed: int) -> MeasurementSample:
    """Full-register measurement by inverse CDF over |amps|^2."""
    _require_normalized(psi)
    u = np.random.default_rng(seed).random()
    index = int(_inverse_cdf(psi, np.array([u]))[0])
    return MeasurementSample(index=index, seed=seed)


def sample_indices(psi: StateVector, shots: int, seed: int) -> np.ndarray:
    _require_normalized(psi)
    uniforms = np.random.default_rng(seed).random(shots)
    return _inverse_cdf(psi, uniforms)
