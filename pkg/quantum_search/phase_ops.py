"""Selective phase rotation R_gamma, selective inversion I_t and inversion about zero I_0."""
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable

import numpy as np

from .errors import DomainError
from .gates import DenseOperator, require_dense_dim
from .statevec import StateVector


@dataclass(frozen=True)
class PhaseSpec:
    targets: FrozenSet[int] = field(default_factory=frozenset)
    gamma: float = np.pi

    def __post_init__(self):
        object.__setattr__(self, "targets", frozenset(int(t) for t in self.targets))
        if not np.isfinite(self.gamma):
            raise DomainError(f"gamma must be finite, got {self.gamma}")

    def check(self, num_sites: int):
        bad = sorted(t for t in self.targets if not 0 <= t < num_sites)
        if bad:
            raise DomainError(f"target(s) {bad} outside [0, {num_sites})")

    def index_array(self) -> np.ndarray:
        return np.fromiter(sorted(self.targets), dtype=np.intp, count=len(self.targets))


def _phase_factor(gamma: float) -> complex:
    # exp(i*pi) carries a 1e-16 imaginary residue
    return -1.0 + 0j if gamma == np.pi else complex(np.exp(1j * gamma))


def selective_phase_rotation(psi: StateVector, spec: PhaseSpec) -> StateVector:
    spec.check(psi.num_sites)
    out = psi.amps.copy()
    idx = spec.index_array()
    out[idx] *= _phase_factor(spec.gamma)
    return StateVector(out, psi.qubit_count)


def selective_inversion(psi: StateVector, targets: Iterable[int]) -> StateVector:
    """R_pi as plain sign flips, so no rounding enters."""
    spec = PhaseSpec(frozenset(targets), np.pi)
    spec.check(psi.num_sites)
    out = psi.amps.copy()
    idx = spec.index_array()
    out[idx] = -out[idx]
    return StateVector(out, psi.qubit_count)


def inversion_about_zero(psi: StateVector) -> StateVector:
    out = psi.amps.copy()
    out[0] = -out[0]
    return StateVector(out, psi.qubit_count)


def phase_rotation_operator(num_sites: int, spec: PhaseSpec) -> DenseOperator:
    require_dense_dim(num_sites)
    spec.check(num_sites)
    diag = np.ones(num_sites, dtype=np.complex128)
    diag[spec.index_array()] = _phase_factor(spec.gamma)
    return DenseOperator(np.diag(diag), unitary=True)
