"""
Diffusion transforms: the infinitesimal all-to-all D_eps, the exactly
unitary D (diagonal -1 + 2/N, off-diagonal 2/N) and its synthesized
form -W I_0 W, with the checks that tie the three together.
"""
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .gates import DenseOperator, dense_walsh_hadamard, hadamard_stage, require_dense_dim
from .statevec import StateVector

logger = logging.getLogger(__name__)

NEAR_UNITARY_WARN = 0.1
MAX_AUDIT_QUBITS = 5


@dataclass(frozen=True)
class InfinitesimalDiffusionSpec:
    N: int
    epsilon: float
    exact_diagonal: bool = True

    def __post_init__(self):
        if self.N < 2:
            raise DomainError(f"infinitesimal diffusion needs N >= 2, got {self.N}")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        if self.N * self.epsilon > NEAR_UNITARY_WARN:
            logger.warning(
                "N*eps = %.3g > %.1f: D_eps is far from unitary", self.N * self.epsilon, NEAR_UNITARY_WARN
            )

    @property
    def diagonal(self) -> complex:
        couplings = self.N - 1 if self.exact_diagonal else self.N
        return 1.0 - 1j * couplings * self.epsilon


@dataclass(frozen=True)
class ExactDiffusionSpec:
    N: int
    a: complex
    b: complex

    @classmethod
    def for_size(cls, N: int, b: Optional[complex] = None) -> "ExactDiffusionSpec":
        """a = -1 + 2/N, b = 2/N; pass `b` to audit a non-solution."""
        if N < 2:
            raise DomainError(f"diffusion needs N >= 2, got {N}")
        return cls(N, -1.0 + 2.0 / N, 2.0 / N if b is None else b)

    def unitarity_residuals(self):
        """Residuals of |a|^2 + (N-1)|b|^2 = 1 and 2 Re(a b*) + (N-2)|b|^2 = 0."""
        a, b, N = complex(self.a), complex(self.b), self.N
        norm_residual = abs(a) ** 2 + (N - 1) * abs(b) ** 2 - 1.0
        overlap_residual = 2.0 * (a * b.conjugate()).real + (N - 2) * abs(b) ** 2
        return norm_residual, overlap_residual

    def column_sum(self) -> complex:
        return complex(self.a) + (self.N - 1) * complex(self.b)


class Primitive(NamedTuple):
    name: str
    qubit: Optional[int] = None


def infinitesimal_diffusion_matrix(spec: InfinitesimalDiffusionSpec) -> DenseOperator:
    require_dense_dim(spec.N)
    m = np.full((spec.N, spec.N), 1j * spec.epsilon, dtype=np.complex128)
    np.fill_diagonal(m, spec.diagonal)
    return DenseOperator(m)


def exact_diffusion_matrix(N: int, b: Optional[complex] = None) -> DenseOperator:
    spec = ExactDiffusionSpec.for_size(N, b)
    require_dense_dim(N)
    m = np.full((N, N), spec.b, dtype=np.complex128)
    np.fill_diagonal(m, spec.a)
    return DenseOperator(m, unitary=b is None)


def apply_diffusion_closed_form(psi: StateVector) -> StateVector:
    """(D psi)_j = -psi_j + (2/N) sum_k psi_k in O(N)."""
    total = np.sum(psi.amps)
    return StateVector(-psi.amps + (2.0 / psi.num_sites) * total, psi.qubit_count)


def synthesis_program(n: int) -> List[Primitive]:
    """Primitive sequence of D = -W I_0 W: n M gates, I_0, n M gates, global sign."""
    stages = [Primitive("M", q) for q in range(n)]
    return stages + [Primitive("I0")] + stages + [Primitive("NEG")]


def synthesis_operation_count(n: int) -> int:
    return len(synthesis_program(n))


def apply_diffusion_synthesized(psi: StateVector) -> StateVector:
    n = psi.require_qubits()
    out = psi.amps.copy()
    for op in synthesis_program(n):
        if op.name == "M":
            hadamard_stage(out, op.qubit)
        elif op.name == "I0":
            out[0] = -out[0]
        else:
            out *= -1.0
    return StateVector(out, n)


def synthesis_identity_defect(n: int) -> float:
    """max |D - (-(M (x) ... (x) M) I_0 (M (x) ... (x) M))| on the dense matrices."""
    if not 1 <= n <= MAX_AUDIT_QUBITS:
        raise DomainError(f"dense synthesis audit needs 1 <= n <= {MAX_AUDIT_QUBITS}, got {n}")
    N = 1 << n
    w = dense_walsh_hadamard(n).matrix
    i0 = np.eye(N)
    i0[0, 0] = -1.0
    synthesized = -(w @ i0 @ w)
    return float(np.max(np.abs(exact_diffusion_matrix(N).matrix - synthesized)))
