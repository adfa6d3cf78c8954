"""
Elementary gate set (M, NOT, CNOT, CCNOT), the n-qubit Walsh-Hadamard
transform and dense-operator audits.

Gate-local ordering: in a GateApplication the wires are listed controls
first, target last, and the first wire is the highest-order bit of the
gate's local index. With that ordering CNOT maps |10> to |11>.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Callable, Tuple

import numpy as np

from .errors import DomainError, ResourceError
from .statevec import StateVector

logger = logging.getLogger(__name__)

MAX_DENSE_DIM = 4096
_SQRT1_2 = 1.0 / np.sqrt(2.0)


class GateKind(str, Enum):
    NOT = "NOT"
    CNOT = "CNOT"
    CCNOT = "CCNOT"
    M = "M"

    @property
    def arity(self) -> int:
        return {"NOT": 1, "CNOT": 2, "CCNOT": 3, "M": 1}[self.value]

    @property
    def reversible(self) -> bool:
        return self is not GateKind.M


def _kind(kind) -> GateKind:
    try:
        return GateKind(str(getattr(kind, "value", kind)).upper())
    except ValueError:
        raise DomainError(f"unknown gate kind {kind!r}") from None


@dataclass(frozen=True)
class GateApplication:
    kind: GateKind
    wires: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if len(self.wires) != self.kind.arity:
            raise DomainError(f"{self.kind.value} takes {self.kind.arity} wire(s), got {self.wires}")
        if len(set(self.wires)) != len(self.wires):
            raise DomainError(f"wire collision in {self.kind.value} {self.wires}")
        if any(w < 0 for w in self.wires):
            raise DomainError(f"negative wire in {self.wires}")

    @property
    def controls(self) -> Tuple[int, ...]:
        return self.wires[:-1]

    @property
    def target(self) -> int:
        return self.wires[-1]

    def to_text(self) -> str:
        return f"{self.kind.value} {','.join(str(w) for w in self.wires)}"


@dataclass(frozen=True)
class DenseOperator:
    """Explicit dim x dim matrix; row = output index, column = input index."""

    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"dense operators are square, got shape {m.shape}")
        if m.shape[0] > MAX_DENSE_DIM:
            raise ResourceError(f"dense operator of dim {m.shape[0]} exceeds {MAX_DENSE_DIM}")
        if not np.all(np.isfinite(m)):
            raise DomainError("dense operator entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, psi: StateVector) -> StateVector:
        if psi.num_sites != self.dim:
            raise DomainError(f"operator dim {self.dim} does not match {psi.num_sites} sites")
        return StateVector(self.matrix @ psi.amps, psi.qubit_count)

    def compose(self, other: "DenseOperator") -> "DenseOperator":
        """self after other."""
        return DenseOperator(self.matrix @ other.matrix, self.unitary and other.unitary)


@dataclass(frozen=True)
class UnitarityReport:
    is_unitary: bool
    defect: float

    def __bool__(self):
        return self.is_unitary


def require_dense_dim(dim: int):
    if dim > MAX_DENSE_DIM:
        raise ResourceError(f"dense audits are limited to N <= {MAX_DENSE_DIM}, got {dim}")


def hadamard_m() -> DenseOperator:
    return DenseOperator(np.array([[1, 1], [1, -1]]) * _SQRT1_2, unitary=True)


def example_transition_matrix() -> DenseOperator:
    """The 4x4 example transition matrix, taken as given (its rows are not ordered like M (x) M)."""
    return DenseOperator(
        0.5 * np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]]),
        unitary=True,
    )


def reversible_gate(kind) -> DenseOperator:
    kind = _kind(kind)
    if not kind.reversible:
        raise DomainError(f"{kind.value} is not a reversible classical gate")
    dim = 1 << kind.arity
    perm = np.arange(dim)
    # all controls set: swap the two target values
    perm[dim - 2], perm[dim - 1] = dim - 1, dim - 2
    matrix = np.zeros((dim, dim))
    matrix[perm, np.arange(dim)] = 1.0
    return DenseOperator(matrix, unitary=True)


def local_matrix(kind) -> DenseOperator:
    kind = _kind(kind)
    return hadamard_m() if kind is GateKind.M else reversible_gate(kind)


def _check_wires(psi: StateVector, wires):
    n = psi.require_qubits()
    bad = [w for w in wires if w >= n]
    if bad:
        raise DomainError(f"wire(s) {bad} out of range for a {n}-qubit register")
    return n


def hadamard_stage(amps: np.ndarray, qubit: int) -> None:
    """One butterfly stage: M on `qubit`, in place, scaled by 2^-1/2."""
    h = 1 << qubit
    v = amps.reshape(-1, 2, h)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = (a + b) * _SQRT1_2
    v[:, 1, :] = (a - b) * _SQRT1_2


def apply_gate(psi: StateVector, g: GateApplication) -> StateVector:
    _check_wires(psi, g.wires)
    out = psi.amps.copy()
    if g.kind is GateKind.M:
        hadamard_stage(out, g.target)
        return StateVector(out, psi.qubit_count)
    idx = np.arange(psi.num_sites)
    mask = (idx >> g.target) & 1 == 0
    for c in g.controls:
        mask &= (idx >> c) & 1 == 1
    low = idx[mask]
    high = low | (1 << g.target)
    out[low], out[high] = psi.amps[high], psi.amps[low]
    return StateVector(out, psi.qubit_count)


def walsh_hadamard(psi: StateVector) -> StateVector:
    """M on every qubit as an in-place butterfly, O(N log N)."""
    n = psi.require_qubits()
    out = psi.amps.copy()
    for q in range(n):
        hadamard_stage(out, q)
    return StateVector(out, n)


def dense_walsh_hadamard(n: int) -> DenseOperator:
    require_dense_dim(1 << n)
    m = hadamard_m().matrix
    return DenseOperator(reduce(np.kron, [m] * n, np.ones((1, 1))), unitary=True)


def embed_gate(g: GateApplication, n: int) -> DenseOperator:
    """Dense I (x) ... (x) U (x) ... (x) I with U on g.wires, built entry by entry."""
    dim = 1 << n
    require_dense_dim(dim)
    if any(w >= n for w in g.wires):
        raise DomainError(f"wire(s) {g.wires} out of range for {n} qubits")
    u = local_matrix(g.kind).matrix
    k = len(g.wires)
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        local_in = 0
        for pos, w in enumerate(g.wires):
            local_in |= ((col >> w) & 1) << (k - 1 - pos)
        rest = col
        for w in g.wires:
            rest &= ~(1 << w)
        for local_out in range(1 << k):
            row = rest
            for pos, w in enumerate(g.wires):
                row |= ((local_out >> (k - 1 - pos)) & 1) << w
            full[row, col] = u[local_out, local_in]
    return DenseOperator(full, unitary=True)


def check_unitary(U: DenseOperator, tol: float = 1e-12) -> UnitarityReport:
    m = U.matrix
    defect = float(np.max(np.abs(m.conj().T @ m - np.eye(U.dim))))
    return UnitarityReport(is_unitary=defect <= tol, defect=defect)


def defect_halving_ratio(build: Callable[[float], DenseOperator], epsilon: float) -> float:
    """defect(eps) / defect(eps / 2); about 4 for an O(eps^2) unitarity defect."""
    coarse = check_unitary(build(epsilon)).defect
    fine = check_unitary(build(epsilon / 2.0)).defect
    logger.debug("unitarity defect %.3e at eps=%g, %.3e at eps/2", coarse, epsilon, fine)
    return coarse / fine
