"""
Truth-table oracles and their reversible-circuit realization.

Wire layout of a compiled indicator circuit: data wires 0..n-1, work
ancillas n..n+w-1 (w = max(n - 2, 0)), output ancilla last.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from .errors import CircuitContractError, DomainError
from .gates import GateApplication, GateKind, apply_gate
from .phase_ops import selective_inversion
from .statevec import StateVector, basis_state, tensor

logger = logging.getLogger(__name__)

DISENTANGLE_TOL = 1e-8
_MINUS = StateVector(np.array([1.0, -1.0]) / np.sqrt(2.0))


@dataclass(frozen=True)
class TruthTableOracle:
    n: int
    marked: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(int(t) for t in self.marked))
        if self.n < 0:
            raise DomainError(f"qubit count must be >= 0, got {self.n}")
        bad = sorted(t for t in self.marked if not 0 <= t < (1 << self.n))
        if bad:
            raise DomainError(f"marked index(es) {bad} outside [0, {1 << self.n})")

    def evaluate(self, x: int) -> int:
        return int(x in self.marked)


@dataclass(frozen=True)
class ReversibleCircuit:
    data_wires: int
    ancilla_wires: int
    gates: Tuple[GateApplication, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.data_wires < 1 or self.ancilla_wires < 1:
            raise DomainError("a circuit needs at least one data wire and the output ancilla")
        for g in self.gates:
            if g.kind not in (GateKind.NOT, GateKind.CNOT, GateKind.CCNOT):
                raise DomainError(f"{g.kind.value} is not a reversible gate")
            if max(g.wires) >= self.width:
                raise DomainError(f"{g.to_text()} references a wire beyond {self.width - 1}")

    @property
    def width(self) -> int:
        return self.data_wires + self.ancilla_wires

    @property
    def work_wires(self) -> int:
        return self.ancilla_wires - 1

    @property
    def output_wire(self) -> int:
        return self.width - 1

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def truncated(self, count: int) -> "ReversibleCircuit":
        return ReversibleCircuit(self.data_wires, self.ancilla_wires, self.gates[:count])

    def to_text(self) -> str:
        lines = [f"# data_wires {self.data_wires}", f"# ancilla_wires {self.ancilla_wires}"]
        lines += [g.to_text() for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(
        cls, text: str, data_wires: Optional[int] = None, ancilla_wires: Optional[int] = None
    ) -> "ReversibleCircuit":
        """Parse `KIND wire[,wire[,wire]]` lines; `# data_wires k` headers fill missing sizes."""
        header = {}
        gates: List[GateApplication] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] in ("data_wires", "ancilla_wires"):
                    header[parts[0]] = int(parts[1])
                continue
            try:
                kind, wires = line.split(None, 1)
                gates.append(GateApplication(kind, tuple(int(w) for w in wires.split(","))))
            except ValueError as e:
                raise DomainError(f"line {lineno}: cannot parse {raw!r} ({e})") from e
        data_wires = data_wires if data_wires is not None else header.get("data_wires")
        ancilla_wires = ancilla_wires if ancilla_wires is not None else header.get("ancilla_wires")
        if data_wires is None or ancilla_wires is None:
            raise DomainError("circuit text needs data_wires and ancilla_wires")
        return cls(data_wires, ancilla_wires, tuple(gates))


def phase_oracle_apply(psi: StateVector, oracle: TruthTableOracle) -> StateVector:
    if psi.qubit_count != oracle.n:
        raise DomainError(f"oracle acts on {oracle.n} qubits, state has {psi.qubit_count}")
    return selective_inversion(psi, oracle.marked)


def compile_marked_indicator(n: int, t: int) -> ReversibleCircuit:
    """Reversible circuit writing [x == t] into the output ancilla via a CCNOT ladder."""
    if n < 1:
        raise DomainError(f"indicator needs n >= 1, got {n}")
    if not 0 <= t < (1 << n):
        raise DomainError(f"target {t} outside [0, {1 << n})")
    work = [n + k for k in range(max(n - 2, 0))]
    out = n + len(work)

    flips = [GateApplication(GateKind.NOT, (b,)) for b in range(n) if not (t >> b) & 1]
    if n == 1:
        core = [GateApplication(GateKind.CNOT, (0, out))]
    elif n == 2:
        core = [GateApplication(GateKind.CCNOT, (0, 1, out))]
    else:
        ladder = [GateApplication(GateKind.CCNOT, (0, 1, work[0]))]
        for k in range(2, n - 1):
            ladder.append(GateApplication(GateKind.CCNOT, (k, work[k - 2], work[k - 1])))
        core = ladder + [GateApplication(GateKind.CCNOT, (n - 1, work[-1], out))] + ladder[::-1]
    return ReversibleCircuit(n, len(work) + 1, tuple(flips + core + flips))


def circuit_apply(psi_extended: StateVector, circuit: ReversibleCircuit) -> StateVector:
    if psi_extended.qubit_count != circuit.width:
        raise DomainError(
            f"circuit spans {circuit.width} wires, register has {psi_extended.qubit_count}"
        )
    current = psi_extended
    for g in circuit.gates:
        current = apply_gate(current, g)
    return current


def kickback_apply(
    psi: StateVector, circuit: ReversibleCircuit, tol: float = DISENTANGLE_TOL
) -> StateVector:
    """
    Run the indicator circuit with the output ancilla in (|0> - |1>)/sqrt(2)
    and work ancillas in |0>, then hand back the data register.

    Marked basis states flip the output ancilla, which only changes the sign
    of the ancilla state; that sign is carried by the data amplitude.
    """
    n = psi.require_qubits()
    if n != circuit.data_wires:
        raise DomainError(f"circuit has {circuit.data_wires} data wires, state has {n} qubits")
    work0 = basis_state(1 << circuit.work_wires, 0)
    prepared = tensor(_MINUS, tensor(work0, psi))
    final = circuit_apply(prepared, circuit)

    blocks = final.amps.reshape(2, 1 << circuit.work_wires, 1 << n)
    data = (blocks[0, 0, :] - blocks[1, 0, :]) / np.sqrt(2.0)
    expected = np.kron(_MINUS.amps, np.kron(work0.amps, data))
    residual = float(np.max(np.abs(final.amps - expected)))
    if residual > tol:
        raise CircuitContractError(
            f"ancillas did not return to their prepared states (residual {residual:.3e} > {tol:.1e})"
        )
    logger.debug("kickback residual %.3e over %d gates", residual, circuit.gate_count)
    return StateVector(data, n)
