"""
Quantum search: the exact-unitary D R_gamma iteration from the uniform
superposition, and the infinitesimal-diffusion variant.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, List, Optional

import numpy as np

from .diffusion import (
    InfinitesimalDiffusionSpec,
    apply_diffusion_closed_form,
    apply_diffusion_synthesized,
    exact_diffusion_matrix,
    infinitesimal_diffusion_matrix,
)
from .errors import DomainError, ResourceError
from .gates import MAX_DENSE_DIM, walsh_hadamard
from .phase_ops import PhaseSpec, phase_rotation_operator, selective_inversion, selective_phase_rotation
from .statevec import MeasurementSample, StateVector, basis_state, measure, uniform_state
from .traces import TraceCollector

logger = logging.getLogger(__name__)

INFINITESIMAL_REGIME_LIMIT = 0.5


class Engine(str, Enum):
    SYNTHESIZED = "synthesized"
    CLOSED_FORM = "closed_form"
    DENSE = "dense"


class PhaseMode(str, Enum):
    LOCKED = "locked"
    FIXED = "fixed"


@dataclass(frozen=True)
class SearchConfig:
    n: int
    target: int = 0
    gamma: float = np.pi
    reps: Optional[int] = None
    seed: int = 0
    engine: Engine = Engine.SYNTHESIZED
    extra_marked: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "engine", Engine(getattr(self.engine, "value", self.engine)))
        object.__setattr__(self, "extra_marked", frozenset(int(t) for t in self.extra_marked))
        if self.n < 1:
            raise DomainError(f"search needs n >= 1, got {self.n}")
        bad = sorted(t for t in self.marked if not 0 <= t < self.N)
        if bad:
            raise DomainError(f"target(s) {bad} outside [0, {self.N})")
        if self.reps is not None and self.reps < 0:
            raise DomainError(f"reps must be >= 0, got {self.reps}")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def marked(self) -> FrozenSet[int]:
        return frozenset({self.target}) | self.extra_marked

    @property
    def resolved_reps(self) -> int:
        return optimal_reps(self.N, len(self.marked)) if self.reps is None else self.reps


class SearchTrace(TraceCollector):
    COLUMNS = ("iteration", "marked_re", "marked_im", "marked_prob", "unmarked_prob", "norm")
    DEFAULTS = {"iteration": 0, "marked_re": 0.0, "marked_im": 0.0,
                "marked_prob": 0.0, "unmarked_prob": 0.0, "norm": 1.0}

    def record_state(self, iteration: int, psi: StateVector, target: int, marked, **extra):
        probs = np.abs(psi.amps) ** 2
        idx = np.fromiter(sorted(marked), dtype=np.intp, count=len(marked))
        marked_prob = float(np.sum(probs[idx]))
        amp = psi.amps[target]
        self.save_record({
            "iteration": iteration,
            "marked_re": float(amp.real),
            "marked_im": float(amp.imag),
            "marked_prob": marked_prob,
            "unmarked_prob": float(np.sum(probs)) - marked_prob,
            "norm": psi.norm(),
            **extra,
        })

    def marked_probabilities(self) -> np.ndarray:
        return np.array(self.column("marked_prob"))

    def marked_magnitudes(self) -> np.ndarray:
        return np.hypot(self.column("marked_re"), self.column("marked_im"))


@dataclass
class SearchResult:
    final_state: StateVector
    success_probability: float
    measurement: MeasurementSample
    trace: SearchTrace
    config: SearchConfig
    reps: int

    @property
    def measured_index(self) -> int:
        return self.measurement.index


def optimal_reps(N: int, marked_count: int = 1) -> int:
    """floor((pi/4) sqrt(N/M)), at least one."""
    if N < 2:
        raise DomainError(f"optimal_reps needs N >= 2, got {N}")
    if not 1 <= marked_count <= N:
        raise DomainError(f"marked_count must be in [1, {N}], got {marked_count}")
    return max(1, int(np.floor(np.pi / 4.0 * np.sqrt(N / marked_count))))


def theoretical_success_probability(N: int, reps: int, marked_count: int = 1) -> float:
    """sin^2((2k + 1) theta) with sin(theta) = sqrt(M/N), for gamma = pi."""
    theta = np.arcsin(np.sqrt(marked_count / N))
    return float(np.sin((2 * reps + 1) * theta) ** 2)


def _iteration(config: SearchConfig) -> Callable[[StateVector], StateVector]:
    spec = PhaseSpec(config.marked, config.gamma)
    if config.engine is Engine.DENSE:
        if config.N > MAX_DENSE_DIM:
            raise ResourceError(f"dense engine is limited to N <= {MAX_DENSE_DIM}, got {config.N}")
        step = exact_diffusion_matrix(config.N).compose(phase_rotation_operator(config.N, spec))
        return step.apply
    diffuse = (apply_diffusion_synthesized if config.engine is Engine.SYNTHESIZED
               else apply_diffusion_closed_form)
    if config.gamma == np.pi:
        return lambda psi: diffuse(selective_inversion(psi, config.marked))
    return lambda psi: diffuse(selective_phase_rotation(psi, spec))


def run_search(config: SearchConfig) -> SearchResult:
    reps = config.resolved_reps
    iterate = _iteration(config)
    psi = walsh_hadamard(basis_state(config.N, 0))
    trace = SearchTrace()
    trace.record_state(0, psi, config.target, config.marked)
    for k in range(1, reps + 1):
        psi = iterate(psi)
        trace.record_state(k, psi, config.target, config.marked)
    success = float(sum(abs(psi.amps[t]) ** 2 for t in sorted(config.marked)))
    sample = measure(psi, config.seed)
    logger.debug("search N=%d reps=%d success=%.12f measured=%d", config.N, reps, success, sample.index)
    return SearchResult(psi, success, sample, trace, config, reps)


def per_iteration_gain(trace: SearchTrace) -> List[float]:
    """Successive differences of |marked amplitude|."""
    return np.diff(trace.marked_magnitudes()).tolist()


def dense_bruteforce_success(N: int, target: int, reps: int) -> float:
    """|(D I_f)^k uniform|^2 at the target, via an explicit matrix power."""
    d = exact_diffusion_matrix(N).matrix
    i_f = phase_rotation_operator(N, PhaseSpec({target}, np.pi)).matrix
    final = np.linalg.matrix_power(d @ i_f, reps) @ uniform_state(N).amps
    return float(abs(final[target]) ** 2)


def _locked_rotation(psi: StateVector, target: int, gamma: float) -> PhaseSpec:
    """Rotation that leaves the target leading the unmarked background by gamma."""
    background = np.sum(psi.amps) - psi.amps[target]
    lead = np.angle(psi.amps[target]) - np.angle(background)
    return PhaseSpec({target}, gamma - lead)


def infinitesimal_search_run(
    N: int,
    epsilon: float,
    gamma: float = np.pi / 2,
    steps: int = 100,
    target: int = 0,
    phase_mode: PhaseMode = PhaseMode.LOCKED,
) -> SearchTrace:
    """
    Iterate D_eps R from the uniform state, renormalizing after each step
    (D_eps is only unitary to O(eps^2); the trace keeps the pre-normalization norm).

    LOCKED applies R so the target leads the background phase by gamma at every
    step; on the first step that is exactly R_gamma. FIXED repeats R_gamma as is,
    which lets the relative phase wind and the transfer cancel.
    """
    if N * epsilon > INFINITESIMAL_REGIME_LIMIT:
        raise DomainError(f"N*eps = {N * epsilon:.3g} > {INFINITESIMAL_REGIME_LIMIT}: not an infinitesimal step")
    if not 0 <= target < N:
        raise DomainError(f"target {target} outside [0, {N})")
    if steps < 0:
        raise DomainError(f"steps must be >= 0, got {steps}")
    phase_mode = PhaseMode(getattr(phase_mode, "value", phase_mode))
    d = infinitesimal_diffusion_matrix(InfinitesimalDiffusionSpec(N, epsilon, exact_diagonal=True))
    fixed = PhaseSpec({target}, gamma)

    psi = uniform_state(N)
    trace = SearchTrace()
    trace.record_state(0, psi, target, {target}, pre_norm=1.0)
    for step in range(1, steps + 1):
        spec = _locked_rotation(psi, target, gamma) if phase_mode is PhaseMode.LOCKED else fixed
        raw = d.apply(selective_phase_rotation(psi, spec))
        norm = raw.norm()
        logger.debug("step %d: pre-normalization norm drift %.3e", step, norm - 1.0)
        psi = raw.normalized()
        trace.record_state(step, psi, target, {target}, pre_norm=norm)
    return trace
