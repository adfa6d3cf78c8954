"""
Finite-difference evolution of the 1-D Schrodinger equation on a periodic
grid, split into a potential phase R = diag(exp(-i V dt)) followed by the
nearest-neighbour loop diffusion D (diagonal 1 - 2i eps, neighbours i eps).
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from .errors import DomainError
from .gates import DenseOperator, require_dense_dim
from .statevec import StateVector, probabilities
from .traces import TraceCollector

logger = logging.getLogger(__name__)

EPSILON_WARN = 0.1


@dataclass
class PotentialGrid:
    potential: np.ndarray
    dx: float = 1.0
    dt: float = 1e-3
    name: str = "custom"

    def __post_init__(self):
        self.potential = np.asarray(self.potential, dtype=np.float64).reshape(-1)
        if self.potential.size < 2:
            raise DomainError(f"a loop grid needs N >= 2 sites, got {self.potential.size}")
        if not np.all(np.isfinite(self.potential)):
            raise DomainError("potential values must be finite")
        if self.dx <= 0 or self.dt <= 0:
            raise DomainError(f"dx and dt must be positive, got dx={self.dx}, dt={self.dt}")
        if self.epsilon > EPSILON_WARN:
            logger.warning("eps = dt/dx^2 = %.3g > %.1f: discretization is not near-unitary", self.epsilon, EPSILON_WARN)

    @property
    def N(self) -> int:
        return self.potential.size

    @property
    def epsilon(self) -> float:
        return self.dt / (self.dx * self.dx)

    @property
    def minimum_site(self) -> int:
        return int(np.argmin(self.potential))

    def with_dt(self, dt: float) -> "PotentialGrid":
        return PotentialGrid(self.potential.copy(), self.dx, dt, self.name)

    @classmethod
    def from_values(cls, values: Iterable[float], dx: float = 1.0, dt: float = 1e-3) -> "PotentialGrid":
        return cls(np.asarray(list(values), dtype=np.float64), dx, dt, "custom")

    @classmethod
    def flat(cls, N: int, dx: float = 1.0, dt: float = 1e-3) -> "PotentialGrid":
        return cls(np.zeros(N), dx, dt, "flat")

    @classmethod
    def square_well(
        cls, N: int, depth: float = 1.0, width: int = 1, center: Optional[int] = None,
        dx: float = 1.0, dt: float = 1e-3,
    ) -> "PotentialGrid":
        """V = -depth on `width` sites around `center` (default N // 2), 0 elsewhere."""
        if not 1 <= width <= N:
            raise DomainError(f"well width must be in [1, {N}], got {width}")
        center = N // 2 if center is None else center
        v = np.zeros(N)
        v[(center - width // 2 + np.arange(width)) % N] = -depth
        return cls(v, dx, dt, "square")

    @classmethod
    def quadratic_well(
        cls, N: int, curvature: float = 1e-3, center: Optional[int] = None,
        dx: float = 1.0, dt: float = 1e-3,
    ) -> "PotentialGrid":
        """V = curvature * d^2 with d the periodic distance to `center`."""
        center = N // 2 if center is None else center
        d = np.abs(np.arange(N) - center)
        d = np.minimum(d, N - d) * dx
        return cls(curvature * d * d, dx, dt, "quadratic")


class EvolutionTrace(TraceCollector):
    """Per-step norms, optionally with per-site probabilities (long form)."""

    COLUMNS = ("step", "norm")
    SITE_COLUMNS = ("step", "norm", "site", "prob")
    DEFAULTS = {"step": 0, "norm": 1.0}

    def __init__(self, per_site: bool = False):
        super().__init__(self.SITE_COLUMNS if per_site else self.COLUMNS)
        self.per_site = per_site

    def record_step(self, step: int, psi: StateVector):
        norm = psi.norm()
        if not self.per_site:
            self.save_record({"step": step, "norm": norm})
            return
        for site, prob in enumerate(probabilities(psi)):
            self.save_record({"step": step, "norm": norm, "site": site, "prob": float(prob)})

    def norms(self) -> np.ndarray:
        seen = {}
        for rec in self.records:
            seen.setdefault(rec["step"], rec["norm"])
        return np.array(list(seen.values()))


def loop_diffusion_matrix(N: int, epsilon: float) -> DenseOperator:
    if N < 2:
        raise DomainError(f"a loop needs N >= 2 sites, got {N}")
    require_dense_dim(N)
    m = np.zeros((N, N), dtype=np.complex128)
    sites = np.arange(N)
    np.add.at(m, (sites, (sites + 1) % N), 1j * epsilon)
    np.add.at(m, (sites, (sites - 1) % N), 1j * epsilon)
    m[sites, sites] += 1.0 - 2j * epsilon
    return DenseOperator(m)


def potential_rotation(grid: PotentialGrid) -> DenseOperator:
    require_dense_dim(grid.N)
    return DenseOperator(np.diag(np.exp(-1j * grid.potential * grid.dt)), unitary=True)


def dr_step(psi: StateVector, grid: PotentialGrid) -> StateVector:
    """R first, then D, as an index-local stencil."""
    if psi.num_sites != grid.N:
        raise DomainError(f"state has {psi.num_sites} sites, grid has {grid.N}")
    eps = grid.epsilon
    phased = psi.amps * np.exp(-1j * grid.potential * grid.dt)
    out = (1.0 - 2j * eps) * phased + 1j * eps * (np.roll(phased, 1) + np.roll(phased, -1))
    return StateVector(out, psi.qubit_count)


def evolve(
    psi: StateVector, grid: PotentialGrid, steps: int, per_site: bool = False
) -> Tuple[StateVector, EvolutionTrace]:
    if steps < 0:
        raise DomainError(f"steps must be >= 0, got {steps}")
    trace = EvolutionTrace(per_site=per_site)
    current = psi
    for step in range(1, steps + 1):
        current = dr_step(current, grid)
        trace.record_step(step, current)
    return current, trace


def cyclic_shift(psi: StateVector, k: int) -> StateVector:
    return StateVector(np.roll(psi.amps, k), psi.qubit_count)


def commutator_defect(grid: PotentialGrid) -> float:
    """max |DR - RD|; nonzero whenever V is not constant."""
    d = loop_diffusion_matrix(grid.N, grid.epsilon).matrix
    r = potential_rotation(grid).matrix
    return float(np.max(np.abs(d @ r - r @ d)))


def step_norm_defect(psi: StateVector, grid: PotentialGrid) -> float:
    return abs(dr_step(psi, grid).norm() - psi.norm())


def worst_case_step_growth(grid: PotentialGrid) -> float:
    """Spectral norm of D minus one: an upper bound on one step's norm growth."""
    d = loop_diffusion_matrix(grid.N, grid.epsilon).matrix
    return float(np.linalg.norm(d, 2) - 1.0)


def norm_defect_slope(
    psi: StateVector, grid_for: Callable[[float], PotentialGrid], epsilons: Iterable[float]
) -> float:
    """Log-log slope of the one-step norm defect against eps (about 2 for O(eps^2))."""
    eps = np.asarray(list(epsilons), dtype=np.float64)
    defects = np.array([step_norm_defect(psi, grid_for(e)) for e in eps])
    slope, _ = np.polyfit(np.log(eps), np.log(defects), 1)
    return float(slope)
