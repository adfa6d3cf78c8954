"""State-vector simulation of quantum search, from the discretized Schrodinger equation to -W I_0 W."""
import logging

from .errors import (
    CircuitContractError,
    ConfigError,
    ContractError,
    DomainError,
    QuantumSearchError,
    ResourceError,
)
from .statevec import StateVector, basis_state, measure, probability, tensor, uniform_state
from .search import Engine, SearchConfig, run_search

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "CircuitContractError",
    "ConfigError",
    "ContractError",
    "DomainError",
    "Engine",
    "QuantumSearchError",
    "ResourceError",
    "SearchConfig",
    "StateVector",
    "basis_state",
    "measure",
    "probability",
    "run_search",
    "tensor",
    "uniform_state",
]
