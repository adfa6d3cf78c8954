class QuantumSearchError(Exception):
    """Base class for every error raised by the quantum_search package."""


class DomainError(QuantumSearchError, ValueError):
    """An input is outside the operation's domain (bad index, size, kind or regime)."""


class ContractError(QuantumSearchError):
    """An operation's input or output contract does not hold."""


class CircuitContractError(ContractError):
    """A reversible circuit left its ancillas entangled with the data register."""


class ResourceError(QuantumSearchError):
    """A request exceeds the dense-audit or state-vector memory guard."""


class ConfigError(QuantumSearchError):
    """An environment setting could not be parsed."""
