"""
Custom exceptions for LadderLab.
"""
from typing import Iterable


class LadderLabError(Exception):
    """Base exception for LadderLab."""
    pass


class ConfigurationError(LadderLabError):
    """Raised when configuration is invalid."""
    pass


class GridError(LadderLabError):
    """Raised when a grid or wavefunction violates its invariants."""
    pass


class OperatorError(LadderLabError):
    """Raised when an operator chain cannot be applied on a grid."""
    pass


class HierarchyError(LadderLabError):
    """Base exception for hierarchy model errors."""
    pass


class ModelNotFoundError(HierarchyError):
    """Raised when requested hierarchy model is not registered."""

    def __init__(self, model_name: str, available_models: Iterable[str]):
        self.model_name = model_name
        self.available_models = list(available_models)
        super().__init__(
            f"Model '{model_name}' not found. "
            f"Available models: {', '.join(self.available_models)}"
        )


class LatticeError(HierarchyError):
    """Raised when a label is off the lattice or outside the operator-definable range."""
    pass


class LadderError(LadderLabError):
    """Raised when a ladder walk cannot produce the requested state."""
    pass


class OracleError(LadderLabError):
    """Raised when the finite-difference eigensolver fails."""
    pass


class VerificationError(LadderLabError):
    """Raised when a check cannot be evaluated."""
    pass
