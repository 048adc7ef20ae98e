"""
Potential hierarchies.

This module automatically registers all available models.
"""
from .base import (
    MOVE_KINDS,
    PAIR_INDICES,
    QUADRATIC_KINDS,
    ConventionalFactorization,
    FreeMove,
    HierarchyModel,
    ModelConfig,
    QuadraticOperator,
    RefinedPair,
)
from .coulomb import CoulombModel
from .factory import HierarchyFactory
from .morse import MorseConfig, MorseModel
from .oscillator import OscillatorModel

HierarchyFactory.register_model("oscillator", OscillatorModel, ModelConfig)
HierarchyFactory.register_model("morse", MorseModel, MorseConfig)
HierarchyFactory.register_model("coulomb", CoulombModel, ModelConfig)

__all__ = [
    "MOVE_KINDS",
    "PAIR_INDICES",
    "QUADRATIC_KINDS",
    "ConventionalFactorization",
    "FreeMove",
    "HierarchyModel",
    "ModelConfig",
    "QuadraticOperator",
    "RefinedPair",
    "HierarchyFactory",
    "OscillatorModel",
    "MorseModel",
    "MorseConfig",
    "CoulombModel",
]
