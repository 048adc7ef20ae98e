"""
LadderLab - refined factorizations and ladder operators for the radial
oscillator, Morse and radial Coulomb hierarchies.
"""
__version__ = "1.0.0"

from .exceptions import LadderLabError
from .hierarchies import HierarchyFactory
from .ladder import build_state
from .verification import run_suite

__all__ = ["__version__", "LadderLabError", "HierarchyFactory", "build_state", "run_suite"]
