"""Console display, file export and lattice diagrams."""
from .display import Display, sparkline
from .exporter import Exporter
from .lattice import LatticeDiagram, build_lattice

__all__ = ["Display", "sparkline", "Exporter", "LatticeDiagram", "build_lattice"]
