"""
Uniform sampling grids, sampled wavefunctions and trapezoid quadrature.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from ..exceptions import GridError
from ..models.labels import QuantumNumbers
from ..utils.logger import get_logger

logger = get_logger(__name__)

MIN_POINTS = 16


class DomainKind(Enum):
    """Coordinate domain of a hierarchy."""
    HALF_LINE = "half_line"
    FULL_LINE = "full_line"


@dataclass(frozen=True)
class Grid:
    """
    Uniform grid on [x_min, x_max].

    Attributes:
        domain_kind: Half-line (radial) or full real line
        x_min: First sample
        x_max: Last sample
        count: Number of samples
    """
    domain_kind: DomainKind
    x_min: float
    x_max: float
    count: int

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.count - 1)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @cached_property
    def points(self) -> np.ndarray:
        x = np.linspace(self.x_min, self.x_max, self.count)
        x.flags.writeable = False
        return x

    def interior(self, fraction: float = 0.05) -> slice:
        """
        Slice of the interior window that drops ``fraction`` of the points at each end.

        Args:
            fraction: Fraction of points excluded at each end

        Returns:
            Slice into ``points``
        """
        band = max(2, int(round(fraction * self.count)))
        if 2 * band >= self.count:
            raise GridError(f"Window fraction {fraction} leaves no interior points")
        return slice(band, self.count - band)

    def with_count(self, count: int) -> "Grid":
        return build_grid(self.domain_kind, self.x_min, self.x_max, count)

    def to_dict(self) -> dict:
        return {
            "domain": self.domain_kind.value,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "count": self.count,
            "spacing": self.spacing,
        }


def build_grid(domain_kind, x_min: float, x_max: float, count: int) -> Grid:
    """
    Build a uniform grid.

    Args:
        domain_kind: ``DomainKind`` or its string value
        x_min: First sample (strictly positive on the half-line)
        x_max: Last sample
        count: Number of samples, at least 16

    Returns:
        Grid

    Raises:
        GridError: If the bounds or point count are invalid
    """
    try:
        kind = DomainKind(domain_kind)
    except ValueError:
        raise GridError(f"Unknown domain kind: {domain_kind}")

    x_min = float(x_min)
    x_max = float(x_max)
    count = int(count)

    if not (np.isfinite(x_min) and np.isfinite(x_max)):
        raise GridError("Grid bounds must be finite")
    if x_min >= x_max:
        raise GridError(f"x_min ({x_min}) must be below x_max ({x_max})")
    if count < MIN_POINTS:
        raise GridError(f"Grid needs at least {MIN_POINTS} points, got {count}")
    if kind is DomainKind.HALF_LINE and x_min <= 0:
        raise GridError(f"Half-line grid requires x_min > 0, got {x_min}")

    return Grid(kind, x_min, x_max, count)


@dataclass(frozen=True)
class Wavefunction:
    """
    Real function sampled on a grid.

    Attributes:
        grid: Sampling grid
        values: Samples, one per grid point
        labels: Lattice label when the function is a hierarchy state
        model: Identifier of the hierarchy the state belongs to
    """
    grid: Grid
    values: np.ndarray = field(repr=False)
    labels: Optional[QuantumNumbers] = None
    model: Optional[str] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.count,):
            raise GridError(
                f"Wavefunction has {values.size} samples, grid has {self.grid.count}"
            )
        if not np.all(np.isfinite(values)):
            raise GridError("Wavefunction values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "Wavefunction":
        """New function on the same grid, without labels."""
        return Wavefunction(self.grid, values)

    def labelled(self, labels: Optional[QuantumNumbers], model: Optional[str]) -> "Wavefunction":
        return Wavefunction(self.grid, self.values, labels, model)

    def sup_norm(self, window: Optional[slice] = None) -> float:
        values = self.values if window is None else self.values[window]
        return float(np.max(np.abs(values))) if values.size else 0.0


def inner_product(f: Wavefunction, g: Wavefunction) -> float:
    """
    Trapezoid approximation of the integral of f·g.

    Raises:
        GridError: If f and g live on different grids
    """
    if f.grid != g.grid:
        raise GridError("Inner product of wavefunctions on different grids")
    return float(trapezoid(f.values * g.values, dx=f.grid.spacing))


def norm(f: Wavefunction, window: Optional[slice] = None) -> float:
    """L2 norm by trapezoid quadrature, optionally restricted to a window."""
    values = f.values if window is None else f.values[window]
    if values.size < 2:
        return 0.0
    return float(np.sqrt(trapezoid(values * values, dx=f.grid.spacing)))


def normalize(f: Wavefunction) -> Wavefunction:
    """
    Scale f to unit norm with its largest-magnitude sample positive.

    Raises:
        GridError: If f has zero norm
    """
    size = norm(f)
    if not size > 0.0:
        raise GridError("Cannot normalize a zero-norm wavefunction")

    values = f.values / size
    peak = int(np.argmax(np.abs(values)))
    if values[peak] < 0:
        values = -values

    # one more pass pins the quadrature norm to rounding level
    values = values / np.sqrt(trapezoid(values * values, dx=f.grid.spacing))
    return Wavefunction(f.grid, values, f.labels, f.model)
