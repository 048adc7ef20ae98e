"""
Finite-difference eigensolver used as the independent reference for spectra
and eigenfunctions.

H = -d²/dx² + V is discretized with the compact 3-point Laplacian on the
interior points of a grid (Dirichlet zero at both ends). Half-line channels
with integer l are assembled in flux form instead (see
``TridiagonalOperator.radial``). The lowest levels come from LAPACK
bisection on the Sturm sequence with inverse-iteration eigenvectors
(``scipy.linalg.eigh_tridiagonal``).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from ..exceptions import GridError, HierarchyError, OracleError
from ..models.labels import QuantumNumbers, Rational, as_fraction
from ..utils.logger import get_logger
from .grid import Grid, Wavefunction, normalize

if TYPE_CHECKING:
    from ..hierarchies.base import HierarchyModel

logger = get_logger(__name__)

MAX_LEVELS = 12
DEFAULT_EIGEN_TOL = 1e-12
LEVEL_MATCH_FRACTION = 0.1


@dataclass(frozen=True)
class TridiagonalOperator:
    """
    Symmetric tridiagonal discretization of a Hamiltonian channel.

    Attributes:
        diagonal: Main diagonal, one entry per interior grid point
        off_diagonal: Sub/super diagonal
        grid: Grid the operator was assembled on
        ell: Hierarchy label of the channel
        model: Identifier of the potential family
        boundary: Couplings of the first and last interior rows to the two
            endpoint samples (-1/h² for the plain stencil)
        scale: Map from eigenvectors of the matrix to samples of u (ones
            unless a cell carries a non-uniform weight)
        closed: Whether the first row is a closed cell at the origin
    """
    diagonal: np.ndarray = field(repr=False)
    off_diagonal: np.ndarray = field(repr=False)
    grid: Grid
    ell: Fraction = Fraction(0)
    model: str = "free"
    boundary: Optional[Tuple[float, float]] = None
    scale: Optional[np.ndarray] = field(default=None, repr=False)
    closed: bool = False

    def __post_init__(self):
        if self.off_diagonal.shape[0] != self.diagonal.shape[0] - 1:
            raise OracleError("Off-diagonal must be one shorter than the diagonal")
        if self.diagonal.shape[0] != self.grid.count - 2:
            raise OracleError("Operator size must equal the number of interior grid points")
        if self.boundary is None:
            coupling = -1.0 / self.grid.spacing ** 2
            object.__setattr__(self, "boundary", (coupling, coupling))
        if self.scale is None:
            object.__setattr__(self, "scale", np.ones(self.diagonal.shape[0]))
        elif self.scale.shape != self.diagonal.shape:
            raise OracleError("Scale must have one entry per interior grid point")

    @property
    def size(self) -> int:
        return int(self.diagonal.shape[0])

    def matvec(self, values: np.ndarray) -> np.ndarray:
        """
        Apply the operator to samples on the full grid (endpoints are the
        Dirichlet boundary values).

        Returns:
            Result on the interior points
        """
        values = np.asarray(values, dtype=float)
        if values.shape != (self.grid.count,):
            raise OracleError(f"Expected {self.grid.count} samples, got {values.shape}")
        inner = values[1:-1] / self.scale
        result = self.diagonal * inner
        result[:-1] += self.off_diagonal * inner[1:]
        result[1:] += self.off_diagonal * inner[:-1]
        result[0] += self.boundary[0] * values[0]
        result[-1] += self.boundary[1] * values[-1]
        return self.scale * result

    @property
    def residual_rows(self) -> slice:
        """Rows that discretize the equation; a closed first cell is a boundary condition."""
        return slice(1, None) if self.closed else slice(None)

    @staticmethod
    def _interior_potential(grid: Grid, potential: np.ndarray) -> np.ndarray:
        potential = np.asarray(potential, dtype=float)
        m = grid.count - 2
        if potential.shape != (m,):
            raise OracleError(f"Expected {m} potential samples, got {potential.shape}")
        if not np.all(np.isfinite(potential)):
            raise OracleError("Potential is not finite on the grid interior")
        return potential

    @classmethod
    def from_potential(
        cls,
        grid: Grid,
        potential: np.ndarray,
        ell: Rational = 0,
        model: str = "free"
    ) -> "TridiagonalOperator":
        """
        Assemble -D² + V from potential samples on the interior points.

        Args:
            grid: Grid
            potential: V at ``grid.points[1:-1]``
            ell: Channel label recorded on the operator
            model: Family identifier recorded on the operator
        """
        potential = cls._interior_potential(grid, potential)
        inverse_h2 = 1.0 / grid.spacing ** 2
        diagonal = 2.0 * inverse_h2 + potential
        off_diagonal = np.full(potential.size - 1, -inverse_h2)
        return cls(diagonal, off_diagonal, grid, as_fraction(ell), model)

    @classmethod
    def radial(
        cls,
        grid: Grid,
        potential: np.ndarray,
        ell: Rational = 0,
        model: str = "free",
        closed: bool = False
    ) -> "TridiagonalOperator":
        """
        Assemble -D² + V on the half-line in flux form.

        With u = r^{1/2} R the eigenproblem reads
        -(r R')' + r q R = E r R with q = V + 1/(4r²). Each interior point
        owns the cell between the faces r ± h/2; the flux r R' is differenced
        at the faces and the cell integrals of r q and r are lumped onto
        the point. Away from the origin this reduces to the 3-point stencil
        with couplings -(r + h/2) / (h² sqrt(r r')).

        With ``closed`` the first cell extends down to r = 0 with no flux
        through it, which is the regular boundary condition of an
        attractive core. Its length and weight are the exact integrals
        over [0, r + h/2], which keeps the eigenvalues second order. Otherwise the first grid sample
        is a Dirichlet boundary value.

        The matrix is symmetrized by the cell weights W; ``scale`` is
        sqrt(r h / W), which maps its eigenvectors to samples of u and
        differs from 1 only in the closed first cell.

        Args:
            grid: Half-line grid
            potential: V at ``grid.points[1:-1]``
            ell: Channel label recorded on the operator
            model: Family identifier recorded on the operator
            closed: Close the first cell at r = 0
        """
        potential = cls._interior_potential(grid, potential)
        h = grid.spacing
        r = grid.points[1:-1]
        q = potential + 0.25 / r ** 2
        outer = r + h / 2.0
        inner = r - h / 2.0
        length = np.full(r.size, h)
        weight = r * h
        if closed:
            inner[0] = 0.0
            length[0] = outer[0]
            weight[0] = outer[0] ** 2 / 2.0

        diagonal = ((outer + inner) / h + r * q * length) / weight
        off_diagonal = -outer[:-1] / (h * np.sqrt(weight[:-1] * weight[1:]))
        first = -inner[0] / (h ** 1.5 * np.sqrt(weight[0] * grid.x_min))
        last = -outer[-1] / (h ** 1.5 * np.sqrt(weight[-1] * grid.x_max))
        return cls(
            diagonal, off_diagonal, grid, as_fraction(ell), model,
            (float(first), float(last)), np.sqrt(r * h / weight), closed,
        )


def assemble(model: "HierarchyModel", ell: Rational, grid: Grid) -> TridiagonalOperator:
    """
    Discretize H^ell of a hierarchy on a grid.

    Half-line channels whose states start as r^{1/2} times a smooth factor
    (integer l) use the flux form, closed at the origin when the core is
    attractive; all others use the plain 3-point stencil.

    Raises:
        GridError: If the grid does not cover the model's domain
        OracleError: If the potential cannot be evaluated
    """
    if grid.domain_kind is not model.domain_kind:
        raise GridError(
            f"Model '{model.name}' lives on {model.domain_kind.value}, "
            f"grid is {grid.domain_kind.value}"
        )
    ell = as_fraction(ell)
    try:
        potential = model.potential(ell, grid.points[1:-1])
    except HierarchyError as e:
        raise OracleError(f"Potential evaluation failed: {e}")

    logger.debug(f"Assembled {model.name} channel l={ell} on {grid.count} points")
    if model.regular_power(ell) == Fraction(1, 2):
        return TridiagonalOperator.radial(
            grid, potential, ell, model.name, closed=model.attractive_core(ell)
        )
    return TridiagonalOperator.from_potential(grid, potential, ell, model.name)


def lowest_eigenpairs(
    operator: TridiagonalOperator,
    k: int,
    tol: float = DEFAULT_EIGEN_TOL
) -> List[Tuple[float, Wavefunction]]:
    """
    Compute the k lowest eigenpairs.

    Eigenvectors are embedded back into the full grid with zero endpoints
    and normalized with the largest-sample-positive convention.

    Args:
        operator: Tridiagonal operator
        k: Number of levels, 1..12
        tol: Absolute bisection tolerance

    Returns:
        List of (eigenvalue, wavefunction) in increasing order

    Raises:
        OracleError: If k is out of range or LAPACK fails
    """
    if not 1 <= k <= MAX_LEVELS:
        raise OracleError(f"Number of levels must be in 1..{MAX_LEVELS}, got {k}")
    if k > operator.size:
        raise OracleError(f"Cannot extract {k} levels from a {operator.size}-point operator")

    try:
        eigenvalues, vectors = eigh_tridiagonal(
            operator.diagonal,
            operator.off_diagonal,
            select="i",
            select_range=(0, k - 1),
            lapack_driver="stebz",
            tol=tol,
        )
    except (LinAlgError, ValueError) as e:
        raise OracleError(f"Tridiagonal eigensolver failed: {e}")

    grid = operator.grid
    pairs = []
    for j in range(k):
        full = np.zeros(grid.count)
        full[1:-1] = vectors[:, j] * operator.scale
        state = normalize(Wavefunction(grid, full, model=operator.model))
        pairs.append((float(eigenvalues[j]), state))

    logger.debug(
        f"{operator.model} l={operator.ell}: lowest {k} eigenvalues "
        f"{[round(value, 8) for value, _ in pairs]}"
    )
    return pairs


def sturm_count(operator: TridiagonalOperator, value: float) -> int:
    """
    Number of eigenvalues strictly below ``value``.

    Counts the negative pivots of the LDLᵀ factorization of T - value·I.
    """
    diagonal = operator.diagonal
    squares = operator.off_diagonal ** 2
    tiny = np.finfo(float).tiny * max(1.0, float(np.max(np.abs(diagonal))))

    count = 0
    pivot = diagonal[0] - value
    for j in range(operator.size):
        if j > 0:
            pivot = diagonal[j] - value - squares[j - 1] / pivot
        if pivot == 0.0:
            pivot = -tiny
        if pivot < 0.0:
            count += 1
    return count


def oracle_state(
    model: "HierarchyModel",
    n: Rational,
    ell: Rational,
    grid: Grid,
    tol: float = DEFAULT_EIGEN_TOL
) -> Tuple[float, Wavefunction]:
    """
    Oracle eigenpair of H^ell nearest to the level energy of (n, ell).

    Args:
        model: Hierarchy model
        n: Energy label
        ell: Hierarchy label (half-integers allowed)
        grid: Grid

    Returns:
        (eigenvalue, normalized state labelled (n, ell))

    Raises:
        OracleError: If the nearest eigenvalue misses the level by more than
            a tenth of the level spacing
    """
    labels = QuantumNumbers(n, ell)
    level = model.level_index(labels)
    if level >= MAX_LEVELS:
        raise OracleError(f"Level {level} of {model.name} at l={labels.ell} exceeds oracle range")
    # one level above the target bounds the spacing unless the range is exhausted
    k = min(level + 2, MAX_LEVELS)

    target = float(model.energy(labels.n, labels.ell))
    pairs = lowest_eigenpairs(assemble(model, labels.ell, grid), k, tol)
    eigenvalues = np.array([value for value, _ in pairs])

    nearest = int(np.argmin(np.abs(eigenvalues - target)))
    gaps = np.abs(np.diff(eigenvalues))
    neighbours = [gaps[j] for j in (nearest - 1, nearest) if 0 <= j < gaps.size]
    spacing = min(neighbours)
    distance = abs(eigenvalues[nearest] - target)

    if distance > LEVEL_MATCH_FRACTION * spacing:
        raise OracleError(
            f"No oracle level near E={target:.8g} for {model.name} {labels}: "
            f"nearest {eigenvalues[nearest]:.8g} (grid too coarse or box too small)"
        )

    return float(eigenvalues[nearest]), pairs[nearest][1].labelled(labels, model.name)


@dataclass(frozen=True)
class ConvergenceStep:
    """One grid resolution in an eigenvalue convergence study."""
    count: int
    spacing: float
    eigenvalue: float
    error: float


def eigenvalue_convergence(
    model: "HierarchyModel",
    ell: Rational,
    grid: Grid,
    counts: Sequence[int],
    level: int = 0,
    tol: float = DEFAULT_EIGEN_TOL
) -> List[ConvergenceStep]:
    """
    Oracle error of one level over a sequence of grid resolutions.

    With the second-order stencil, doubling the resolution should divide
    the error by about four.

    Args:
        model: Hierarchy model
        ell: Channel label
        grid: Grid fixing the domain; only the point count varies
        counts: Point counts to study
        level: Level index within the channel (0 = ground)
    """
    labels = model.level_label(ell, level)
    exact = float(model.energy(labels.n, labels.ell))

    steps = []
    for count in counts:
        refined = grid.with_count(count)
        value, _ = lowest_eigenpairs(assemble(model, ell, refined), level + 1, tol)[level]
        steps.append(ConvergenceStep(count, refined.spacing, value, abs(value - exact)))
        logger.debug(f"{model.name} l={ell} count={count}: E={value:.12g}, error={steps[-1].error:.3e}")
    return steps


def convergence_ratios(steps: Sequence[ConvergenceStep]) -> List[Optional[float]]:
    """Error ratios between consecutive resolutions."""
    ratios: List[Optional[float]] = []
    for coarse, fine in zip(steps, steps[1:]):
        ratios.append(coarse.error / fine.error if fine.error > 0 else None)
    return ratios
