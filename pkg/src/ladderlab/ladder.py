"""
Ladder engine: closed-form ground states, ladder walks on the (n, l)
lattice and measured ladder coefficients.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .exceptions import LadderError, LatticeError
from .hierarchies.base import FreeMove, HierarchyModel, Move
from .models.labels import QuantumNumbers, Rational
from .numerics.grid import Grid, Wavefunction, inner_product, norm, normalize
from .numerics.operators import DEFAULT_SETTINGS, KernelSettings, OperatorChain, apply_regular
from .numerics.oracle import oracle_state
from .utils.logger import get_logger

logger = get_logger(__name__)

ANNIHILATION_RATIO = 1e-12
MIN_PROPORTIONALITY = 0.999


@dataclass(frozen=True)
class LadderPath:
    """
    Sequence of free moves from a ground state to a target label.

    Attributes:
        start: Label of the starting state
        moves: (pair index, "A" or "B") in order of application
        end: Label reached
    """
    start: QuantumNumbers
    moves: Tuple[Move, ...]
    end: QuantumNumbers

    @classmethod
    def plan(cls, model: HierarchyModel, start: QuantumNumbers, moves: Sequence[Move]) -> "LadderPath":
        """
        Plan a path, checking every intermediate label.

        Raises:
            LatticeError: If a move leaves the operator-definable range
        """
        labels = start
        for index, kind in moves:
            labels = model.free_operator(index, kind, labels).target
        return cls(start, tuple(moves), labels)

    def labels(self, model: HierarchyModel) -> List[QuantumNumbers]:
        """All labels visited, start and end included."""
        visited = [self.start]
        for index, kind in self.moves:
            visited.append(model.free_operator(index, kind, visited[-1]).target)
        return visited

    def __len__(self) -> int:
        return len(self.moves)

    def __str__(self) -> str:
        steps = " ".join(f"{kind}{index}" for index, kind in self.moves) or "(none)"
        return f"{self.start} -> {self.end}: {steps}"


def apply_to_state(
    model: HierarchyModel,
    op: OperatorChain,
    state: Wavefunction,
    target_ell: Rational,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Apply an operator to a labelled state of ``model``.

    The operator acts on the regular factor of the state (``apply_regular``)
    with the leading powers of the source channel and of the image channel
    ``target_ell``.

    Raises:
        LadderError: If the state carries no label
    """
    if state.labels is None:
        raise LadderError("Operators act on labelled states only")
    return apply_regular(
        op,
        state,
        float(model.regular_power(state.labels.ell)),
        float(model.regular_power(target_ell)),
        settings,
    )


def ground_state(model: HierarchyModel, ell: Rational, grid: Grid) -> Wavefunction:
    """
    Normalized closed-form ground state of H^l.

    Args:
        model: Hierarchy model
        ell: Hierarchy label
        grid: Grid in the model domain

    Returns:
        Ground state labelled with its (n, l)

    Raises:
        LatticeError: If H^l has no bound ground state (Morse l ≤ 0)
    """
    model.check_grid(grid)
    labels = model.ground_label(ell)
    values = model.ground_values(labels.ell, grid.points)
    return normalize(Wavefunction(grid, values)).labelled(labels, model.name)


def apply_move(
    model: HierarchyModel,
    move: FreeMove,
    state: Wavefunction,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Apply one free move and normalize the image.

    Raises:
        LadderError: If the move annihilates the state
    """
    image = apply_to_state(model, move.chain, state, move.target.ell, settings)
    before, after = norm(state), norm(image)
    if after < ANNIHILATION_RATIO * before:
        raise LadderError(
            f"{move.kind}{move.index} annihilates {model.name} state {move.source} "
            f"(norm ratio {after / before:.2e})"
        )
    return normalize(image).labelled(move.target, model.name)


def walk(
    model: HierarchyModel,
    path: LadderPath,
    state: Wavefunction,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Apply a ladder path to a state, normalizing after every step.

    Raises:
        LadderError: If an intermediate image is annihilated
    """
    labels = path.start
    for index, kind in path.moves:
        move = model.free_operator(index, kind, labels)
        state = apply_move(model, move, state, settings)
        labels = move.target
        logger.debug(f"{model.name}: {kind}{index} -> {labels}")
    return state


def canonical_path(model: HierarchyModel, n: Rational, ell: Rational) -> LadderPath:
    """
    Deterministic path from a closed-form ground state to (n, l).

    Raises:
        LatticeError: If (n, l) is not an eigenstate label reachable by the model
    """
    labels = QuantumNumbers(n, ell)
    start, moves = model.canonical_path(labels)
    path = LadderPath.plan(model, start, moves)
    if path.end != labels:
        raise LadderError(f"Canonical path for {labels} ends at {path.end}")
    return path


def build_state(
    model: HierarchyModel,
    n: Rational,
    ell: Rational,
    grid: Grid,
    settings: KernelSettings = DEFAULT_SETTINGS
) -> Wavefunction:
    """
    Build ψ_n^l by walking the lattice from a closed-form ground state.

    Args:
        model: Hierarchy model
        n: Energy label
        ell: Hierarchy label (half-integers allowed for Coulomb)
        grid: Grid in the model domain

    Returns:
        Normalized state labelled (n, l)

    Raises:
        LatticeError: If (n, l) is not on the model's lattice
        LadderError: If no path exists or a step annihilates the state
    """
    model.check_grid(grid)
    path = canonical_path(model, n, ell)
    logger.debug(f"{model.name}: building {path.end} via {path}")
    start = ground_state(model, path.start.ell, grid)
    return walk(model, path, start, settings)


@dataclass(frozen=True)
class LadderCoefficient:
    """
    Measured conventional ladder coefficient.

    Attributes:
        source: Label of the state X⁻ acts on
        target: Label of the image
        value: Signed coefficient c in X⁻ψ_source = c ψ_target
        predicted: Magnitude expected from the factorization constants
        proportionality: Cosine between image and target (None if the target is not a state)
    """
    source: QuantumNumbers
    target: QuantumNumbers
    value: float
    predicted: float
    proportionality: Optional[float]

    @property
    def relative_error(self) -> float:
        if self.predicted == 0.0:
            return abs(self.value)
        return abs(abs(self.value) - self.predicted) / self.predicted


def ladder_coefficient(
    model: HierarchyModel,
    ell: Rational,
    n: Rational,
    grid: Grid,
    variant: Optional[str] = None,
    settings: KernelSettings = DEFAULT_SETTINGS,
    eigen_tol: float = 1e-12
) -> LadderCoefficient:
    """
    Measure c in X⁻_l ψ_n = c ψ' for the conventional factorization at l.

    The source is the ladder-built state at (n, hierarchy l); the target is
    the oracle state at the image label. When the image label carries no
    eigenstate the returned value is the image norm, which vanishes for an
    annihilated ground state.

    Raises:
        LadderError: If the image is not proportional to the target
    """
    conventional = model.conventional(ell, variant)
    source_labels = QuantumNumbers(n, conventional.hierarchy_ell)
    target_labels = conventional.image(source_labels)
    predicted = conventional.predicted_coefficient(model.energy(source_labels.n, source_labels.ell))

    source = build_state(model, source_labels.n, source_labels.ell, grid, settings)
    image = apply_to_state(model, conventional.x_minus, source, target_labels.ell, settings)

    try:
        model.level_index(target_labels)
    except LatticeError:
        value = norm(image, grid.interior(settings.window_fraction))
        logger.debug(f"{model.name}: X⁻ image of {source_labels} has no target, norm {value:.3e}")
        return LadderCoefficient(source_labels, target_labels, value, predicted, None)

    _, target = oracle_state(model, target_labels.n, target_labels.ell, grid, eigen_tol)
    value = inner_product(image, target)
    proportionality = abs(value) / norm(image)
    if proportionality < MIN_PROPORTIONALITY:
        raise LadderError(
            f"X⁻ image of {source_labels} is not proportional to {target_labels} "
            f"(overlap {proportionality:.6f})"
        )

    logger.debug(
        f"{model.name}: X⁻ {source_labels}->{target_labels} c={value:.8g} (predicted |c|={predicted:.8g})"
    )
    return LadderCoefficient(source_labels, target_labels, value, predicted, proportionality)
