"""
Base abstract class for potential hierarchies.

A hierarchy is a family of radial or one-dimensional Hamiltonians
H^l = -d²/dx² + V^l(x) that admits the refined factorization

    h_{n,l}(x) [H^l - E_n^l] = B^i_{n,l} A^i_{n,l} - phi^i(n,l),   i = 1, 2

where A^i_{n,l} maps eigenstates at (n, l) to eigenstates at step_i(n, l).
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, ClassVar, Dict, List, Optional, Set, Tuple

import numpy as np

from ..exceptions import HierarchyError, LatticeError
from ..models.labels import QuantumNumbers, Rational, as_fraction
from ..numerics.grid import DomainKind, Grid, Wavefunction, normalize
from ..numerics.operators import OperatorChain, compose, second_derivative
from ..utils.logger import get_logger

logger = get_logger(__name__)

PAIR_INDICES = (1, 2)
MOVE_KINDS = ("A", "B")
QUADRATIC_KINDS = ("raise_n", "lower_n", "raise_l", "lower_l", "energy_preserving")

Move = Tuple[int, str]
LabelShift = Tuple[Fraction, Fraction]


@dataclass
class ModelConfig:
    """
    Base configuration for hierarchy models.

    Attributes:
        enabled: Whether the model takes part in suites
        name: Model name
    """
    enabled: bool = True
    name: str = ""


@dataclass(frozen=True)
class RefinedPair:
    """
    One refined factorization at a fixed label.

    Attributes:
        index: Pair index i (1 or 2)
        labels: Label (n, l) the operators are built for
        A: Operator mapping (n, l) to ``step``
        B: Partner operator
        phi: Constant phi^i(n, l)
        step: Image label of A
    """
    index: int
    labels: QuantumNumbers
    A: OperatorChain
    B: OperatorChain
    phi: Fraction
    step: QuantumNumbers


@dataclass(frozen=True)
class FreeMove:
    """Label-aware action of A^i or B^i on the state at ``source``."""
    index: int
    kind: str
    source: QuantumNumbers
    target: QuantumNumbers
    chain: OperatorChain


@dataclass(frozen=True)
class QuadraticOperator:
    """Composition of two free moves; ``moves[0]`` acts first."""
    kind: str
    source: QuantumNumbers
    target: QuantumNumbers
    chain: OperatorChain
    moves: Tuple[FreeMove, FreeMove]


@dataclass(frozen=True)
class ConventionalFactorization:
    """
    Conventional factorization X⁺X⁻ = H^{hierarchy_ell} + offset.

    Attributes:
        label: Conventional label (l, or l' for Morse)
        variant: Variant name ("default", or "a"/"b" for the oscillator)
        x_plus: X⁺
        x_minus: X⁻
        q: Factorization constant as conventionally quoted
        hierarchy_ell: Hierarchy label of the product X⁺X⁻
        offset: X⁺X⁻ - H^{hierarchy_ell}
        partner_ell: Hierarchy label of the product X⁻X⁺
        partner_offset: X⁻X⁺ - H^{partner_ell}
        image_shift: (dn, dl) applied by X⁻ to eigenstates
    """
    label: Fraction
    variant: str
    x_plus: OperatorChain
    x_minus: OperatorChain
    q: float
    hierarchy_ell: Fraction
    offset: float
    partner_ell: Fraction
    partner_offset: float
    image_shift: LabelShift

    @property
    def shift(self) -> float:
        """Constant c with X⁺X⁻ - q = H^{hierarchy_ell} + c."""
        return self.offset - self.q

    def image(self, labels: QuantumNumbers) -> QuantumNumbers:
        return labels.shifted(*self.image_shift)

    def predicted_coefficient(self, energy: float) -> float:
        """|c| in X⁻ψ = c ψ' for a normalized eigenstate of energy ``energy``."""
        return float(np.sqrt(max(energy + self.offset, 0.0)))


class HierarchyModel(ABC):
    """
    Abstract base class for potential hierarchies.

    Subclasses provide the potential, spectrum, lattice and operator
    formulas; label bookkeeping and operator composition live here.
    """

    name: ClassVar[str] = ""
    domain_kind: ClassVar[DomainKind] = DomainKind.HALF_LINE

    # label shift applied by A^i
    STEPS: ClassVar[Dict[int, LabelShift]] = {}

    # (dn, dl) read off the [N, B^i] and [L, B^i] commutators
    LABEL_COMMUTATORS: ClassVar[Dict[int, LabelShift]] = {}

    # free moves realizing each quadratic operator, first move acts first
    QUADRATIC_MOVES: ClassVar[Dict[str, Tuple[Move, Move]]] = {}

    def __init__(self, config: Optional[ModelConfig] = None):
        """
        Initialize model.

        Args:
            config: Model configuration
        """
        self.config = config or ModelConfig(name=self.name)

    # ------------------------------------------------------------------
    # potential and spectrum

    def potential(self, ell: Rational, x):
        """
        Evaluate V^l(x).

        Args:
            ell: Hierarchy label, any rational
            x: Point or array of points in the model domain

        Returns:
            Potential value(s); a float for scalar input

        Raises:
            HierarchyError: If x leaves the half-line
        """
        points = np.asarray(x, dtype=float)
        if self.domain_kind is DomainKind.HALF_LINE and np.any(points <= 0):
            raise HierarchyError(f"{self.name} potential needs x > 0")
        values = self._potential(as_fraction(ell), points)
        return float(values) if np.ndim(values) == 0 else values

    @abstractmethod
    def _potential(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def energy(self, n: Rational, ell: Rational = 0) -> float:
        """
        Level energy E_n^l (independent of l in all families).

        Args:
            n: Energy label
            ell: Hierarchy label

        Returns:
            Energy
        """
        pass

    @abstractmethod
    def lattice(self, n_max: int) -> Set[QuantumNumbers]:
        """
        Physical labels with n ≤ n_max.

        Args:
            n_max: Largest label

        Returns:
            Set of labels
        """
        pass

    @abstractmethod
    def is_physical(self, labels: QuantumNumbers) -> bool:
        pass

    @abstractmethod
    def level_index(self, labels: QuantumNumbers) -> int:
        """
        Position of (n, l) in the spectrum of H^l, 0 for the ground state.

        Raises:
            LatticeError: If (n, l) is not an eigenvalue label of H^l
        """
        pass

    @abstractmethod
    def level_label(self, ell: Rational, level: int) -> QuantumNumbers:
        """Label of the level-th eigenstate of H^l."""
        pass

    def bound_state_count(self, ell: Rational) -> Optional[int]:
        """Number of bound states of H^l, None when unbounded."""
        return None

    # spectra are compared by relative error unless set
    ABSOLUTE_SPECTRUM: ClassVar[bool] = False

    def critical_channel(self, ell: Rational) -> bool:
        """Whether spectra of H^l are gated by the relaxed critical threshold."""
        return False

    def attractive_core(self, ell: Rational) -> bool:
        """Whether the (2l+1)(2l-1)/(4x²) term of a half-line H^l is attractive."""
        ell = as_fraction(ell)
        return self.domain_kind is DomainKind.HALF_LINE and (2 * ell + 1) * (2 * ell - 1) < 0

    def regular_power(self, ell: Rational) -> Fraction:
        """
        Power p with ψ = x^p g and g smooth for the states of H^l.

        Half-line states start as x^{|l|+1/2}; p is the fractional part of
        that exponent (1/2 for integer l, 0 for half-integer l). Full-line
        states are smooth as they are.
        """
        if self.domain_kind is not DomainKind.HALF_LINE:
            return Fraction(0)
        return (abs(as_fraction(ell)) + Fraction(1, 2)) % 1

    def hamiltonian_apply(self, ell: Rational, f: Wavefunction, shift: float = 0.0) -> Wavefunction:
        """
        Apply (H^l + shift) with the kernel derivative squared.

        Args:
            ell: Hierarchy label
            f: Function to act on
            shift: Constant added to H^l
        """
        x = f.grid.points
        values = -second_derivative(f.values, f.grid.spacing)
        values = values + (self.potential(ell, x) + shift) * f.values
        return f.with_values(values)

    # ------------------------------------------------------------------
    # refined factorizations

    def step(self, index: int, labels: QuantumNumbers) -> QuantumNumbers:
        """Label reached by A^index from ``labels``."""
        return labels.shifted(*self._step_shift(index))

    def step_inverse(self, index: int, labels: QuantumNumbers) -> QuantumNumbers:
        """Label from which A^index reaches ``labels``."""
        dn, dl = self._step_shift(index)
        return labels.shifted(-dn, -dl)

    def _step_shift(self, index: int) -> LabelShift:
        if index not in self.STEPS:
            raise HierarchyError(f"Pair index must be one of {PAIR_INDICES}, got {index}")
        return self.STEPS[index]

    def refined_pair(self, index: int, n: Rational, ell: Rational) -> RefinedPair:
        """
        Build the refined factorization pair i at (n, l).

        Args:
            index: Pair index (1 or 2)
            n: Energy label
            ell: Hierarchy label

        Returns:
            RefinedPair

        Raises:
            LatticeError: If the operators are undefined at (n, l)
        """
        labels = QuantumNumbers(n, ell)
        step = self.step(index, labels)
        a_chain, b_chain = self._pair_chains(index, labels)
        return RefinedPair(index, labels, a_chain, b_chain, self.phi(index, labels), step)

    @abstractmethod
    def _pair_chains(self, index: int, labels: QuantumNumbers) -> Tuple[OperatorChain, OperatorChain]:
        pass

    @abstractmethod
    def phi(self, index: int, labels: QuantumNumbers) -> Fraction:
        pass

    @abstractmethod
    def h_factor(self, n: Rational, ell: Rational) -> Callable[[np.ndarray], np.ndarray]:
        """The function h_{n,l}(x) multiplying H^l - E_n^l."""
        pass

    def free_operator(self, index: int, kind: str, labels: QuantumNumbers) -> FreeMove:
        """
        Label-aware action of A^i or B^i on the state at ``labels``.

        A^i uses A^i at the current label and moves to its step; B^i uses
        B^i at the preimage of the current label and moves there.

        Args:
            index: Pair index
            kind: "A" or "B"
            labels: Label of the state acted on
        """
        if kind == "A":
            pair = self.refined_pair(index, labels.n, labels.ell)
            return FreeMove(index, kind, labels, pair.step, pair.A)
        if kind == "B":
            origin = self.step_inverse(index, labels)
            pair = self.refined_pair(index, origin.n, origin.ell)
            return FreeMove(index, kind, labels, origin, pair.B)
        raise HierarchyError(f"Operator kind must be one of {MOVE_KINDS}, got {kind!r}")

    def quadratic_pair(self, kind: str, n: Rational, ell: Rational) -> QuadraticOperator:
        """
        Quadratic operator acting on the state at (n, l).

        Args:
            kind: One of raise_n, lower_n, raise_l, lower_l, energy_preserving
            n: Energy label of the state acted on
            ell: Hierarchy label of the state acted on

        Returns:
            QuadraticOperator whose chain applies the first move first

        Raises:
            HierarchyError: Unknown kind
            LatticeError: Intermediate label outside the operator-definable range
        """
        if kind not in self.QUADRATIC_MOVES:
            raise HierarchyError(
                f"Quadratic kind must be one of {list(self.QUADRATIC_MOVES)}, got {kind!r}"
            )
        source = QuantumNumbers(n, ell)
        (i1, k1), (i2, k2) = self.QUADRATIC_MOVES[kind]
        first = self.free_operator(i1, k1, source)
        second = self.free_operator(i2, k2, first.target)
        chain = compose(second.chain, first.chain, f"{k2}{i2}{k1}{i1}")
        return QuadraticOperator(kind, source, second.target, chain, (first, second))

    def quadratic_reduction(
        self,
        kind: str,
        labels: QuantumNumbers
    ) -> Optional[Tuple[OperatorChain, float]]:
        """
        Conventional first-order form of a quadratic operator.

        Returns:
            (X, λ) with Q ψ = λ X ψ on eigenstates at ``labels``, or None
            when the model has no such identification for ``kind``
        """
        return None

    # ------------------------------------------------------------------
    # conventional factorization and ground states

    @abstractmethod
    def conventional(self, ell: Rational, variant: Optional[str] = None) -> ConventionalFactorization:
        pass

    @abstractmethod
    def ground_label(self, ell: Rational) -> QuantumNumbers:
        """
        Label of the ground state of H^l.

        Raises:
            LatticeError: If H^l has no bound ground state
        """
        pass

    @abstractmethod
    def ground_annihilator(self, ell: Rational) -> OperatorChain:
        """First-order operator whose kernel is the ground state of H^l."""
        pass

    @abstractmethod
    def _ground_values(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        pass

    def ground_values(self, ell: Rational, x: np.ndarray) -> np.ndarray:
        """Unnormalized closed-form ground state of H^l."""
        ell = as_fraction(ell)
        self.ground_label(ell)
        return self._ground_values(ell, np.asarray(x, dtype=float))

    @abstractmethod
    def _analytic_values(self, labels: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        pass

    def analytic_state(self, n: Rational, ell: Rational, grid: Grid) -> Wavefunction:
        """
        Closed-form normalized eigenstate ψ_n^l sampled on a grid.

        Raises:
            LatticeError: If (n, l) is not a normalizable eigenstate label
        """
        labels = QuantumNumbers(n, ell)
        self.level_index(labels)
        values = self._analytic_values(labels, grid.points)
        return normalize(Wavefunction(grid, values)).labelled(labels, self.name)

    @abstractmethod
    def canonical_path(self, labels: QuantumNumbers) -> Tuple[QuantumNumbers, List[Move]]:
        """
        Deterministic ladder walk to ``labels``.

        Returns:
            (ground label to start from, free moves in order of application)
        """
        pass

    def check_grid(self, grid: Grid) -> None:
        if grid.domain_kind is not self.domain_kind:
            raise HierarchyError(
                f"Model '{self.name}' needs a {self.domain_kind.value} grid, "
                f"got {grid.domain_kind.value}"
            )

    def _require_level(self, labels: QuantumNumbers, nu: Fraction) -> int:
        if nu.denominator != 1 or nu < 0:
            raise LatticeError(f"{labels} is not an eigenvalue label of {self.name} H^l")
        return int(nu)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name={self.name!r})"
