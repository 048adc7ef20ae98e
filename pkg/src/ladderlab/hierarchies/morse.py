"""
Morse hierarchy on the real line.

    V^l(x) = (α/2)² (e^{2αx} - 2(l+1) e^{αx}),    E_n^l = -(α²/4) n²,  n = l - 2ν > 0
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy.special import eval_genlaguerre

from ..exceptions import HierarchyError, LatticeError
from ..models.labels import QuantumNumbers, Rational, as_fraction
from ..numerics.grid import DomainKind
from ..numerics.operators import Differential, OperatorChain
from .base import ConventionalFactorization, HierarchyModel, ModelConfig, Move


@dataclass
class MorseConfig(ModelConfig):
    """
    Morse model configuration.

    Attributes:
        alpha: Range parameter α > 0
    """
    alpha: float = 1.0


class MorseModel(HierarchyModel):
    """
    Morse hierarchy.

    Pair 2 is the n -> -n image of pair 1. The product operators are
    identified with the conventional factorization of H^{2l'}, whose
    ground states satisfy X⁺_{l'-1} ψ_{2l'}^{2l'} = 0.
    """

    name = "morse"
    domain_kind = DomainKind.FULL_LINE

    STEPS = {1: (Fraction(1), Fraction(1)), 2: (Fraction(-1), Fraction(1))}
    LABEL_COMMUTATORS = {1: (Fraction(-1), Fraction(-1)), 2: (Fraction(1), Fraction(-1))}
    QUADRATIC_MOVES = {
        "raise_l": ((2, "A"), (1, "A")),
        "lower_l": ((2, "B"), (1, "B")),
        "raise_n": ((2, "B"), (1, "A")),
        "lower_n": ((1, "B"), (2, "A")),
        "energy_preserving": ((2, "B"), (1, "B")),
    }

    ABSOLUTE_SPECTRUM = True

    def __init__(self, config: Optional[MorseConfig] = None):
        config = config or MorseConfig(name=self.name)
        if not (np.isfinite(config.alpha) and config.alpha > 0):
            raise HierarchyError(f"Morse alpha must be positive, got {config.alpha}")
        super().__init__(config)
        self.alpha = float(config.alpha)

    def _potential(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        y = np.exp(self.alpha * x)
        return (self.alpha / 2.0) ** 2 * (y ** 2 - 2.0 * float(ell + 1) * y)

    def energy(self, n: Rational, ell: Rational = 0) -> float:
        return -(self.alpha ** 2 / 4.0) * float(as_fraction(n)) ** 2

    def lattice(self, n_max: int) -> Set[QuantumNumbers]:
        return {
            QuantumNumbers(n, ell)
            for ell in range(1, n_max + 1)
            for n in range(ell, 0, -2)
        }

    def is_physical(self, labels: QuantumNumbers) -> bool:
        return (
            labels.is_integral
            and 0 < labels.n <= labels.ell
            and (labels.ell - labels.n) % 2 == 0
        )

    def level_index(self, labels: QuantumNumbers) -> int:
        if labels.n <= 0:
            raise LatticeError(f"Morse state {labels} is not normalizable (n must be positive)")
        return self._require_level(labels, (labels.ell - labels.n) / 2)

    def level_label(self, ell: Rational, level: int) -> QuantumNumbers:
        ell = as_fraction(ell)
        labels = QuantumNumbers(ell - 2 * level, ell)
        if labels.n <= 0:
            raise LatticeError(
                f"Morse H^{ell} has {self.bound_state_count(ell)} bound states, "
                f"level {level} requested"
            )
        return labels

    def bound_state_count(self, ell: Rational) -> int:
        ell = as_fraction(ell)
        return math.ceil(ell / 2) if ell > 0 else 0

    def _pair_chains(self, index: int, labels: QuantumNumbers) -> Tuple[OperatorChain, OperatorChain]:
        alpha = self.alpha
        n = float(labels.n)
        tag = f"_{labels.n},{labels.ell}"

        def lead(x):
            return np.exp(-alpha * x / 2.0) / alpha

        # pair 2 is pair 1 with n -> -n
        sign = 1.0 if index == 1 else -1.0
        m = sign * n

        def a_term(x):
            return -0.5 * np.exp(alpha * x / 2.0) - (m / 2.0) * np.exp(-alpha * x / 2.0)

        def b_term(x):
            return 0.5 * np.exp(alpha * x / 2.0) + ((m + 1.0) / 2.0) * np.exp(-alpha * x / 2.0)

        return (
            OperatorChain((Differential(lead, a_term),), f"A{index}{tag}"),
            OperatorChain((Differential(lead, b_term),), f"B{index}{tag}"),
        )

    def phi(self, index: int, labels: QuantumNumbers) -> Fraction:
        if index == 1:
            return -(labels.ell + labels.n + 2) / 2
        return -(labels.ell - labels.n + 2) / 2

    def h_factor(self, n: Rational, ell: Rational):
        alpha = self.alpha
        return lambda x: -np.exp(-alpha * x) / alpha ** 2

    def conventional(self, ell: Rational, variant: Optional[str] = None) -> ConventionalFactorization:
        """
        Conventional factorization X⁺_{l'}X⁻_{l'} - q(l') = H^{2l'}.

        X⁺_{l'} = -α(B¹B²) = -d/dx - (α/2)(e^{αx} - 2l' - 2) and
        X⁻_{l'} = -α(A¹A²) = d/dx - (α/2)(e^{αx} - 2l' - 2) on eigenstates,
        with q(l') = α²(l'+1)².
        """
        if variant not in (None, "default"):
            raise HierarchyError(f"Morse has a single conventional factorization, got {variant!r}")
        label = as_fraction(ell)
        alpha = self.alpha
        shift = float(2 * label + 2)

        def w(x):
            return -(alpha / 2.0) * (np.exp(alpha * x) - shift)

        q = alpha ** 2 * float(label + 1) ** 2
        return ConventionalFactorization(
            label=label,
            variant="default",
            x_plus=OperatorChain((Differential(-1.0, w),), f"Xplus_{label}"),
            x_minus=OperatorChain((Differential(1.0, w),), f"Xminus_{label}"),
            q=q,
            hierarchy_ell=2 * label,
            offset=q,
            partner_ell=2 * label + 2,
            partner_offset=q,
            image_shift=(Fraction(0), Fraction(2)),
        )

    def quadratic_reduction(self, kind: str, labels: QuantumNumbers):
        # A¹A² = -X⁻_{l/2}/α on H^l, B¹B² = -X⁺_{l/2-1}/α on H^l
        if kind == "raise_l":
            return self.conventional(labels.ell / 2).x_minus, -1.0 / self.alpha
        if kind == "lower_l":
            return self.conventional(labels.ell / 2 - 1).x_plus, -1.0 / self.alpha
        return None

    def ground_label(self, ell: Rational) -> QuantumNumbers:
        ell = as_fraction(ell)
        if ell <= 0:
            raise LatticeError(f"Morse H^{ell} has no bound states (l > 0 required)")
        return QuantumNumbers(ell, ell)

    def ground_annihilator(self, ell: Rational) -> OperatorChain:
        return self.conventional(as_fraction(ell) / 2 - 1).x_plus

    def _ground_values(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        return np.exp(float(ell) * self.alpha * x / 2.0 - np.exp(self.alpha * x) / 2.0)

    def _analytic_values(self, labels: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        nu = self.level_index(labels)
        n = float(labels.n)
        y = np.exp(self.alpha * x)
        return np.exp(n * self.alpha * x / 2.0 - y / 2.0) * eval_genlaguerre(nu, n, y)

    def canonical_path(self, labels: QuantumNumbers) -> Tuple[QuantumNumbers, List[Move]]:
        nu = self.level_index(labels)
        return self.ground_label(labels.ell), [(1, "B"), (2, "A")] * nu
