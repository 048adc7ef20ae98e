"""
Two-dimensional radial harmonic oscillator.

    H^l = -d²/dr² + r² + (2l+1)(2l-1)/(4r²),    E_n^l = 2n + 2,  n = 2ν + |l|

Negative l is allowed through ψ^{-l} := ψ^l.
"""
from fractions import Fraction
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy.special import eval_genlaguerre

from ..exceptions import HierarchyError
from ..models.labels import QuantumNumbers, Rational, as_fraction
from ..numerics.grid import DomainKind
from ..numerics.operators import Differential, OperatorChain
from .base import ConventionalFactorization, HierarchyModel, Move

HALF = Fraction(1, 2)

VARIANTS = ("a", "b")


class OscillatorModel(HierarchyModel):
    """Radial oscillator hierarchy."""

    name = "oscillator"
    domain_kind = DomainKind.HALF_LINE

    STEPS = {1: (Fraction(1), Fraction(1)), 2: (Fraction(1), Fraction(-1))}
    LABEL_COMMUTATORS = {1: (Fraction(-1), Fraction(-1)), 2: (Fraction(-1), Fraction(1))}
    QUADRATIC_MOVES = {
        "raise_n": ((1, "A"), (2, "A")),
        "lower_n": ((2, "B"), (1, "B")),
        "raise_l": ((2, "B"), (1, "A")),
        "lower_l": ((1, "B"), (2, "A")),
        "energy_preserving": ((1, "B"), (2, "A")),
    }

    def _potential(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        return x ** 2 + float((2 * ell + 1) * (2 * ell - 1)) / (4.0 * x ** 2)

    def energy(self, n: Rational, ell: Rational = 0) -> float:
        return float(2 * as_fraction(n) + 2)

    def lattice(self, n_max: int) -> Set[QuantumNumbers]:
        return {
            QuantumNumbers(n, ell)
            for n in range(n_max + 1)
            for ell in range(n + 1)
            if (n - ell) % 2 == 0
        }

    def is_physical(self, labels: QuantumNumbers) -> bool:
        return (
            labels.is_integral
            and 0 <= labels.ell <= labels.n
            and (labels.n - labels.ell) % 2 == 0
        )

    def level_index(self, labels: QuantumNumbers) -> int:
        return self._require_level(labels, (labels.n - abs(labels.ell)) / 2)

    def level_label(self, ell: Rational, level: int) -> QuantumNumbers:
        ell = as_fraction(ell)
        return QuantumNumbers(abs(ell) + 2 * level, ell)

    def _pair_chains(self, index: int, labels: QuantumNumbers) -> Tuple[OperatorChain, OperatorChain]:
        tag = f"_{labels.n},{labels.ell}"
        if index == 1:
            c = float(labels.ell + HALF)
            a_atom = Differential(0.5, lambda r: -0.5 * (r + c / r))
            b_atom = Differential(0.5, lambda r: 0.5 * (r + c / r))
        else:
            d = float(labels.ell - HALF)
            a_atom = Differential(0.5, lambda r: -0.5 * (r - d / r))
            b_atom = Differential(0.5, lambda r: 0.5 * (r - d / r))
        return (
            OperatorChain((a_atom,), f"A{index}{tag}"),
            OperatorChain((b_atom,), f"B{index}{tag}"),
        )

    def phi(self, index: int, labels: QuantumNumbers) -> Fraction:
        if index == 1:
            return -(labels.n + labels.ell + 2) / 2
        return -(labels.n - labels.ell + 2) / 2

    def h_factor(self, n: Rational, ell: Rational):
        return lambda r: np.full(np.shape(r), -0.25)

    def conventional(self, ell: Rational, variant: Optional[str] = None) -> ConventionalFactorization:
        """
        Conventional factorizations of the shifted hierarchies.

        Variant "a": X⁺ = -2B¹, X⁻ = 2A¹, q = 4l - 2; X⁻ maps ψ_n^l to ψ_{n+1}^{l+1}.
        Variant "b": Z⁺ = -2A²_{n-1,l+1}, Z⁻ = 2B²_{n-1,l+1}, q = -4l - 2;
        Z⁻ maps ψ_n^l to ψ_{n-1}^{l+1} and annihilates the ground state.
        """
        ell = as_fraction(ell)
        variant = "a" if variant in (None, "default") else variant
        c = float(ell + HALF)

        if variant == "a":
            w = lambda r: -r - c / r  # noqa: E731
            return ConventionalFactorization(
                label=ell,
                variant="a",
                x_plus=OperatorChain((Differential(-1.0, w),), f"Xplus_{ell}"),
                x_minus=OperatorChain((Differential(1.0, w),), f"Xminus_{ell}"),
                q=float(4 * ell - 2),
                hierarchy_ell=ell,
                offset=float(2 * ell + 2),
                partner_ell=ell + 1,
                partner_offset=float(2 * ell),
                image_shift=(Fraction(1), Fraction(1)),
            )
        if variant == "b":
            w = lambda r: r - c / r  # noqa: E731
            return ConventionalFactorization(
                label=ell,
                variant="b",
                x_plus=OperatorChain((Differential(-1.0, w),), f"Zplus_{ell}"),
                x_minus=OperatorChain((Differential(1.0, w),), f"Zminus_{ell}"),
                q=float(-4 * ell - 2),
                hierarchy_ell=ell,
                offset=float(-2 * ell - 2),
                partner_ell=ell + 1,
                partner_offset=float(-2 * ell),
                image_shift=(Fraction(-1), Fraction(1)),
            )
        raise HierarchyError(f"Oscillator variant must be one of {VARIANTS}, got {variant!r}")

    def ground_label(self, ell: Rational) -> QuantumNumbers:
        ell = as_fraction(ell)
        return QuantumNumbers(abs(ell), ell)

    def ground_annihilator(self, ell: Rational) -> OperatorChain:
        return self.conventional(abs(as_fraction(ell)), "b").x_minus

    def _ground_values(self, ell: Fraction, x: np.ndarray) -> np.ndarray:
        return x ** float(abs(ell) + HALF) * np.exp(-x ** 2 / 2.0)

    def _analytic_values(self, labels: QuantumNumbers, x: np.ndarray) -> np.ndarray:
        a = abs(labels.ell)
        nu = self.level_index(labels)
        return x ** float(a + HALF) * eval_genlaguerre(nu, float(a), x ** 2) * np.exp(-x ** 2 / 2.0)

    def canonical_path(self, labels: QuantumNumbers) -> Tuple[QuantumNumbers, List[Move]]:
        nu = self.level_index(labels)
        ell = labels.ell
        if ell.denominator != 1:
            raise HierarchyError(f"Oscillator labels must be integers, got {labels}")
        raise_l: Move = (1, "A") if ell >= 0 else (2, "A")
        moves: List[Move] = [raise_l] * int(abs(ell))
        moves += [(1, "A"), (2, "A")] * nu
        return QuantumNumbers(0, 0), moves
